import json
import random

import pytest

from algsurgery import io
from algsurgery.chains import ChainMap
from algsurgery.fixtures import arf_one_form, double_cover_surgery, e8_form
from algsurgery.forms import Formation, dual_lagrangian, hyperbolic, standard_lagrangian
from algsurgery.rings import QQ, ZZ, CyclicGroupRing, Matrix
from algsurgery.sampling import random_chain_map, random_complex, random_pair, random_quadratic, random_symmetric, random_trace

RINGS = [ZZ, QQ, CyclicGroupRing(2), CyclicGroupRing(3)]


def same_structure(X, Y):
    keys = set(X.maps) | set(Y.maps)
    return (X.kind, X.n, X.C) == (Y.kind, Y.n, Y.C) and all(X.comp(*k) == Y.comp(*k) for k in keys)


def through_text(obj):
    return io.loads(io.dumps(obj))


@pytest.mark.parametrize("R", RINGS, ids=str)
def test_complex_and_map_round_trip(R):
    rng = random.Random(5)
    for _ in range(5):
        C, D = random_complex(R, rng, -1, 2), random_complex(R, rng, 0, 3)
        assert io.complex_from_json(through_text(io.complex_to_json(C))) == C
        # the map sampler solves over Z and Z[Z/k] only; over Q use the identity
        f = ChainMap(C, C, {r: Matrix.identity(R, C.rank(r)) for r in C.degrees()}) if R == QQ \
            else random_chain_map(C, D, rng)
        g = io.chain_map_from_json(through_text(io.chain_map_to_json(f)))
        assert g.source == f.source and g.target == f.target and all(g[r] == f[r] for r in C.degrees())


@pytest.mark.parametrize("R", [ZZ, CyclicGroupRing(2)], ids=str)
def test_structures_and_pairs_round_trip(R):
    rng = random.Random(11)
    for n in range(0, 3):
        for X in (random_symmetric(R, rng, n), random_quadratic(R, rng, n)):
            Y = io.structured_from_json(through_text(io.structured_to_json(X)))
            assert same_structure(X, Y)
            P = random_pair(X, rng)
            if P is None:
                continue
            Q = io.pair_from_json(through_text(io.pair_to_json(P)))
            assert same_structure(P.boundary, Q.boundary) and Q.D == P.D
            assert all(Q.j[r] == P.j[r] for r in P.C.degrees())
            assert all(Q.dcomp(*k) == P.dcomp(*k) for k in set(P.delta) | set(Q.delta))


def test_cobordism_round_trip():
    rng = random.Random(3)
    G = None
    while G is None:
        G = random_trace(random_symmetric(ZZ, rng, 1), rng)
    H = io.cobordism_from_json(through_text(io.cobordism_to_json(G)))
    assert io.dumps(io.cobordism_to_json(H)) == io.dumps(io.cobordism_to_json(G))


def test_forms_and_formations_round_trip():
    for q in (e8_form(), arf_one_form(), hyperbolic(2, 1)):
        assert io.form_to_json(io.form_from_json(through_text(io.form_to_json(q)))) == io.form_to_json(q)
    phi = Formation(hyperbolic(2, 0), standard_lagrangian(2), dual_lagrangian(2))
    obj = through_text({**io.formation_to_json(phi), "H": standard_lagrangian(2).to_json()})
    back, H = io.formation_from_json(obj)
    assert back.F == phi.F and back.G == phi.G and H == standard_lagrangian(2)


def test_pair_files_may_reference_other_files(tmp_path):
    P = double_cover_surgery("nonorientable")
    obj = io.pair_to_json(P)
    (tmp_path / "x.json").write_text(io.dumps(obj.pop("boundary")))
    (tmp_path / "d.json").write_text(io.dumps(obj.pop("target")))
    (tmp_path / "p.json").write_text(io.dumps({**obj, "boundary": "x.json", "target": "d.json"}))
    Q = io.pair_from_json(io.read_json(tmp_path / "p.json"), tmp_path)
    assert io.pair_to_json(Q) == io.pair_to_json(P)


def test_detect():
    C = random_complex(ZZ, random.Random(0), 0, 1)
    X = random_symmetric(ZZ, random.Random(0), 1)
    assert io.detect(io.complex_to_json(C)) == "complex"
    assert io.detect(io.structured_to_json(X)) == "structured"
    assert io.detect(io.chain_map_to_json(ChainMap(C, C, {}))) == "map"
    assert io.detect(io.pair_to_json(double_cover_surgery("orientable"))) == "pair"
    assert io.detect(io.form_to_json(e8_form())) == "form"
    with pytest.raises(io.FormatError):
        io.detect({"hello": 1})


@pytest.mark.parametrize("obj", [
    {"ranks": [1]},
    {"ring": "Z", "ranks": [1, "a"]},
    {"ring": "Z", "lo": 0, "ranks": [1, 1], "d": {"1": [[1, 2]]}},
    {"ring": "Z", "lo": 0, "ranks": [1, 1], "d": {"x": [[1]]}},
    {"ring": "Z", "lo": 0, "ranks": [1, 1], "d": {"1": [[2]]}, "kind": "sym"},
    {"ring": "R", "ranks": [1]},
])
def test_malformed_input(obj):
    with pytest.raises(io.FormatError):
        io.structured_from_json(obj) if "kind" in obj else io.complex_from_json(obj)


def test_missing_ring_key_and_bad_text():
    with pytest.raises(io.FormatError, match="ring"):
        io.complex_from_json({"lo": 0, "ranks": [1]})
    with pytest.raises(io.FormatError, match="invalid JSON"):
        io.loads("{not json")
    with pytest.raises(io.FormatError):
        io.loads("[1, 2]")
    with pytest.raises(io.FormatError):
        io.read_json("/nonexistent/file.json")


def test_output_is_deterministic():
    X = random_symmetric(ZZ, random.Random(9), 2)
    text = io.dumps(io.structured_to_json(X))
    assert text == io.dumps(io.structured_to_json(io.structured_from_json(json.loads(text))))
