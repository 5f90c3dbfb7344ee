"""Command-line interface: ``algsurgery <command> [FILE] [options]``.

Reports are line-oriented ``key: value`` text, or one JSON object with
``--format json``.  Exit status: 0 success, 1 validation failure, 2
malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import io
from .chains import (ChainComplex, ChainError, dual_complex, homology, mapping_cone, restrict_scalars,
                     validate_complex)
from .fixtures import FIXTURES, build
from .forms import FormError, arf, instant_obstruction, is_trivial_witness, signature, witt_class_Z
from .rings import CyclicGroupRing, Matrix, RingError, parse_ring
from .sampling import random_quadratic, random_symmetric
from .structures import QUAD, StructuredPair, StructureError, check_pair, check_structure, is_poincare
from .surgery import SurgeryError, cobordism_to_data, trace

OK, FAILED, MALFORMED = 0, 1, 2


class Output:
    """Collects report lines and emits them in the requested format."""

    def __init__(self, fmt: str, stream):
        self.fmt, self.stream = fmt, stream
        self.items: list[tuple[str, object]] = []

    def add(self, key: str, value):
        self.items.append((key, value))

    def flush(self):
        if self.fmt == "json":
            self.stream.write(json.dumps(dict(self.items), indent=1) + "\n")
        else:
            for k, v in self.items:
                self.stream.write(f"{k}: {v}\n")


def _load(args) -> tuple[dict, Path | None]:
    src = args.file
    if src is None or src == "-":
        return io.loads(sys.stdin.read(), "stdin"), None
    return io.read_json(src), Path(src).parent


def _with_ring(C: ChainComplex, ring_name: str | None) -> ChainComplex:
    if not ring_name:
        return C
    R = parse_ring(ring_name)
    if R == C.ring:
        return C
    d = {r: Matrix(R, C.d(r).nrows, C.d(r).ncols, [[R.coerce(a) for a in row] for row in C.d(r).data])
         for r in range(C.lo + 1, C.hi + 1)}
    return ChainComplex(R, C.lo, C.ranks, d)


def _emit(out_dir: str | None, name: str, obj: dict, stream) -> str | None:
    text = io.dumps(obj)
    if out_dir is None:
        stream.write(text)
        return None
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text)
    return str(path / name)


def _complex_of(obj: dict, kind: str) -> ChainComplex:
    if kind == "complex":
        return io.complex_from_json(obj)
    if kind == "structured":
        return io.structured_from_json(obj).C
    raise io.FormatError(f"expected a complex or structured complex, got a {kind} file")


# ----------------------------------------------------------------------------
# commands


def cmd_validate(args, out: Output) -> int:
    obj, base = _load(args)
    kind = io.detect(obj)
    out.add("type", kind)
    ok = True
    failures: list[str] = []
    if kind == "complex":
        rep = validate_complex(io.complex_from_json(obj, check=False))
        ok, failures = rep.ok, rep.failures
    elif kind == "structured":
        X = io.structured_from_json(obj, check=False)
        rep = validate_complex(X.C)
        if rep.ok:
            rep = check_structure(X)
        ok, failures = rep.ok, rep.failures
        if ok:
            v = is_poincare(X)
            out.add("poincare", str(v.ok).lower())
    elif kind == "map":
        io.chain_map_from_json(obj)
    elif kind == "pair":
        rep = check_pair(io.pair_from_json(obj, base))
        ok, failures = rep.ok, rep.failures
    elif kind == "cobordism":
        rep = check_pair(io.cobordism_from_json(obj, base), poincare=True)
        ok, failures = rep.ok, rep.failures
    elif kind == "form":
        q = io.form_from_json(obj)
        ok = q.is_nonsingular()
        failures = [] if ok else ["lambda is singular"]
    else:
        from .forms import check_formation

        phi, _ = io.formation_from_json(obj)
        rep = check_formation(phi)
        ok, failures = rep.ok, rep.failures
    out.add("valid", str(ok).lower())
    for i, f in enumerate(failures):
        out.add(f"failure.{i}", f)
    return OK if ok else FAILED


def cmd_homology(args, out: Output) -> int:
    obj, _ = _load(args)
    C = _with_ring(_complex_of(obj, io.detect(obj)), args.ring)
    if isinstance(C.ring, CyclicGroupRing):
        out.add("note", f"homology of the underlying Z-complex (rank {C.ring.k} restriction)")
        C = restrict_scalars(C)
    out.add("ring", C.ring.name)
    for h in homology(C):
        out.add(f"H_{h.degree}", str(h))
    return OK


def cmd_dualize(args, out: Output) -> int:
    if args.n is None:
        raise io.FormatError("dualize needs --n")
    obj, _ = _load(args)
    D = dual_complex(_complex_of(obj, io.detect(obj)), args.n)
    _emit(args.out, "dual.json", io.complex_to_json(D), out.stream)
    return OK


def cmd_cone(args, out: Output) -> int:
    obj, _ = _load(args)
    f = io.chain_map_from_json(obj)
    _emit(args.out, "cone.json", io.complex_to_json(mapping_cone(f)), out.stream)
    return OK


def cmd_surger(args, out: Output) -> int:
    src = args.data or args.file
    if src is None:
        raise io.FormatError("surger needs surgery data (--data FILE)")
    args.file = src
    obj, base = _load(args)
    P = io.pair_from_json(obj, base)
    rep = check_pair(P)
    if not rep.ok:
        out.add("valid", "false")
        for i, f in enumerate(rep.failures):
            out.add(f"failure.{i}", f)
        return FAILED
    res = trace(P, validate=False)
    E = res.effect
    out.add("kind", E.kind)
    out.add("n", E.n)
    out.add("effect.ranks", " ".join(f"{r}:{E.C.rank(r)}" for r in E.C.degrees()))
    out.add("effect.valid", str(check_structure(E).ok).lower())
    out.add("effect.poincare", str(is_poincare(E).ok).lower())
    out.add("trace.poincare", str(check_pair(res.trace, poincare=True).ok).lower())
    out_dir = args.out or "."
    out.add("effect", _emit(out_dir, "effect.json", io.structured_to_json(E), out.stream))
    out.add("trace", _emit(out_dir, "trace.json", io.cobordism_to_json(res.trace), out.stream))
    return OK


def _form_report(q, out: Output):
    out.add("rank", q.rank)
    out.add("i", q.i)
    out.add("lambda", json.dumps(q.lam.to_json()))
    out.add("mu", json.dumps([q.ring.elem_to_json(c.rep) for c in q.mu]))


def cmd_obstruction(args, out: Output) -> int:
    obj, _ = _load(args)
    X = io.structured_from_json(obj)
    if X.kind != QUAD:
        raise io.FormatError("obstruction needs a quadratic complex")
    try:
        q = instant_obstruction(X)
    except StructureError as e:
        out.add("valid", "false")
        out.add("failure.0", str(e))
        return FAILED
    _form_report(q, out)
    w = witt_class_Z(q)
    out.add("witt.invariant", "arf" if w.i else "signature/8")
    out.add("witt.class", w.value)
    if args.out:
        out.add("form", _emit(args.out, "form.json", io.form_to_json(q), out.stream))
    return OK


def cmd_invariants(args, out: Output) -> int:
    obj, _ = _load(args)
    q = io.form_from_json(obj)
    out.add("rank", q.rank)
    out.add("i", q.i)
    out.add("nonsingular", str(q.is_nonsingular()).lower())
    if q.i == 0:
        out.add("signature", signature(q.lam))
    else:
        out.add("arf", arf(q))
    w = witt_class_Z(q)
    out.add("witt.class", w.value)
    return OK


def cmd_trivial_witness(args, out: Output) -> int:
    obj, _ = _load(args)
    phi, H = io.formation_from_json(obj)
    v = is_trivial_witness(phi, H)
    out.add("trivial", str(v.ok).lower())
    out.add("reason", v.reason)
    return OK if v.ok else FAILED


def cmd_example(args, out: Output) -> int:
    name = args.file
    if name in ("random-symmetric", "random-quadratic"):
        rng = random.Random(args.seed)
        R = parse_ring(args.ring or "Z")
        n = 2 if args.n is None else args.n
        X = random_symmetric(R, rng, n) if name == "random-symmetric" else random_quadratic(R, rng, n)
        _emit(args.out, f"{name}.json", io.structured_to_json(X), out.stream)
        return OK
    if name not in FIXTURES:
        raise io.FormatError(f"unknown example {name!r}; known: "
                             + ", ".join(sorted(FIXTURES) + ["random-quadratic", "random-symmetric"]))
    obj = build(name, n=args.n, g=args.g, variant=args.variant)
    data = io.pair_to_json(obj) if isinstance(obj, StructuredPair) else io.structured_to_json(obj)
    _emit(args.out, f"{name}.json", data, out.stream)
    return OK


def cmd_roundtrip(args, out: Output) -> int:
    obj, base = _load(args)
    G = io.cobordism_from_json(obj, base)
    try:
        rt = cobordism_to_data(G)
    except SurgeryError as e:
        out.add("valid", "false")
        out.add("failure.0", str(e))
        return FAILED
    out.add("data.valid", str(check_pair(rt.data).ok).lower())
    out.add("g.equivalence", str(rt.verdict.ok).lower())
    out.add("reason", rt.verdict.reason)
    return OK if rt.verdict.ok else FAILED


COMMANDS = {
    "validate": (cmd_validate, "check a file against the relations of its type"),
    "homology": (cmd_homology, "per-degree homology of a complex"),
    "dualize": (cmd_dualize, "the dual complex C^{n-*}"),
    "cone": (cmd_cone, "mapping cone of a chain map file"),
    "surger": (cmd_surger, "effect and trace of surgery data"),
    "obstruction": (cmd_obstruction, "instant obstruction form and its Witt class"),
    "invariants": (cmd_invariants, "signature or Arf invariant of a form"),
    "trivial-witness": (cmd_trivial_witness, "verify a triviality witness of a formation"),
    "example": (cmd_example, "emit a fixture"),
    "roundtrip": (cmd_roundtrip, "cobordism to surgery data and back"),
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="algsurgery", description="Algebraic surgery on chain complexes.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text)
        s.add_argument("file", nargs="?", help="input file ('-' or omitted: stdin); example name for 'example'")
        s.add_argument("--ring", help="ring override: Z, Q or ZCk")
        s.add_argument("--n", type=int, help="formal dimension / fixture dimension")
        s.add_argument("--data", help="surgery data file")
        s.add_argument("--out", help="output directory")
        s.add_argument("--seed", type=int, default=0, help="seed for randomized examples")
        s.add_argument("--format", choices=("text", "json"), default="text")
        if name == "example":
            s.add_argument("--g", type=int, help="rank parameter (hyperbolic)")
            s.add_argument("--variant", choices=("orientable", "nonorientable"))
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = make_parser().parse_args(argv)
    out = Output(args.format, stdout)
    try:
        code = COMMANDS[args.command][0](args, out)
    except (io.FormatError, RingError, ChainError, FormError, SurgeryError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        out.add("error", msg)
        out.flush()
        return MALFORMED
    out.flush()
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
