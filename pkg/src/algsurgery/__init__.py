"""Algebraic surgery on chain complexes with symmetric and quadratic Poincare duality."""

from .chains import ChainComplex, ChainMap, homology, is_chain_equivalence, mapping_cone, reduce_complex
from .forms import (EpsQuadraticForm, Formation, hyperbolic, instant_obstruction, signature, witt_class_Z)
from .rings import QQ, ZZ, Matrix, cyclic
from .structures import (QuadraticComplex, StructuredComplex, StructuredPair, SymmetricComplex, check_pair,
                         check_structure, is_poincare)
from .surgery import cobordism_to_data, glue, highly_connected_data, surgery_effect, trace

__version__ = "0.1.0"

__all__ = [
    "ChainComplex", "ChainMap", "homology", "is_chain_equivalence", "mapping_cone", "reduce_complex",
    "EpsQuadraticForm", "Formation", "hyperbolic", "instant_obstruction", "signature", "witt_class_Z",
    "QQ", "ZZ", "Matrix", "cyclic",
    "QuadraticComplex", "StructuredComplex", "StructuredPair", "SymmetricComplex", "check_pair",
    "check_structure", "is_poincare",
    "cobordism_to_data", "glue", "highly_connected_data", "surgery_effect", "trace",
]
