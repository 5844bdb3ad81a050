"""polyfuse: exact symbolic kernel for three-dimensional polynomial algebras.

The objects: algebras with generators P0, P+, P- and a structure polynomial
phi in [P+, P-] = phi(P0).  The operations: solving for the ladder-product
function g, building the Casimir element, fusing two algebras into one of
order l+m+1 (J- and K-type couplings), specializing central symbols, and
verifying everything both symbolically (normal-ordered rewriting) and
numerically (finite matrix realizations).
"""

__version__ = "0.1.0"

from .coeffring import CentralSymbol, CoeffExpr, P0Poly, P0, Rational
from .algebra import (CatalogError, EnvelopeElement, PolyAlgebra, P_MINUS,
                      P_PLUS, P_ZERO, builtin, builtin_names, casimir,
                      env_commutator, env_mul, jacobi_check, recenter,
                      solve_g)
from .fusion import (FusedAlgebra, FusionError, FusionKind,
                     SpecializationError, fuse, fused_order_check, specialize)
from .matrixrep import (Mask, Rep, RepError, ResidualEntry, ResidualReport,
                        VerificationError, eval_coeff, eval_envelope,
                        eval_poly, rep_boson, rep_fused, rep_su11, rep_su2,
                        verify_casimir, verify_relations,
                        verify_symbol_centrality)
from .dsl import DslProgram, ParseError, parse, pretty, roundtrip_stable
from .runner import (ExecutionError, RunReport, Runner, render_report, run,
                     DEFAULT_PARAMS, TOL_CENTRAL, TOL_EXACT, TOL_FUSED,
                     TOL_TRUNCATED)

__all__ = [
    "__version__",
    "CentralSymbol", "CoeffExpr", "P0Poly", "P0", "Rational",
    "CatalogError", "EnvelopeElement", "PolyAlgebra",
    "P_MINUS", "P_PLUS", "P_ZERO",
    "builtin", "builtin_names", "casimir", "env_commutator", "env_mul",
    "jacobi_check", "recenter", "solve_g",
    "FusedAlgebra", "FusionError", "FusionKind", "SpecializationError",
    "fuse", "fused_order_check", "specialize",
    "Mask", "Rep", "RepError", "ResidualEntry", "ResidualReport",
    "VerificationError", "eval_coeff", "eval_envelope", "eval_poly",
    "rep_boson", "rep_fused", "rep_su11", "rep_su2",
    "verify_casimir", "verify_relations", "verify_symbol_centrality",
    "DslProgram", "ParseError", "parse", "pretty", "roundtrip_stable",
    "ExecutionError", "RunReport", "Runner", "render_report", "run",
    "DEFAULT_PARAMS", "TOL_CENTRAL", "TOL_EXACT", "TOL_FUSED",
    "TOL_TRUNCATED",
]
