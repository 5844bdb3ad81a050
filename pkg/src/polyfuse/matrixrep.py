"""Finite matrix realizations and numeric verification.

Base realizations: the su2 spin-j irrep (exact, no truncation), the su11
positive discrete series D+(k) truncated at a cutoff, and the truncated
boson Fock space.  Fused realizations live on the tensor product with the
bilinear generators; symbol-valued coefficients (Lambda, Casimir values,
mu2) are evaluated as commuting matrices.

Truncation is handled by masks: relations hold exactly away from the cutoff,
so residuals are reported separately for the interior and the boundary, and
the fused interior shrinks by a 2-level buffer per factor (no verified
relation moves more than two ladder steps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coeffring import CoeffExpr, P0Poly
from .algebra import PolyAlgebra, builtin, casimir, solve_g, EnvelopeElement
from .fusion import FusedAlgebra, FusionKind


class RepError(ValueError):
    """Invalid representation parameters."""


class VerificationError(ValueError):
    """A required central symbol has no matrix or scalar assignment."""

    def __init__(self, missing: list[str]):
        self.missing = sorted(missing)
        super().__init__(f"no assignment for central symbol(s): "
                         f"{', '.join(self.missing)}")


@dataclass(frozen=True)
class Mask:
    """The set of basis indices on which relations are expected to be exact."""

    included: frozenset[int]

    @classmethod
    def full(cls, dim: int) -> "Mask":
        return cls(frozenset(range(dim)))

    @classmethod
    def range_excluding_top(cls, dim: int, buffer: int) -> "Mask":
        return cls(frozenset(range(max(0, dim - buffer))))

    def shrink_top(self, count: int) -> "Mask":
        kept = sorted(self.included)
        return Mask(frozenset(kept[:max(0, len(kept) - count)]))

    def product(self, other: "Mask", other_dim: int) -> "Mask":
        return Mask(frozenset(i * other_dim + j
                              for i in self.included for j in other.included))

    def indices(self) -> np.ndarray:
        return np.array(sorted(self.included), dtype=int)

    def is_full(self, dim: int) -> bool:
        return len(self.included) == dim

    def __len__(self) -> int:
        return len(self.included)


@dataclass
class Rep:
    """A matrix realization: the three generators plus central-symbol data.

    ``symbol_eval`` assigns every central symbol that may appear in a
    structure polynomial a commuting matrix or scalar.  ``casimir_matrix``
    is this realization's own Casimir element evaluated as a matrix; fused
    realizations lift it into their symbol assignments.
    """

    dim: int
    p0: np.ndarray
    pplus: np.ndarray
    pminus: np.ndarray
    symbol_eval: dict[str, np.ndarray | float] = field(default_factory=dict)
    exact_interior: Mask = None  # type: ignore[assignment]
    casimir_matrix: np.ndarray | None = None
    # Per-symbol construction magnitude: the size of the terms that were
    # added (and possibly cancelled) to build the symbol's matrix.  A lifted
    # Casimir can be the zero matrix while being assembled from entries of
    # order cutoff^2, and its roundoff floor scales with those entries, not
    # with the (zero) result.
    symbol_scales: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.exact_interior is None:
            self.exact_interior = Mask.full(self.dim)


def _casimir_matrix(alg: PolyAlgebra, p0: np.ndarray,
                    pplus: np.ndarray, pminus: np.ndarray) -> np.ndarray:
    # P+P- + g(P0-1), evaluated with plain float arithmetic
    g_shift = solve_g(alg.phi).compose_affine(-1, +1)
    acc = pplus @ pminus
    for power, coeff in enumerate(g_shift.coeffs):
        value = coeff.as_rational()
        if value is None:
            raise RepError("cannot evaluate a symbolic Casimir without "
                           "symbol assignments")
        if value:
            acc = acc + float(value) * np.linalg.matrix_power(p0, power)
    return acc


def rep_su2(j) -> Rep:
    """The exact spin-j irrep: dim 2j+1, p0 = diag(j, j-1, ..., -j)."""
    j = Fraction(j)
    if j < 0 or (2 * j).denominator != 1:
        raise RepError(f"j must be a nonnegative half-integer, got {j}")
    dim = int(2 * j) + 1
    m_values = [float(j - n) for n in range(dim)]
    p0 = np.diag(m_values)
    pplus = np.zeros((dim, dim))
    for n in range(1, dim):
        m = m_values[n]
        pplus[n - 1, n] = math.sqrt((float(j) - m) * (float(j) + m + 1))
    pminus = pplus.T.copy()
    cas = _casimir_matrix(builtin("su2"), p0, pplus, pminus)
    return Rep(dim=dim, p0=p0, pplus=pplus, pminus=pminus,
               symbol_eval={"C": float(j * (j + 1))},
               exact_interior=Mask.full(dim), casimir_matrix=cas)


def rep_su11(k, cutoff: int) -> Rep:
    """Truncated positive discrete series D+(k): p0 = diag(k+n).

    The Casimir value is -k(k-1).  The top two levels are excluded from the
    exact interior; all truncation defects live there.
    """
    k = Fraction(k)
    if k <= 0:
        raise RepError(f"k must be positive, got {k}")
    if not isinstance(cutoff, int) or cutoff < 3:
        raise RepError(f"cutoff must be an integer >= 3, got {cutoff}")
    dim = cutoff
    p0 = np.diag([float(k) + n for n in range(dim)])
    pplus = np.zeros((dim, dim))
    for n in range(dim - 1):
        pplus[n + 1, n] = math.sqrt((n + 1) * (2 * float(k) + n))
    pminus = pplus.T.copy()
    cas = _casimir_matrix(builtin("su11"), p0, pplus, pminus)
    return Rep(dim=dim, p0=p0, pplus=pplus, pminus=pminus,
               symbol_eval={"C": float(-k * (k - 1))},
               exact_interior=Mask.range_excluding_top(dim, 2),
               casimir_matrix=cas)


def rep_boson(cutoff: int) -> Rep:
    """Truncated Fock space: p0 = number operator, pplus = creation."""
    if not isinstance(cutoff, int) or cutoff < 3:
        raise RepError(f"cutoff must be an integer >= 3, got {cutoff}")
    dim = cutoff
    p0 = np.diag(np.arange(dim, dtype=float))
    pplus = np.zeros((dim, dim))
    for n in range(dim - 1):
        pplus[n + 1, n] = math.sqrt(n + 1)
    pminus = pplus.T.copy()
    cas = _casimir_matrix(builtin("boson"), p0, pplus, pminus)
    return Rep(dim=dim, p0=p0, pplus=pplus, pminus=pminus,
               symbol_eval={"C": 1.0},
               exact_interior=Mask.range_excluding_top(dim, 2),
               casimir_matrix=cas)


DEFAULT_DIM_LIMIT = 4096


def rep_fused(kind: FusionKind, rep_l: Rep, rep_m: Rep, mu_value: float = 1.0,
              fused: FusedAlgebra | None = None,
              dim_limit: int = DEFAULT_DIM_LIMIT) -> Rep:
    """Tensor-product realization of a fused algebra.

    Symbol names for Lambda, mu2 and the factor Casimirs default to the
    names fuse() assigns; pass the FusedAlgebra to use its actual ledger
    (including any renames of the factors' own structure constants).
    """
    if not isinstance(kind, FusionKind):
        kind = FusionKind(str(kind))
    if fused is not None and fused.kind is not kind:
        raise RepError(f"fused algebra is {fused.kind.value}-type, "
                       f"asked for {kind.value}-type realization")
    dim = rep_l.dim * rep_m.dim
    if dim > dim_limit:
        raise RepError(f"fused dimension {dim} exceeds limit {dim_limit}")

    eye_l = np.eye(rep_l.dim)
    eye_m = np.eye(rep_m.dim)
    l0 = np.kron(rep_l.p0, eye_m)
    m0 = np.kron(eye_l, rep_m.p0)
    mu = float(mu_value)
    if kind is FusionKind.J:
        p0 = 0.5 * (l0 - m0)
        lam_matrix = 0.5 * (l0 + m0)
        pplus = mu * np.kron(rep_l.pplus, rep_m.pminus)
        pminus = mu * np.kron(rep_l.pminus, rep_m.pplus)
    else:
        p0 = 0.5 * (l0 + m0)
        lam_matrix = 0.5 * (l0 - m0)
        pplus = mu * np.kron(rep_l.pplus, rep_m.pplus)
        pminus = mu * np.kron(rep_l.pminus, rep_m.pminus)

    lam_name = fused.lam if fused is not None else "Lambda"
    mu2_name = fused.mu2 if fused is not None else "mu2"
    symbol_eval: dict[str, np.ndarray | float] = {
        lam_name: lam_matrix,
        mu2_name: mu * mu,
    }
    symbol_scales: dict[str, float] = {
        lam_name: max(1.0, float(np.abs(lam_matrix).max())),
    }
    c_l_name = fused.casimir_l if fused is not None else "C_L"
    c_m_name = fused.casimir_m if fused is not None else "C_M"
    if c_l_name is not None:
        if rep_l.casimir_matrix is None:
            raise RepError("left factor provides no Casimir matrix")
        symbol_eval[c_l_name] = np.kron(rep_l.casimir_matrix, eye_m)
        symbol_scales[c_l_name] = _casimir_scale(rep_l)
    if c_m_name is not None:
        if rep_m.casimir_matrix is None:
            raise RepError("right factor provides no Casimir matrix")
        symbol_eval[c_m_name] = np.kron(eye_l, rep_m.casimir_matrix)
        symbol_scales[c_m_name] = _casimir_scale(rep_m)

    if fused is not None:
        # Lift the factors' own structure-constant assignments, M's under
        # its renamed symbols.
        rename_map = dict(fused.renames_m)
        for sym in fused.algebra.centrals:
            if sym in symbol_eval:
                continue
            if sym in rep_l.symbol_eval and sym != "C":
                symbol_eval[sym] = _lift(rep_l.symbol_eval[sym], eye_m, left=True)
                symbol_scales[sym] = rep_l.symbol_scales.get(sym, 1.0)
        for old, new in rename_map.items():
            if new in fused.algebra.centrals and old in rep_m.symbol_eval:
                symbol_eval[new] = _lift(rep_m.symbol_eval[old], eye_l, left=False)
                symbol_scales[new] = rep_m.symbol_scales.get(old, 1.0)

    interior = rep_l.exact_interior.shrink_top(2).product(
        rep_m.exact_interior.shrink_top(2), rep_m.dim)
    return Rep(dim=dim, p0=p0, pplus=pplus, pminus=pminus,
               symbol_eval=symbol_eval, exact_interior=interior,
               casimir_matrix=None, symbol_scales=symbol_scales)


def _casimir_scale(factor: Rep) -> float:
    """Magnitude of the terms summed into the factor's Casimir matrix."""
    product = float(np.abs(factor.pplus @ factor.pminus).max())
    result = float(np.abs(factor.casimir_matrix).max())
    return max(1.0, product, result)


def _lift(value: np.ndarray | float, eye_other: np.ndarray,
          left: bool) -> np.ndarray | float:
    if np.isscalar(value):
        return float(value)
    return np.kron(value, eye_other) if left else np.kron(eye_other, value)


# -- evaluation --------------------------------------------------------------

def eval_coeff(expr: CoeffExpr, rep: Rep) -> np.ndarray:
    """A coefficient-ring element as a dim x dim matrix.

    All symbol assignments commute (they are simultaneously diagonal with
    p0), so the fixed coefficient-first evaluation order is immaterial
    mathematically and deterministic numerically.
    """
    missing = sorted(expr.symbols() - set(rep.symbol_eval))
    if missing:
        raise VerificationError(missing)
    acc = np.zeros((rep.dim, rep.dim))
    eye = np.eye(rep.dim)
    for mono, rational in expr.terms():
        term = float(rational) * eye
        for name, exp in mono:
            value = rep.symbol_eval[name]
            if np.isscalar(value):
                term = term * (float(value) ** exp)
            else:
                term = term @ np.linalg.matrix_power(value, exp)
        acc = acc + term
    return acc


def eval_poly(poly: P0Poly, rep: Rep) -> np.ndarray:
    """A P0-polynomial as a matrix: sum of coeff-matrix times p0^power."""
    acc = np.zeros((rep.dim, rep.dim))
    for power, coeff in enumerate(poly.coeffs):
        if coeff:
            acc = acc + eval_coeff(coeff, rep) @ np.linalg.matrix_power(rep.p0, power)
    return acc


def eval_envelope(element: EnvelopeElement, rep: Rep) -> np.ndarray:
    """A normal-ordered element as a matrix: P+^a f(P0) P-^b termwise."""
    acc = np.zeros((rep.dim, rep.dim))
    for (a, b), f in element.monomials().items():
        term = eval_poly(f, rep)
        term = np.linalg.matrix_power(rep.pplus, a) @ term
        term = term @ np.linalg.matrix_power(rep.pminus, b)
        acc = acc + term
    return acc


# -- residual reporting ------------------------------------------------------

@dataclass(frozen=True)
class ResidualEntry:
    relation: str
    interior: float
    boundary: float | None  # None when the mask covers the whole space
    scale: float = 1.0  # interior magnitude of the compared matrices, >= 1

    @property
    def relative(self) -> float:
        """Interior residual normalized by the magnitude of what is being
        compared; the right quantity to track across cutoff changes, where
        absolute residuals grow with matrix entries through float roundoff."""
        return self.interior / self.scale

    def to_dict(self) -> dict:
        return {"relation": self.relation, "interior": self.interior,
                "boundary": self.boundary, "scale": self.scale}


@dataclass(frozen=True)
class ResidualReport:
    target: str
    entries: tuple[ResidualEntry, ...]

    def max_interior(self) -> float:
        return max((e.interior for e in self.entries), default=0.0)

    def entry(self, relation: str) -> ResidualEntry:
        for e in self.entries:
            if e.relation == relation:
                return e
        raise KeyError(relation)

    def to_dict(self) -> dict:
        return {"target": self.target,
                "entries": [e.to_dict() for e in self.entries]}


def _split_residual(matrix: np.ndarray, mask: Mask) -> tuple[float, float | None]:
    absolute = np.abs(matrix)
    idx = mask.indices()
    interior = float(absolute[np.ix_(idx, idx)].max()) if len(idx) else 0.0
    if mask.is_full(matrix.shape[0]):
        return interior, None
    hidden = absolute.copy()
    if len(idx):
        hidden[np.ix_(idx, idx)] = 0.0
    return interior, float(hidden.max())


def _interior_scale(reference: np.ndarray, mask: Mask) -> float:
    idx = mask.indices()
    if not len(idx):
        return 1.0
    return max(1.0, float(np.abs(reference[np.ix_(idx, idx)]).max()))


def _entry(name: str, residual: np.ndarray, reference: np.ndarray | None,
           mask: Mask, scale: float | None = None) -> ResidualEntry:
    interior, boundary = _split_residual(residual, mask)
    if scale is None:
        scale = _interior_scale(reference, mask)
    return ResidualEntry(name, interior, boundary, scale)


def _require_symbols(rep: Rep, alg: PolyAlgebra):
    missing = sorted(alg.centrals - set(rep.symbol_eval))
    if missing:
        raise VerificationError(missing)


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def verify_relations(rep: Rep, alg: PolyAlgebra) -> ResidualReport:
    """Residuals of the three defining relations on the realization."""
    _require_symbols(rep, alg)
    phi_matrix = eval_poly(alg.phi, rep)
    checks = [
        ("[P0,P+]-P+", _commutator(rep.p0, rep.pplus) - rep.pplus, rep.pplus),
        ("[P0,P-]+P-", _commutator(rep.p0, rep.pminus) + rep.pminus, rep.pminus),
        ("[P+,P-]-phi(P0)", _commutator(rep.pplus, rep.pminus) - phi_matrix,
         phi_matrix),
    ]
    entries = tuple(_entry(name, residual, reference, rep.exact_interior)
                    for name, residual, reference in checks)
    return ResidualReport(target=alg.name, entries=entries)


def verify_casimir(rep: Rep, alg: PolyAlgebra) -> ResidualReport:
    """Residuals of [C, P0/P+/P-] with C evaluated from the envelope form."""
    _require_symbols(rep, alg)
    c_matrix = eval_envelope(casimir(alg), rep)
    checks = [
        ("[C,P+]", _commutator(c_matrix, rep.pplus), c_matrix @ rep.pplus),
        ("[C,P-]", _commutator(c_matrix, rep.pminus), c_matrix @ rep.pminus),
        ("[C,P0]", _commutator(c_matrix, rep.p0), c_matrix @ rep.p0),
    ]
    entries = tuple(_entry(name, residual, reference, rep.exact_interior)
                    for name, residual, reference in checks)
    return ResidualReport(target=f"casimir({alg.name})", entries=entries)


def verify_symbol_centrality(rep: Rep) -> ResidualReport:
    """Residuals of [S, generator] for every matrix-valued symbol S.

    Central symbols must commute with all three generators; for fused
    realizations this is the centrality of Lambda and of the lifted factor
    Casimirs.
    """
    checks = []
    for name in sorted(rep.symbol_eval):
        value = rep.symbol_eval[name]
        if np.isscalar(value):
            continue
        construction = rep.symbol_scales.get(
            name, max(1.0, float(np.abs(value).max())))
        for gen_name, generator in (("P0", rep.p0), ("P+", rep.pplus),
                                    ("P-", rep.pminus)):
            scale = max(1.0, construction * float(np.abs(generator).max()))
            checks.append((f"[{name},{gen_name}]",
                           _commutator(value, generator), scale))
    entries = tuple(_entry(name, residual, None, rep.exact_interior, scale)
                    for name, residual, scale in checks)
    return ResidualReport(target="centrality", entries=entries)
