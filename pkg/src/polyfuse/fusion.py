"""Fusing two commuting polynomial algebras into one of order l+m+1.

Given algebras L (order l) and M (order m) acting on independent spaces,
define new generators from bilinears:

    J-type:  P0 = (L0 - M0)/2,  P+ = mu * L+ M-,  P- = mu * L- M+
    K-type:  P0 = (L0 + M0)/2,  P+ = mu * L+ M+,  P- = mu * L- M-

The combination Lambda ((L0 + M0)/2 for J, (L0 - M0)/2 for K) and the two
input Casimirs are central in the result, and the new commutator
[P+, P-] closes on a polynomial in P0 of degree l + m + 1:

    J:  phi(P0) = mu2 * ( [C_M - g_M(Lambda - P0 - 1)] * phi_L(Lambda + P0)
                        - [C_L - g_L(Lambda + P0 - 1)] * phi_M(Lambda - P0) )
    K:  phi(P0) = mu2 * ( [C_L - g_L(P0 + Lambda - 1)] * phi_M(P0 - Lambda)
                        + [C_M - g_M(P0 - Lambda)]     * phi_L(P0 + Lambda) )

Lambda, mu2 and the Casimir values enter as fresh opaque central symbols,
except that a factor carrying a pinned casimir_value (the boson) has its
value substituted directly, which is what makes boson-pair fusion reproduce
su2 and su11 on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .coeffring import CoeffExpr, P0Poly, ScalarLike
from .algebra import PolyAlgebra, solve_g


class FusionError(ValueError):
    """Central-symbol bookkeeping failed (renaming exhausted)."""


class SpecializationError(ValueError):
    """Bad assignment set passed to specialize."""


class FusionKind(Enum):
    J = "J"
    K = "K"


@dataclass(frozen=True)
class FusedAlgebra:
    """A fusion result plus its central-symbol ledger.

    ``casimir_l`` / ``casimir_m`` are None when that factor's Casimir value
    was pinned and substituted rather than kept symbolic.  ``renames_m``
    records how M's structure-constant symbols were renamed to avoid
    aliasing L's (old name -> new name).
    """

    algebra: PolyAlgebra
    kind: FusionKind
    lam: str
    mu2: str
    casimir_l: str | None
    casimir_m: str | None
    source_l: str
    source_m: str
    renames_m: tuple[tuple[str, str], ...] = ()

    @property
    def phi(self) -> P0Poly:
        return self.algebra.phi

    def central_ledger(self) -> dict[str, str]:
        """Human-readable meaning of every bookkeeping symbol in use."""
        half = "(L0 + M0)/2" if self.kind is FusionKind.J else "(L0 - M0)/2"
        ledger = {self.lam: f"central combination {half}",
                  self.mu2: "squared coupling in P+ = mu*L+M-/+"}
        if self.casimir_l is not None:
            ledger[self.casimir_l] = f"Casimir value of {self.source_l}"
        if self.casimir_m is not None:
            ledger[self.casimir_m] = f"Casimir value of {self.source_m}"
        for old, new in self.renames_m:
            ledger[new] = f"structure constant {old} of {self.source_m}"
        return ledger


_MAX_RENAME_ATTEMPTS = 1000


def _fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        taken.add(base)
        return base
    for n in range(2, _MAX_RENAME_ATTEMPTS):
        candidate = f"{base}{n}"
        if candidate not in taken:
            taken.add(candidate)
            return candidate
    raise FusionError(f"could not find a fresh name for {base!r}")


def fuse(kind: FusionKind, left: PolyAlgebra, right: PolyAlgebra,
         name: str | None = None) -> FusedAlgebra:
    """Build the J-type or K-type fusion of two commuting algebras.

    Symbols of the right factor that collide with the left factor's are
    renamed with an ``_m`` suffix before anything else, so fusing an algebra
    with a copy of itself never aliases structure constants.
    """
    if not isinstance(kind, FusionKind):
        kind = FusionKind(str(kind))

    taken = set(left.centrals)
    renames: list[tuple[str, str]] = []
    for sym in sorted(right.centrals):
        if sym in taken:
            new = _fresh_name(f"{sym}_m", taken)
            renames.append((sym, new))
        else:
            taken.add(sym)
    rename_map: Mapping[str, CoeffExpr] = {
        old: CoeffExpr.symbol(new) for old, new in renames}
    phi_m = right.phi.subs_symbols(rename_map) if renames else right.phi

    lam_name = _fresh_name("Lambda", taken)
    mu2_name = _fresh_name("mu2", taken)
    lam = CoeffExpr.symbol(lam_name)

    if left.casimir_value is not None:
        c_l = left.casimir_value
        c_l_name = None
    else:
        c_l_name = _fresh_name("C_L", taken)
        c_l = CoeffExpr.symbol(c_l_name)
    if right.casimir_value is not None:
        c_m = right.casimir_value.subs(rename_map) if renames else right.casimir_value
        c_m_name = None
    else:
        c_m_name = _fresh_name("C_M", taken)
        c_m = CoeffExpr.symbol(c_m_name)

    g_l = solve_g(left.phi)
    g_m = solve_g(phi_m)

    if kind is FusionKind.J:
        # [C_M - g_M(Lambda - P0 - 1)] phi_L(Lambda + P0)
        #   - [C_L - g_L(Lambda + P0 - 1)] phi_M(Lambda - P0)
        term_a = (P0Poly.constant(c_m) - g_m.compose_affine(lam - 1, -1)) \
            * left.phi.compose_affine(lam, +1)
        term_b = (P0Poly.constant(c_l) - g_l.compose_affine(lam - 1, +1)) \
            * phi_m.compose_affine(lam, -1)
        phi_new = term_a - term_b
    else:
        # [C_L - g_L(P0 + Lambda - 1)] phi_M(P0 - Lambda)
        #   + [C_M - g_M(P0 - Lambda)] phi_L(P0 + Lambda)
        term_a = (P0Poly.constant(c_l) - g_l.compose_affine(lam - 1, +1)) \
            * phi_m.compose_affine(-lam, +1)
        term_b = (P0Poly.constant(c_m) - g_m.compose_affine(-lam, +1)) \
            * left.phi.compose_affine(lam, +1)
        phi_new = term_a + term_b

    phi_new = phi_new * CoeffExpr.symbol(mu2_name)

    if name is None:
        name = f"fuse{kind.value}({left.name},{right.name})"
    fused_alg = PolyAlgebra(name=name, phi=phi_new)
    return FusedAlgebra(algebra=fused_alg, kind=kind,
                        lam=lam_name, mu2=mu2_name,
                        casimir_l=c_l_name, casimir_m=c_m_name,
                        source_l=left.name, source_m=right.name,
                        renames_m=tuple(renames))


def specialize(source: FusedAlgebra | PolyAlgebra,
               assignments: Mapping[str, CoeffExpr | ScalarLike],
               name: str | None = None) -> PolyAlgebra:
    """Substitute values for central symbols, e.g. mu2 -> h, C_M -> -C_L.

    The substitution is simultaneous; an assignment whose value mentions any
    symbol being assigned is rejected (no cycles, no chaining).
    """
    alg = source.algebra if isinstance(source, FusedAlgebra) else source
    values = {str(k): (v if isinstance(v, CoeffExpr) else CoeffExpr(v))
              for k, v in assignments.items()}
    assigned = set(values)
    for sym, value in values.items():
        overlap = value.symbols() & assigned
        if overlap:
            raise SpecializationError(
                f"assignment for {sym!r} mentions assigned symbol(s) "
                f"{sorted(overlap)}")
    if not values:
        return alg
    new_casimir = (alg.casimir_value.subs(values)
                   if alg.casimir_value is not None else None)
    return PolyAlgebra(name=name or f"{alg.name}|specialized",
                       phi=alg.phi.subs_symbols(values),
                       casimir_value=new_casimir)


def fused_order_check(fused: FusedAlgebra, l: int, m: int) -> bool:
    """True iff the fused structure polynomial has degree l + m + 1."""
    return fused.algebra.order == l + m + 1
