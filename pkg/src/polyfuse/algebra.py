"""Three-dimensional polynomial ladder algebras and their enveloping algebra.

An algebra here has generators P0, P+, P- with

    [P0, P+] = +P+      [P0, P-] = -P-      [P+, P-] = phi(P0)

for a polynomial phi whose coefficients are rationals and commuting central
symbols.  This module solves the difference equation g(x) - g(x-1) = phi(x)
(zero constant term), builds the Casimir element, ships the builtin catalog,
and rewrites products of generators to the normal order P+^a f(P0) P-^b so
that operator identities become structural equalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .coeffring import CoeffExpr, P0Poly, ScalarLike


class CatalogError(ValueError):
    """Unknown builtin algebra name."""


@dataclass(frozen=True)
class PolyAlgebra:
    """A named polynomial algebra, fully determined by its structure
    polynomial phi = [P+, P-].

    ``casimir_value`` optionally pins the value of the Casimir element when
    the presentation fixes it (the boson algebra: a+a- - N + 1 = 1).  Fusion
    substitutes a pinned value instead of introducing an opaque symbol.
    """

    name: str
    phi: P0Poly
    casimir_value: CoeffExpr | None = None

    @property
    def order(self) -> int | None:
        """Degree of phi; None for the degenerate phi = 0."""
        return self.phi.degree

    @property
    def centrals(self) -> frozenset[str]:
        """Exactly the symbols occurring in phi."""
        return self.phi.symbols()

    def __str__(self) -> str:
        return f"{self.name}: [P+,P-] = {self.phi}"


def solve_g(phi: P0Poly) -> P0Poly:
    """The unique g with g(x) - g(x-1) = phi(x) and zero constant term.

    Writing g = sum_{i=1}^{m+1} b_i x^i, the difference g(x) - g(x-1) has
    x^k coefficient sum_{i>k} b_i C(i,k) (-1)^(i-k+1), an upper-triangular
    system solved here from the top degree down.  deg g = deg phi + 1.
    """
    if not phi:
        return P0Poly()
    m = phi.degree
    b = [CoeffExpr(0)] * (m + 2)
    for k in range(m, -1, -1):
        acc = phi.coeff(k)
        for i in range(k + 2, m + 2):
            sign = -1 if (i - k) % 2 == 0 else 1
            acc = acc - b[i] * (sign * math.comb(i, k))
        b[k + 1] = acc / (k + 1)
    return P0Poly(b)


_CATALOG = {
    # name -> (coefficients of phi from the constant term up, casimir value)
    "boson": ((Fraction(-1),), CoeffExpr(1)),
    "su2": ((0, Fraction(2)), None),
    "su11": ((0, Fraction(-2)), None),
    "higgs": ((0, 2 * CoeffExpr.symbol("a"), 0, 4 * CoeffExpr.symbol("h")), None),
    "quadratic": ((CoeffExpr.symbol("c"), CoeffExpr.symbol("b"),
                   CoeffExpr.symbol("a")), None),
}


def builtin(name: str) -> PolyAlgebra:
    """One of the five stock algebras: boson, su2, su11, higgs, quadratic.

    Conventions: the boson P+ is the creation operator, so phi = -1; su2 has
    phi = 2*P0; su11 (recentered form) has phi = -2*P0; higgs has
    phi = 4*h*P0^3 + 2*a*P0; quadratic has phi = a*P0^2 + b*P0 + c.
    """
    entry = _CATALOG.get(name)
    if entry is None:
        known = ", ".join(sorted(_CATALOG))
        raise CatalogError(f"unknown algebra {name!r} (known: {known})")
    coeffs, casimir_value = entry
    return PolyAlgebra(name=name, phi=P0Poly(coeffs), casimir_value=casimir_value)


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOG))


def recenter(alg: PolyAlgebra, shift: CoeffExpr | ScalarLike) -> PolyAlgebra:
    """Shift the diagonal generator: the new P0 equals the old P0 + shift,
    so phi is evaluated at P0 - shift.  Order is preserved.

    A pinned Casimir value does not survive: the zero-constant normalization
    of g re-anchors the Casimir's additive constant under recentering.
    """
    if not isinstance(shift, CoeffExpr):
        shift = CoeffExpr(shift)
    if not shift:
        return alg
    return PolyAlgebra(name=alg.name,
                       phi=alg.phi.compose_affine(-shift, +1))


class EnvelopeElement:
    """A finite sum of normal-ordered words P+^a * f(P0) * P-^b.

    Stored as a map (a, b) -> f with no identically-zero f.  Addition is
    componentwise; multiplication needs the algebra's phi and lives in
    env_mul below.
    """

    __slots__ = ("_monos",)

    def __init__(self, monos: Mapping[tuple[int, int], P0Poly] = ()):
        clean: dict[tuple[int, int], P0Poly] = {}
        items = monos.items() if isinstance(monos, Mapping) else monos
        for (a, b), f in items:
            if a < 0 or b < 0:
                raise ValueError("ladder powers must be nonnegative")
            if not isinstance(f, P0Poly):
                f = P0Poly.constant(f)
            if not f:
                continue
            key = (int(a), int(b))
            existing = clean.get(key)
            total = f if existing is None else existing + f
            if total:
                clean[key] = total
            else:
                clean.pop(key, None)
        self._monos = clean

    @classmethod
    def of_poly(cls, f: P0Poly | CoeffExpr | ScalarLike) -> "EnvelopeElement":
        if not isinstance(f, P0Poly):
            f = P0Poly.constant(f)
        return cls({(0, 0): f})

    @classmethod
    def ladder(cls, raise_power: int, lower_power: int,
               f: P0Poly | CoeffExpr | ScalarLike = 1) -> "EnvelopeElement":
        if not isinstance(f, P0Poly):
            f = P0Poly.constant(f)
        return cls({(raise_power, lower_power): f})

    def monomials(self) -> dict[tuple[int, int], P0Poly]:
        return dict(self._monos)

    def __bool__(self) -> bool:
        return bool(self._monos)

    def __add__(self, other) -> "EnvelopeElement":
        if not isinstance(other, EnvelopeElement):
            return NotImplemented
        merged = dict(self._monos)
        for key, f in other._monos.items():
            total = merged.get(key, P0Poly()) + f
            if total:
                merged[key] = total
            else:
                merged.pop(key, None)
        return EnvelopeElement(merged)

    def __neg__(self) -> "EnvelopeElement":
        return EnvelopeElement({k: -f for k, f in self._monos.items()})

    def __sub__(self, other) -> "EnvelopeElement":
        if not isinstance(other, EnvelopeElement):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: CoeffExpr | ScalarLike) -> "EnvelopeElement":
        return EnvelopeElement({k: f * factor for k, f in self._monos.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnvelopeElement):
            return NotImplemented
        return self._monos == other._monos

    def __hash__(self) -> int:
        return hash(frozenset(self._monos.items()))

    def __str__(self) -> str:
        if not self._monos:
            return "0"
        parts = []
        for (a, b) in sorted(self._monos, reverse=True):
            f = self._monos[(a, b)]
            word = []
            if a:
                word.append("P+" if a == 1 else f"P+^{a}")
            word.append(f"({f})")
            if b:
                word.append("P-" if b == 1 else f"P-^{b}")
            parts.append(" ".join(word))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"EnvelopeElement({self})"


# Right-multiplication primitives.  The rewriting rules are the directed
# relations f(P0) P+ = P+ f(P0+1), P- f(P0) = f(P0+1) P-, and
# P- P+ = P+ P- - phi(P0); each P+ application strictly reduces the number
# of inverted P-...P+ pairs, so reduction terminates.

def _mul_poly(x: EnvelopeElement, f: P0Poly) -> EnvelopeElement:
    # P+^a g(P0) P-^b * f(P0) = P+^a g(P0) f(P0+b) P-^b
    return EnvelopeElement({(a, b): g * f.compose_affine(b, +1)
                            for (a, b), g in x.monomials().items()})


def _mul_lowering(x: EnvelopeElement) -> EnvelopeElement:
    return EnvelopeElement({(a, b + 1): g for (a, b), g in x.monomials().items()})


def _mul_raising(x: EnvelopeElement, phi: P0Poly) -> EnvelopeElement:
    out = EnvelopeElement()
    for (a, b), g in x.monomials().items():
        if b == 0:
            # g(P0) P+ = P+ g(P0+1)
            out = out + EnvelopeElement({(a + 1, 0): g.compose_affine(1, +1)})
        else:
            # ... P-^b P+ = ... P-^(b-1) P+ P- - ... P-^(b-1) phi(P0+b-1)
            head = EnvelopeElement({(a, b - 1): g})
            out = out + _mul_lowering(_mul_raising(head, phi))
            out = out - EnvelopeElement({(a, b - 1): g * phi.compose_affine(b - 1, +1)})
    return out


def env_mul(x: EnvelopeElement, y: EnvelopeElement,
            alg: PolyAlgebra) -> EnvelopeElement:
    """Product of two normal-ordered elements, reduced to normal order."""
    phi = alg.phi
    out = EnvelopeElement()
    for (a, b), f in y.monomials().items():
        t = x
        for _ in range(a):
            t = _mul_raising(t, phi)
        t = _mul_poly(t, f)
        for _ in range(b):
            t = _mul_lowering(t)
        out = out + t
    return out


def env_commutator(x: EnvelopeElement, y: EnvelopeElement,
                   alg: PolyAlgebra) -> EnvelopeElement:
    return env_mul(x, y, alg) - env_mul(y, x, alg)


def casimir(alg: PolyAlgebra) -> EnvelopeElement:
    """The Casimir element P+P- + g(P0-1), with g = solve_g(phi).

    After rewriting this equals P-P+ + g(P0); it commutes with all three
    generators.
    """
    g = solve_g(alg.phi)
    return EnvelopeElement({(1, 1): P0Poly.constant(1),
                            (0, 0): g.compose_affine(-1, +1)})


P_PLUS = EnvelopeElement.ladder(1, 0)
P_MINUS = EnvelopeElement.ladder(0, 1)
P_ZERO = EnvelopeElement.of_poly(P0Poly((0, 1)))


def jacobi_check(alg: PolyAlgebra) -> bool:
    """True iff the cyclic Jacobi sum over (P+, P-, P0) rewrites to zero.

    Holds for every well-formed structure polynomial; exposed as a check
    because it exercises the whole rewriting engine.
    """
    inner = env_commutator(P_PLUS, P_MINUS, alg)
    total = env_commutator(inner, P_ZERO, alg)
    total = total + env_commutator(env_commutator(P_MINUS, P_ZERO, alg), P_PLUS, alg)
    total = total + env_commutator(env_commutator(P_ZERO, P_PLUS, alg), P_MINUS, alg)
    return not total
