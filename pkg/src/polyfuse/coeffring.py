"""Exact arithmetic for the coefficient ring and for polynomials in P0.

The coefficient ring is the rationals extended by finitely many commuting
symbols (Casimir values, the central combination Lambda, mu2, free structure
constants).  ``CoeffExpr`` is a sparse multivariate polynomial over
``fractions.Fraction`` in those symbols; ``P0Poly`` is a univariate polynomial
in the diagonal generator P0 with ``CoeffExpr`` coefficients.

Everything here is immutable, exact, and in canonical normal form, so
structural equality coincides with mathematical equality.  No floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Rational = Fraction

ScalarLike = Union[int, Fraction]

# A monomial in the central symbols: (("a", 2), ("h", 1)) means a^2 * h.
# Pairs are sorted by symbol name and exponents are >= 1; () is the constant
# monomial.
Monomial = tuple


class CentralSymbol(str):
    """Name of a commuting central quantity (a Casimir value, Lambda, mu2, a
    free structure constant).  Comparison and hashing are by name."""

    __slots__ = ()

    @property
    def name(self) -> str:
        return str(self)


def _as_fraction(value: ScalarLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact scalar, got {type(value).__name__}")


class CoeffExpr:
    """Sparse exact polynomial in commuting central symbols.

    Terms map a monomial to a nonzero Fraction.  Construction normalizes:
    like terms merge, zero terms drop, exponent pairs sort by name.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, ScalarLike] | ScalarLike = 0):
        if isinstance(terms, (int, Fraction)):
            value = _as_fraction(terms)
            self._terms = {(): value} if value else {}
            self._hash = None
            return
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            value = _as_fraction(coeff)
            if not value:
                continue
            exps: dict[str, int] = {}
            for name, exp in mono:
                exp = int(exp)
                if exp == 0:
                    continue
                if exp < 0:
                    raise ValueError(f"negative exponent for symbol {name!r}")
                exps[str(name)] = exps.get(str(name), 0) + exp
            key = tuple(sorted(exps.items()))
            total = clean.get(key, Fraction(0)) + value
            if total:
                clean[key] = total
            else:
                clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def symbol(cls, name: str) -> "CoeffExpr":
        return cls({((str(name), 1),): 1})

    # -- queries ---------------------------------------------------------

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in canonical order: lexicographic monomials, constant last."""
        for mono in sorted(self._terms, key=lambda m: (m == (), m)):
            yield mono, self._terms[mono]

    def symbols(self) -> frozenset[str]:
        return frozenset(name for mono in self._terms for name, _ in mono)

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction if constant, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and () in self._terms:
            return self._terms[()]
        return None

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- ring operations -------------------------------------------------

    @staticmethod
    def _coerce(other) -> "CoeffExpr | None":
        if isinstance(other, CoeffExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return CoeffExpr(other)
        return None

    def __add__(self, other) -> "CoeffExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        merged = dict(self._terms)
        for mono, coeff in other._terms.items():
            total = merged.get(mono, Fraction(0)) + coeff
            if total:
                merged[mono] = total
            else:
                merged.pop(mono, None)
        return _raw_coeffexpr(merged)

    __radd__ = __add__

    def __neg__(self) -> "CoeffExpr":
        return _raw_coeffexpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "CoeffExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CoeffExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "CoeffExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = _monomial_mul(m1, m2)
                total = product.get(key, Fraction(0)) + c1 * c2
                if total:
                    product[key] = total
                else:
                    product.pop(key, None)
        return _raw_coeffexpr(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "CoeffExpr":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = CoeffExpr(1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other) -> "CoeffExpr":
        if isinstance(other, CoeffExpr):
            value = other.as_rational()
            if value is None:
                raise TypeError("division only by nonzero rationals")
            other = value
        other = _as_fraction(other)
        if not other:
            raise ZeroDivisionError("division of CoeffExpr by zero")
        return _raw_coeffexpr({m: c / other for m, c in self._terms.items()})

    def subs(self, mapping: Mapping[str, "CoeffExpr | ScalarLike"]) -> "CoeffExpr":
        """Simultaneously replace symbols by coefficient expressions."""
        values = {str(k): (v if isinstance(v, CoeffExpr) else CoeffExpr(v))
                  for k, v in mapping.items()}
        result = CoeffExpr(0)
        for mono, coeff in self._terms.items():
            term = CoeffExpr(coeff)
            for name, exp in mono:
                factor = values.get(name)
                if factor is None:
                    factor = CoeffExpr.symbol(name)
                term = term * factor ** exp
            result = result + term
        return result

    # -- identity --------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.terms():
            text = _term_text(coeff, mono, p0_power=0)
            if parts:
                parts.append(" - " if coeff < 0 else " + ")
                parts.append(text.lstrip("-"))
            else:
                parts.append(text)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"CoeffExpr({self})"


def _raw_coeffexpr(terms: dict[Monomial, Fraction]) -> CoeffExpr:
    # Internal constructor: terms are already canonical.
    expr = CoeffExpr.__new__(CoeffExpr)
    expr._terms = terms
    expr._hash = None
    return expr


def _monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, exp in b:
        exps[name] = exps.get(name, 0) + exp
    return tuple(sorted(exps.items()))


def _term_text(coeff: Fraction, mono: Monomial, p0_power: int) -> str:
    """One product term in the surface syntax, e.g. ``-3/2*h*P0^2``."""
    factors = [name for name, exp in mono for _ in range(exp)]
    if p0_power == 1:
        factors.append("P0")
    elif p0_power > 1:
        factors.append(f"P0^{p0_power}")
    magnitude = abs(coeff)
    if magnitude != 1 or not factors:
        factors.insert(0, str(magnitude))
    text = "*".join(factors)
    return f"-{text}" if coeff < 0 else text


ZERO = CoeffExpr(0)
ONE = CoeffExpr(1)


class P0Poly:
    """Polynomial in P0 over the coefficient ring, stored densely from the
    constant term up, trailing zeros stripped."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[CoeffExpr | ScalarLike] = ()):
        cs = [c if isinstance(c, CoeffExpr) else CoeffExpr(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, value: CoeffExpr | ScalarLike) -> "P0Poly":
        return cls((value,))

    # -- queries ---------------------------------------------------------

    @property
    def degree(self) -> int | None:
        """Degree in P0; None for the zero polynomial."""
        return len(self._coeffs) - 1 if self._coeffs else None

    @property
    def coeffs(self) -> tuple[CoeffExpr, ...]:
        return self._coeffs

    def coeff(self, power: int) -> CoeffExpr:
        if 0 <= power < len(self._coeffs):
            return self._coeffs[power]
        return ZERO

    def leading(self) -> CoeffExpr:
        return self._coeffs[-1] if self._coeffs else ZERO

    def constant_term(self) -> CoeffExpr:
        return self.coeff(0)

    def symbols(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for c in self._coeffs:
            out = out | c.symbols()
        return out

    def monomial_terms(self) -> Iterator[tuple[int, Monomial, Fraction]]:
        """Fully flattened terms in canonical order: descending P0 power,
        then lexicographic symbol monomials with the constant last."""
        for power in range(len(self._coeffs) - 1, -1, -1):
            for mono, coeff in self._coeffs[power].terms():
                yield power, mono, coeff

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # -- ring operations -------------------------------------------------

    @staticmethod
    def _coerce(other) -> "P0Poly | None":
        if isinstance(other, P0Poly):
            return other
        if isinstance(other, (int, Fraction, CoeffExpr)):
            return P0Poly((other,))
        return None

    def __add__(self, other) -> "P0Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self._coeffs), len(other._coeffs))
        return P0Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "P0Poly":
        return P0Poly(-c for c in self._coeffs)

    def __sub__(self, other) -> "P0Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "P0Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "P0Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return P0Poly()
        out = [CoeffExpr(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if not a:
                continue
            for j, b in enumerate(other._coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return P0Poly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "P0Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = P0Poly((1,))
        for _ in range(exponent):
            result = result * self
        return result

    def compose_affine(self, alpha: CoeffExpr | ScalarLike, sign: int) -> "P0Poly":
        """Evaluate at an affine argument: returns p(alpha + sign*P0).

        sign must be +1 or -1; the expansion is binomial and exact.
        """
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not isinstance(alpha, CoeffExpr):
            alpha = CoeffExpr(alpha)
        n = len(self._coeffs)
        if n == 0:
            return P0Poly()
        alpha_pow = [ONE]
        for _ in range(n - 1):
            alpha_pow.append(alpha_pow[-1] * alpha)
        out = [CoeffExpr(0)] * n
        for k, c in enumerate(self._coeffs):
            if not c:
                continue
            for j in range(k + 1):
                piece = c * (math.comb(k, j) * (sign ** j)) * alpha_pow[k - j]
                out[j] = out[j] + piece
        return P0Poly(out)

    def subs_symbols(self, mapping: Mapping[str, CoeffExpr | ScalarLike]) -> "P0Poly":
        return P0Poly(c.subs(mapping) for c in self._coeffs)

    def eval_at(self, value: CoeffExpr | ScalarLike) -> CoeffExpr:
        """The value p(value) in the coefficient ring (Horner)."""
        if not isinstance(value, CoeffExpr):
            value = CoeffExpr(value)
        acc = CoeffExpr(0)
        for c in reversed(self._coeffs):
            acc = acc * value + c
        return acc

    # -- identity --------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for power, mono, coeff in self.monomial_terms():
            text = _term_text(coeff, mono, power)
            if parts:
                parts.append(" - " if coeff < 0 else " + ")
                parts.append(text.lstrip("-"))
            else:
                parts.append(text)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"P0Poly({self})"


# The generator itself, for building polynomials arithmetically.
P0 = P0Poly((0, 1))
