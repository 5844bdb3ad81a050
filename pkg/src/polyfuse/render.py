"""Rendering of polynomials, envelope elements, and residual reports.

Three output modes share one canonical term order (descending P0 power,
then lexicographic symbol monomials with the constant last):

* text: the same surface syntax the parser accepts;
* json: the pinned schema
  {"terms": [{"p0_power": int, "coeff": [{"symbols": {name: exp},
  "rational": "p/q"}]}]} with terms in canonical order;
* latex: fragments suitable for display, with mu2 and Lambda typeset as
  greek and Casimir symbols in calligraphic style.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffring import CoeffExpr, P0Poly, Monomial
from .algebra import EnvelopeElement

LATEX_NAMES = {
    "mu2": r"\mu^{2}",
    "Lambda": r"\Lambda",
    "C_L": r"\mathcal{C}_{L}",
    "C_M": r"\mathcal{C}_{M}",
}


# -- text ---------------------------------------------------------------

def poly_to_text(poly: P0Poly) -> str:
    return str(poly)


def coeff_to_text(expr: CoeffExpr) -> str:
    return str(expr)


def envelope_to_text(element: EnvelopeElement) -> str:
    return str(element)


# -- json ---------------------------------------------------------------

def _monomial_json(mono: Monomial, rational: Fraction) -> dict:
    return {"symbols": {name: exp for name, exp in mono},
            "rational": str(rational)}


def coeff_to_json(expr: CoeffExpr) -> list[dict]:
    return [_monomial_json(mono, rational) for mono, rational in expr.terms()]


def poly_to_json(poly: P0Poly) -> dict:
    terms = []
    for power in range(len(poly.coeffs) - 1, -1, -1):
        coeff = poly.coeff(power)
        if coeff:
            terms.append({"p0_power": power, "coeff": coeff_to_json(coeff)})
    return {"terms": terms}


def envelope_to_json(element: EnvelopeElement) -> dict:
    monomials = []
    for (a, b) in sorted(element.monomials(), reverse=True):
        monomials.append({"raise": a, "lower": b,
                          "poly": poly_to_json(element.monomials()[(a, b)])})
    return {"monomials": monomials}


# -- latex --------------------------------------------------------------

def _latex_symbol(name: str) -> str:
    if name in LATEX_NAMES:
        return LATEX_NAMES[name]
    if "_" in name:
        head, _, tail = name.partition("_")
        return f"{head}_{{{tail}}}"
    return name


def _latex_term(rational: Fraction, mono: Monomial, p0_power: int) -> str:
    factors = []
    for name, exp in mono:
        symbol = _latex_symbol(name)
        factors.append(symbol if exp == 1 else f"{symbol}^{{{exp}}}")
    if p0_power == 1:
        factors.append("P_0")
    elif p0_power > 1:
        factors.append(f"P_0^{{{p0_power}}}")
    magnitude = abs(rational)
    if magnitude.denominator != 1:
        prefix = rf"\frac{{{magnitude.numerator}}}{{{magnitude.denominator}}}"
    elif magnitude != 1 or not factors:
        prefix = str(magnitude.numerator)
    else:
        prefix = ""
    body = " ".join(([prefix] if prefix else []) + factors)
    return body


def poly_to_latex(poly: P0Poly) -> str:
    if not poly:
        return "0"
    parts: list[str] = []
    for power, mono, rational in poly.monomial_terms():
        term = _latex_term(rational, mono, power)
        if not parts:
            parts.append(f"-{term}" if rational < 0 else term)
        else:
            parts.append(f"- {term}" if rational < 0 else f"+ {term}")
    return " ".join(parts)


def coeff_to_latex(expr: CoeffExpr) -> str:
    return poly_to_latex(P0Poly.constant(expr))


def envelope_to_latex(element: EnvelopeElement) -> str:
    if not element:
        return "0"
    parts = []
    for (a, b) in sorted(element.monomials(), reverse=True):
        poly = element.monomials()[(a, b)]
        word = []
        if a:
            word.append("P_+" if a == 1 else f"P_+^{{{a}}}")
        word.append(rf"\left({poly_to_latex(poly)}\right)" if (a or b)
                    else poly_to_latex(poly))
        if b:
            word.append("P_-" if b == 1 else f"P_-^{{{b}}}")
        parts.append(" ".join(word))
    return " + ".join(parts)


def render_poly(poly: P0Poly, mode: str):
    if mode == "text":
        return poly_to_text(poly)
    if mode == "json":
        return poly_to_json(poly)
    if mode == "latex":
        return poly_to_latex(poly)
    raise ValueError(f"unknown output mode {mode!r}")


def render_envelope(element: EnvelopeElement, mode: str):
    if mode == "text":
        return envelope_to_text(element)
    if mode == "json":
        return envelope_to_json(element)
    if mode == "latex":
        return envelope_to_latex(element)
    raise ValueError(f"unknown output mode {mode!r}")
