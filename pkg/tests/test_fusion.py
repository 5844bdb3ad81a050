"""Fusion and specialization.

The structure polynomials of fused algebras are pinned as explicit goldens
and independently recomputed with sympy: the bilinear construction fixes
phi_new in terms of the factor data (phi, g, Casimir) and the central
combination Lambda, and the sympy route re-expands that definition with its
own polynomial engine.
"""

from fractions import Fraction

import pytest
import sympy

from polyfuse.algebra import PolyAlgebra, builtin, recenter, solve_g
from polyfuse.coeffring import CoeffExpr, P0Poly
from polyfuse.fusion import (FusedAlgebra, FusionError, FusionKind,
                             SpecializationError, fuse, fused_order_check,
                             specialize)

from test_coeffring import poly_to_sympy

A = CoeffExpr.symbol("a")
B = CoeffExpr.symbol("b")
C = CoeffExpr.symbol("c")


def sympy_fusion(kind: FusionKind, left: PolyAlgebra, right: PolyAlgebra,
                 fused: FusedAlgebra):
    """Independent recomputation of phi_new with sympy."""
    x = sympy.Symbol("x")
    lam = sympy.Symbol(fused.lam)
    mu2 = sympy.Symbol(fused.mu2)

    def casimir_sym(alg: PolyAlgebra, name: str | None):
        if name is not None:
            return sympy.Symbol(name)
        value = alg.casimir_value
        assert value is not None
        rational = value.as_rational()
        assert rational is not None
        return sympy.Rational(rational.numerator, rational.denominator)

    c_l = casimir_sym(left, fused.casimir_l)
    c_m = casimir_sym(right, fused.casimir_m)
    phi_l = poly_to_sympy(left.phi, x)
    phi_m = poly_to_sympy(right.phi, x)
    g_l = poly_to_sympy(solve_g(left.phi), x)
    g_m = poly_to_sympy(solve_g(right.phi), x)
    if kind is FusionKind.J:
        result = mu2 * (
            (c_m - g_m.subs(x, lam - 1 - x)) * phi_l.subs(x, lam + x)
            - (c_l - g_l.subs(x, lam - 1 + x)) * phi_m.subs(x, lam - x))
    else:
        result = mu2 * (
            (c_l - g_l.subs(x, x + lam - 1)) * phi_m.subs(x, x - lam)
            + (c_m - g_m.subs(x, x - lam)) * phi_l.subs(x, x + lam))
    return sympy.expand(result)


def assert_matches_sympy(kind, left, right):
    fused = fuse(kind, left, right)
    x = sympy.Symbol("x")
    mine = poly_to_sympy(fused.phi, x)
    theirs = sympy_fusion(kind, left, right, fused)
    assert sympy.simplify(mine - theirs) == 0
    return fused


# -- goldens ------------------------------------------------------------------

def test_boson_pair_j_recovers_su2_shape():
    f = fuse(FusionKind.J, builtin("boson"), builtin("boson"))
    assert specialize(f, {f.mu2: 1}).phi == P0Poly((0, 2))
    assert f.casimir_l is None and f.casimir_m is None
    assert fused_order_check(f, 0, 0)


def test_boson_pair_k_recovers_su11_after_recentering():
    f = fuse(FusionKind.K, builtin("boson"), builtin("boson"))
    pinned = specialize(f, {f.mu2: 1})
    assert pinned.phi == P0Poly((-1, -2))
    assert recenter(pinned, Fraction(1, 2)).phi == builtin("su11").phi


def test_su2_boson_golden():
    f = fuse(FusionKind.J, builtin("su2"), builtin("boson"))
    lam, mu2 = CoeffExpr.symbol(f.lam), CoeffExpr.symbol(f.mu2)
    c_l = CoeffExpr.symbol(f.casimir_l)
    bracket = P0Poly((-(c_l + lam * lam + lam), 2 * lam - 1, 3))
    assert f.phi == -(bracket * mu2)
    assert f.casimir_m is None  # boson Casimir pinned to 1 and substituted
    assert f.algebra.order == 2


def test_su2_su11_golden_and_ledger():
    f = fuse(FusionKind.J, builtin("su2"), builtin("su11"))
    lam, mu2 = CoeffExpr.symbol(f.lam), CoeffExpr.symbol(f.mu2)
    c_j, c_k = CoeffExpr.symbol(f.casimir_l), CoeffExpr.symbol(f.casimir_m)
    assert f.phi == P0Poly((2 * (c_j + c_k) * lam,
                            2 * (c_k - c_j) - 4 * lam ** 2,
                            0, 4)) * mu2
    ledger = f.central_ledger()
    assert set(ledger) == {f.lam, f.mu2, f.casimir_l, f.casimir_m}
    assert "su2" in ledger[f.casimir_l]
    assert "su11" in ledger[f.casimir_m]


def test_su11_pair_golden():
    f = fuse(FusionKind.J, builtin("su11"), builtin("su11"))
    lam, mu2 = CoeffExpr.symbol(f.lam), CoeffExpr.symbol(f.mu2)
    c_l, c_m = CoeffExpr.symbol(f.casimir_l), CoeffExpr.symbol(f.casimir_m)
    assert f.phi == -(P0Poly((-2 * (c_l - c_m) * lam,
                              2 * (c_l + c_m) - 4 * lam ** 2,
                              0, 4)) * mu2)


def test_all_section_fusions_match_sympy():
    pairs = [
        (FusionKind.J, "boson", "boson"),
        (FusionKind.K, "boson", "boson"),
        (FusionKind.J, "su2", "boson"),
        (FusionKind.J, "quadratic", "boson"),
        (FusionKind.J, "su2", "su11"),
        (FusionKind.J, "su11", "su11"),
        (FusionKind.K, "su2", "su2"),
        (FusionKind.K, "su11", "boson"),
    ]
    for kind, left, right in pairs:
        assert_matches_sympy(kind, builtin(left), builtin(right))


def test_quadratic_boson_golden():
    f = fuse(FusionKind.J, builtin("quadratic"), builtin("boson"))
    lam, mu2 = CoeffExpr.symbol(f.lam), CoeffExpr.symbol(f.mu2)
    c_l = CoeffExpr.symbol(f.casimir_l)
    const_block = (c_l + (2 * A / 3) * lam ** 3 + ((A + B) / 2) * lam ** 2
                   - ((A - 3 * B) / 6) * lam + C)
    bracket = P0Poly((-const_block,
                      -((A - B) * lam - (A - 3 * B + 12 * C) / 6),
                      (4 * A * lam - A + 3 * B) / 2,
                      4 * A / 3))
    assert f.phi == -(bracket * mu2)
    assert f.algebra.order == 3


# -- symbol hygiene -----------------------------------------------------------

def test_self_fusion_distinct_casimirs():
    f = fuse(FusionKind.J, builtin("su2"), builtin("su2"))
    assert f.casimir_l != f.casimir_m
    assert {f.lam, f.mu2, f.casimir_l, f.casimir_m} <= f.algebra.centrals


def test_colliding_structure_symbols_are_renamed():
    f = fuse(FusionKind.J, builtin("quadratic"), builtin("quadratic"))
    renames = dict(f.renames_m)
    assert set(renames) == {"a", "b", "c"}
    assert renames["a"] != "a" and renames["a"] in f.algebra.centrals
    # left factor's symbols survive unrenamed
    assert {"a", "b", "c"} <= f.algebra.centrals


def test_nested_fusion_gets_fresh_centrals():
    inner = fuse(FusionKind.J, builtin("su2"), builtin("boson"))
    outer = fuse(FusionKind.J, inner.algebra, builtin("boson"))
    assert outer.lam != inner.lam
    assert outer.mu2 != inner.mu2
    # the inner algebra's centrals survive as symbols of the outer one
    assert inner.lam in outer.algebra.centrals
    assert outer.algebra.order == 3


def test_fused_names_default_and_custom():
    f = fuse(FusionKind.J, builtin("su2"), builtin("boson"), name="mix")
    assert f.algebra.name == "mix"
    g = fuse(FusionKind.K, builtin("su2"), builtin("boson"))
    assert g.algebra.name == "fuseK(su2,boson)"


def test_zero_phi_factor():
    silent = PolyAlgebra("silent", P0Poly(()))
    f = fuse(FusionKind.J, silent, builtin("boson"))
    c_l, mu2 = CoeffExpr.symbol(f.casimir_l), CoeffExpr.symbol(f.mu2)
    assert f.phi == P0Poly.constant(c_l * mu2)


# -- order --------------------------------------------------------------------

@pytest.mark.parametrize("l_name,m_name,l_deg,m_deg", [
    ("boson", "boson", 0, 0),
    ("su2", "boson", 1, 0),
    ("quadratic", "boson", 2, 0),
    ("su2", "su11", 1, 1),
    ("higgs", "su2", 3, 1),
    ("higgs", "quadratic", 3, 2),
])
def test_order_additivity(l_name, m_name, l_deg, m_deg):
    for kind in (FusionKind.J, FusionKind.K):
        fused = fuse(kind, builtin(l_name), builtin(m_name))
        assert fused_order_check(fused, l_deg, m_deg)
        assert fused.algebra.order == l_deg + m_deg + 1


# -- specialize ---------------------------------------------------------------

def test_specialize_pins_values():
    f = fuse(FusionKind.J, builtin("su2"), builtin("boson"))
    pinned = specialize(f, {f.mu2: 1, f.casimir_l: Fraction(3, 4),
                            f.lam: CoeffExpr.symbol("w")})
    w = CoeffExpr.symbol("w")
    assert pinned.phi == P0Poly((w * w + w + Fraction(3, 4),
                                 1 - 2 * w, -3))
    assert "w" in pinned.centrals


def test_specialize_empty_is_identity():
    alg = builtin("su2")
    assert specialize(alg, {}) is alg


def test_specialize_rejects_cycles():
    f = fuse(FusionKind.J, builtin("su2"), builtin("su11"))
    lam = CoeffExpr.symbol(f.lam)
    with pytest.raises(SpecializationError):
        specialize(f, {f.lam: lam + 1})
    with pytest.raises(SpecializationError):
        specialize(f, {f.casimir_l: CoeffExpr.symbol(f.casimir_m),
                       f.casimir_m: CoeffExpr.symbol(f.casimir_l)})


def test_specialize_touches_casimir_value():
    alg = PolyAlgebra("param", P0Poly((A,)),
                      casimir_value=CoeffExpr.symbol("a"))
    pinned = specialize(alg, {"a": 5})
    assert pinned.phi == P0Poly((5,))
    assert pinned.casimir_value == CoeffExpr(5)


def test_higgs_specialization_routes():
    h = CoeffExpr.symbol("h")
    f = fuse(FusionKind.J, builtin("su2"), builtin("su11"))
    lam, c_l = CoeffExpr.symbol(f.lam), CoeffExpr.symbol(f.casimir_l)
    pinned = specialize(f, {f.casimir_m: -c_l, f.mu2: h})
    assert pinned.phi == P0Poly((0, -4 * h * (c_l + lam ** 2), 0, 4 * h))

    habs = CoeffExpr.symbol("habs")
    f14 = fuse(FusionKind.J, builtin("su11"), builtin("su11"))
    lam, c_l = CoeffExpr.symbol(f14.lam), CoeffExpr.symbol(f14.casimir_l)
    pinned14 = specialize(f14, {f14.casimir_m: c_l, f14.mu2: habs})
    assert pinned14.phi == \
        P0Poly((0, -habs * (4 * c_l - 4 * lam ** 2), 0, -4 * habs))


def test_fusion_kind_from_string():
    assert FusionKind("J") is FusionKind.J
    assert FusionKind("K") is FusionKind.K
    with pytest.raises(ValueError):
        FusionKind("X")


def test_fusion_error_type_exists():
    assert issubclass(FusionError, ValueError)
    assert issubclass(SpecializationError, ValueError)
