"""Parser, AST equality, error positions, and pretty-printer stability."""

from fractions import Fraction

import pytest

from polyfuse.coeffring import CoeffExpr, P0Poly
from polyfuse.dsl import (AlgebraDef, LetFuse, LetSpecialize, ParseError,
                          Query, Verify, parse, pretty, roundtrip_stable,
                          tokenize)


def first(source: str):
    return parse(source).statements[0]


# -- tokenizer ----------------------------------------------------------------

def test_tokenize_positions():
    tokens = tokenize("phi su2;\n  g su11;")
    assert (tokens[0].kind, tokens[0].text, tokens[0].line, tokens[0].col) \
        == ("ident", "phi", 1, 1)
    g_token = [t for t in tokens if t.text == "g"][0]
    assert (g_token.line, g_token.col) == (2, 3)
    assert tokens[-1].kind == "eof"


def test_tokenize_comments_and_bad_chars():
    tokens = tokenize("# a comment\nphi su2;")
    assert tokens[0].text == "phi" and tokens[0].line == 2
    with pytest.raises(ParseError) as err:
        tokenize("phi @;")
    assert err.value.line == 1 and err.value.col == 5


# -- statements ---------------------------------------------------------------

def test_algebra_def_with_params():
    stmt = first("algebra w(r, s) { phi = r*P0^3 + s*P0 - 1/2; }")
    assert isinstance(stmt, AlgebraDef)
    assert stmt.name == "w" and stmt.params == ("r", "s")
    r, s = CoeffExpr.symbol("r"), CoeffExpr.symbol("s")
    assert stmt.phi == P0Poly((Fraction(-1, 2), s, 0, r))


def test_algebra_def_no_params():
    stmt = first("algebra lin { phi = 2*P0 + 1; }")
    assert stmt.params == ()
    assert stmt.phi == P0Poly((1, 2))


def test_poly_forms():
    assert first("algebra t { phi = P0; }").phi == P0Poly((0, 1))
    assert first("algebra t { phi = -P0^2; }").phi == P0Poly((0, 0, -1))
    assert first("algebra t { phi = 3; }").phi == P0Poly((3,))
    assert first("algebra t { phi = 1/2*P0*P0; }").phi == \
        P0Poly((0, 0, Fraction(1, 2)))
    assert first("algebra t(u) { phi = u*u*P0; }").phi == \
        P0Poly((0, CoeffExpr.symbol("u") ** 2))


def test_let_fuse():
    stmt = parse("let q = fuse(J, su2, boson);").statements[0]
    assert stmt == LetFuse("q", "J", "su2", "boson")


def test_let_specialize_values():
    stmt = first("let h = specialize(su2, a = -1/2, b = w);")
    assert isinstance(stmt, LetSpecialize)
    assert stmt.assignments == (("a", CoeffExpr(Fraction(-1, 2))),
                                ("b", CoeffExpr.symbol("w")))


def test_queries_and_targets():
    program = parse("phi su2; g su11; casimir boson; order higgs; "
                    "centrals quadratic;")
    whats = [s.what for s in program.statements]
    assert whats == ["phi", "g", "casimir", "order", "centrals"]
    assert all(isinstance(s, Query) for s in program.statements)


def test_verify_forms():
    named = first("verify su2 with (j = 5/2);")
    assert named == Verify("su2", (("j", Fraction(5, 2)),))
    bare = first("verify su2;")
    assert bare == Verify("su2", ())
    inline = first("verify fuse(K, boson, boson) with (cutoff = 8, mu = -1);")
    assert inline == Verify(("K", "boson", "boson"),
                            (("cutoff", Fraction(8)), ("mu", Fraction(-1))))


def test_defined_names_flow_through_statements():
    program = parse("""
        algebra lin { phi = 2*P0; }
        let q = fuse(J, lin, boson);
        let p = specialize(q, mu2 = 1);
        phi p;
    """)
    assert len(program.statements) == 4


# -- errors -------------------------------------------------------------------

@pytest.mark.parametrize("source,fragment,line,col", [
    ("phi nope;", "unknown identifier 'nope'", 1, 5),
    ("algebra su2 { phi = P0; }", "duplicate definition", 1, 9),
    ("algebra a { phi = P0^^2; }", "unexpected token '^'", 1, 22),
    ("algebra a { phi = b*P0; }", "unknown symbol 'b'", 1, 19),
    ("let x = specialize(su2, a = P0);", "P0 cannot appear", 1, 29),
    ("let x = fuse(Q, su2, boson);", "unexpected identifier 'Q'", 1, 14),
    ("phi su2", "end of input", 1, 8),
    ("verify su2 with (j = );", "unexpected token ')'", 1, 22),
    ("verify su2 with (j = 1/0);", "zero denominator", 1, 24),
    ("frobnicate su2;", "unexpected identifier", 1, 1),
    ("let q = fuse(J, su2, boson); let q = fuse(K, su2, boson);",
     "duplicate definition of 'q'", 1, 34),
])
def test_parse_errors_carry_positions(source, fragment, line, col):
    with pytest.raises(ParseError) as err:
        parse(source)
    assert fragment in str(err.value)
    assert err.value.line == line
    assert err.value.col == col


def test_error_lists_expected_tokens():
    with pytest.raises(ParseError) as err:
        parse("let x = frob(su2);")
    assert "'fuse'" in err.value.expected
    assert "'specialize'" in err.value.expected


# -- pretty-printing ----------------------------------------------------------

def test_pretty_canonical_forms():
    program = parse("algebra w(r) {phi=r*P0^2+1;}\nverify su2 with (j=2);")
    assert pretty(program) == (
        "algebra w(r) { phi = r*P0^2 + 1; }\n"
        "verify su2 with (j = 2);\n")


def test_pretty_is_fixed_point():
    source = """
        algebra w(r, s) { phi = r*P0^3 + s*P0 - 1/2; }
        let q = fuse(J, w, boson);
        let p = specialize(q, C_L = -1/2, mu2 = h);
        phi p;
        casimir w;
        verify fuse(J, su2, su11) with (j = 3/2, k = 1, cutoff = 12);
    """
    assert roundtrip_stable(source)
    printed = pretty(parse(source))
    assert pretty(parse(printed)) == printed


def test_position_not_part_of_equality():
    one = parse("phi su2;")
    two = parse("\n\n   phi su2;")
    assert one == two
