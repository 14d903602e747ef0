"""Spec language: parsing, validation, pretty-printing, building."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pricebound import (
    DistributionSpec,
    EqualRevenue,
    FamilyNode,
    MixNode,
    Mixture,
    PointMass,
    SpecSyntaxError,
    SpecValueError,
    Uniform,
    build,
    parse_spec,
)


def test_parse_simple_family():
    spec = parse_spec("pointmass(2)")
    assert spec.ast == FamilyNode("pointmass", (("v", 2.0),))
    assert isinstance(spec.build(), PointMass)


def test_parse_keyword_and_positional_mix_freely():
    a = parse_spec("uniform(0, 1)").ast
    b = parse_spec("uniform(a=0, b=1)").ast
    c = parse_spec("uniform(0, b=1)").ast
    d = parse_spec("uniform(b=1, a=0)").ast
    assert a == b == c == d == FamilyNode("uniform", (("a", 0.0), ("b", 1.0)))


def test_parse_is_whitespace_insensitive():
    tight = parse_spec("mix(0.5*uniform(0,1),0.5*pareto(alpha=2,scale=1))")
    loose = parse_spec("  mix( 0.5 * uniform( 0 , 1 ) ,\n 0.5*pareto( alpha = 2, scale = 1 ) ) ")
    assert tight.ast == loose.ast


def test_parse_scientific_notation_and_signs():
    spec = parse_spec("lognormal(mu=-1.5e-1, sigma=+2E0)")
    assert spec.ast == FamilyNode("lognormal", (("mu", -0.15), ("sigma", 2.0)))


def test_nested_mix_ast():
    spec = parse_spec("mix(1*pointmass(1), 3*mix(1*pointmass(2), 1*pointmass(3)))")
    assert spec.ast == MixNode(
        (
            (1.0, FamilyNode("pointmass", (("v", 1.0),))),
            (
                3.0,
                MixNode(
                    (
                        (1.0, FamilyNode("pointmass", (("v", 2.0),))),
                        (1.0, FamilyNode("pointmass", (("v", 3.0),))),
                    )
                ),
            ),
        )
    )


def test_mixture_weights_normalize_on_build():
    d = build("mix(2*pointmass(1), 6*pointmass(2))")
    assert isinstance(d, Mixture)
    assert abs(sum(d.weights) - 1.0) <= 1e-9
    assert d.weights == pytest.approx([0.25, 0.75], rel=1e-12)


def test_build_accepts_text_or_spec():
    assert isinstance(build("equalrev(3)"), EqualRevenue)
    assert isinstance(build(parse_spec("equalrev(3)")), EqualRevenue)


@pytest.mark.parametrize(
    "text,offset",
    [
        ("gamma(1)", 0),  # unknown family
        ("mix(0.5*uniform(0,1), gamma(2))", 22),  # weight missing on second term
        ("uniform(0, )", 11),  # dangling comma
        ("pointmass(1) extra", 13),  # trailing input
        ("pointmass(v=1, v=2)", 15),  # duplicate parameter
        ("uniform(a=0, 1)", 13),  # positional after keyword
        ("pointmass()", 0),  # missing parameter
        ("uniform(1, 2, 3)", 14),  # too many arguments
        ("mix(0*pointmass(1))", 4),  # nonpositive weight
        ("foo@bar", 3),  # stray character
        ('empirical("unclosed)', 10),  # unterminated string
        ("", 0),  # empty spec
        ("   ", 0),
    ],
)
def test_error_offsets(text, offset):
    with pytest.raises((SpecSyntaxError, SpecValueError)) as err:
        parse_spec(text)
    assert err.value.offset == offset
    assert f"(at offset {offset})" in str(err.value)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("pointmass(-1)", "positive"),
        ("pointmass(0)", "positive"),
        ("uniform(2, 1)", "exceed"),
        ("uniform(-0.5, 1)", "nonnegative"),
        ("lognormal(0, -1)", "positive"),
        ("lognormal(1e999, 1)", "finite"),
        ("pareto(0, 1)", "positive"),
        ("exponential(0)", "positive"),
        ("equalrev(-2)", "positive"),
        ('empirical("")', "nonempty"),
        ('empirical(path=3)', "expects a string"),
        ('pointmass("a")', "expects a number"),
        ("mix(-1*pointmass(1))", "weight must be positive"),
    ],
)
def test_domain_validation_messages(text, fragment):
    with pytest.raises(SpecValueError) as err:
        parse_spec(text)
    assert fragment in str(err.value)


@pytest.mark.parametrize(
    "text",
    ["uniform 0 1", "mix(0.5 pointmass(1))", "pointmass(1", "pointmass(=1)", "(1)"],
)
def test_syntax_errors(text):
    with pytest.raises(SpecSyntaxError):
        parse_spec(text)


def test_empirical_build_with_base_dir(tmp_path):
    (tmp_path / "vals.txt").write_text("1.0\n2.0\n")
    d = build('empirical(path="vals.txt")', base_dir=str(tmp_path))
    assert d.atoms() == [(1.0, 0.5), (2.0, 0.5)]
    absolute = tmp_path / "vals.txt"
    d2 = build(f'empirical(path="{absolute}")', base_dir="/nonexistent")
    assert d2.atoms() == d.atoms()


# --- property-based round trip -------------------------------------------

_POS = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)
_PATH = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789._-/", min_size=1, max_size=20)


def _leaf_nodes():
    return st.one_of(
        st.builds(lambda v: FamilyNode("pointmass", (("v", v),)), _POS),
        st.builds(
            lambda a, w: FamilyNode("uniform", (("a", a), ("b", a + w))),
            st.floats(min_value=0.0, max_value=1e6, allow_nan=False),
            _POS,
        ),
        st.builds(lambda r: FamilyNode("exponential", (("rate", r),)), _POS),
        st.builds(
            lambda al, s: FamilyNode("pareto", (("alpha", al), ("scale", s))), _POS, _POS
        ),
        st.builds(
            lambda m, s: FamilyNode("lognormal", (("mu", m), ("sigma", s))),
            st.floats(min_value=-50, max_value=50, allow_nan=False),
            _POS,
        ),
        st.builds(lambda c: FamilyNode("equalrev", (("c", c),)), _POS),
        st.builds(lambda p: FamilyNode("empirical", (("path", p),)), _PATH),
    )


_NODES = st.recursive(
    _leaf_nodes(),
    lambda kids: st.builds(
        lambda terms: MixNode(tuple(terms)),
        st.lists(st.tuples(_POS, kids), min_size=1, max_size=4),
    ),
    max_leaves=10,
)


@settings(max_examples=300, deadline=None)
@given(_NODES)
def test_pretty_parse_round_trip(node):
    spec = DistributionSpec(node)
    text = spec.pretty()
    assert parse_spec(text).ast == spec.ast
    # pretty is a fixed point once parsed
    assert parse_spec(text).pretty() == text


@settings(max_examples=100, deadline=None)
@given(_NODES)
def test_parse_never_crashes_on_valid_pretty(node):
    # uniform with a + w rounding to a would be rejected; everything else builds
    text = DistributionSpec(node).pretty()
    try:
        parse_spec(text)
    except SpecValueError:
        assert "b must exceed a" in str(SpecValueError)


def test_round_trip_examples():
    for text in [
        "pointmass(v=2.0)",
        "uniform(a=0.0, b=1.0)",
        'mix(0.5*equalrev(c=1.0), 0.5*empirical(path="x.txt"))',
    ]:
        spec = parse_spec(text)
        assert spec.pretty() == text


def test_weights_survive_pretty_exactly():
    spec = parse_spec("mix(0.1*pointmass(1), 0.30000000000000004*pointmass(2))")
    again = parse_spec(spec.pretty())
    assert [w for w, _ in again.ast.terms] == [0.1, 0.30000000000000004]
