import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from impactshift.corpus import Byline, BylineEntry
from impactshift.credit import fractional_contributions
from impactshift.errors import EmptyBylineError


def byline(universities, pub_id="w"):
    return Byline(
        pub_id,
        tuple(BylineEntry(i, f"a{i}", u) for i, u in enumerate(universities, 1)),
    )


def test_alphabetical_even():
    assert fractional_contributions(byline("ABCD"), "alphabetical").weights == (0.25,) * 4


def test_positional_same_university():
    w = fractional_contributions(byline("AXYZA"), "positional").weights
    assert w == (0.40, 0.2 / 3, 0.2 / 3, 0.2 / 3, 0.40)


def test_positional_mixed():
    w = fractional_contributions(byline("ABCDEF"), "positional").weights
    assert w == (0.30, 0.15, 0.05, 0.05, 0.15, 0.30)


@pytest.mark.parametrize("policy", ["alphabetical", "positional"])
def test_sole_author(policy):
    assert fractional_contributions(byline("A"), policy).weights == (1.0,)


@pytest.mark.parametrize(
    "unis,expected",
    [
        ("AB", (0.5, 0.5)),
        ("AA", (0.5, 0.5)),
        ("ABA", (0.40, 0.20, 0.40)),
        ("ABC", (0.40, 0.20, 0.40)),
        ("ABCA", (0.40, 0.10, 0.10, 0.40)),
        ("ABCD", (0.30, 0.20, 0.20, 0.30)),
        ("ABCDE", (0.30, 0.15, 0.10, 0.15, 0.30)),
    ],
)
def test_short_positional(unis, expected):
    w = fractional_contributions(byline(unis), "positional").weights
    assert w == pytest.approx(expected, abs=1e-15)


def test_rule_one_takes_precedence():
    # first/last share a university even though inner authors are elsewhere
    w = fractional_contributions(byline("ABCDEA"), "positional").weights
    assert w[0] == w[-1] == 0.40


def test_empty():
    with pytest.raises(EmptyBylineError):
        fractional_contributions(Byline("w", ()), "positional")


def test_position_lookup():
    cv = fractional_contributions(byline("ABCDEF"), "positional")
    assert cv.at_position(1) == 0.30 and cv.at_position(2) == 0.15 and cv.at_position(6) == 0.30


universities = st.lists(st.sampled_from("ABCDE"), min_size=1, max_size=50)


@given(universities, st.sampled_from(["alphabetical", "positional"]))
def test_sum_to_one_and_positive(unis, policy):
    w = fractional_contributions(byline(unis), policy).weights
    assert len(w) == len(unis)
    assert abs(math.fsum(w) - 1) <= 1e-9
    assert all(x > 0 for x in w)


@given(universities)
def test_alphabetical_all_equal(unis):
    w = fractional_contributions(byline(unis), "alphabetical").weights
    assert len(set(w)) == 1


@given(universities)
def test_positional_reversal_symmetry(unis):
    w = fractional_contributions(byline(unis), "positional").weights
    r = fractional_contributions(byline(unis[::-1]), "positional").weights
    assert w == r[::-1]


def test_randomized_bylines_sum_to_one():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        n = int(rng.integers(1, 51))
        unis = [f"U{int(u)}" for u in rng.integers(0, 4, size=n)]
        for policy in ("alphabetical", "positional"):
            assert abs(math.fsum(fractional_contributions(byline(unis), policy).weights) - 1) <= 1e-9
