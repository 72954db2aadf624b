"""Charge evaluation and exact integration."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chargemdp.charges import (AmbiguousBase, CValue, DyadicLimit, Frequency,
                               Geometric, IllFormedRestrict, Mix, PointMass,
                               Restrict, dyadic_value_sequence, integrate,
                               is_diffuse, sandwich_check, value)
from chargemdp.periodic_sets import (arithmetic, complement, density,
                                     difference, empty, evens, intersect,
                                     make, multiples, naturals, odds, shift,
                                     union)
from chargemdp.streams import add, indicator, scale, stream

from conftest import periodic_sets, rational_streams

EXACT_CHARGES = st.sampled_from([
    Frequency(),
    Geometric(Fraction(1, 2)),
    Geometric(Fraction(2, 3)),
    PointMass(3),
    Mix(((Fraction(1, 3), Frequency()), (Fraction(2, 3), Geometric(Fraction(1, 4))))),
])


def exact(mu, s) -> Fraction:
    return value(mu, s).exact_value


# ---- CValue --------------------------------------------------------------

def test_cvalue_exact():
    v = CValue.exact(Fraction(3, 4))
    assert v.is_exact and v.exact_value == Fraction(3, 4)
    assert v.low == v.high == Fraction(3, 4)
    assert str(v) == "3/4"


def test_cvalue_ambiguous():
    v = CValue(frozenset({Fraction(0), Fraction(1, 2)}), cycle=(Fraction(0), Fraction(1, 2)))
    assert not v.is_exact
    assert v.low == 0 and v.high == Fraction(1, 2)
    assert str(v) == "{0, 1/2}"
    with pytest.raises(ValueError):
        v.exact_value
    with pytest.raises(ValueError):
        CValue(frozenset())


def test_cvalue_cycle_not_part_of_identity():
    a = CValue(frozenset({Fraction(0), Fraction(1)}), cycle=(Fraction(0), Fraction(1)))
    b = CValue(frozenset({Fraction(0), Fraction(1)}), cycle=(Fraction(1), Fraction(0)))
    assert a == b


# ---- constructor validation ----------------------------------------------

def test_geometric_validation():
    with pytest.raises(ValueError):
        Geometric(Fraction(1))
    with pytest.raises(ValueError):
        Geometric(Fraction(0))


def test_pointmass_validation():
    with pytest.raises(ValueError):
        PointMass(0)


def test_mix_validation():
    with pytest.raises(ValueError):
        Mix(())
    with pytest.raises(ValueError):
        Mix(((Fraction(1, 2), Frequency()),))
    with pytest.raises(ValueError):
        Mix(((Fraction(3, 2), Frequency()), (Fraction(-1, 2), Frequency())))


# ---- frequency -----------------------------------------------------------

@given(periodic_sets())
def test_frequency_is_density(s):
    assert exact(Frequency(), s) == density(s)


@given(periodic_sets(), st.integers(-6, 6))
def test_frequency_translation_invariant(s, k):
    assert exact(Frequency(), shift(s, k)) == exact(Frequency(), s)


# ---- geometric -----------------------------------------------------------

def test_geometric_examples():
    half = Geometric(Fraction(1, 2))
    assert exact(half, naturals()) == 1
    # stage weights are (1-b) * b**(t-1)
    assert exact(half, make([1], 1, set())) == Fraction(1, 2)
    assert exact(half, make([0, 0, 1], 1, set())) == Fraction(1, 8)
    # odds: (1-b) * 1/(1-b^2) = 1/(1+b)
    assert exact(half, odds()) == Fraction(2, 3)
    assert exact(half, evens()) == Fraction(1, 3)


@given(st.fractions(min_value="1/10", max_value="9/10", max_denominator=10),
       st.integers(1, 12))
def test_geometric_singleton_weight(beta, t):
    mu = Geometric(beta)
    singleton = make([0] * (t - 1) + [1], 1, set())
    assert exact(mu, singleton) == (1 - beta) * beta ** (t - 1)


# ---- point mass ----------------------------------------------------------

@given(periodic_sets(), st.integers(1, 30))
def test_pointmass_membership(s, t):
    from chargemdp.periodic_sets import member
    assert exact(PointMass(t), s) == (1 if member(s, t) else 0)


# ---- shared charge axioms ------------------------------------------------

@given(EXACT_CHARGES, periodic_sets(), periodic_sets())
def test_charge_modular(mu, s, t):
    assert (exact(mu, union(s, t)) + exact(mu, intersect(s, t))
            == exact(mu, s) + exact(mu, t))


@given(EXACT_CHARGES, periodic_sets())
def test_charge_normalized(mu, s):
    assert exact(mu, naturals()) == 1
    assert exact(mu, empty()) == 0
    assert exact(mu, s) + exact(mu, complement(s)) == 1
    assert 0 <= exact(mu, s) <= 1


@given(EXACT_CHARGES, periodic_sets(), periodic_sets())
def test_charge_monotone(mu, s, t):
    assert exact(mu, intersect(s, t)) <= exact(mu, s)
    assert exact(mu, difference(s, t)) == exact(mu, s) - exact(mu, intersect(s, t))


# ---- diffuseness ---------------------------------------------------------

def test_is_diffuse():
    assert is_diffuse(Frequency())
    assert is_diffuse(DyadicLimit())
    assert not is_diffuse(Geometric(Fraction(1, 2)))
    assert not is_diffuse(PointMass(4))
    assert is_diffuse(Restrict(Frequency(), odds()))
    assert is_diffuse(Mix(((Fraction(1, 2), Frequency()),
                           (Fraction(1, 2), DyadicLimit()))))
    assert not is_diffuse(Mix(((Fraction(1, 2), Frequency()),
                               (Fraction(1, 2), PointMass(1)))))


@given(st.sampled_from([Frequency(), DyadicLimit()]), st.integers(1, 100))
def test_diffuse_charges_kill_singletons(mu, t):
    singleton = make([0] * (t - 1) + [1], 1, set())
    assert exact(mu, singleton) == 0


# ---- restriction ---------------------------------------------------------

def test_restrict_examples():
    odd_freq = Restrict(Frequency(), odds())
    assert exact(odd_freq, odds()) == 1
    assert exact(odd_freq, evens()) == 0
    assert exact(odd_freq, arithmetic(1, 4)) == Fraction(1, 2)
    assert exact(odd_freq, multiples(3)) == Fraction(1, 3)


def test_restrict_rejects_null_window():
    with pytest.raises(IllFormedRestrict):
        value(Restrict(Frequency(), empty()), odds())
    singleton = make([1], 1, set())  # density zero
    with pytest.raises(IllFormedRestrict):
        value(Restrict(Frequency(), singleton), odds())


def test_restrict_of_dyadic_base():
    mu = Restrict(DyadicLimit(), evens())
    assert exact(mu, multiples(4)) == 1
    assert exact(mu, odds()) == 0


@given(periodic_sets(), periodic_sets())
def test_restrict_is_conditional_density(s, w):
    if density(w) == 0:
        return
    assert exact(Restrict(Frequency(), w), s) == \
        density(intersect(s, w)) / density(w)


# ---- dyadic limit --------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 11))
def test_dyadic_concentrates_on_powers_of_two(n):
    assert exact(DyadicLimit(), multiples(2 ** n)) == 1


def test_dyadic_kills_odds():
    assert exact(DyadicLimit(), odds()) == 0
    assert integrate(DyadicLimit(), indicator(odds())).exact_value == 0


def test_dyadic_value_sequence_example():
    vals, cyc = dyadic_value_sequence(multiples(4))
    assert vals == [Fraction(1, 2), Fraction(1)]
    assert cyc == (Fraction(1),)


@given(periodic_sets())
def test_dyadic_value_sequence_matches_contractions(s):
    from chargemdp.periodic_sets import contract
    vals, cyc = dyadic_value_sequence(s)
    c = s
    for v in vals:
        c = contract(c, 2)
        assert density(c) == v
    assert set(cyc) <= set(vals)


@given(periodic_sets())
def test_dyadic_candidates_come_from_the_sequence(s):
    vals, cyc = dyadic_value_sequence(s)
    assert value(DyadicLimit(), s).candidates == frozenset(cyc)


def test_sandwich_check():
    assert sandwich_check(Frequency(), multiples(4))
    for n in range(1, 11):
        assert not sandwich_check(DyadicLimit(), multiples(2 ** n))
    assert sandwich_check(DyadicLimit(), odds()) is False  # density 1/2, value 0


@given(periodic_sets())
def test_sandwich_check_frequency_always(s):
    assert sandwich_check(Frequency(), s)


# ---- mixtures ------------------------------------------------------------

@given(periodic_sets())
def test_mix_is_convex_combination(s):
    parts = ((Fraction(1, 4), Frequency()),
             (Fraction(3, 4), Geometric(Fraction(1, 3))))
    mu = Mix(parts)
    assert exact(mu, s) == sum(w * exact(c, s) for w, c in parts)


def test_mix_with_dyadic_component():
    mu = Mix(((Fraction(1, 2), Frequency()), (Fraction(1, 2), DyadicLimit())))
    assert exact(mu, multiples(2)) == Fraction(3, 4)
    assert exact(mu, odds()) == Fraction(1, 4)


# ---- integration ---------------------------------------------------------

@given(EXACT_CHARGES, rational_streams(), rational_streams())
def test_integrate_linear(mu, f, g):
    assert (integrate(mu, add(f, g)).exact_value
            == integrate(mu, f).exact_value + integrate(mu, g).exact_value)


@given(EXACT_CHARGES, rational_streams(),
       st.fractions(min_value=-2, max_value=2, max_denominator=3))
def test_integrate_homogeneous(mu, f, a):
    assert integrate(mu, scale(f, a)).exact_value == a * integrate(mu, f).exact_value


@given(EXACT_CHARGES, rational_streams(), rational_streams())
def test_integrate_monotone(mu, f, g):
    from chargemdp.streams import pointwise_leq
    if pointwise_leq(f, g):
        assert integrate(mu, f).exact_value <= integrate(mu, g).exact_value


@given(EXACT_CHARGES, periodic_sets())
def test_integrate_indicator_is_value(mu, s):
    assert integrate(mu, indicator(s)) == value(mu, s)


@given(rational_streams())
def test_integrate_frequency_is_cycle_mean(f):
    assert integrate(Frequency(), f).exact_value == f.cycle_mean()


def test_integrate_geometric_series():
    # stream 1,0,1,0,... under factor b: (1-b)/(1-b^2) = 1/(1+b)
    f = stream([], [1, 0])
    got = integrate(Geometric(Fraction(1, 2)), f).exact_value
    assert got == Fraction(2, 3)


def test_integrate_ignores_zero_level():
    f = stream([0, 0, 5], [0])
    got = integrate(Geometric(Fraction(1, 2)), f).exact_value
    assert got == 5 * Fraction(1, 8)
