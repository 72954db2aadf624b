"""Text grammars: round trips, precedence, file formats, error positions."""

from fractions import Fraction

import pytest
from hypothesis import given

from chargemdp.charges import (DyadicLimit, Frequency, Geometric, Mix,
                               PointMass, Restrict)
from chargemdp.counterexamples import (alternating_strategy, even_or_odd_mdp,
                                       stay_strategy)
from chargemdp.mdp import validate
from chargemdp.parsing import (ParseError, parse_charge, parse_mdp,
                               parse_rational, parse_set, parse_strategy,
                               parse_stream, render_charge, render_set,
                               render_stream)
from chargemdp.periodic_sets import (arithmetic, complement, empty, evens,
                                     intersect, multiples, naturals, odds,
                                     shift, union)
from chargemdp.streams import stream

from conftest import periodic_sets, rational_streams

EO_MDP_TEXT = """
mdp  # three states, top/bottom choice at state 1
initial 1
state 1
  action T reward 1 goto 2
  action B reward 0 goto 3
state 2
  action c reward 0 goto 1
state 3
  action c reward 1 goto 1
"""


# ---- rationals -----------------------------------------------------------

def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == -2
    assert parse_rational("0") == 0
    with pytest.raises(ParseError):
        parse_rational("1/0")
    with pytest.raises(ParseError):
        parse_rational("3 4")


# ---- set expressions -----------------------------------------------------

def test_parse_set_atoms():
    assert parse_set("odds") == odds()
    assert parse_set("evens") == evens()
    assert parse_set("nat") == naturals()
    assert parse_set("empty") == empty()
    assert parse_set("multiples(6)") == multiples(6)
    assert parse_set("ap(3, 4)") == arithmetic(3, 4)
    assert parse_set("shift(odds, 1)") == evens()
    assert parse_set("shift(evens, -1)") == odds()
    assert parse_set("contract(multiples(6), 2)") == multiples(3)


def test_parse_set_precedence():
    # ! binds tighter than &, & tighter than |
    assert parse_set("odds | evens & multiples(4)") == \
        union(odds(), intersect(evens(), multiples(4)))
    assert parse_set("!odds & multiples(4)") == \
        intersect(complement(odds()), multiples(4))
    assert parse_set("!(odds & multiples(4))") == \
        complement(intersect(odds(), multiples(4)))


def test_parse_set_errors():
    with pytest.raises(ParseError) as err:
        parse_set("odds |")
    assert err.value.line == 1 and err.value.col == 7
    with pytest.raises(ParseError):
        parse_set("frobnicate(3)")
    with pytest.raises(ParseError):
        parse_set("multiples(0)")
    with pytest.raises(ParseError):
        parse_set("odds evens")
    with pytest.raises(ParseError):
        parse_set("ap(1 2)")


@given(periodic_sets())
def test_render_set_round_trip(s):
    assert parse_set(render_set(s)) == s


# ---- charge expressions --------------------------------------------------

def test_parse_charge_atoms():
    assert parse_charge("frequency") == Frequency()
    assert parse_charge("dyadiclimit") == DyadicLimit()
    assert parse_charge("geometric(1/2)") == Geometric(Fraction(1, 2))
    assert parse_charge("pointmass(7)") == PointMass(7)
    assert parse_charge("restrict(frequency, odds)") == \
        Restrict(Frequency(), odds())
    assert parse_charge("mix(1/2: frequency, 1/2: dyadiclimit)") == \
        Mix(((Fraction(1, 2), Frequency()), (Fraction(1, 2), DyadicLimit())))


def test_parse_charge_errors():
    with pytest.raises(ParseError):
        parse_charge("geometric(1)")
    with pytest.raises(ParseError):
        parse_charge("pointmass(0)")
    with pytest.raises(ParseError):
        parse_charge("mix(1/2: frequency)")  # weights must sum to 1
    with pytest.raises(ParseError):
        parse_charge("nothere")


def test_render_charge_round_trip():
    for mu in (Frequency(), DyadicLimit(), Geometric(Fraction(2, 5)),
               PointMass(3), Restrict(Frequency(), multiples(4)),
               Mix(((Fraction(1, 4), Geometric(Fraction(1, 2))),
                    (Fraction(3, 4), Restrict(DyadicLimit(), evens()))))):
        assert parse_charge(render_charge(mu)) == mu


# ---- stream literals -----------------------------------------------------

def test_parse_stream():
    assert parse_stream("stream([1, 1/2]; [0, -3/4])") == \
        stream([1, Fraction(1, 2)], [0, Fraction(-3, 4)])
    with pytest.raises(ParseError):
        parse_stream("stream([1]; [])")


@given(rational_streams())
def test_render_stream_round_trip(f):
    assert parse_stream(render_stream(f)) == f


# ---- MDP files -----------------------------------------------------------

def test_parse_mdp_example():
    assert parse_mdp(EO_MDP_TEXT) == even_or_odd_mdp()


def test_parse_mdp_dist_rows():
    text = """
    mdp
    initial a
    state a
      action go reward 1/2 dist a: 1/3 b: 2/3
    state b
      action stop reward 0 goto b
    """
    m = parse_mdp(text)
    assert validate(m) == []
    assert m.transition("a", "go") == {"a": Fraction(1, 3), "b": Fraction(2, 3)}


def test_parse_mdp_errors():
    with pytest.raises(ParseError):
        parse_mdp("initial a")  # missing header
    with pytest.raises(ParseError):
        parse_mdp("mdp\nstate a\n  action x reward 1 goto zz\ninitial a")
    with pytest.raises(ParseError):
        parse_mdp("mdp\ninitial zz\nstate a\n  action x reward 1 goto a")
    with pytest.raises(ParseError):
        parse_mdp("mdp\ninitial a\nstate a\nstate a")
    with pytest.raises(ParseError):
        parse_mdp("mdp\ninitial a\n  action x reward 1 goto a")
    with pytest.raises(ParseError):
        parse_mdp("mdp\ninitial a\nstate a\n  action x reward 1 dist")


def test_parse_mdp_row_sums_left_to_validate():
    text = """
    mdp
    initial a
    state a
      action x reward 0 dist a: 1/3
    """
    m = parse_mdp(text)  # grammatical, but probabilistically broken
    assert [p.kind for p in validate(m)] == ["RowSumError"]


# ---- strategy files ------------------------------------------------------

def test_parse_stationary_strategy():
    m = even_or_odd_mdp()
    assert parse_strategy("stationary { 1: T }", m) == stay_like(m)
    # omitted states default to the first declared action
    assert parse_strategy("stationary { }", m) == stay_like(m)


def stay_like(m):
    from chargemdp.mdp import stationary
    return stationary({"1": "T", "2": "c", "3": "c"})


def test_parse_randomized_strategy():
    m = even_or_odd_mdp()
    sigma = parse_strategy("stationary { 1: T:1/3 B:2/3 }", m)
    assert sigma.dist("1") == (("B", Fraction(2, 3)), ("T", Fraction(1, 3)))


def test_parse_periodic_strategy():
    m = even_or_odd_mdp()
    sigma = parse_strategy(
        "periodic preperiod=0 period=4 { phase 3 state 1: B }", m)
    assert sigma == alternating_strategy()


def test_parse_strategy_errors():
    m = even_or_odd_mdp()
    with pytest.raises(ParseError):
        parse_strategy("stationary { zz: T }", m)
    with pytest.raises(ParseError):
        parse_strategy("stationary { 1: Q }", m)
    with pytest.raises(ParseError):
        parse_strategy("periodic preperiod=0 period=2 { phase 9 state 1: T }", m)
    with pytest.raises(ParseError):
        parse_strategy("wander { }", m)
