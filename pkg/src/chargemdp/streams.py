"""Eventually periodic sequences of exact rationals.

Streams are the bridge between strategies and charges: the expected
stage-reward sequence of any exactly-evaluable strategy is one of
these, and integration against a charge decomposes a stream into its
level sets (see :mod:`chargemdp.charges`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .periodic_sets import EventuallyPeriodicSet, make, member


@dataclass(frozen=True)
class RationalStream:
    """Canonical form: the cycle is of minimal length and the preperiod
    is of minimal length given the cycle."""

    preperiod: tuple[Fraction, ...]
    cycle: tuple[Fraction, ...]

    def value_at(self, t: int) -> Fraction:
        if t < 1:
            raise ValueError(f"stages start at 1, got {t}")
        L = len(self.preperiod)
        if t <= L:
            return self.preperiod[t - 1]
        return self.cycle[(t - L - 1) % len(self.cycle)]

    def level_sets(self) -> list[tuple[Fraction, EventuallyPeriodicSet]]:
        """Pairs (value, stages where the stream equals that value),
        ordered by value.  The sets partition the stages."""
        L, q = len(self.preperiod), len(self.cycle)
        out = []
        for c in sorted(set(self.preperiod) | set(self.cycle)):
            bits = [1 if v == c else 0 for v in self.preperiod]
            residues = {(L + 1 + j) % q for j, v in enumerate(self.cycle) if v == c}
            out.append((c, make(bits, q, residues)))
        return out

    def cycle_mean(self) -> Fraction:
        return sum(self.cycle, Fraction(0)) / len(self.cycle)

    def values(self, n: int) -> list[Fraction]:
        """The first n values, materialized."""
        L, q = len(self.preperiod), len(self.cycle)
        out = list(self.preperiod[:n])
        if n > L:
            full, rem = divmod(n - L, q)
            out.extend(list(self.cycle) * full)
            out.extend(self.cycle[:rem])
        return out


def stream(preperiod, cycle) -> RationalStream:
    """Canonicalizing constructor."""
    cyc = [Fraction(v) for v in cycle]
    pre = [Fraction(v) for v in preperiod]
    if not cyc:
        raise ValueError("cycle must be nonempty")
    q = len(cyc)
    for d in range(1, q + 1):
        if q % d == 0 and all(cyc[j] == cyc[j % d] for j in range(q)):
            cyc = cyc[:d]
            break
    while pre and pre[-1] == cyc[-1]:
        cyc = [cyc[-1]] + cyc[:-1]
        pre.pop()
    return RationalStream(tuple(pre), tuple(cyc))


def constant(c) -> RationalStream:
    return stream([], [c])


def indicator(s: EventuallyPeriodicSet) -> RationalStream:
    """0/1 stream of membership."""
    m, p = s.pre_len, s.period
    pre = [Fraction(1 if (s.pre_mask >> (i - 1)) & 1 else 0) for i in range(1, m + 1)]
    cyc = [Fraction(1 if (s.res_mask >> ((m + 1 + j) % p)) & 1 else 0) for j in range(p)]
    return stream(pre, cyc)


def combine(f: RationalStream, g: RationalStream, fn) -> RationalStream:
    """Pointwise combination of two streams."""
    L = max(len(f.preperiod), len(g.preperiod))
    q = lcm(len(f.cycle), len(g.cycle))
    pre = [fn(f.value_at(t), g.value_at(t)) for t in range(1, L + 1)]
    cyc = [fn(f.value_at(t), g.value_at(t)) for t in range(L + 1, L + q + 1)]
    return stream(pre, cyc)


def scale(f: RationalStream, a) -> RationalStream:
    a = Fraction(a)
    return stream([a * v for v in f.preperiod], [a * v for v in f.cycle])


def add(f: RationalStream, g: RationalStream) -> RationalStream:
    return combine(f, g, lambda x, y: x + y)


def pointwise_leq(f: RationalStream, g: RationalStream) -> bool:
    """f <= g at every stage (checked over preperiods plus one full
    common cycle, which is exhaustive)."""
    L = max(len(f.preperiod), len(g.preperiod))
    q = lcm(len(f.cycle), len(g.cycle))
    return all(f.value_at(t) <= g.value_at(t) for t in range(1, L + q + 1))


def superlevel_set(f: RationalStream, threshold) -> EventuallyPeriodicSet:
    """Stages where the stream is strictly greater than the threshold."""
    thr = Fraction(threshold)
    L, q = len(f.preperiod), len(f.cycle)
    bits = [1 if v > thr else 0 for v in f.preperiod]
    residues = {(L + 1 + j) % q for j, v in enumerate(f.cycle) if v > thr}
    return make(bits, q, residues)
