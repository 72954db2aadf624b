"""Exact algebra of eventually periodic subsets of the positive integers.

A set is stored as a finite preperiod (explicit membership bits for the
integers 1..m) plus a residue rule: for n > m, n is a member iff
n mod p lies in a fixed residue set.  Every value is kept canonical --
p is the least period of the tail and m is the least preperiod
compatible with it -- so representation equality coincides with set
equality.  Membership bits and residues are packed into ints, which
keeps the Boolean operations cheap even when the common period is in
the hundreds.

Integers start at 1; membership queries for 0 are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _tile(mask: int, width: int, total: int) -> int:
    """Repeat a width-bit pattern until it covers total bits (width | total)."""
    out = mask
    have = width
    while have < total:
        out |= out << have
        have *= 2
    return out & ((1 << total) - 1)


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """Canonical eventually periodic subset of {1, 2, 3, ...}.

    Do not call the constructor directly with non-canonical data; use
    :func:`make` or the named constructors.
    """

    pre_len: int
    pre_mask: int
    period: int
    res_mask: int

    @property
    def preperiod_bits(self) -> tuple[int, ...]:
        return tuple((self.pre_mask >> i) & 1 for i in range(self.pre_len))

    @property
    def residues(self) -> frozenset[int]:
        return frozenset(r for r in range(self.period) if (self.res_mask >> r) & 1)

    @property
    def is_empty(self) -> bool:
        return self.pre_mask == 0 and self.res_mask == 0

    def __contains__(self, n: int) -> bool:
        return member(self, n)

    def __repr__(self) -> str:
        head = [n for n in range(1, self.pre_len + 1) if (self.pre_mask >> (n - 1)) & 1]
        return (f"EventuallyPeriodicSet(pre={head}, m={self.pre_len}, "
                f"p={self.period}, residues={sorted(self.residues)})")


def _build(pre_len: int, pre_mask: int, period: int, res_mask: int) -> EventuallyPeriodicSet:
    """Canonicalize: shrink to the minimal period, then the minimal preperiod."""
    for d in _divisors(period):
        sub = res_mask & ((1 << d) - 1)
        if _tile(sub, d, period) == res_mask:
            period, res_mask = d, sub
            break
    while pre_len > 0:
        predicted = (res_mask >> (pre_len % period)) & 1
        if ((pre_mask >> (pre_len - 1)) & 1) != predicted:
            break
        pre_len -= 1
        pre_mask &= (1 << pre_len) - 1
    return EventuallyPeriodicSet(pre_len, pre_mask, period, res_mask)


def make(preperiod_bits, period: int, residues) -> EventuallyPeriodicSet:
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    res_mask = 0
    for r in residues:
        if not 0 <= r < period:
            raise ValueError(f"residue {r} out of range for period {period}")
        res_mask |= 1 << r
    pre_mask = 0
    bits = list(preperiod_bits)
    for i, b in enumerate(bits):
        if b:
            pre_mask |= 1 << i
    return _build(len(bits), pre_mask, period, res_mask)


def empty() -> EventuallyPeriodicSet:
    return EventuallyPeriodicSet(0, 0, 1, 0)


def naturals() -> EventuallyPeriodicSet:
    return EventuallyPeriodicSet(0, 0, 1, 1)


def odds() -> EventuallyPeriodicSet:
    return EventuallyPeriodicSet(0, 0, 2, 0b10)


def evens() -> EventuallyPeriodicSet:
    return EventuallyPeriodicSet(0, 0, 2, 0b01)


def multiples(d: int) -> EventuallyPeriodicSet:
    """{d, 2d, 3d, ...}"""
    if d < 1:
        raise ValueError(f"multiples() needs d >= 1, got {d}")
    return _build(0, 0, d, 1)


def arithmetic(a: int, d: int) -> EventuallyPeriodicSet:
    """{a, a+d, a+2d, ...}"""
    if a < 1 or d < 1:
        raise ValueError(f"arithmetic() needs a >= 1 and d >= 1, got ({a}, {d})")
    return _build(a - 1, 0, d, 1 << (a % d))


def member(s: EventuallyPeriodicSet, n: int) -> bool:
    if n < 1:
        raise ValueError(f"membership is defined for n >= 1, got {n}")
    if n <= s.pre_len:
        return bool((s.pre_mask >> (n - 1)) & 1)
    return bool((s.res_mask >> (n % s.period)) & 1)


def _aligned(s: EventuallyPeriodicSet, t: EventuallyPeriodicSet):
    m = max(s.pre_len, t.pre_len)
    p = lcm(s.period, t.period)
    return m, p, _expand(s, m, p), _expand(t, m, p)


def _expand(s: EventuallyPeriodicSet, m: int, p: int) -> tuple[int, int]:
    pre = s.pre_mask
    for i in range(s.pre_len + 1, m + 1):
        if (s.res_mask >> (i % s.period)) & 1:
            pre |= 1 << (i - 1)
    return pre, _tile(s.res_mask, s.period, p)


def union(s: EventuallyPeriodicSet, t: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    m, p, (pa, ra), (pb, rb) = _aligned(s, t)
    return _build(m, pa | pb, p, ra | rb)


def intersect(s: EventuallyPeriodicSet, t: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    m, p, (pa, ra), (pb, rb) = _aligned(s, t)
    return _build(m, pa & pb, p, ra & rb)


def difference(s: EventuallyPeriodicSet, t: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    m, p, (pa, ra), (pb, rb) = _aligned(s, t)
    return _build(m, pa & ~pb, p, ra & ~rb)


def complement(s: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    pre = ~s.pre_mask & ((1 << s.pre_len) - 1)
    res = ~s.res_mask & ((1 << s.period) - 1)
    return _build(s.pre_len, pre, s.period, res)


def is_subset(s: EventuallyPeriodicSet, t: EventuallyPeriodicSet) -> bool:
    m, p, (pa, ra), (pb, rb) = _aligned(s, t)
    return (pa & ~pb) == 0 and (ra & ~rb) == 0


def shift(s: EventuallyPeriodicSet, k: int) -> EventuallyPeriodicSet:
    """{n + k : n in S}, clipped to the positive integers for k < 0."""
    p = s.period
    if k >= 0:
        pre_len = s.pre_len + k
        pre_mask = s.pre_mask << k
    else:
        j = -k
        pre_len = max(s.pre_len - j, 0)
        pre_mask = (s.pre_mask >> j) & ((1 << pre_len) - 1)
    r = k % p
    if r:
        res = ((s.res_mask << r) | (s.res_mask >> (p - r))) & ((1 << p) - 1)
    else:
        res = s.res_mask
    return _build(pre_len, pre_mask, p, res)


def contract(s: EventuallyPeriodicSet, d: int) -> EventuallyPeriodicSet:
    """{k : k*d in S}."""
    if d < 1:
        raise ValueError(f"contract() needs d >= 1, got {d}")
    m2 = s.pre_len // d
    pre = 0
    for k in range(1, m2 + 1):
        if member(s, k * d):
            pre |= 1 << (k - 1)
    p2 = s.period // gcd(d, s.period)
    res = 0
    step = d % s.period
    r = 0
    for k in range(p2):
        if (s.res_mask >> r) & 1:
            res |= 1 << k
        r += step
        if r >= s.period:
            r -= s.period
    return _build(m2, pre, p2, res)


def density(s: EventuallyPeriodicSet) -> Fraction:
    """Natural density; always exists on this algebra."""
    return Fraction(s.res_mask.bit_count(), s.period)


def first_tail_element(s: EventuallyPeriodicSet, r: int) -> int:
    """Smallest n > preperiod with n congruent to r mod period."""
    m = s.pre_len
    return m + 1 + ((r - (m + 1)) % s.period)


def count_up_to(s: EventuallyPeriodicSet, n: int) -> int:
    """|S intersect {1..n}|, by direct counting (used as a test oracle)."""
    total = 0
    head = min(n, s.pre_len)
    total += (s.pre_mask & ((1 << head) - 1)).bit_count()
    if n > s.pre_len:
        lo, hi = s.pre_len + 1, n
        full, rem = divmod(hi - lo + 1, s.period)
        total += full * s.res_mask.bit_count()
        for i in range(lo + full * s.period, hi + 1):
            if (s.res_mask >> (i % s.period)) & 1:
                total += 1
    return total
