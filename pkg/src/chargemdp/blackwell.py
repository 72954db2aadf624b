"""Blackwell-optimal pure stationary policies via symbolic policy iteration.

Discounted policy values are solved exactly as rational functions of
the discount factor, so "optimal for every discount factor close
enough to 1" becomes a sign test on the lowest-order coefficients of a
rational function expanded at 1.  The long-run average reward falls
out of the same object as the residue of (1-b)*v(b) at b=1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .mdp import Mdp, StationaryStrategy, ensure_valid, stationary


class PoleAtOne(ArithmeticError):
    """(1-b)*v(b) still has a pole at b=1; impossible for a stochastic policy."""


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial with Fraction coefficients, low order first."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(*cs) -> "Poly":
        cs = [Fraction(c) for c in cs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly.of(*(c + (b[i] if i < len(b) else 0) for i, c in enumerate(a)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly.of(*out)

    def scaled(self, k) -> "Poly":
        k = Fraction(k)
        return Poly.of(*(k * c for c in self.coeffs))

    def __divmod__(self, other: "Poly"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.coeffs
        if len(rem) < len(d):
            return Poly(()), self
        quo = [Fraction(0)] * (len(rem) - len(d) + 1)
        for shift in range(len(rem) - len(d), -1, -1):
            k = rem[shift + len(d) - 1] / d[-1]
            if k:
                quo[shift] = k
                for i, c in enumerate(d):
                    rem[shift + i] -= k * c
        return Poly.of(*quo), Poly.of(*rem)

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def at_one_minus_eps(self) -> "Poly":
        """The polynomial p(1 - e) as a polynomial in e."""
        t = Poly.of(1, -1)
        out = Poly(())
        for c in reversed(self.coeffs):
            out = out * t + Poly.of(c)
        return out

    def leading_sign_at_one(self) -> int:
        """Sign of the lowest-order nonzero coefficient of p(1 - e)."""
        for c in self.at_one_minus_eps().coeffs:
            if c:
                return 1 if c > 0 else -1
        return 0

    def render(self, var: str = "b") -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{var}")
            else:
                terms.append(f"{c}*{var}^{i}")
        return " + ".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, divmod(a, b)[1]
    if a.is_zero:
        return a
    return a.scaled(1 / a.coeffs[-1])


@dataclass(frozen=True)
class RationalFunction:
    """Reduced fraction of polynomials; denominator monic and nonzero."""

    num: Poly
    den: Poly

    @staticmethod
    def of(num: Poly, den: Poly = Poly.of(1)) -> "RationalFunction":
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            return RationalFunction(Poly(()), Poly.of(1))
        g = poly_gcd(num, den)
        if not g.is_zero and g.degree > 0:
            num = divmod(num, g)[0]
            den = divmod(den, g)[0]
        lead = den.coeffs[-1]
        return RationalFunction(num.scaled(1 / lead), den.scaled(1 / lead))

    @staticmethod
    def const(q) -> "RationalFunction":
        return RationalFunction.of(Poly.of(q))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, o: "RationalFunction") -> "RationalFunction":
        return RationalFunction.of(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, o: "RationalFunction") -> "RationalFunction":
        return self + (-o)

    def __mul__(self, o: "RationalFunction") -> "RationalFunction":
        return RationalFunction.of(self.num * o.num, self.den * o.den)

    def __truediv__(self, o: "RationalFunction") -> "RationalFunction":
        if o.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction.of(self.num * o.den, self.den * o.num)

    def evaluate(self, x) -> Fraction:
        d = self.den.evaluate(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num.evaluate(x) / d

    def render(self, var: str = "b") -> str:
        return f"({self.num.render(var)})/({self.den.render(var)})"


BETA = RationalFunction.of(Poly.of(0, 1))


def sign_near_one(f: RationalFunction) -> int:
    """Sign of f(b) for all b < 1 close enough to 1: -1, 0, or +1."""
    if f.num.is_zero:
        return 0
    return f.num.leading_sign_at_one() * f.den.leading_sign_at_one()


def _solve_linear(a, b, is_zero):
    """Gaussian elimination over an exact field (Fractions or rational
    functions).  Mutates copies; returns the solution vector."""
    n = len(b)
    a = [row[:] for row in a]
    b = b[:]
    for col in range(n):
        piv = next(r for r in range(col, n) if not is_zero(a[r][col]))
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(n):
            if r != col and not is_zero(a[r][col]):
                k = a[r][col] / a[col][col]
                a[r] = [x - k * y for x, y in zip(a[r], a[col])]
                b[r] = b[r] - k * b[col]
    return [b[i] / a[i][i] for i in range(n)]


def _policy_rows(mdp: Mdp, pi: StationaryStrategy):
    rows = []
    for i, s in enumerate(mdp.states):
        a = pi.action(s)
        j = mdp.actions[i].index(a)
        rows.append((mdp.rewards[i][j], mdp.transitions[i][j]))
    return rows


def discounted_value(mdp: Mdp, pi: StationaryStrategy) -> dict[str, RationalFunction]:
    """Per-state discounted value v(b) solving v = r + b*P*v, symbolically."""
    ensure_valid(mdp)
    rows = _policy_rows(mdp, pi)
    n = len(mdp.states)
    a = [[RationalFunction.const(1 if i == k else 0)
          - BETA * RationalFunction.const(rows[i][1][k]) for k in range(n)]
         for i in range(n)]
    b = [RationalFunction.const(rows[i][0]) for i in range(n)]
    v = _solve_linear(a, b, lambda f: f.is_zero)
    return {s: v[i] for i, s in enumerate(mdp.states)}


def discounted_value_at(mdp: Mdp, pi: StationaryStrategy, beta) -> dict[str, Fraction]:
    """Numeric twin of discounted_value at a fixed rational discount factor."""
    beta = Fraction(beta)
    rows = _policy_rows(mdp, pi)
    n = len(mdp.states)
    a = [[(1 if i == k else Fraction(0)) - beta * rows[i][1][k] for k in range(n)]
         for i in range(n)]
    b = [rows[i][0] for i in range(n)]
    v = _solve_linear(a, b, lambda q: q == 0)
    return {s: v[i] for i, s in enumerate(mdp.states)}


def blackwell_policy(mdp: Mdp) -> StationaryStrategy:
    """Policy iteration in the Blackwell order.

    Starts from the lexicographically first pure stationary policy;
    each round switches every improvable state to its lowest-indexed
    improving action, judged by the sign of the one-step action-value
    difference near b = 1.  Terminates because each switch strictly
    improves the policy in the Blackwell order.
    """
    ensure_valid(mdp)
    choice = {s: mdp.actions[i][0] for i, s in enumerate(mdp.states)}
    while True:
        pi = stationary(choice)
        v = discounted_value(mdp, pi)
        changed = False
        for i, s in enumerate(mdp.states):
            for a in mdp.actions[i]:
                if a == choice[s]:
                    continue
                j = mdp.actions[i].index(a)
                q = RationalFunction.const(mdp.rewards[i][j])
                for k, z in enumerate(mdp.states):
                    p = mdp.transitions[i][j][k]
                    if p:
                        q = q + BETA * RationalFunction.const(p) * v[z]
                if sign_near_one(q - v[s]) > 0:
                    choice[s] = a
                    changed = True
                    break
        if not changed:
            return pi


def average_value(mdp: Mdp, pi: StationaryStrategy) -> dict[str, Fraction]:
    """Long-run average reward per state: lim_{b->1} (1-b) * v(b)."""
    one_minus = RationalFunction.of(Poly.of(1, -1))
    out = {}
    for s, v in discounted_value(mdp, pi).items():
        g = one_minus * v
        if g.den.evaluate(1) == 0:
            raise PoleAtOne(f"residual pole at 1 for state {s!r}")
        out[s] = g.evaluate(1)
    return out
