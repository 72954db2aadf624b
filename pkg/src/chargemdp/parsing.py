"""Text grammars: set and charge expressions, stream literals, MDP and
strategy files.  All parsers are recursive descent over a shared token
stream; errors carry line/column positions.  ``#`` starts a comment
anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import periodic_sets as ps
from .charges import (Charge, DyadicLimit, Frequency, Geometric, Mix, PointMass,
                      Restrict)
from .mdp import Mdp, PeriodicMarkovStrategy, StationaryStrategy, build_mdp, periodic, stationary
from .periodic_sets import EventuallyPeriodicSet
from .streams import RationalStream, stream


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME | INT | PUNCT | END
    text: str
    line: int
    col: int


_PUNCT = set("()[]{}|&!,:;/=-")


def tokenize(text: str) -> list[Token]:
    out = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
        elif ch in _PUNCT:
            out.append(Token("PUNCT", ch, line, col))
            i += 1
            col += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(Token("END", "", line, col))
    return out


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "PUNCT" or tok.text != text:
            self.fail(f"expected {text!r}, got {tok.text!r}" if tok.text
                      else f"expected {text!r}, got end of input")
        return self.next()

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.text == text

    def take_punct(self, text: str) -> bool:
        if self.at_punct(text):
            self.next()
            return True
        return False

    def expect_name(self) -> str:
        tok = self.peek()
        if tok.kind != "NAME":
            self.fail(f"expected a name, got {tok.text!r}")
        return self.next().text

    def expect_id(self) -> str:
        """State and action identifiers may be words or bare numbers."""
        tok = self.peek()
        if tok.kind not in ("NAME", "INT"):
            self.fail(f"expected an identifier, got {tok.text!r}")
        return self.next().text

    def at_id(self) -> bool:
        return self.peek().kind in ("NAME", "INT")

    def expect_nat(self) -> int:
        tok = self.peek()
        if tok.kind != "INT":
            self.fail(f"expected a number, got {tok.text!r}")
        return int(self.next().text)

    def expect_int(self) -> int:
        neg = self.take_punct("-")
        n = self.expect_nat()
        return -n if neg else n

    def expect_rational(self) -> Fraction:
        num = self.expect_int()
        if self.take_punct("/"):
            den = self.expect_nat()
            if den == 0:
                self.fail("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def expect_end(self):
        if self.peek().kind != "END":
            self.fail(f"unexpected trailing input {self.peek().text!r}")

    # ---- set expressions -------------------------------------------------

    def set_expr(self) -> EventuallyPeriodicSet:
        left = self.set_term()
        while self.take_punct("|"):
            left = ps.union(left, self.set_term())
        return left

    def set_term(self) -> EventuallyPeriodicSet:
        left = self.set_factor()
        while self.take_punct("&"):
            left = ps.intersect(left, self.set_factor())
        return left

    def set_factor(self) -> EventuallyPeriodicSet:
        if self.take_punct("!"):
            return ps.complement(self.set_factor())
        if self.take_punct("("):
            inner = self.set_expr()
            self.expect_punct(")")
            return inner
        tok = self.peek()
        name = self.expect_name()
        if name == "odds":
            return ps.odds()
        if name == "evens":
            return ps.evens()
        if name == "nat":
            return ps.naturals()
        if name == "empty":
            return ps.empty()
        if name == "multiples":
            self.expect_punct("(")
            d = self.expect_nat()
            self.expect_punct(")")
            if d < 1:
                raise ParseError("multiples() needs d >= 1", tok.line, tok.col)
            return ps.multiples(d)
        if name == "ap":
            self.expect_punct("(")
            a = self.expect_nat()
            self.expect_punct(",")
            d = self.expect_nat()
            self.expect_punct(")")
            if a < 1 or d < 1:
                raise ParseError("ap(a,d) needs a >= 1 and d >= 1", tok.line, tok.col)
            return ps.arithmetic(a, d)
        if name == "shift":
            self.expect_punct("(")
            s = self.set_expr()
            self.expect_punct(",")
            k = self.expect_int()
            self.expect_punct(")")
            return ps.shift(s, k)
        if name == "contract":
            self.expect_punct("(")
            s = self.set_expr()
            self.expect_punct(",")
            d = self.expect_nat()
            self.expect_punct(")")
            if d < 1:
                raise ParseError("contract() needs d >= 1", tok.line, tok.col)
            return ps.contract(s, d)
        raise ParseError(f"unknown set constructor {name!r}", tok.line, tok.col)

    # ---- charge expressions ----------------------------------------------

    def charge_expr(self) -> Charge:
        tok = self.peek()
        name = self.expect_name()
        if name == "frequency":
            return Frequency()
        if name == "dyadiclimit":
            return DyadicLimit()
        if name == "geometric":
            self.expect_punct("(")
            beta = self.expect_rational()
            self.expect_punct(")")
            if not 0 < beta < 1:
                raise ParseError("geometric factor must lie in (0,1)", tok.line, tok.col)
            return Geometric(beta)
        if name == "pointmass":
            self.expect_punct("(")
            t = self.expect_nat()
            self.expect_punct(")")
            if t < 1:
                raise ParseError("pointmass stage must be >= 1", tok.line, tok.col)
            return PointMass(t)
        if name == "restrict":
            self.expect_punct("(")
            base = self.charge_expr()
            self.expect_punct(",")
            window = self.set_expr()
            self.expect_punct(")")
            return Restrict(base, window)
        if name == "mix":
            self.expect_punct("(")
            parts = []
            while True:
                w = self.expect_rational()
                self.expect_punct(":")
                parts.append((w, self.charge_expr()))
                if not self.take_punct(","):
                    break
            self.expect_punct(")")
            try:
                return Mix(tuple(parts))
            except ValueError as exc:
                raise ParseError(str(exc), tok.line, tok.col) from None
        raise ParseError(f"unknown charge constructor {name!r}", tok.line, tok.col)

    # ---- stream literals -------------------------------------------------

    def stream_literal(self) -> RationalStream:
        tok = self.peek()
        if self.expect_name() != "stream":
            raise ParseError("expected 'stream'", tok.line, tok.col)
        self.expect_punct("(")
        pre = self.rational_list()
        self.expect_punct(";")
        cyc = self.rational_list()
        self.expect_punct(")")
        if not cyc:
            raise ParseError("stream cycle must be nonempty", tok.line, tok.col)
        return stream(pre, cyc)

    def rational_list(self) -> list[Fraction]:
        self.expect_punct("[")
        out = []
        if not self.at_punct("]"):
            out.append(self.expect_rational())
            while self.take_punct(","):
                out.append(self.expect_rational())
        self.expect_punct("]")
        return out


def parse_set(text: str) -> EventuallyPeriodicSet:
    p = _Parser(tokenize(text))
    out = p.set_expr()
    p.expect_end()
    return out


def parse_charge(text: str) -> Charge:
    p = _Parser(tokenize(text))
    out = p.charge_expr()
    p.expect_end()
    return out


def parse_stream(text: str) -> RationalStream:
    p = _Parser(tokenize(text))
    out = p.stream_literal()
    p.expect_end()
    return out


def parse_rational(text: str) -> Fraction:
    p = _Parser(tokenize(text))
    out = p.expect_rational()
    p.expect_end()
    return out


# ---- MDP files -----------------------------------------------------------

def parse_mdp(text: str) -> Mdp:
    """Line-oriented MDP description:

        mdp
        initial <state-id>
        state <state-id>
          action <action-id> reward <rational> goto <state-id>
          action <action-id> reward <rational> dist <s>:<q> [<s>:<q> ...]
    """
    p = _Parser(tokenize(text))
    if p.peek().kind != "NAME" or p.peek().text != "mdp":
        p.fail("expected 'mdp' header")
    p.next()
    initial = None
    states: list[str] = []
    actions: dict[str, list[str]] = {}
    rewards = {}
    transitions = {}
    current: str | None = None
    while p.peek().kind != "END":
        tok = p.peek()
        word = p.expect_name()
        if word == "initial":
            initial = p.expect_id()
        elif word == "state":
            current = p.expect_id()
            if current in states:
                raise ParseError(f"duplicate state {current!r}", tok.line, tok.col)
            states.append(current)
            actions[current] = []
        elif word == "action":
            if current is None:
                raise ParseError("action before any state", tok.line, tok.col)
            a = p.expect_id()
            if p.expect_name() != "reward":
                raise ParseError("expected 'reward'", tok.line, tok.col)
            r = p.expect_rational()
            kw_tok = p.peek()
            kw = p.expect_name()
            if kw == "goto":
                dest = p.expect_id()
                row = {dest: Fraction(1)}
            elif kw == "dist":
                row = {}
                # the next clause starts with one of the file keywords
                while (p.at_id()
                       and p.peek().text not in ("state", "action", "initial")):
                    z = p.expect_id()
                    p.expect_punct(":")
                    q = p.expect_rational()
                    row[z] = row.get(z, Fraction(0)) + q
                if not row:
                    raise ParseError("empty distribution", kw_tok.line, kw_tok.col)
            else:
                raise ParseError(f"expected 'goto' or 'dist', got {kw!r}",
                                 kw_tok.line, kw_tok.col)
            actions[current].append(a)
            rewards[(current, a)] = r
            transitions[(current, a)] = row
        else:
            raise ParseError(f"unexpected keyword {word!r}", tok.line, tok.col)
    if initial is None:
        p.fail("missing 'initial' line")
    known = set(states)
    for (s, a), row in transitions.items():
        for z in row:
            if z not in known:
                p.fail(f"transition from ({s!r}, {a!r}) to unknown state {z!r}")
    if initial not in known:
        p.fail(f"unknown initial state {initial!r}")
    return build_mdp(states, initial,
                     {s: tuple(v) for s, v in actions.items()}, rewards, transitions)


# ---- strategy files ------------------------------------------------------

def _action_dist(p: _Parser, mdp: Mdp, state: str):
    """``<action-id>[:<rational>]`` pairs; a bare action means prob 1."""
    dist = {}
    while p.at_id() and p.peek().text in mdp.action_list(state):
        a = p.expect_id()
        if p.take_punct(":"):
            dist[a] = dist.get(a, Fraction(0)) + p.expect_rational()
        else:
            dist[a] = Fraction(1)
            break
    if not dist:
        p.fail(f"expected an action of state {state!r}")
    return dist


def parse_strategy(text: str, mdp: Mdp) -> StationaryStrategy | PeriodicMarkovStrategy:
    """``stationary { s: a ... }`` or
    ``periodic preperiod=<L> period=<q> { phase <k> state <s>: a ... }``.
    Omitted entries default to the first declared action."""
    p = _Parser(tokenize(text))
    kind_tok = p.peek()
    kind = p.expect_name()
    if kind == "stationary":
        p.expect_punct("{")
        choices = {s: mdp.action_list(s)[0] for s in mdp.states}
        explicit: dict = {}
        while not p.at_punct("}"):
            s = p.expect_id()
            if s not in mdp.states:
                p.fail(f"unknown state {s!r}")
            p.expect_punct(":")
            explicit[s] = _action_dist(p, mdp, s)
        p.expect_punct("}")
        choices.update(explicit)
        out = stationary(choices)
    elif kind == "periodic":
        if p.expect_name() != "preperiod":
            p.fail("expected 'preperiod='")
        p.expect_punct("=")
        L = p.expect_nat()
        if p.expect_name() != "period":
            p.fail("expected 'period='")
        p.expect_punct("=")
        q = p.expect_nat()
        if q < 1:
            raise ParseError("period must be >= 1", kind_tok.line, kind_tok.col)
        rows = [{s: mdp.action_list(s)[0] for s in mdp.states} for _ in range(L + q)]
        p.expect_punct("{")
        while not p.at_punct("}"):
            tok = p.peek()
            if p.expect_name() != "phase":
                p.fail("expected 'phase'")
            k = p.expect_nat()
            if not 1 <= k <= L + q:
                raise ParseError(f"phase {k} out of range 1..{L + q}",
                                 tok.line, tok.col)
            if p.expect_name() != "state":
                p.fail("expected 'state'")
            s = p.expect_id()
            if s not in mdp.states:
                p.fail(f"unknown state {s!r}")
            p.expect_punct(":")
            rows[k - 1][s] = _action_dist(p, mdp, s)
        p.expect_punct("}")
        out = periodic(rows[:L], rows[L:])
    else:
        raise ParseError(f"expected 'stationary' or 'periodic', got {kind!r}",
                         kind_tok.line, kind_tok.col)
    p.expect_end()
    return out


# ---- renderers -----------------------------------------------------------

def render_set(s: EventuallyPeriodicSet) -> str:
    if s.is_empty:
        return "empty"
    if s == ps.naturals():
        return "nat"
    if s == ps.odds():
        return "odds"
    if s == ps.evens():
        return "evens"
    terms = []
    for n in range(1, s.pre_len + 1):
        if (s.pre_mask >> (n - 1)) & 1:
            terms.append(f"ap({n},1) & !ap({n + 1},1)")  # the singleton {n}
    for r in sorted(s.residues):
        a = ps.first_tail_element(s, r)
        if s.period == a and s.pre_len == 0:
            terms.append(f"multiples({s.period})")
        else:
            terms.append(f"ap({a},{s.period})")
    return " | ".join(terms)


def render_charge(mu: Charge) -> str:
    if isinstance(mu, Frequency):
        return "frequency"
    if isinstance(mu, DyadicLimit):
        return "dyadiclimit"
    if isinstance(mu, Geometric):
        return f"geometric({mu.beta})"
    if isinstance(mu, PointMass):
        return f"pointmass({mu.stage})"
    if isinstance(mu, Restrict):
        return f"restrict({render_charge(mu.base)}, {render_set(mu.window)})"
    if isinstance(mu, Mix):
        inner = ", ".join(f"{w}:{render_charge(c)}" for w, c in mu.parts)
        return f"mix({inner})"
    raise TypeError(f"not a charge expression: {mu!r}")


def render_stream(f: RationalStream) -> str:
    pre = ",".join(str(v) for v in f.preperiod)
    cyc = ",".join(str(v) for v in f.cycle)
    return f"stream([{pre}];[{cyc}])"
