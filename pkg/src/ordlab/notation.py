"""Relativized Veblen and Gamma notation terms.

Terms are kept in normal form by the smart constructors mk_phi, mk_sum and
mk_gamma. Base and fix atoms behave as strongly critical markers: they are
additively indecomposable and fixed by every phi_s and by Gamma. Index
atoms only ever appear as the first argument of phi.
"""
from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Callable, Optional

from .errors import DomainError, ParseError, SortError
from .orders import OrderExpr, Finite, freeze, layer, sort_key, thaw


class Cmp(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


LESS, EQUAL, GREATER = Cmp.LESS, Cmp.EQUAL, Cmp.GREATER


class OrdTerm:
    __slots__ = ()

    def sort_key(self):
        raise NotImplementedError

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Zero(OrdTerm):
    def sort_key(self):
        return (0,)


@dataclass(frozen=True)
class Atom(OrdTerm):
    sort: str
    pos: Any

    def __post_init__(self):
        if self.sort not in ("base", "idx", "fix"):
            raise DomainError(f"unknown atom sort {self.sort!r}")
        object.__setattr__(self, "pos", freeze(self.pos))

    def sort_key(self):
        return (1, self.sort, sort_key(self.pos))


@dataclass(frozen=True)
class SumList(OrdTerm):
    summands: tuple

    def sort_key(self):
        return (2, tuple(s.sort_key() for s in self.summands))


@dataclass(frozen=True)
class Phi(OrdTerm):
    index: OrdTerm
    arg: OrdTerm

    def sort_key(self):
        return (3, self.index.sort_key(), self.arg.sort_key())


@dataclass(frozen=True)
class Gamma(OrdTerm):
    arg: OrdTerm

    def sort_key(self):
        return (4, self.arg.sort_key())


ZERO = Zero()
ONE = Phi(ZERO, ZERO)
OMEGA = Phi(ZERO, ONE)
EPS0 = Phi(ONE, ZERO)


@dataclass(frozen=True)
class Sorts:
    """Component orders that give atom positions their meaning."""

    base: Optional[OrderExpr] = None
    idx: Optional[OrderExpr] = None
    fix: Optional[OrderExpr] = None

    def order(self, sort):
        return getattr(self, sort)


def _is_idx(t) -> bool:
    return isinstance(t, Atom) and t.sort == "idx"


def _is_marker(t) -> bool:
    return isinstance(t, Atom) and t.sort != "idx"


def _is_sc(t) -> bool:
    return _is_marker(t) or isinstance(t, Gamma)


def summands(t) -> tuple:
    if isinstance(t, Zero):
        return ()
    if isinstance(t, SumList):
        return t.summands
    return (t,)


def _pos_cmp(sort, p, q, sorts) -> Cmp:
    if p == q:
        return EQUAL
    o = sorts.order(sort) if sorts is not None else None
    if o is not None:
        return LESS if o.less(p, q) else GREATER
    return LESS if sort_key(p) < sort_key(q) else GREATER


def compare(x: OrdTerm, y: OrdTerm, sorts: Optional[Sorts] = None) -> Cmp:
    if x == y:
        return EQUAL
    xs, ys = summands(x), summands(y)
    if len(xs) == 1 and len(ys) == 1:
        return _cmp_ai(xs[0], ys[0], sorts)
    for a, b in zip(xs, ys):
        if a != b:
            return _cmp_ai(a, b, sorts)
    return LESS if len(xs) < len(ys) else GREATER


def _cmp_ai(a, b, sorts) -> Cmp:
    if a == b:
        return EQUAL
    ia, ib = _is_idx(a), _is_idx(b)
    if ia or ib:
        if ia and ib:
            return _pos_cmp("idx", a.pos, b.pos, sorts)
        other = b if ia else a
        if _is_sc(other):
            return LESS if ia else GREATER
        raise SortError(f"index atom compared with {format_term(other)}")
    sa, sb = _is_sc(a), _is_sc(b)
    if sa and sb:
        return _cmp_sc(a, b, sorts)
    if sa:
        return _sc_vs_phi(a, b, sorts)
    if sb:
        return Cmp(-_sc_vs_phi(b, a, sorts))
    return _cmp_phi(a, b, sorts)


_MARKER_RANK = {"base": 0, "fix": 1}


def _cmp_sc(a, b, sorts) -> Cmp:
    if isinstance(a, Atom) and isinstance(b, Atom):
        ra, rb = _MARKER_RANK[a.sort], _MARKER_RANK[b.sort]
        if ra != rb:
            return LESS if ra < rb else GREATER
        return _pos_cmp(a.sort, a.pos, b.pos, sorts)
    if isinstance(a, Atom):
        return LESS if compare(a, b.arg, sorts) <= 0 else GREATER
    if isinstance(b, Atom):
        return GREATER if compare(b, a.arg, sorts) <= 0 else LESS
    return compare(a.arg, b.arg, sorts)


def _sc_vs_phi(x, p: Phi, sorts) -> Cmp:
    if not _is_idx(p.index) and compare(x, p.index, sorts) <= 0:
        return LESS
    if compare(x, p.arg, sorts) <= 0:
        return LESS
    return GREATER


def _cmp_phi(x: Phi, y: Phi, sorts) -> Cmp:
    c = compare(x.index, y.index, sorts)
    if c == LESS:
        return LESS if compare(x.arg, y, sorts) == LESS else GREATER
    if c == EQUAL:
        return compare(x.arg, y.arg, sorts)
    return LESS if compare(x, y.arg, sorts) <= 0 else GREATER


# -- smart constructors ---------------------------------------------------------

def mk_phi(s: OrdTerm, t: OrdTerm, sorts: Optional[Sorts] = None) -> OrdTerm:
    if isinstance(t, Phi) and compare(t.index, s, sorts) == GREATER:
        return t
    if _is_sc(t) and compare(s, t, sorts) == LESS:
        return t
    if isinstance(t, Zero) and _is_sc(s):
        return s
    return Phi(s, t)


def mk_sum(ts, sorts: Optional[Sorts] = None) -> OrdTerm:
    flat = [a for t in ts for a in summands(t)]
    out: list = []
    for a in flat:
        while out and compare(out[-1], a, sorts) == LESS:
            out.pop()
        out.append(a)
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return SumList(tuple(out))


def mk_gamma(t: OrdTerm) -> OrdTerm:
    if _is_marker(t):
        return t
    return Gamma(t)


def one_plus(t: OrdTerm, sorts: Optional[Sorts] = None) -> OrdTerm:
    return mk_sum([ONE, t], sorts)


def numeral(n: int) -> OrdTerm:
    return mk_sum([ONE] * n)


def as_numeral(t: OrdTerm) -> Optional[int]:
    s = summands(t)
    if all(a == ONE for a in s):
        return len(s)
    return None


def log_omega(a: OrdTerm) -> OrdTerm:
    """The exponent e with a = omega^e, for additively indecomposable a."""
    if isinstance(a, Phi) and a.index == ZERO:
        return a.arg
    return a


def omega_times(x: OrdTerm) -> OrdTerm:
    return mk_sum([mk_phi(ZERO, one_plus(log_omega(a))) for a in summands(x)])


def renormalize(t: OrdTerm, sorts: Optional[Sorts] = None) -> OrdTerm:
    if isinstance(t, Phi):
        return mk_phi(renormalize(t.index, sorts), renormalize(t.arg, sorts), sorts)
    if isinstance(t, Gamma):
        return mk_gamma(renormalize(t.arg, sorts))
    if isinstance(t, SumList):
        return mk_sum([renormalize(a, sorts) for a in t.summands], sorts)
    return t


def is_normal(t: OrdTerm, sorts: Optional[Sorts] = None) -> bool:
    return renormalize(t, sorts) == t


def atoms(t: OrdTerm) -> set:
    if isinstance(t, Atom):
        return {t}
    if isinstance(t, Phi):
        return atoms(t.index) | atoms(t.arg)
    if isinstance(t, Gamma):
        return atoms(t.arg)
    if isinstance(t, SumList):
        return set().union(*(atoms(a) for a in t.summands))
    return set()


def map_atoms(t: OrdTerm, sort: str, f: Callable, sorts: Optional[Sorts] = None) -> OrdTerm:
    """Rename the atoms of one sort; the term is rebuilt in normal form."""
    if isinstance(t, Atom):
        return Atom(sort, f(t.pos)) if t.sort == sort else t
    if isinstance(t, Phi):
        return mk_phi(map_atoms(t.index, sort, f, sorts), map_atoms(t.arg, sort, f, sorts), sorts)
    if isinstance(t, Gamma):
        return mk_gamma(map_atoms(t.arg, sort, f, sorts))
    if isinstance(t, SumList):
        return mk_sum([map_atoms(a, sort, f, sorts) for a in t.summands], sorts)
    return t


# -- notation systems -------------------------------------------------------------

class NotationSystemSpec:
    """Base for the five system kinds; `index` and `count` exist only on some."""

    def sorts(self) -> Sorts:
        return Sorts(self.base, getattr(self, "index", None), self.count_order())

    def count_order(self):
        return getattr(self, "count", None)

    def index_legal(self, s: OrdTerm) -> bool:
        raise NotImplementedError

    def index_layer(self, w: int) -> tuple:
        raise NotImplementedError


@dataclass(frozen=True)
class EpsPlus(NotationSystemSpec):
    base: OrderExpr

    def index_legal(self, s):
        return s == ZERO

    def index_layer(self, w):
        return (ZERO,) if w == 0 else ()

    def to_sexpr(self):
        return f"(eps+ {self.base.to_sexpr()})"


@dataclass(frozen=True)
class PhiPlus(NotationSystemSpec):
    index: OrderExpr
    base: OrderExpr

    def index_legal(self, s):
        return _is_idx(s) and self.index.member(s.pos)

    def index_layer(self, w):
        return tuple(Atom("idx", p) for p in layer(self.index, w))

    def to_sexpr(self):
        return f"(phi+ {self.index.to_sexpr()} {self.base.to_sexpr()})"


@dataclass(frozen=True)
class PhiPlusIter(NotationSystemSpec):
    index: OrderExpr
    count: OrderExpr
    base: OrderExpr

    index_legal = PhiPlus.index_legal
    index_layer = PhiPlus.index_layer

    def to_sexpr(self):
        return (f"(phi+iter {self.index.to_sexpr()} {self.count.to_sexpr()} "
                f"{self.base.to_sexpr()})")


@dataclass(frozen=True)
class GammaPlus(NotationSystemSpec):
    base: OrderExpr

    def index_legal(self, s):
        return is_legal(self, s)

    def index_layer(self, w):
        return all_layer(self, w)

    def to_sexpr(self):
        return f"(gamma+ {self.base.to_sexpr()})"


@dataclass(frozen=True)
class GammaPlusIter(NotationSystemSpec):
    count: OrderExpr
    base: OrderExpr

    index_legal = GammaPlus.index_legal
    index_layer = GammaPlus.index_layer

    def to_sexpr(self):
        return f"(gamma+iter {self.count.to_sexpr()} {self.base.to_sexpr()})"


def is_legal(spec: NotationSystemSpec, t: OrdTerm) -> bool:
    if not _legal_shape(spec, t):
        return False
    try:
        return is_normal(t, spec.sorts())
    except SortError:
        return False


def _legal_shape(spec, t) -> bool:
    if isinstance(t, Zero):
        return True
    if isinstance(t, Atom):
        if t.sort == "base":
            return spec.base.member(t.pos)
        if t.sort == "fix":
            return spec.count_order() is not None and spec.count_order().member(t.pos)
        return False
    if isinstance(t, SumList):
        return len(t.summands) >= 2 and all(
            not isinstance(a, (Zero, SumList)) and _legal_shape(spec, a) for a in t.summands)
    if isinstance(t, Phi):
        return spec.index_legal(t.index) and _legal_shape(spec, t.arg)
    return False


def term_weight(t: OrdTerm, sorts: Optional[Sorts] = None) -> int:
    """Node count used for enumeration; an index atom weighs its position."""
    if isinstance(t, Atom):
        o = sorts.order(t.sort) if sorts is not None else None
        w = o.weight(t.pos) if o is not None else (t.pos if isinstance(t.pos, int) else 0)
        return w if t.sort == "idx" else 1 + w
    if isinstance(t, Phi):
        return 1 + term_weight(t.index, sorts) + term_weight(t.arg, sorts)
    if isinstance(t, Gamma):
        return 1 + term_weight(t.arg, sorts)
    if isinstance(t, SumList):
        return sum(term_weight(a, sorts) for a in t.summands)
    return 0


def _sorted_terms(terms, sorts):
    return tuple(sorted(terms, key=functools.cmp_to_key(lambda a, b: int(compare(a, b, sorts)))))


@functools.lru_cache(maxsize=None)
def ai_layer(spec: NotationSystemSpec, k: int) -> tuple:
    """Additively indecomposable legal terms of weight k."""
    sorts = spec.sorts()
    out = []
    if k >= 1:
        out.extend(Atom("base", p) for p in layer(spec.base, k - 1))
        if spec.count_order() is not None:
            out.extend(Atom("fix", p) for p in layer(spec.count_order(), k - 1))
    for ws in range(k):
        for s in spec.index_layer(ws):
            for t in all_layer(spec, k - 1 - ws):
                if mk_phi(s, t, sorts) == Phi(s, t):
                    out.append(Phi(s, t))
    return _sorted_terms(out, sorts)


@functools.lru_cache(maxsize=None)
def all_layer(spec: NotationSystemSpec, k: int) -> tuple:
    """All legal terms of weight k, sorted by compare."""
    if k == 0:
        return (ZERO,)
    sorts = spec.sorts()
    pool = [(a, w) for w in range(1, k) for a in ai_layer(spec, w)]
    pool.sort(key=functools.cmp_to_key(lambda p, q: -int(compare(p[0], q[0], sorts))))
    sums = []

    def rec(i, rem, acc):
        if rem == 0:
            if len(acc) >= 2:
                sums.append(SumList(tuple(acc)))
            return
        for j in range(i, len(pool)):
            a, w = pool[j]
            if w <= rem:
                acc.append(a)
                rec(j, rem - w, acc)
                acc.pop()

    rec(0, k, [])
    return _sorted_terms(list(ai_layer(spec, k)) + sums, sorts)


def enumerate_terms(spec: NotationSystemSpec, max_size: int) -> list:
    """Legal terms of size at most max_size (size = weight + 1), by size then compare."""
    return [t for k in range(max_size) for t in all_layer(spec, k)]


@dataclass(frozen=True)
class Notation(OrderExpr):
    system: NotationSystemSpec

    def _term(self, x):
        if not isinstance(x, OrdTerm):
            raise DomainError(f"notation element must be a term, got {x!r}")
        return x

    def member(self, x):
        return is_legal(self.system, self._term(x))

    def less(self, x, y):
        return compare(x, y, self.system.sorts()) == LESS

    def weight(self, x):
        return term_weight(x, self.system.sorts())

    def _layer(self, k):
        return all_layer(self.system, k)

    def decode(self, v):
        if isinstance(v, str):
            return parse_term(v)[0]
        if isinstance(v, OrdTerm):
            return v
        raise DomainError(f"notation element must be a term string, got {v!r}")

    def encode(self, x):
        return format_term(x)

    def to_sexpr(self):
        return f"(notation {self.system.to_sexpr()})"


def notation_order(spec: NotationSystemSpec) -> Notation:
    return Notation(spec)


EMPTY = Finite(())


# -- text syntax ------------------------------------------------------------------

def format_term(t: OrdTerm, pretty: bool = False) -> str:
    if isinstance(t, Zero):
        return "0"
    n = as_numeral(t)
    if n is not None:
        return str(n)
    if isinstance(t, SumList):
        parts = list(t.summands)
        k = 0
        while parts and parts[-1] == ONE:
            parts.pop()
            k += 1
        out = "+".join(format_term(a, pretty) for a in parts)
        return out + (f"+{k}" if k else "")
    if isinstance(t, Phi):
        if pretty and t == OMEGA:
            return "ω"
        name = "φ" if pretty else "phi"
        return f"{name}({format_term(t.index, pretty)},{format_term(t.arg, pretty)})"
    if isinstance(t, Gamma):
        return f"{'Γ' if pretty else 'G'}({format_term(t.arg, pretty)})"
    if isinstance(t, Atom):
        return f"a({t.sort},{json.dumps(thaw(t.pos), separators=(',', ':'))})"
    raise DomainError(f"not a term: {t!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)|(phi|φ|G|Γ|ω|a|base|idx|fix)|([(),+]))")
_JSON = json.JSONDecoder()


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            stripped = len(text) - len(text[pos:].lstrip())
            if text[stripped] == "[":
                try:
                    _, end = _JSON.raw_decode(text, stripped)
                except ValueError:
                    raise ParseError(f"bad JSON position at {stripped}") from None
                self.toks.append(text[stripped:end])
                pos = end
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
            self.toks.append(next(g for g in m.groups() if g is not None))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ParseError(f"expected {want or 'token'} but found {tok!r} in {self.text!r}")
        self.i += 1
        return tok

    def term(self):
        parts = [self.summand()]
        while self.peek() == "+":
            self.take("+")
            parts.append(self.summand())
        flat = []
        for p in parts:
            flat.extend(p.summands if isinstance(p, SumList) else (p,))
        return flat[0] if len(flat) == 1 else SumList(tuple(flat))

    def summand(self):
        tok = self.take()
        if tok.isdigit():
            return numeral(int(tok))
        if tok in ("phi", "φ"):
            self.take("(")
            s = self.term()
            self.take(",")
            t = self.term()
            self.take(")")
            return Phi(s, t)
        if tok in ("G", "Γ"):
            self.take("(")
            t = self.term()
            self.take(")")
            return Gamma(t)
        if tok == "ω":
            return OMEGA
        if tok == "a":
            self.take("(")
            sort = self.take()
            if sort not in ("base", "idx", "fix"):
                raise ParseError(f"unknown atom sort {sort!r}")
            self.take(",")
            raw = self.take()
            try:
                pos = freeze(json.loads(raw))
            except ValueError:
                raise ParseError(f"bad atom position {raw!r}") from None
            self.take(")")
            return Atom(sort, pos)
        if tok == "(":
            t = self.term()
            self.take(")")
            return t
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")


def parse_term(text: str, sorts: Optional[Sorts] = None) -> tuple:
    """Parse and normalize; returns (term, input_was_normal)."""
    p = _TermParser(text)
    if not p.toks:
        raise ParseError("empty term")
    raw = p.term()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r} in {text!r}")
    t = renormalize(raw, sorts)
    return t, t == raw


def term(text: str, sorts: Optional[Sorts] = None) -> OrdTerm:
    return parse_term(text, sorts)[0]
