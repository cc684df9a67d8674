"""Presented countable linear orders.

Every order is an immutable dataclass with a decidable membership test, a
strict comparison on members, and a generation order used for enumeration.
Element codes are plain Python values: ints, tuples, or notation terms.
"""
from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass
from typing import Any, Iterator, Optional

from .errors import DomainError

# consecutive empty weight layers tolerated before an order of unknown size
# is declared exhausted
IDLE_CAP = 64
# how many stream items a cone may skip while looking for its first element
CONE_SKIP_CAP = 100_000


def is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def freeze(x):
    """Turn JSON-ish nested lists into nested tuples."""
    if isinstance(x, list):
        return tuple(freeze(i) for i in x)
    return x


def thaw(x):
    if isinstance(x, tuple):
        return [thaw(i) for i in x]
    if hasattr(x, "sort_key"):
        from .notation import format_term
        return format_term(x)
    return x


def sort_key(x):
    if isinstance(x, bool):
        raise DomainError(f"boolean is not an element code: {x!r}")
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, tuple):
        return (1, tuple(sort_key(i) for i in x))
    if hasattr(x, "sort_key"):
        return (2, x.sort_key())
    return (3, repr(x))


class OrderExpr:
    """Base class; subclasses are frozen dataclasses."""

    def member(self, x) -> bool:
        raise NotImplementedError

    def less(self, x, y) -> bool:
        raise NotImplementedError

    def weight(self, x) -> int:
        raise NotImplementedError

    def _layer(self, k: int) -> tuple:
        raise NotImplementedError

    def max_weight(self) -> Optional[int]:
        """Largest weight of a member, -1 if empty, None if unbounded."""
        return None

    def descend(self) -> Optional[Iterator]:
        return None

    def decode(self, v):
        return freeze(v)

    def encode(self, x):
        return thaw(x)

    def to_sexpr(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_sexpr()


@functools.lru_cache(maxsize=None)
def layer(o: OrderExpr, k: int) -> tuple:
    """Members of weight exactly k, in generation order."""
    return o._layer(k)


def _need_nat(x, what):
    if not is_nat(x):
        if isinstance(x, int) and not isinstance(x, bool):
            return False
        raise DomainError(f"{what} expects a natural number code, got {x!r}")
    return True


@dataclass(frozen=True)
class Finite(OrderExpr):
    elems: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elems", tuple(self.elems))
        if not all(is_nat(e) for e in self.elems):
            raise DomainError(f"finite order needs natural codes: {self.elems}")
        if len(set(self.elems)) != len(self.elems):
            raise DomainError(f"finite order has repeated codes: {self.elems}")

    def member(self, x):
        return _need_nat(x, "finite") and x in self.elems

    def less(self, x, y):
        return self.elems.index(x) < self.elems.index(y)

    def weight(self, x):
        return self.elems.index(x)

    def _layer(self, k):
        return (self.elems[k],) if k < len(self.elems) else ()

    def max_weight(self):
        return len(self.elems) - 1

    def to_sexpr(self):
        return "(finite" + "".join(f" {e}" for e in self.elems) + ")"


@dataclass(frozen=True)
class Omega(OrderExpr):
    def member(self, x):
        return _need_nat(x, "omega")

    def less(self, x, y):
        return x < y

    def weight(self, x):
        return x

    def _layer(self, k):
        return (k,)

    def to_sexpr(self):
        return "omega"


@dataclass(frozen=True)
class OmegaStar(OrderExpr):
    def member(self, x):
        return _need_nat(x, "omega*")

    def less(self, x, y):
        return x > y

    def weight(self, x):
        return x

    def _layer(self, k):
        return (k,)

    def descend(self):
        return itertools.count()

    def to_sexpr(self):
        return "omega*"


def _pair(x, what):
    if not (isinstance(x, tuple) and len(x) == 2):
        raise DomainError(f"{what} expects a pair, got {x!r}")
    return x


@dataclass(frozen=True)
class Sum(OrderExpr):
    left: OrderExpr
    right: OrderExpr

    def _side(self, tag):
        if tag == 0:
            return self.left
        if tag == 1:
            return self.right
        raise DomainError(f"sum tag must be 0 or 1, got {tag!r}")

    def member(self, x):
        tag, v = _pair(x, "sum")
        return self._side(tag).member(v)

    def less(self, x, y):
        if x[0] != y[0]:
            return x[0] < y[0]
        return self._side(x[0]).less(x[1], y[1])

    def weight(self, x):
        return self._side(x[0]).weight(x[1])

    def _layer(self, k):
        return tuple((0, v) for v in layer(self.left, k)) + tuple(
            (1, v) for v in layer(self.right, k))

    def max_weight(self):
        a, b = self.left.max_weight(), self.right.max_weight()
        if a is None or b is None:
            return None
        return max(a, b)

    def descend(self):
        s = self.left.descend()
        if s is not None:
            return ((0, v) for v in s)
        s = self.right.descend()
        if s is not None:
            return ((1, v) for v in s)
        return None

    def decode(self, v):
        if not (isinstance(v, (list, tuple)) and len(v) == 2):
            raise DomainError(f"sum element must be [tag, value], got {v!r}")
        return (v[0], self._side(v[0]).decode(v[1]))

    def encode(self, x):
        return [x[0], self._side(x[0]).encode(x[1])]

    def to_sexpr(self):
        return f"(sum {self.left.to_sexpr()} {self.right.to_sexpr()})"


@dataclass(frozen=True)
class ProdLex(OrderExpr):
    """base . exp: exp-many copies of base, compared on the exp coordinate first."""

    base: OrderExpr
    exp: OrderExpr

    def member(self, x):
        b, a = _pair(x, "prodlex")
        return self.base.member(b) and self.exp.member(a)

    def less(self, x, y):
        if x[1] != y[1]:
            return self.exp.less(x[1], y[1])
        return self.base.less(x[0], y[0])

    def weight(self, x):
        return self.base.weight(x[0]) + self.exp.weight(x[1])

    def _layer(self, k):
        out = []
        for i in range(k + 1):
            for b in layer(self.base, i):
                for a in layer(self.exp, k - i):
                    out.append((b, a))
        return tuple(out)

    def max_weight(self):
        a, b = self.base.max_weight(), self.exp.max_weight()
        if a == -1 or b == -1:
            return -1
        if a is None or b is None:
            return None
        return a + b

    def descend(self):
        s = self.exp.descend()
        if s is not None:
            first = enumerate_prefix(self.base, 1)
            if first:
                return ((first[0], a) for a in s)
        s = self.base.descend()
        if s is not None:
            first = enumerate_prefix(self.exp, 1)
            if first:
                return ((b, first[0]) for b in s)
        return None

    def decode(self, v):
        if not (isinstance(v, (list, tuple)) and len(v) == 2):
            raise DomainError(f"prodlex element must be [b, a], got {v!r}")
        return (self.base.decode(v[0]), self.exp.decode(v[1]))

    def encode(self, x):
        return [self.base.encode(x[0]), self.exp.encode(x[1])]

    def to_sexpr(self):
        return f"(prodlex {self.base.to_sexpr()} {self.exp.to_sexpr()})"


@dataclass(frozen=True)
class OmegaPower(OrderExpr):
    """omega^exp: Cantor normal forms with exponents from exp."""

    exp: OrderExpr

    def member(self, x):
        if not isinstance(x, tuple):
            raise DomainError(f"omega-power element must be a sequence, got {x!r}")
        prev = None
        for item in x:
            if not (isinstance(item, tuple) and len(item) == 2):
                raise DomainError(f"omega-power entry must be a pair, got {item!r}")
            e, m = item
            if not is_nat(m) or m == 0 or not self.exp.member(e):
                return False
            if prev is not None and not self.exp.less(e, prev):
                return False
            prev = e
        return True

    def less(self, x, y):
        for (e1, m1), (e2, m2) in zip(x, y):
            if e1 != e2:
                return self.exp.less(e1, e2)
            if m1 != m2:
                return m1 < m2
        return len(x) < len(y)

    def weight(self, x):
        return sum(self.exp.weight(e) + m for e, m in x)

    def _layer(self, k):
        return self.layer_below(k, None)

    def layer_below(self, k, bound):
        """Members of weight k, restricted to those below bound when given.

        The restriction prunes during generation, so sparse cones stay cheap.
        """
        exps = [e for j in range(k) for e in layer(self.exp, j)]
        exps.sort(key=functools.cmp_to_key(
            lambda a, b: -1 if self.exp.less(b, a) else (1 if self.exp.less(a, b) else 0)))
        ws = [self.exp.weight(e) for e in exps]
        out = []

        def rec(i, rem, acc, tight):
            if rem == 0:
                if not tight or len(acc) < len(bound):
                    out.append(tuple(acc))
                return
            if tight and len(acc) >= len(bound):
                return
            for j in range(i, len(exps)):
                e, still = exps[j], tight
                if tight:
                    be, bm = bound[len(acc)]
                    if e != be:
                        if self.exp.less(be, e):
                            continue
                        still = False
                for m in range(1, rem - ws[j] + 1):
                    t = still
                    if still:
                        if m > bm:
                            break
                        t = m == bm
                    acc.append((e, m))
                    rec(j + 1, rem - ws[j] - m, acc, t)
                    acc.pop()

        rec(0, k, [], bound is not None)
        return tuple(sorted(out, key=sort_key))

    def max_weight(self):
        return 0 if self.exp.max_weight() == -1 else None

    def descend(self):
        s = self.exp.descend()
        if s is None:
            return None
        return (((e, 1),) for e in s)

    def decode(self, v):
        if not isinstance(v, (list, tuple)):
            raise DomainError(f"omega-power element must be a list, got {v!r}")
        out = []
        for item in v:
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise DomainError(f"omega-power entry must be [e, m], got {item!r}")
            out.append((self.exp.decode(item[0]), item[1]))
        return tuple(out)

    def encode(self, x):
        return [[self.exp.encode(e), m] for e, m in x]

    def to_sexpr(self):
        return f"(w^ {self.exp.to_sexpr()})"


@dataclass(frozen=True)
class Cone(OrderExpr):
    """Members of parent strictly below bound."""

    parent: OrderExpr
    bound: Any

    def __post_init__(self):
        object.__setattr__(self, "bound", freeze(self.bound))
        if not self.parent.member(self.bound):
            raise DomainError(f"cone bound {self.bound!r} is not a member")

    def member(self, x):
        return self.parent.member(x) and self.parent.less(x, self.bound)

    def less(self, x, y):
        return self.parent.less(x, y)

    def weight(self, x):
        return self.parent.weight(x)

    def _layer(self, k):
        if isinstance(self.parent, OmegaPower):
            return self.parent.layer_below(k, self.bound)
        return tuple(x for x in layer(self.parent, k) if self.parent.less(x, self.bound))

    def max_weight(self):
        if isinstance(self.parent, Omega):
            return self.bound - 1
        return self.parent.max_weight()

    def descend(self):
        s = self.parent.descend()
        if s is None:
            return None

        def gen():
            skipped = 0
            for x in s:
                if self.parent.less(x, self.bound):
                    yield x
                    yield from s
                    return
                skipped += 1
                if skipped > CONE_SKIP_CAP:
                    return
        return gen()

    def decode(self, v):
        return self.parent.decode(v)

    def encode(self, x):
        return self.parent.encode(x)

    def to_sexpr(self):
        return f"(cone {self.parent.to_sexpr()} {json.dumps(self.parent.encode(self.bound))})"


@dataclass(frozen=True)
class FiniteTree:
    nodes: frozenset

    def __post_init__(self):
        nodes = frozenset(freeze(tuple(n)) for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if () not in nodes:
            raise DomainError("tree must contain the root ()")
        for n in nodes:
            if not all(is_nat(i) for i in n):
                raise DomainError(f"tree node {n!r} has non-natural entries")
            if n and n[:-1] not in nodes:
                raise DomainError(f"tree is not prefix closed at {n!r}")

    @classmethod
    def from_json(cls, data) -> "FiniteTree":
        if isinstance(data, dict):
            data = data.get("nodes")
        if not isinstance(data, list):
            raise DomainError("tree JSON must be a list of nodes")
        return cls(frozenset(tuple(n) for n in data))

    def to_json(self):
        return [list(n) for n in sorted(self.nodes, key=sort_key)]

    def children(self, n):
        return sorted((m for m in self.nodes if len(m) == len(n) + 1 and m[:-1] == n),
                      key=lambda m: m[-1])

    def __len__(self):
        return len(self.nodes)


def kb_less(s, r) -> bool:
    """Kleene-Brouwer comparison of two sequences."""
    for a, b in zip(s, r):
        if a != b:
            return a < b
    return len(s) > len(r)


@dataclass(frozen=True)
class KB(OrderExpr):
    tree: FiniteTree

    def member(self, x):
        if not isinstance(x, tuple):
            raise DomainError(f"KB element must be a sequence, got {x!r}")
        return x in self.tree.nodes

    def less(self, x, y):
        return kb_less(x, y)

    def weight(self, x):
        return len(x) + sum(x)

    def _layer(self, k):
        return tuple(sorted((n for n in self.tree.nodes if self.weight(n) == k), key=sort_key))

    def max_weight(self):
        return max(self.weight(n) for n in self.tree.nodes)

    def to_sexpr(self):
        return f"(kb {json.dumps(self.tree.to_json(), separators=(',', ':'))})"


def kb_order(t: FiniteTree) -> KB:
    return KB(t)


# -- module-level operations --------------------------------------------------

def member(o: OrderExpr, x) -> bool:
    return o.member(freeze(x))


def less(o: OrderExpr, x, y) -> bool:
    x, y = freeze(x), freeze(y)
    for v in (x, y):
        if not o.member(v):
            raise DomainError(f"{v!r} is not a member of {o.to_sexpr()}")
    return o.less(x, y)


def enumerate_prefix(o: OrderExpr, n: int) -> list:
    out = []
    mw = o.max_weight()
    k = idle = 0
    while len(out) < n:
        if mw is not None and k > mw:
            break
        lay = layer(o, k)
        if lay:
            idle = 0
            out.extend(lay)
        else:
            idle += 1
            if mw is None and idle > IDLE_CAP:
                break
        k += 1
    return out[:n]


def order_size(o: OrderExpr) -> Optional[int]:
    """Number of members when the order is known to be finite."""
    mw = o.max_weight()
    if mw is None:
        return None
    return sum(len(layer(o, k)) for k in range(mw + 1))


def element_index(o: OrderExpr, x) -> int:
    """Position of x in the generation order."""
    w = o.weight(x)
    return sum(len(layer(o, j)) for j in range(w)) + layer(o, w).index(x)


def nat_code(o: OrderExpr, x) -> int:
    """The natural number standing for x when codes must be compared as numbers."""
    if is_nat(x):
        return x
    return element_index(o, x)


def find_descending(o: OrderExpr, fuel: int) -> Optional[list]:
    if fuel <= 0:
        raise DomainError("fuel must be positive")
    s = o.descend()
    if s is None:
        return None
    chain = list(itertools.islice(s, fuel))
    if len(chain) < fuel:
        return None
    if any(not o.less(b, a) for a, b in zip(chain, chain[1:])):
        return None
    return chain


def check_embedding(f: dict, a: OrderExpr, b: OrderExpr) -> bool:
    items = [(freeze(k), freeze(v)) for k, v in f.items()]
    for k, v in items:
        if not a.member(k):
            raise DomainError(f"{k!r} is not a member of the source order")
        if not b.member(v):
            raise DomainError(f"{v!r} is not a member of the target order")
    for (x, fx), (y, fy) in itertools.permutations(items, 2):
        if a.less(x, y) and not b.less(fx, fy):
            return False
    return True
