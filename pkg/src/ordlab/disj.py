"""Disjunction of two orders and the embedding read off a descending chain.

disj(a, b) consists of the nonempty finite sequences of pairs (x, y) that
strictly decrease in both coordinates. It is well founded exactly when a or
b is, and a descending chain in b lets every prefix of a embed into it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import DomainError, WitnessError
from .orders import OrderExpr, enumerate_prefix, layer, nat_code, order_size, sort_key


def cantor(x: int, y: int) -> int:
    return (x + y) * (x + y + 1) // 2 + y


@dataclass(frozen=True)
class Disj(OrderExpr):
    alpha: OrderExpr
    beta: OrderExpr

    def pair_code(self, p) -> int:
        return cantor(nat_code(self.alpha, p[0]), nat_code(self.beta, p[1]))

    def _below(self, p, q) -> bool:
        return self.alpha.less(p[0], q[0]) and self.beta.less(p[1], q[1])

    def member(self, x):
        if not isinstance(x, tuple):
            raise DomainError(f"disj element must be a sequence of pairs, got {x!r}")
        if not x:
            return False
        for p in x:
            if not (isinstance(p, tuple) and len(p) == 2):
                raise DomainError(f"disj entry must be a pair, got {p!r}")
            if not (self.alpha.member(p[0]) and self.beta.member(p[1])):
                return False
        return all(self._below(q, p) for p, q in zip(x, x[1:]))

    def less(self, x, y):
        for p, q in zip(x, y):
            if p != q:
                return self.pair_code(p) < self.pair_code(q)
        return len(x) > len(y)

    def weight(self, x):
        return sum(self.alpha.weight(a) + self.beta.weight(b) + 1 for a, b in x)

    def _pairs_upto(self, w):
        out = []
        for i in range(w):
            for j in range(w - i):
                for a in layer(self.alpha, i):
                    for b in layer(self.beta, j):
                        out.append(((a, b), i + j + 1))
        return out

    def _layer(self, k):
        pairs = self._pairs_upto(k)
        out = []

        def rec(prev, rem, acc):
            if rem == 0:
                out.append(tuple(acc))
                return
            for p, w in pairs:
                if w <= rem and (prev is None or self._below(p, prev)):
                    acc.append(p)
                    rec(p, rem - w, acc)
                    acc.pop()

        if k > 0:
            rec(None, k, [])
        return tuple(sorted(out, key=sort_key))

    def max_weight(self):
        n, m = order_size(self.alpha), order_size(self.beta)
        if n == 0 or m == 0:
            return -1
        if n is None or m is None:
            return None
        return min(n, m) * (self.alpha.max_weight() + self.beta.max_weight() + 1)

    def descend(self):
        sa, sb = self.alpha.descend(), self.beta.descend()
        if sa is None or sb is None:
            return None

        def gen():
            acc = ()
            for p in zip(sa, sb):
                acc = acc + (p,)
                yield acc
        return gen()

    def decode(self, v):
        if not isinstance(v, (list, tuple)):
            raise DomainError(f"disj element must be a list, got {v!r}")
        out = []
        for p in v:
            if not (isinstance(p, (list, tuple)) and len(p) == 2):
                raise DomainError(f"disj entry must be [a, b], got {p!r}")
            out.append((self.alpha.decode(p[0]), self.beta.decode(p[1])))
        return tuple(out)

    def encode(self, x):
        return [[self.alpha.encode(a), self.beta.encode(b)] for a, b in x]

    def to_sexpr(self):
        return f"(disj {self.alpha.to_sexpr()} {self.beta.to_sexpr()})"


def disj(a: OrderExpr, b: OrderExpr) -> Disj:
    return Disj(a, b)


class _ChainReader:
    """Lazily pulls a b-chain and checks that it keeps descending."""

    def __init__(self, b: OrderExpr, chain: Iterable):
        self.b = b
        self.it = iter(chain)
        self.items: list = []

    def __getitem__(self, k):
        while len(self.items) <= k:
            try:
                y = next(self.it)
            except StopIteration:
                raise WitnessError(f"chain ended after {len(self.items)} elements") from None
            if isinstance(y, list):
                y = self.b.decode(y)
            if not self.b.member(y):
                raise WitnessError(f"chain element {y!r} is not a member")
            if self.items and not self.b.less(y, self.items[-1]):
                raise WitnessError(
                    f"chain is not descending at index {len(self.items)}: "
                    f"{y!r} is not below {self.items[-1]!r}")
            self.items.append(y)
        return self.items[k]


def embed_from_chain(a: OrderExpr, b: OrderExpr, bchain: Iterable, prefix: int,
                     elements: Optional[list] = None) -> dict:
    """Map the first `prefix` elements of a into disj(a, b).

    `elements` fixes the listing a0, a1, ... (default: generation order).
    A new element above everything seen starts a fresh one-pair chain; any
    other element extends the image of the least earlier element above it.
    Each new pair takes the first chain index whose pair code beats every
    code used so far.
    """
    d = Disj(a, b)
    bs = _ChainReader(b, bchain)
    if elements is None:
        elements = enumerate_prefix(a, prefix)
    elements = list(elements)[:prefix]
    f: dict = {}
    last_index: dict = {}
    top = -1
    for x in elements:
        if not a.member(x):
            raise DomainError(f"{x!r} is not a member of the source order")
        if x in f:
            continue
        above = [y for y in f if a.less(x, y)]
        if above:
            v = above[0]
            for y in above[1:]:
                if a.less(y, v):
                    v = y
            k, head = last_index[v] + 1, f[v]
        else:
            k, head = 0, ()
        while d.pair_code((x, bs[k])) <= top:
            k += 1
        f[x] = head + ((x, bs[k]),)
        last_index[x] = k
        top = d.pair_code((x, bs[k]))
    return f
