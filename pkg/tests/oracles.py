"""Independent reference implementations used as test oracles.

None of these import the comparison code under test; they work on plain
Python data so agreement with the library is meaningful.
"""
import itertools
import math


# -- Cantor normal forms below epsilon_0 ---------------------------------------
# An ordinal is a tuple of exponents in non-increasing order, each exponent
# itself such a tuple. () is 0, ((),) is 1, (((),),) is omega.

def cnf_cmp(a, b):
    for x, y in zip(a, b):
        c = cnf_cmp(x, y)
        if c:
            return c
    return (len(a) > len(b)) - (len(a) < len(b))


def cnf_is_normal(a):
    return all(cnf_is_normal(e) for e in a) and all(
        cnf_cmp(x, y) >= 0 for x, y in zip(a, a[1:]))


def cnf_nat(n):
    return ((),) * n


def cnf_all(height, width):
    """All normal forms with nesting depth <= height and at most width summands per level."""
    if height == 0:
        return [()]
    exps = cnf_all(height - 1, width)
    exps.sort(key=_cnf_key)
    out = [()]
    for k in range(1, width + 1):
        for combo in itertools.combinations_with_replacement(range(len(exps)), k):
            out.append(tuple(exps[i] for i in sorted(combo, reverse=True)))
    return out


class _cnf_key:
    def __init__(self, a):
        self.a = a

    def __lt__(self, other):
        return cnf_cmp(self.a, other.a) < 0


def term_to_cnf(t):
    """Read an OrdTerm below epsilon_0 structurally: phi(0,b) is omega^b."""
    name = type(t).__name__
    if name == "Zero":
        return ()
    if name == "SumList":
        return tuple(e for s in t.summands for e in term_to_cnf(s))
    if name == "Phi":
        assert type(t.index).__name__ == "Zero", t
        return (term_to_cnf(t.arg),)
    raise AssertionError(f"not below epsilon_0: {t!r}")


# -- base-omega coefficient vectors below omega^n ------------------------------

def coeff_vector(elem, n):
    """omega^(n-1)*c_(n-1) + ... + c_0 as the tuple (c_(n-1), ..., c_0)."""
    v = [0] * n
    for e, m in elem:
        v[n - 1 - e] += m
    return tuple(v)


# -- Kleene-Brouwer ---------------------------------------------------------------

def kb_sorted(nodes):
    """Sort sequences so that extensions come first, then leftmost-first."""
    return sorted(nodes, key=lambda s: tuple(s) + (math.inf,))


def random_tree(rng, max_nodes):
    nodes = [()]
    target = rng.randint(1, max_nodes)
    while len(nodes) < target:
        parent = rng.choice(nodes)
        kids = [n for n in nodes if len(n) == len(parent) + 1 and n[:-1] == parent]
        nodes.append(parent + (len(kids),))
    return nodes


def full_binary(depth):
    return [s for d in range(depth + 1) for s in itertools.product((0, 1), repeat=d)]


# -- descending chains in a product ------------------------------------------------

def descending_chains(A, B, max_len):
    """All nonempty chains of pairs strictly decreasing in both coordinates.

    A and B are lists of codes listed in increasing order.
    """
    pairs = [(a, b) for a in A for b in B]
    out = []

    def ext(chain):
        out.append(tuple(chain))
        if len(chain) == max_len:
            return
        la, lb = chain[-1]
        for a, b in pairs:
            if A.index(a) < A.index(la) and B.index(b) < B.index(lb):
                ext(chain + [(a, b)])

    for p in pairs:
        ext([p])
    return out


def cantor_pair(x, y):
    return (x + y) * (x + y + 1) // 2 + y
