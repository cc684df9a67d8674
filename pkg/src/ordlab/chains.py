"""Deduction chains, canonical-tree proof search and countermodels.

A chain grows one sequent at a time. Each step handles one item of a fair
round-robin schedule that is rebuilt at the start of every round from the
formulas present. A round that changes nothing means the chain is
saturated; its negative membership literals then give a countermodel.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import DomainError, EvalError, SaturationError
from .tait import (LITERALS, All1, All2, And, Eq, Ex1, Ex2, Mem, Neq, Node, NotMem, NVar, Or,
                   PreProof, Rule, SetConst, SetVar, all_names, eval_term, format_formula,
                   free_num_vars, free_set_vars, instance_of, is_axiomatic, literal_valid, num,
                   poly, sequent_key, set_symbols, subst_num, subst_set)


@dataclass(frozen=True)
class FragmentSpec:
    constants: dict = field(default_factory=dict)
    var_prefix: str = "Y"

    @classmethod
    def from_json(cls, data) -> "FragmentSpec":
        data = data or {}
        return cls({k: frozenset(v) for k, v in data.get("constants", {}).items()},
                   data.get("var_prefix", "Y"))

    def symbols(self, seq) -> list:
        consts = [SetConst(k) for k in sorted(self.constants)]
        free = sorted({v for f in seq for v in free_set_vars(f)})
        return consts + [SetVar(v) for v in free]


@dataclass(frozen=True)
class DeductionChain:
    sequents: tuple
    trace: tuple
    steps: tuple = ()
    round: int = 0
    pending: tuple = ()
    changed: bool = False
    counters: tuple = ()
    done: frozenset = frozenset()
    placeholders: tuple = ()
    eigen: int = 0
    saturated: bool = False

    @classmethod
    def start(cls, goal) -> "DeductionChain":
        return cls((frozenset(goal),), ("goal",))

    @property
    def last(self) -> frozenset:
        return self.sequents[-1]


@dataclass(frozen=True)
class Closed:
    chain: DeductionChain
    axiom: Rule


@dataclass(frozen=True)
class Extended:
    chains: tuple


@dataclass(frozen=True)
class Fixpoint:
    chain: DeductionChain


def _schedule(seq, r: int, frag: FragmentSpec) -> tuple:
    fs = sorted(seq, key=sequent_key)
    items = [("f", f) for f in fs if isinstance(f, (And, Or, All1, All2))]
    items += [("ex1", f, n) for f in fs if isinstance(f, Ex1) for n in range(r + 1)]
    syms = frag.symbols(seq)[: r + 1]
    items += [("ex2", f, u) for f in fs if isinstance(f, Ex2) for u in syms]
    return tuple(items)


def _fresh(prefix: str, used: set, start: int = 0) -> tuple:
    for i in itertools.count(start):
        if f"{prefix}{i}" not in used:
            return f"{prefix}{i}", i


def step(c: DeductionChain, frag: FragmentSpec, schematic: bool = False):
    last = c.last
    ax = is_axiomatic(last, frag.constants)
    if ax is not None:
        return Closed(c, ax)
    pending, rnd, changed = c.pending, c.round, c.changed
    if not pending:
        if rnd > 0 and not changed:
            return Fixpoint(replace(c, saturated=True))
        pending = _schedule(last, rnd, frag)
        rnd, changed = rnd + 1, False
        if not pending:
            return Fixpoint(replace(c, round=rnd, saturated=True))
    item, rest = pending[0], pending[1:]
    f = item[1]
    counters = dict(c.counters)
    done, placeholders, eigen = c.done, c.placeholders, c.eigen
    outs = []  # (sequent, clause, rule tag, witness)
    if item[0] == "f" and isinstance(f, And):
        if f.left in last or f.right in last:
            outs.append((last, "and-present", "Rep", None))
        else:
            outs.append((last | {f.left}, "and-left", "AndInt", None))
            outs.append((last | {f.right}, "and-right", "AndInt", None))
    elif item[0] == "f" and isinstance(f, Or):
        outs.append((last | {f.left, f.right}, "or", "OrInt", None))
    elif item[0] == "f" and isinstance(f, All1):
        if schematic:
            if f in done:
                outs.append((last, "all1-done", "Rep", None))
            else:
                used = set(placeholders) | {n for g in last for n in all_names(g)}
                p, _ = _fresh("_p", used)
                placeholders = placeholders + (p,)
                done = done | {f}
                outs.append((last | {subst_num(f.body, f.var, NVar(p))}, "all1", "AllInt1", p))
        else:
            n = counters.get(f, 0)
            counters[f] = n + 1
            outs.append((last | {subst_num(f.body, f.var, num(n))}, "all1", "AllInt1", num(n)))
    elif item[0] == "f" and isinstance(f, All2):
        if f in done:
            outs.append((last, "all2-done", "Rep", None))
        else:
            used = {v for g in last for v in free_set_vars(g)} | {n for g in last for n in all_names(g)}
            y, i = _fresh(frag.var_prefix, used, eigen)
            eigen = i + 1
            done = done | {f}
            outs.append((last | {subst_set(f.body, f.var, SetVar(y))}, "all2", "AllInt2", y))
    elif item[0] == "ex1":
        t = num(item[2])
        outs.append((last | {subst_num(f.body, f.var, t)}, "ex1", "ExInt1", t))
    elif item[0] == "ex2":
        u = item[2]
        tag = "ExInt2C" if isinstance(u, SetConst) else "ExInt2V"
        outs.append((last | {subst_set(f.body, f.var, u)}, "ex2", tag, u.name))
    else:
        outs.append((last, "idle", "Rep", None))
    chains = []
    for seq, clause, tag, w in outs:
        rule = Rule(tag, f if tag != "Rep" else None, w)
        chains.append(replace(
            c, sequents=c.sequents + (seq,), trace=c.trace + (clause,),
            steps=c.steps + (rule,), round=rnd, pending=rest,
            changed=changed or seq != last, counters=tuple(counters.items()), done=done,
            placeholders=placeholders, eigen=eigen))
    return Extended(tuple(chains))


# -- valuations -------------------------------------------------------------------------

@dataclass(frozen=True)
class Valuation:
    assignment: dict

    def get(self, name) -> frozenset:
        return self.assignment.get(name, frozenset())

    def to_json(self) -> dict:
        return {k: sorted(v) for k, v in sorted(self.assignment.items())}


def extract_valuation(c: DeductionChain) -> Valuation:
    if not c.saturated:
        raise SaturationError("valuation needs a saturated chain")
    out: dict = {}
    seen = set().union(*c.sequents)
    for f in seen:
        for s in set_symbols(f):
            if isinstance(s, SetVar):
                out.setdefault(s.name, set())
    for f in seen:
        if isinstance(f, NotMem) and isinstance(f.set, SetVar):
            try:
                out[f.set.name].add(eval_term(f.term))
            except EvalError:
                pass
    return Valuation({k: frozenset(v) for k, v in out.items()})


def _holds(f, v: Valuation, bound: int, consts: dict, env: dict, senv: dict) -> bool:
    def ext(sym):
        if isinstance(sym, SetVar) and sym.name in senv:
            return senv[sym.name]
        if isinstance(sym, SetConst) and sym.name in consts:
            return consts[sym.name]
        return v.get(sym.name)

    if isinstance(f, Eq):
        return eval_term(f.left, env) == eval_term(f.right, env)
    if isinstance(f, Neq):
        return eval_term(f.left, env) != eval_term(f.right, env)
    if isinstance(f, Mem):
        return eval_term(f.term, env) in ext(f.set)
    if isinstance(f, NotMem):
        return eval_term(f.term, env) not in ext(f.set)
    if isinstance(f, And):
        return _holds(f.left, v, bound, consts, env, senv) and _holds(f.right, v, bound, consts, env, senv)
    if isinstance(f, Or):
        return _holds(f.left, v, bound, consts, env, senv) or _holds(f.right, v, bound, consts, env, senv)
    if isinstance(f, (All1, Ex1)):
        q = all if isinstance(f, All1) else any
        return q(_holds(f.body, v, bound, consts, {**env, f.var: n}, senv)
                 for n in range(bound + 1))
    q = all if isinstance(f, All2) else any
    ranges = [v.get(k) for k in sorted(v.assignment)] + [consts[k] for k in sorted(consts)]
    return q(_holds(f.body, v, bound, consts, env, {**senv, f.var: s}) for s in ranges)


def eval_under(s, v: Valuation, bound: int, constants: Optional[dict] = None) -> bool:
    """Truth of the disjunction s under v, quantifiers cut down to finite ranges."""
    return any(_holds(f, v, bound, constants or {}, {}, {}) for f in s)


# -- path properties ----------------------------------------------------------------------

def check_path_properties(c: DeductionChain, frag: FragmentSpec) -> list:
    """Violations of the saturated-path properties; empty when all hold."""
    P = set().union(*c.sequents)
    errs = []
    for f in sorted(P, key=sequent_key):
        k = format_formula(f)
        if isinstance(f, LITERALS) and not free_num_vars(f) and literal_valid(f, frag.constants):
            errs.append(f"true literal on path: {k}")
        if isinstance(f, Mem):
            for g in P:
                if isinstance(g, NotMem) and g.set == f.set and poly(g.term) == poly(f.term):
                    errs.append(f"complementary membership literals: {k}")
        if isinstance(f, Or) and not (f.left in P and f.right in P):
            errs.append(f"disjunction not decomposed: {k}")
        if isinstance(f, And) and not (f.left in P or f.right in P):
            errs.append(f"conjunction without a conjunct: {k}")
        if isinstance(f, All1) and not any(instance_of(f.body, f.var, g) is not None
                                           for g in P if type(g) is type(f.body)):
            errs.append(f"universal without an instance: {k}")
        if isinstance(f, All2) and not any(
                instance_of(f.body, f.var, g, second_order=True) is not None
                for g in P if type(g) is type(f.body)):
            errs.append(f"set universal without an instance: {k}")
        if isinstance(f, Ex1):
            for n in range(c.round):
                if subst_num(f.body, f.var, num(n)) not in P:
                    errs.append(f"existential missing instance {n}: {k}")
        if isinstance(f, Ex2):
            for u in frag.symbols(c.last)[: c.round]:
                if subst_set(f.body, f.var, u) not in P:
                    errs.append(f"set existential missing instance {u.name}: {k}")
    return errs


# -- search -----------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofFound:
    proof: PreProof


@dataclass(frozen=True)
class Refuted:
    chain: DeductionChain
    valuation: Valuation


@dataclass(frozen=True)
class OutOfFuel:
    stats: dict


@dataclass
class _TreeNode:
    chain: DeductionChain
    kids: list = field(default_factory=list)
    axiom: Optional[Rule] = None


def _concretize(c: DeductionChain, frag: FragmentSpec, limit: int) -> Optional[DeductionChain]:
    """Give placeholders values that keep every sequent of the chain unprovable."""
    names = list(c.placeholders)
    if not names:
        return c
    for values in itertools.product(range(limit), repeat=len(names)):
        seqs = []
        for s in c.sequents:
            for n, val in zip(names, values):
                s = frozenset(subst_num(f, n, num(val)) for f in s)
            seqs.append(s)
        if all(is_axiomatic(s, frag.constants) is None for s in seqs):
            return replace(c, sequents=tuple(seqs), placeholders=())
    return None


def _assemble(tree: list, i: int, frag: FragmentSpec, fuel: int) -> PreProof:
    nodes: dict = {}
    counter = itertools.count()

    def build(j):
        tn = tree[j]
        seq = tn.chain.last
        while tn.axiom is None and len(tn.kids) == 1 and tree[tn.kids[0]].chain.steps[-1].tag == "Rep":
            tn = tree[tn.kids[0]]
        nid = next(counter)
        if tn.axiom is not None:
            nodes[nid] = Node(nid, seq, tn.axiom)
            return nid
        rule = tree[tn.kids[0]].chain.steps[-1]
        kids = tuple(build(k) for k in tn.kids)
        nodes[nid] = Node(nid, seq, Rule(rule.tag, rule.principal, rule.witness, kids), kids)
        return nid

    root = build(i)
    mode = "schematic" if any(n.rule.tag == "AllInt1" for n in nodes.values()) else "finite"
    return PreProof(root, nodes, mode, dict(frag.constants), 10)


def search(goal, frag: FragmentSpec, fuel: int):
    if fuel <= 0:
        raise DomainError("fuel must be positive")
    tree = [_TreeNode(DeductionChain.start(goal))]
    queue = deque([0])
    steps = stuck = 0
    while queue:
        if steps >= fuel:
            return OutOfFuel({"steps": steps, "open": len(queue), "nodes": len(tree),
                              "stuck": stuck})
        i = queue.popleft()
        steps += 1
        res = step(tree[i].chain, frag, schematic=True)
        if isinstance(res, Closed):
            tree[i].axiom = res.axiom
        elif isinstance(res, Fixpoint):
            concrete = _concretize(res.chain, frag, limit=16)
            if concrete is not None:
                return Refuted(concrete, extract_valuation(concrete))
            stuck += 1
        else:
            for ch in res.chains:
                tree[i].kids.append(len(tree))
                queue.append(len(tree))
                tree.append(_TreeNode(ch))
    if stuck:
        return OutOfFuel({"steps": steps, "open": 0, "nodes": len(tree), "stuck": stuck})
    return ProofFound(_assemble(tree, 0, frag, fuel))
