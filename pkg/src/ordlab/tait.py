"""Tait-style one-sided sequent calculus for second-order arithmetic.

Formulas are in negation normal form over the term language 0, S, +, *.
A pre-proof is a finite tree of nodes, each carrying a sequent and the rule
that was applied there. In schematic mode an omega-rule node has a single
template premise in which a placeholder variable stands for the numeral.
"""
from __future__ import annotations

import itertools
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import EvalError, ParseError, RankError
from .notation import ONE, ZERO, OrdTerm, log_omega, mk_phi, mk_sum, numeral, summands
from .orders import FiniteTree


# -- terms --------------------------------------------------------------------------

class Term:
    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class TZero(Term):
    pass


@dataclass(frozen=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class NVar(Term):
    name: str


def num(n: int) -> Term:
    t: Term = TZero()
    for _ in range(n):
        t = Succ(t)
    return t


def _as_num(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, Succ):
        t, n = t.arg, n + 1
    return n if isinstance(t, TZero) else None


def eval_term(t: Term, env: Optional[dict] = None) -> int:
    if isinstance(t, TZero):
        return 0
    if isinstance(t, Succ):
        return eval_term(t.arg, env) + 1
    if isinstance(t, Add):
        return eval_term(t.left, env) + eval_term(t.right, env)
    if isinstance(t, Mul):
        return eval_term(t.left, env) * eval_term(t.right, env)
    if isinstance(t, NVar):
        if env is not None and t.name in env:
            return env[t.name]
        raise EvalError(f"free number variable {t.name}")
    raise EvalError(f"not a term: {t!r}")


def term_vars(t: Term) -> set:
    if isinstance(t, NVar):
        return {t.name}
    if isinstance(t, Succ):
        return term_vars(t.arg)
    if isinstance(t, (Add, Mul)):
        return term_vars(t.left) | term_vars(t.right)
    return set()


def subst_term(t: Term, var: str, s: Term) -> Term:
    if isinstance(t, NVar):
        return s if t.name == var else t
    if isinstance(t, Succ):
        return Succ(subst_term(t.arg, var, s))
    if isinstance(t, Add):
        return Add(subst_term(t.left, var, s), subst_term(t.right, var, s))
    if isinstance(t, Mul):
        return Mul(subst_term(t.left, var, s), subst_term(t.right, var, s))
    return t


# polynomials: {monomial: coefficient}, a monomial is a sorted tuple of (var, power)

def _pmul(p: dict, q: dict) -> dict:
    out: Counter = Counter()
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            powers = Counter(dict(m1))
            powers.update(dict(m2))
            out[tuple(sorted(powers.items()))] += c1 * c2
    return {m: c for m, c in out.items() if c}


def _padd(p: dict, q: dict, sign: int = 1) -> dict:
    out = Counter(p)
    for m, c in q.items():
        out[m] += sign * c
    return {m: c for m, c in out.items() if c}


def poly(t: Term) -> dict:
    if isinstance(t, TZero):
        return {}
    if isinstance(t, Succ):
        return _padd(poly(t.arg), {(): 1})
    if isinstance(t, Add):
        return _padd(poly(t.left), poly(t.right))
    if isinstance(t, Mul):
        return _pmul(poly(t.left), poly(t.right))
    if isinstance(t, NVar):
        return {((t.name, 1),): 1}
    raise EvalError(f"not a term: {t!r}")


def _pvars(p: dict) -> set:
    return {v for m in p for v, _ in m}


def _peval1(p: dict, x: int) -> int:
    return sum(c * x ** (m[0][1] if m else 0) for m, c in p.items())


def _never_zero(p: dict) -> bool:
    """Whether p has no root in the naturals (decided for <= 1 variable)."""
    if not p:
        return False
    vs = _pvars(p)
    if not vs:
        return True
    c0 = p.get((), 0)
    if c0 == 0:
        return False
    if len(vs) == 1:
        n = abs(c0)
        divisors = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
        divisors += [n // d for d in divisors]
        return all(_peval1(p, d) != 0 for d in divisors)
    signs = {c > 0 for c in p.values()}
    return len(signs) == 1


def _value_set_avoids(p: dict, ext: frozenset) -> bool:
    """Whether p(x) lies outside ext for every natural x (<= 1 variable)."""
    vs = _pvars(p)
    if not vs:
        return p.get((), 0) not in ext
    if len(vs) > 1:
        return False
    top = max(ext, default=-1)
    x = 0
    while True:
        v = _peval1(p, x)
        if v > top:
            return True
        if v in ext:
            return False
        x += 1


# -- formulas -----------------------------------------------------------------------

class Formula:
    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class SetConst:
    name: str


@dataclass(frozen=True)
class SetVar:
    name: str


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mem(Formula):
    term: Term
    set: Any


@dataclass(frozen=True)
class NotMem(Formula):
    term: Term
    set: Any


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class All1(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Ex1(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class All2(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Ex2(Formula):
    var: str
    body: Formula


LITERALS = (Eq, Neq, Mem, NotMem)
_DUAL = {Eq: Neq, Neq: Eq, Mem: NotMem, NotMem: Mem, And: Or, Or: And,
         All1: Ex1, Ex1: All1, All2: Ex2, Ex2: All2}


def negate(f: Formula) -> Formula:
    k = type(f)
    if k in (Eq, Neq):
        return _DUAL[k](f.left, f.right)
    if k in (Mem, NotMem):
        return _DUAL[k](f.term, f.set)
    if k in (And, Or):
        return _DUAL[k](negate(f.left), negate(f.right))
    return _DUAL[k](f.var, negate(f.body))


def subst_num(f: Formula, var: str, t: Term) -> Formula:
    k = type(f)
    if k in (Eq, Neq):
        return k(subst_term(f.left, var, t), subst_term(f.right, var, t))
    if k in (Mem, NotMem):
        return k(subst_term(f.term, var, t), f.set)
    if k in (And, Or):
        return k(subst_num(f.left, var, t), subst_num(f.right, var, t))
    if k in (All1, Ex1) and f.var == var:
        return f
    return k(f.var, subst_num(f.body, var, t))


def subst_set(f: Formula, var: str, sym) -> Formula:
    k = type(f)
    if k in (Mem, NotMem):
        return k(f.term, sym) if f.set == SetVar(var) else f
    if k in (Eq, Neq):
        return f
    if k in (And, Or):
        return k(subst_set(f.left, var, sym), subst_set(f.right, var, sym))
    if k in (All2, Ex2) and f.var == var:
        return f
    return k(f.var, subst_set(f.body, var, sym))


def free_num_vars(f: Formula) -> set:
    k = type(f)
    if k in (Eq, Neq):
        return term_vars(f.left) | term_vars(f.right)
    if k in (Mem, NotMem):
        return term_vars(f.term)
    if k in (And, Or):
        return free_num_vars(f.left) | free_num_vars(f.right)
    if k in (All1, Ex1):
        return free_num_vars(f.body) - {f.var}
    return free_num_vars(f.body)


def set_symbols(f: Formula) -> set:
    """Free set variables and set constants occurring in f."""
    k = type(f)
    if k in (Mem, NotMem):
        return {f.set}
    if k in (Eq, Neq):
        return set()
    if k in (And, Or):
        return set_symbols(f.left) | set_symbols(f.right)
    if k in (All2, Ex2):
        return set_symbols(f.body) - {SetVar(f.var)}
    return set_symbols(f.body)


def free_set_vars(f: Formula) -> set:
    return {s.name for s in set_symbols(f) if isinstance(s, SetVar)}


def all_names(f: Formula) -> set:
    """Every variable name occurring in f, bound or free."""
    k = type(f)
    if k in (Eq, Neq):
        return term_vars(f.left) | term_vars(f.right)
    if k in (Mem, NotMem):
        return term_vars(f.term) | {f.set.name}
    if k in (And, Or):
        return all_names(f.left) | all_names(f.right)
    return all_names(f.body) | {f.var}


def instance_of(template: Formula, var: str, g: Formula, second_order: bool = False):
    """The value v with template[var := v] == g, or None."""
    found: list = []

    def bind(v):
        if found and found[0] != v:
            return False
        if not found:
            found.append(v)
        return True

    def mterm(t, u):
        if isinstance(t, NVar) and t.name == var and not second_order:
            return bind(u)
        if type(t) is not type(u):
            return False
        if isinstance(t, Succ):
            return mterm(t.arg, u.arg)
        if isinstance(t, (Add, Mul)):
            return mterm(t.left, u.left) and mterm(t.right, u.right)
        return t == u

    def mform(a, b, bound):
        if type(a) is not type(b):
            return False
        k = type(a)
        if k in (Eq, Neq):
            return mterm(a.left, b.left) and mterm(a.right, b.right)
        if k in (Mem, NotMem):
            if not mterm(a.term, b.term):
                return False
            if second_order and a.set == SetVar(var) and var not in bound:
                return bind(b.set)
            return a.set == b.set
        if k in (And, Or):
            return mform(a.left, b.left, bound) and mform(a.right, b.right, bound)
        if a.var != b.var:
            return False
        shadow = (k in (All1, Ex1)) != second_order
        if shadow and a.var == var:
            return a == b
        return mform(a.body, b.body, bound)

    if mform(template, g, frozenset()):
        if found:
            return found[0]
        return TZero() if not second_order else None
    return None


# -- text syntax ---------------------------------------------------------------------

_CONST = re.compile(r"C\d+$")


def format_term(t: Term) -> str:
    n = _as_num(t)
    if n is not None:
        return str(n)
    if isinstance(t, Succ):
        return f"S({format_term(t.arg)})"
    if isinstance(t, Add):
        return f"({format_term(t.left)} + {format_term(t.right)})"
    if isinstance(t, Mul):
        return f"({format_term(t.left)} * {format_term(t.right)})"
    return t.name


def format_formula(f: Formula, nested: bool = False) -> str:
    k = type(f)
    if k is Eq:
        out = f"{format_term(f.left)} = {format_term(f.right)}"
    elif k is Neq:
        out = f"{format_term(f.left)} != {format_term(f.right)}"
    elif k is Mem:
        return f"{format_term(f.term)} in {f.set.name}"
    elif k is NotMem:
        return f"{format_term(f.term)} notin {f.set.name}"
    elif k in (And, Or):
        op = "&" if k is And else "|"
        out = f"{format_formula(f.left, True)} {op} {format_formula(f.right, True)}"
        return f"({out})" if nested else out
    else:
        q = "A" if k in (All1, All2) else "E"
        out = f"{q} {f.var}. {format_formula(f.body, True)}"
        return f"({out})" if nested else out
    return out


_TOK = re.compile(r"\s*(!=|[=()&|.+*]|[A-Za-z_][A-Za-z0-9_]*|\d+)")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOK.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character at {pos} in {self.text!r}")
            self.toks.append(m.group(1))
            pos = m.end()
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ParseError(f"expected {want or 'more input'}, found {tok!r} in {self.text!r}")
        self.i += 1
        return tok

    def formula(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok in ("A", "E") and self.peek(2) == ".":
            self.take()
            var = self.take()
            if not re.match(r"[A-Za-z_]", var):
                raise ParseError(f"bad bound variable {var!r}")
            self.take(".")
            body = self.formula()
            if var[0].isupper():
                if _CONST.match(var):
                    raise ParseError(f"cannot bind constant {var}")
                return (All2 if tok == "A" else Ex2)(var, body)
            return (All1 if tok == "A" else Ex1)(var, body)
        if tok == "(":
            save = self.i
            try:
                self.take("(")
                f = self.formula()
                self.take(")")
                if self.peek() not in ("=", "!=", "in", "notin", "+", "*"):
                    return f
            except ParseError:
                pass
            self.i = save
        return self.literal()

    def literal(self):
        left = self.term()
        op = self.take()
        if op in ("=", "!="):
            right = self.term()
            return Eq(left, right) if op == "=" else Neq(left, right)
        if op in ("in", "notin"):
            name = self.take()
            if not name[0].isupper():
                raise ParseError(f"set symbol expected, found {name!r}")
            sym = SetConst(name) if _CONST.match(name) else SetVar(name)
            return Mem(left, sym) if op == "in" else NotMem(left, sym)
        raise ParseError(f"relation expected, found {op!r} in {self.text!r}")

    def term(self):
        t = self.factor()
        while self.peek() == "+":
            self.take()
            t = Add(t, self.factor())
        return t

    def factor(self):
        t = self.atom()
        while self.peek() == "*":
            self.take()
            t = Mul(t, self.atom())
        return t

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return num(int(tok))
        if tok == "S" and self.peek() == "(":
            self.take("(")
            t = self.term()
            self.take(")")
            return Succ(t)
        if tok == "(":
            t = self.term()
            self.take(")")
            return t
        if re.match(r"[a-z_][A-Za-z0-9_]*$", tok) and tok not in ("in", "notin"):
            return NVar(tok)
        raise ParseError(f"term expected, found {tok!r} in {self.text!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r} in {text!r}")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r} in {text!r}")
    return t


def parse_sequent(items) -> frozenset:
    return frozenset(parse_formula(s) if isinstance(s, str) else s for s in items)


def sequent_key(f: Formula) -> str:
    return format_formula(f)


def format_sequent(s) -> list:
    return sorted(format_formula(f) for f in s)


# -- axioms -------------------------------------------------------------------------

def literal_valid(f: Formula, consts: dict) -> bool:
    """Whether a literal holds for every value of its number variables."""
    if isinstance(f, Eq):
        return poly(f.left) == poly(f.right)
    if isinstance(f, Neq):
        return _never_zero(_padd(poly(f.left), poly(f.right), -1))
    if isinstance(f, (Mem, NotMem)) and isinstance(f.set, SetConst):
        ext = consts.get(f.set.name)
        if ext is None:
            return False
        p = poly(f.term)
        if isinstance(f, Mem):
            return not _pvars(p) and p.get((), 0) in ext
        return _value_set_avoids(p, ext)
    return False


_AX_TAG = {Eq: "Ax1", Neq: "Ax2", Mem: "Ax3", NotMem: "Ax4"}


def is_axiomatic(s, consts: dict) -> Optional["Rule"]:
    """The first axiom instance found in the sequent, if any."""
    lits = sorted((f for f in s if isinstance(f, LITERALS)), key=sequent_key)
    for f in lits:
        if literal_valid(f, consts):
            return Rule(_AX_TAG[type(f)], principal=f)
    for f in lits:
        if isinstance(f, Mem):
            for g in lits:
                if isinstance(g, NotMem) and g.set == f.set and poly(g.term) == poly(f.term):
                    return Rule("Ax5", principal=f, witness=g)
    return None


# -- pre-proofs -----------------------------------------------------------------------

AXIOMS = ("Ax1", "Ax2", "Ax3", "Ax4", "Ax5")
RULES = AXIOMS + ("AndInt", "OrInt", "AllInt1", "ExInt1", "AllInt2", "ExInt2C", "ExInt2V",
                  "Cut", "Rep")


@dataclass(frozen=True)
class Rule:
    tag: str
    principal: Optional[Formula] = None
    witness: Any = None
    premises: tuple = ()


@dataclass(frozen=True)
class Node:
    id: int
    sequent: frozenset
    rule: Rule
    children: tuple = ()


@dataclass(frozen=True)
class PreProof:
    root: int
    nodes: dict
    mode: str = "finite"
    constants: dict = field(default_factory=dict)
    fuel: int = 10


@dataclass(frozen=True)
class Report:
    ok: bool
    violations: list


def _witness_to_json(r: Rule):
    w = r.witness
    if w is None:
        return None
    if isinstance(w, Term):
        return format_term(w)
    if isinstance(w, Formula):
        return format_formula(w)
    return w


def _witness_from_json(tag: str, w):
    if w is None:
        return None
    if not isinstance(w, str):
        raise ParseError(f"witness must be a string, got {w!r}")
    # a witness that does not fit its rule stays raw so the checker can locate it
    try:
        if tag == "ExInt1":
            return parse_term(w)
        if tag == "Ax5":
            return parse_formula(w)
    except ParseError:
        pass
    return w


def proof_to_json(p: PreProof) -> dict:
    nodes = []
    for nid in sorted(p.nodes):
        n = p.nodes[nid]
        rule: dict = {"type": n.rule.tag}
        if n.rule.principal is not None:
            rule["principal"] = format_formula(n.rule.principal)
        if n.rule.witness is not None:
            rule["witness"] = _witness_to_json(n.rule)
        rule["premises"] = list(n.rule.premises)
        nodes.append({"id": nid, "sequent": format_sequent(n.sequent), "rule": rule,
                      "children": list(n.children)})
    return {"root": p.root, "mode": p.mode, "fuel": p.fuel,
            "constants": {k: sorted(v) for k, v in sorted(p.constants.items())},
            "nodes": nodes}


def proof_from_json(data) -> PreProof:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        consts = {k: frozenset(v) for k, v in data.get("constants", {}).items()}
        nodes = {}
        for nd in data["nodes"]:
            r = nd["rule"]
            tag = r["type"]
            principal = r.get("principal")
            rule = Rule(tag, parse_formula(principal) if principal is not None else None,
                        _witness_from_json(tag, r.get("witness")),
                        tuple(r.get("premises", ())))
            nid = nd["id"]
            if nid in nodes:
                raise ParseError(f"duplicate node id {nid}")
            nodes[nid] = Node(nid, parse_sequent(nd["sequent"]), rule,
                              tuple(nd.get("children", ())))
        return PreProof(data["root"], nodes, data.get("mode", "finite"), consts,
                        data.get("fuel", 10))
    except (KeyError, TypeError, AttributeError) as e:
        raise ParseError(f"malformed proof document: {e}") from None


def _structure(p: PreProof, out: list) -> list:
    """Check the tree shape; returns the reachable node ids in preorder."""
    parents: Counter = Counter()
    for n in p.nodes.values():
        for c in n.children:
            if c not in p.nodes:
                out.append((n.id, f"unknown child id {c}"))
            else:
                parents[c] += 1
    if p.root not in p.nodes:
        out.append((p.root, "root id not present"))
        return []
    if parents[p.root]:
        out.append((p.root, "root has a parent"))
    for nid, k in parents.items():
        if k > 1:
            out.append((nid, "node has several parents"))
    order, seen, stack = [], set(), [p.root]
    while stack:
        nid = stack.pop()
        if nid in seen or nid not in p.nodes:
            continue
        seen.add(nid)
        order.append(nid)
        stack.extend(reversed(p.nodes[nid].children))
    for nid in p.nodes:
        if nid not in seen:
            out.append((nid, "node not reachable from root"))
    return order


def _fresh_placeholder(used: set, base: str = "_p") -> str:
    for i in itertools.count():
        name = f"{base}{i}"
        if name not in used:
            return name


def _check_rule(p: PreProof, n: Node, active: set) -> list:
    r = n.rule
    delta = n.sequent
    errs = []
    if r.tag not in RULES:
        return [f"unknown rule {r.tag!r}"]
    if tuple(r.premises) != tuple(n.children):
        errs.append("premises do not match children")
    prem = []
    for c in n.children:
        if c not in p.nodes:
            return errs
        prem.append(p.nodes[c].sequent)
    if r.witness is not None and r.tag not in ("Ax5", "ExInt1", "AllInt1", "AllInt2", "ExInt2C",
                                                "ExInt2V"):
        errs.append(f"{r.tag} takes no witness")
    if r.tag == "Rep" and r.principal is not None:
        errs.append("Rep takes no principal formula")
    free = set().union(*(free_num_vars(f) for f in delta)) if delta else set()
    if not free <= active:
        errs.append(f"free number variable {sorted(free - active)[0]}")
    if r.tag in AXIOMS:
        if n.children:
            errs.append("axiom node has premises")
        f = r.principal
        if f is None or f not in delta:
            return errs + ["axiom literal not in sequent"]
        if r.tag == "Ax5":
            g = r.witness
            if not (isinstance(f, Mem) and isinstance(g, NotMem) and g in delta):
                return errs + ["Ax5 needs t in K and s notin K in the sequent"]
            if f.set != g.set:
                errs.append("Ax5 literals name different sets")
            elif poly(f.term) != poly(g.term):
                errs.append("Ax5 terms have different values")
            return errs
        want = {"Ax1": Eq, "Ax2": Neq, "Ax3": Mem, "Ax4": NotMem}[r.tag]
        if not isinstance(f, want):
            return errs + [f"{r.tag} applied to the wrong kind of literal"]
        if r.tag in ("Ax3", "Ax4"):
            if not isinstance(f.set, SetConst):
                return errs + [f"{r.tag} needs a set constant"]
            if f.set.name not in p.constants:
                return errs + [f"unknown constant {f.set.name}"]
        if not literal_valid(f, p.constants):
            errs.append(f"{r.tag} literal is not true")
        return errs
    if r.tag == "Rep":
        if len(prem) != 1 or prem[0] != delta:
            errs.append("Rep premise differs from conclusion")
        return errs
    f = r.principal
    if r.tag == "Cut":
        if f is None or len(prem) != 2:
            return errs + ["Cut needs a cut formula and two premises"]
        if prem[0] != delta | {f}:
            errs.append("first Cut premise is not the sequent plus the cut formula")
        extra = prem[1] - delta
        if not prem[1] >= delta or len(extra) != 1:
            errs.append("second Cut premise is not the sequent plus one formula")
        elif extra != {negate(f)}:
            errs.append("premises not dual")
        return errs
    if f is None or f not in delta:
        return errs + ["principal formula not in sequent"]
    gammas = [delta, delta - {f}]
    kind = {"AndInt": And, "OrInt": Or, "AllInt1": All1, "ExInt1": Ex1, "AllInt2": All2,
            "ExInt2C": Ex2, "ExInt2V": Ex2}[r.tag]
    if not isinstance(f, kind):
        return errs + [f"{r.tag} principal has the wrong shape"]
    if r.tag == "AndInt":
        if len(prem) != 2 or not any(prem[0] == g | {f.left} and prem[1] == g | {f.right}
                                     for g in gammas):
            errs.append("AndInt premises are not the two conjunct sequents")
        return errs
    if len(prem) != 1:
        return errs + [f"{r.tag} needs exactly one premise"]
    if r.tag == "OrInt":
        if not any(prem[0] == g | {f.left, f.right} for g in gammas):
            errs.append("OrInt premise lacks the disjuncts")
        return errs
    if r.tag == "ExInt1":
        w = r.witness
        if not isinstance(w, Term):
            return errs + ["ExInt1 witness is not a term"]
        if not term_vars(w) <= active:
            errs.append("ExInt1 witness is not closed")
        inst = subst_num(f.body, f.var, w)
    elif r.tag == "AllInt1":
        if p.mode != "schematic":
            return errs + ["omega-rule node in finite proof (truncated)"]
        w = r.witness
        if not isinstance(w, str) or w in active or any(w in free_num_vars(g) for g in delta):
            return errs + ["placeholder variable is not fresh"]
        inst = subst_num(f.body, f.var, NVar(w))
    elif r.tag == "AllInt2":
        w = r.witness
        if not isinstance(w, str) or not w[:1].isupper() or _CONST.match(w):
            return errs + ["AllInt2 eigenvariable is not a set variable"]
        if any(w in free_set_vars(g) for g in delta):
            errs.append("eigenvariable not fresh")
        inst = subst_set(f.body, f.var, SetVar(w))
    else:
        w = r.witness
        if r.tag == "ExInt2C":
            if not isinstance(w, str) or w not in p.constants:
                return errs + ["ExInt2C witness is not a declared constant"]
            sym = SetConst(w)
        else:
            if not isinstance(w, str) or not w[:1].isupper() or _CONST.match(w):
                return errs + ["ExInt2V witness is not a set variable"]
            sym = SetVar(w)
        inst = subst_set(f.body, f.var, sym)
    if not any(prem[0] == g | {inst} for g in gammas):
        errs.append(f"{r.tag} premise is not the instance sequent")
    return errs


def _instantiate(p: PreProof, top: int, var: str, value: int) -> PreProof:
    nodes, stack = {}, [top]
    while stack:
        nid = stack.pop()
        if nid in nodes or nid not in p.nodes:
            continue
        n = p.nodes[nid]
        t = num(value)
        seq = frozenset(subst_num(f, var, t) for f in n.sequent)
        r = n.rule
        pr = subst_num(r.principal, var, t) if r.principal is not None else None
        w = r.witness
        if isinstance(w, Term):
            w = subst_term(w, var, t)
        elif isinstance(w, Formula):
            w = subst_num(w, var, t)
        nodes[nid] = Node(nid, seq, Rule(r.tag, pr, w, r.premises), n.children)
        stack.extend(n.children)
    return PreProof(top, nodes, p.mode, p.constants, p.fuel)


def _check(p: PreProof, active: set, out: list, instances: bool) -> None:
    order = _structure(p, out)
    ctx = {p.root: frozenset(active)}
    for nid in order:
        n = p.nodes[nid]
        here = ctx[nid]
        for reason in _check_rule(p, n, set(here)):
            out.append((nid, reason))
        inner = here
        if n.rule.tag == "AllInt1" and isinstance(n.rule.witness, str):
            inner = here | {n.rule.witness}
        for c in n.children:
            ctx.setdefault(c, inner)
        if (instances and p.mode == "schematic" and n.rule.tag == "AllInt1"
                and len(n.children) == 1 and isinstance(n.rule.witness, str)):
            for k in sorted({0, 1, 2, p.fuel}):
                sub = _instantiate(p, n.children[0], n.rule.witness, k)
                found: list = []
                _check(sub, set(here), found, instances=False)
                for cid, reason in found:
                    out.append((nid, f"instance {k}: node {cid}: {reason}"))


def check_preproof(p: PreProof) -> Report:
    out: list = []
    _check(p, set(), out, instances=True)
    out.sort(key=lambda v: (v[0] if isinstance(v[0], int) else -1, v[1]))
    return Report(not out, out)


# -- ranks ----------------------------------------------------------------------------

def times_omega(t: OrdTerm) -> OrdTerm:
    s = summands(t)
    if not s:
        return ZERO
    return mk_phi(ZERO, mk_sum([log_omega(s[0]), ONE]))


def kb_rank(p: PreProof) -> OrdTerm:
    bad: list = []
    order = _structure(p, bad)
    if bad:
        raise RankError(f"not a tree: node {bad[0][0]}: {bad[0][1]}")
    if p.mode != "schematic":
        return numeral(len(order))

    def rank(nid):
        n = p.nodes[nid]
        if n.rule.tag == "AllInt1":
            if len(n.children) != 1:
                raise RankError(f"omega-rule node {nid} needs a single template premise")
            return mk_sum([times_omega(rank(n.children[0])), ONE])
        return mk_sum([rank(c) for c in n.children] + [ONE])

    return rank(p.root)


def shape_tree(p: PreProof) -> FiniteTree:
    """The proof shape as a set of child-index paths."""
    out = set()
    stack = [((), p.root)]
    while stack:
        path, nid = stack.pop()
        out.add(path)
        for i, c in enumerate(p.nodes[nid].children):
            stack.append((path + (i,), c))
    return FiniteTree(frozenset(out))


def proof_from_tree(tree: FiniteTree) -> PreProof:
    """A finite pre-proof (of 0 = 0 everywhere) with the given shape."""
    ids = {path: i for i, path in enumerate(sorted(tree.nodes, key=lambda q: (len(q), q)))}
    f = Eq(TZero(), TZero())
    nodes = {}
    for path, i in ids.items():
        kids = tuple(ids[c] for c in tree.children(path))
        nodes[i] = Node(i, frozenset({f}), Rule("Rep", None, None, kids) if kids else Rule("Ax1", f), kids)
    return PreProof(0, nodes)
