import json
import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from ordlab.errors import EvalError, ParseError, RankError
from ordlab.notation import OMEGA, ONE, mk_sum, numeral, term
from ordlab.orders import FiniteTree, kb_order, order_size
from ordlab.tait import (Add, All1, All2, And, Eq, Ex1, Ex2, Mem, Mul, Neq, Node, NotMem, NVar, Or,
                         PreProof, Rule, SetConst, SetVar, Succ, TZero, check_preproof, eval_term,
                         format_formula, is_axiomatic, kb_rank, negate, num, parse_formula,
                         parse_sequent, parse_term, proof_from_json, proof_from_tree, proof_to_json,
                         shape_tree)

from mutants import mutants
from oracles import full_binary, kb_sorted, random_tree

DATA = Path(__file__).parent / "data"
PROOFS = sorted(DATA.glob("proof_*.json"))


def _load(path):
    return json.loads(Path(path).read_text())


# -- formulas ------------------------------------------------------------------

def test_negate_examples():
    z = TZero()
    assert negate(Eq(z, z)) == Neq(z, z)
    phi, psi = Eq(z, num(1)), Mem(z, SetVar("X"))
    assert negate(And(phi, psi)) == Or(negate(phi), negate(psi))
    assert negate(All2("X", psi)) == Ex2("X", negate(psi))


def _terms(depth):
    leaves = st.one_of(st.integers(0, 3).map(num), st.sampled_from([NVar("x"), NVar("y")]))
    if depth == 0:
        return leaves
    sub = _terms(depth - 1)
    return st.one_of(leaves, sub.map(Succ), st.builds(Add, sub, sub), st.builds(Mul, sub, sub))


SETS = st.sampled_from([SetVar("X"), SetVar("Y"), SetConst("C0")])


@st.composite
def formulas(draw, depth=6):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        t = _terms(2)
        kind = draw(st.sampled_from([Eq, Neq, Mem, NotMem]))
        if kind in (Eq, Neq):
            return kind(draw(t), draw(t))
        return kind(draw(t), draw(SETS))
    kind = draw(st.sampled_from([And, Or, All1, Ex1, All2, Ex2]))
    if kind in (And, Or):
        return kind(draw(formulas(depth - 1)), draw(formulas(depth - 1)))
    var = draw(st.sampled_from(["x", "y"] if kind in (All1, Ex1) else ["X", "Y"]))
    return kind(var, draw(formulas(depth - 1)))


@given(formulas())
def test_negate_is_involutive(f):
    assert negate(negate(f)) == f
    assert negate(f) != f


@given(formulas())
def test_formula_print_parse_round_trip(f):
    assert parse_formula(format_formula(f)) == f


def test_eval_term_examples():
    assert eval_term(num(2)) == 2
    assert eval_term(Add(num(1), num(1))) == 2
    assert eval_term(Mul(num(2), num(3))) == 6
    assert eval_term(parse_term("(S(S(0)) * S(S(S(0))))")) == 6
    with pytest.raises(EvalError):
        eval_term(NVar("x"))


@given(st.integers(0, 30), st.integers(0, 30))
def test_eval_term_is_arithmetic(a, b):
    assert eval_term(Add(num(a), Mul(num(b), num(a)))) == a + b * a


@pytest.mark.parametrize("bad", ["", "0 =", "A x 0 = 0", "0 in", "(0 = 0", "0 = 0 &"])
def test_formula_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


def test_is_axiomatic_examples():
    assert is_axiomatic(parse_sequent(["0 = 0"]), {}).tag == "Ax1"
    assert is_axiomatic(parse_sequent(["0 = S(0)"]), {}) is None
    r = is_axiomatic(parse_sequent(["0 in X", "0 notin X"]), {})
    assert r.tag == "Ax5"
    assert is_axiomatic(parse_sequent(["1 notin C0"]), {"C0": frozenset({0})}).tag == "Ax4"
    # uniform in the placeholder: x + 1 is never 0
    assert is_axiomatic(parse_sequent(["S(x) != 0"]), {}).tag == "Ax2"
    assert is_axiomatic(parse_sequent(["x != 1"]), {}) is None


# -- checker -----------------------------------------------------------------------

def _one_node(seq, rule, mode="finite", consts=None):
    n = Node(0, parse_sequent(seq), rule)
    return PreProof(0, {0: n}, mode, consts or {})


def test_single_axiom_node():
    p = _one_node(["0 = 0", "0 in X"], Rule("Ax1", parse_formula("0 = 0")))
    assert check_preproof(p).ok


def test_or_premise_without_disjuncts_is_located():
    f = parse_formula("0 = 1 | 0 = 0")
    nodes = {0: Node(0, frozenset({f}), Rule("OrInt", f, None, (1,)), (1,)),
             1: Node(1, parse_sequent(["0 = 0"]), Rule("Ax1", parse_formula("0 = 0")))}
    rep = check_preproof(PreProof(0, nodes))
    assert not rep.ok
    assert (0, "OrInt premise lacks the disjuncts") in rep.violations


def test_cut_with_non_dual_premises():
    phi, psi = parse_formula("0 = 1"), parse_formula("1 = 1")
    top = parse_sequent(["0 = 0"])
    nodes = {0: Node(0, top, Rule("Cut", phi, None, (1, 2)), (1, 2)),
             1: Node(1, top | {phi}, Rule("Ax1", parse_formula("0 = 0"))),
             2: Node(2, top | {psi}, Rule("Ax1", parse_formula("0 = 0")))}
    rep = check_preproof(PreProof(0, nodes))
    assert (0, "premises not dual") in rep.violations
    nodes[2] = Node(2, top | {negate(phi)}, Rule("Ax1", parse_formula("0 = 0")))
    assert check_preproof(PreProof(0, nodes)).ok


def test_eigenvariable_must_be_fresh():
    f = parse_formula("A X. 0 in X")
    side = parse_formula("0 notin Y0")
    inst = parse_formula("0 in Y0")
    nodes = {0: Node(0, frozenset({f, side}), Rule("AllInt2", f, "Y0", (1,)), (1,)),
             1: Node(1, frozenset({f, side, inst}), Rule("Ax5", inst, side))}
    rep = check_preproof(PreProof(0, nodes))
    assert (0, "eigenvariable not fresh") in rep.violations


def test_omega_rule_in_finite_mode_is_truncated():
    doc = _load(DATA / "proof_schematic.json")
    doc["mode"] = "finite"
    rep = check_preproof(proof_from_json(doc))
    assert (0, "omega-rule node in finite proof (truncated)") in rep.violations


def test_schematic_template_is_checked_at_instances():
    f = parse_formula("A x. x = 0")
    nodes = {0: Node(0, frozenset({f}), Rule("AllInt1", f, "_p0", (1,)), (1,)),
             1: Node(1, frozenset({f, parse_formula("_p0 = 0")}),
                     Rule("Ax1", parse_formula("_p0 = 0")))}
    rep = check_preproof(PreProof(0, nodes, "schematic"))
    assert not rep.ok
    assert any(v[0] == 0 and v[1].startswith("instance 1") for v in rep.violations)


@pytest.mark.parametrize("path", PROOFS, ids=lambda p: p.stem)
def test_fixture_proofs_check(path):
    doc = _load(path)
    p = proof_from_json(doc)
    assert check_preproof(p).ok
    assert proof_to_json(p) == doc


def _all_mutants():
    out = []
    for path in PROOFS:
        out.extend((f"{path.stem}: {label}", d) for label, d in mutants(_load(path)))
    return out


def test_mutants_are_all_rejected_with_location():
    ms = _all_mutants()
    assert len(ms) >= 100
    for label, doc in ms:
        rep = check_preproof(proof_from_json(doc))
        ids = {n["id"] for n in doc["nodes"]} | {doc["root"]}
        assert not rep.ok, label
        assert any(nid in ids for nid, _ in rep.violations), label


def test_report_is_sorted_by_node():
    doc = _load(DATA / "proof_taut3.json")
    for n in doc["nodes"]:
        n["rule"]["witness"] = "0"
    rep = check_preproof(proof_from_json(doc))
    assert [v[0] for v in rep.violations] == sorted(v[0] for v in rep.violations)
    assert len({v[0] for v in rep.violations}) == len(doc["nodes"])


def test_malformed_documents_raise_parse_error():
    with pytest.raises(ParseError):
        proof_from_json({"root": 0})
    with pytest.raises(ParseError):
        proof_from_json({"root": 0, "nodes": [{"id": 0, "sequent": ["0 = = 0"],
                                               "rule": {"type": "Ax1"}}]})


# -- ranks -------------------------------------------------------------------------

def test_kb_rank_examples():
    assert kb_rank(proof_from_tree(FiniteTree({()}))) == ONE
    assert kb_rank(proof_from_tree(FiniteTree(full_binary(3)))) == numeral(15)
    assert kb_rank(proof_from_json(_load(DATA / "proof_schematic.json"))) == mk_sum([OMEGA, ONE])


@given(st.randoms(use_true_random=False))
def test_kb_rank_matches_brute_force(rng):
    nodes = random_tree(rng, 31)
    p = proof_from_tree(FiniteTree(set(nodes)))
    assert kb_rank(p) == numeral(len(kb_sorted(nodes)))
    assert kb_rank(p) == numeral(order_size(kb_order(shape_tree(p))))


def test_schematic_ranks_compose():
    # an omega-node over a 2-node template, under a finite root: (2*omega + 1) + 1
    f = parse_formula("A x. (x = x | 0 = 1)")
    g = parse_formula("_p0 = _p0 | 0 = 1")
    body = {f, g}
    nodes = {0: Node(0, frozenset({f}), Rule("AllInt1", f, "_p0", (1,)), (1,)),
             1: Node(1, frozenset(body), Rule("OrInt", g, None, (2,)), (2,)),
             2: Node(2, frozenset(body | {parse_formula("_p0 = _p0"), parse_formula("0 = 1")}),
                     Rule("Ax1", parse_formula("_p0 = _p0")))}
    p = PreProof(0, nodes, "schematic")
    assert check_preproof(p).ok
    assert kb_rank(p) == term("phi(0,1)+1")


def test_non_uniform_schematic_tree_is_rejected():
    f = parse_formula("A x. x = x")
    leaf = Rule("Ax1", parse_formula("0 = 0"))
    nodes = {0: Node(0, frozenset({f}), Rule("AllInt1", f, "_p0", (1, 2)), (1, 2)),
             1: Node(1, parse_sequent(["0 = 0"]), leaf), 2: Node(2, parse_sequent(["0 = 0"]), leaf)}
    with pytest.raises(RankError):
        kb_rank(PreProof(0, nodes, "schematic"))
    with pytest.raises(RankError):
        kb_rank(PreProof(0, {0: Node(0, frozenset(), leaf, (0,))}))


def test_shape_tree_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        t = FiniteTree(set(random_tree(rng, 25)))
        assert shape_tree(proof_from_tree(t)) == t
