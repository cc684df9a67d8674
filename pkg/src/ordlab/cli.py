"""Command-line entry point: `ordlab <command> ...`."""
from __future__ import annotations

import argparse
import json
import sys

from . import errors
from .chains import FragmentSpec, OutOfFuel, ProofFound, Refuted, search
from .dilators import pi11_ordinal, theory_dilator, wop
from .disj import Disj, embed_from_chain
from .notation import enumerate_terms, format_term, parse_term, compare
from .orders import FiniteTree, check_embedding, enumerate_prefix
from .sexpr import parse_order, parse_spec, parse_theory
from .tait import (check_preproof, format_sequent, kb_rank, parse_sequent, proof_from_json,
                   proof_from_tree, proof_to_json)

EXIT_OK = 0
EXIT_VIOLATIONS = 2
EXIT_REFUTED = 3
EXIT_OUT_OF_FUEL = 4
EXIT_PARSE = 64
EXIT_DOMAIN = 65
EXIT_REWRITE = 66


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def _emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


def _term_text(t, args) -> str:
    return format_term(t, pretty=args.pretty)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise errors.ParseError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise errors.ParseError(f"{path}: invalid JSON: {e}") from None


def cmd_ord_compare(args):
    sorts = parse_spec(args.spec).sorts() if args.spec else None
    a = parse_term(args.t1, sorts)[0]
    b = parse_term(args.t2, sorts)[0]
    verdict = compare(a, b, sorts).name
    _emit(args, verdict, {"verdict": verdict})
    return EXIT_OK


def cmd_ord_normalize(args):
    t, normal = parse_term(args.raw)
    text = _term_text(t, args)
    _emit(args, f"{text}\nnormal: {'yes' if normal else 'no'}",
          {"term": text, "was_normal": normal})
    return EXIT_OK


def cmd_theory_ordinal(args):
    t = _term_text(pi11_ordinal(parse_theory(args.texpr)), args)
    _emit(args, t, {"ordinal": t})
    return EXIT_OK


def cmd_theory_dilator(args):
    d = theory_dilator(parse_theory(args.texpr)).to_sexpr()
    _emit(args, d, {"dilator": d})
    return EXIT_OK


def cmd_theory_wop(args):
    p = wop(parse_theory(args.texpr))
    text = p.text if args.pretty else p.ascii
    _emit(args, text, {"principle": text})
    return EXIT_OK


def cmd_order_disj(args):
    d = Disj(parse_order(args.e1), parse_order(args.e2))
    elems = [d.encode(x) for x in enumerate_prefix(d, args.n)]
    lines = [d.to_sexpr()] + [json.dumps(e) for e in elems]
    _emit(args, "\n".join(lines), {"order": d.to_sexpr(), "elements": elems})
    return EXIT_OK


def cmd_order_embed(args):
    a, b = parse_order(args.e1), parse_order(args.e2)
    chain = b.descend()
    if chain is None:
        raise errors.DomainError(f"no descending chain found in {b.to_sexpr()}")
    f = embed_from_chain(a, b, chain, args.fuel)
    ok = check_embedding(f, a, Disj(a, b))
    d = Disj(a, b)
    pairs = [[a.encode(k), d.encode(v)] for k, v in f.items()]
    lines = [f"{json.dumps(k)} -> {json.dumps(v)}" for k, v in pairs]
    lines.append(f"embedding: {'ok' if ok else 'FAILED'}")
    _emit(args, "\n".join(lines), {"map": pairs, "embedding": ok})
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_proof_check(args):
    rep = check_preproof(proof_from_json(_load_json(args.file)))
    if rep.ok:
        _emit(args, "ok", {"ok": True, "violations": []})
        return EXIT_OK
    lines = [f"node {n}: {r}" for n, r in rep.violations]
    _emit(args, "\n".join(lines), {"ok": False, "violations": [[n, r] for n, r in rep.violations]})
    return EXIT_VIOLATIONS


def cmd_prove(args):
    goal = _load_json(args.goal)
    if isinstance(goal, dict):
        consts = goal.get("constants", {})
        goal = goal.get("sequent", [])
    else:
        consts = {}
    frag_doc = _load_json(args.frag) if args.frag else {}
    frag_doc = {**frag_doc, "constants": {**consts, **frag_doc.get("constants", {})}}
    frag = FragmentSpec.from_json(frag_doc)
    res = search(parse_sequent(goal), frag, args.fuel)
    if isinstance(res, ProofFound):
        print(json.dumps(proof_to_json(res.proof), indent=None if args.json else 2, sort_keys=True))
        return EXIT_OK
    if isinstance(res, Refuted):
        doc = {"chain": [format_sequent(s) for s in res.chain.sequents],
               "trace": list(res.chain.trace), "valuation": res.valuation.to_json()}
        print(json.dumps(doc, indent=None if args.json else 2, sort_keys=True))
        return EXIT_REFUTED
    assert isinstance(res, OutOfFuel)
    print(json.dumps({"out_of_fuel": res.stats}, sort_keys=True))
    return EXIT_OUT_OF_FUEL


def cmd_kb_rank(args):
    data = _load_json(args.file)
    if isinstance(data, dict) and "root" in data:
        p = proof_from_json(data)
    else:
        p = proof_from_tree(FiniteTree.from_json(data))
    r = _term_text(kb_rank(p), args)
    _emit(args, r, {"rank": r})
    return EXIT_OK


def cmd_enumerate(args):
    spec = parse_spec(args.spec)
    terms = enumerate_terms(spec, args.max_size)
    if args.n is not None:
        terms = terms[: args.n]
    texts = [_term_text(t, args) for t in terms]
    _emit(args, "\n".join(texts), {"terms": texts})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--pretty", action="store_true", help="use Unicode math symbols")
    common.add_argument("--seed", type=int, default=0, help="accepted for reproducibility; unused")

    p = _Parser(prog="ordlab", description="Ordinal notations, dilators and omega-proofs.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, parent=sub):
        sp = parent.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("ord-compare", cmd_ord_compare, "compare two notation terms")
    sp.add_argument("t1")
    sp.add_argument("t2")
    sp.add_argument("--spec", help="notation system giving atom positions their order")

    sp = add("ord-normalize", cmd_ord_normalize, "normalize a notation term")
    sp.add_argument("raw")

    for name, fn, h in [("theory-ordinal", cmd_theory_ordinal, "Pi^1_1 ordinal of a theory"),
                        ("theory-dilator", cmd_theory_dilator, "dilator of a theory"),
                        ("theory-wop", cmd_theory_wop, "well-ordering principle of a theory")]:
        add(name, fn, h).add_argument("texpr")

    def disj_args(sp):
        sp.add_argument("e1")
        sp.add_argument("e2")
        sp.add_argument("--n", type=int, default=10, help="number of elements to list")

    def embed_args(sp):
        sp.add_argument("e1")
        sp.add_argument("e2")
        sp.add_argument("--fuel", type=int, default=20, help="number of source elements to map")

    disj_args(add("order-disj", cmd_order_disj, "build disj(e1, e2)"))
    embed_args(add("order-embed", cmd_order_embed, "embed e1 into disj(e1, e2)"))
    grp = sub.add_parser("order", help="order commands (disj, embed)")
    gsub = grp.add_subparsers(dest="order_command", required=True)
    disj_args(add("disj", cmd_order_disj, "build disj(e1, e2)", gsub))
    embed_args(add("embed", cmd_order_embed, "embed e1 into disj(e1, e2)", gsub))

    add("proof-check", cmd_proof_check, "check a pre-proof file").add_argument("file")

    sp = add("prove", cmd_prove, "search for a proof or countermodel")
    sp.add_argument("--goal", required=True, help="JSON list of formula strings")
    sp.add_argument("--frag", help="JSON fragment with set constants")
    sp.add_argument("--fuel", type=int, default=1000)

    add("kb-rank", cmd_kb_rank, "Kleene-Brouwer rank of a proof or tree file").add_argument("file")

    sp = add("enumerate", cmd_enumerate, "list terms of a notation system")
    sp.add_argument("spec")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--max-size", type=int, default=5)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except errors.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except errors.RewriteError as e:
        print(f"rewrite error: {e}", file=sys.stderr)
        return EXIT_REWRITE
    except errors.OrdlabError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
