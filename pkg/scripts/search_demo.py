"""Run proof search on a few goals and summarize each outcome."""
import argparse
from dataclasses import dataclass, field

from ordlab.chains import FragmentSpec, ProofFound, Refuted, search
from ordlab.tait import check_preproof, format_sequent, kb_rank, parse_sequent
from ordlab.notation import format_term


@dataclass
class DemoConfig:
    goals: list = field(default_factory=lambda: [
        ["0 = 0"],
        ["((0 = S(0) | 0 = 0) & (S(0) = S(0) | 0 = S(0))) | 0 = S(S(0))"],
        ["0 = S(0)"],
        ["A x. (x + 0) = x"],
        ["0 in C0 | 0 = 0"],
        ["0 notin X", "S(0) notin X"],
        ["E x. x = S(x)"],
    ])
    constants: dict = field(default_factory=lambda: {"C0": []})
    fuel: int = 200


def run(cfg: DemoConfig):
    frag = FragmentSpec.from_json({"constants": cfg.constants})
    for g in cfg.goals:
        goal = parse_sequent(g)
        res = search(goal, frag, cfg.fuel)
        print(", ".join(format_sequent(goal)))
        if isinstance(res, ProofFound):
            p = res.proof
            print(f"  proof: {len(p.nodes)} nodes, {p.mode}, checker ok={check_preproof(p).ok}, "
                  f"rank {format_term(kb_rank(p))}")
        elif isinstance(res, Refuted):
            print(f"  refuted after {len(res.chain.sequents)} steps, valuation {res.valuation.to_json()}")
        else:
            print(f"  out of fuel: {res.stats}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fuel", type=int, default=DemoConfig.fuel)
    run(DemoConfig(fuel=ap.parse_args().fuel))


if __name__ == "__main__":
    main()
