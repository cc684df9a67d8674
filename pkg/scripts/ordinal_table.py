"""Print the proof-theoretic ordinal and dilator of a list of theories."""
import argparse
from dataclasses import dataclass, field

from ordlab.dilators import pi11_ordinal, theory_dilator
from ordlab.errors import RewriteError
from ordlab.notation import format_term
from ordlab.sexpr import parse_theory


@dataclass
class TableConfig:
    theories: list = field(default_factory=lambda: [
        "ACA0", "ACA0+", "(omegaR omega ACA0)", "SigmaAC", "ATR0", "ATR",
        "(synR 1 eps0 ACA0)", "(synR 2 omega ACA0)", "(fullRFN ACA0)"])
    pretty: bool = True


def rows(cfg: TableConfig):
    for src in cfg.theories:
        t = parse_theory(src)
        ordinal = format_term(pi11_ordinal(t), pretty=cfg.pretty)
        try:
            dil = theory_dilator(t).to_sexpr()
        except RewriteError:
            dil = "-"  # Pi^1_1 iteration has an ordinal but no dilator rule
        yield src, ordinal, dil


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("theories", nargs="*")
    ap.add_argument("--ascii", action="store_true")
    a = ap.parse_args()
    cfg = TableConfig(pretty=not a.ascii)
    if a.theories:
        cfg.theories = a.theories
    out = list(rows(cfg))
    w = max(len(r[0]) for r in out)
    w2 = max(len(r[1]) for r in out)
    for src, ordinal, dil in out:
        print(f"{src:<{w}}  {ordinal:<{w2}}  {dil}")


if __name__ == "__main__":
    main()
