"""Symbolic theories, their dilators, and the ordinals they evaluate to.

theory_dilator is a closed rewrite system: each rule is one of the known
equations between iterated reflection and notation systems, and anything
outside their hypotheses is rejected with RewriteError.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import RenderError, RewriteError
from .orders import Finite, Omega, OmegaPower, OrderExpr, ProdLex, Sum, order_size
from .notation import (EPS0, OMEGA, ZERO, EpsPlus, Gamma, GammaPlus, GammaPlusIter, Notation,
                       OrdTerm, PhiPlus, PhiPlusIter, as_numeral, mk_gamma, mk_phi, mk_sum,
                       numeral, omega_times)


class TheoryExpr:
    def to_sexpr(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_sexpr()


@dataclass(frozen=True)
class ACA0(TheoryExpr):
    def to_sexpr(self):
        return "ACA0"


@dataclass(frozen=True)
class SigmaAC0(TheoryExpr):
    def to_sexpr(self):
        return "SigmaAC0"


@dataclass(frozen=True)
class ATR0(TheoryExpr):
    def to_sexpr(self):
        return "ATR0"


@dataclass(frozen=True)
class DCLike(TheoryExpr):
    """ACA0 plus Pi^1_3 omega-model reflection over ACA0."""

    def to_sexpr(self):
        return "DCLike"


@dataclass(frozen=True)
class SynR(TheoryExpr):
    cls: int
    along: OrderExpr
    over: TheoryExpr

    def __post_init__(self):
        if self.cls not in (1, 2):
            raise RewriteError(f"reflection class must be 1 or 2, got {self.cls}", self)

    def to_sexpr(self):
        return f"(synR {self.cls} {self.along.to_sexpr()} {self.over.to_sexpr()})"


@dataclass(frozen=True)
class OmegaR(TheoryExpr):
    along: OrderExpr
    over: TheoryExpr

    def to_sexpr(self):
        return f"(omegaR {self.along.to_sexpr()} {self.over.to_sexpr()})"


@dataclass(frozen=True)
class FullRFN(TheoryExpr):
    over: TheoryExpr

    def to_sexpr(self):
        return f"(fullRFN {self.over.to_sexpr()})"


ONE_ORDER = Finite((0,))
EMPTY_ORDER = Finite(())
EPS0_ORDER = Notation(EpsPlus(EMPTY_ORDER))

ACA0plus = OmegaR(ONE_ORDER, ACA0())
SigmaAC = FullRFN(SigmaAC0())
ATR = FullRFN(ATR0())


class DilatorExpr:
    def to_sexpr(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_sexpr()


@dataclass(frozen=True)
class PhiPlusD(DilatorExpr):
    index: OrderExpr

    def to_sexpr(self):
        return f"(phi+ {self.index.to_sexpr()})"


@dataclass(frozen=True)
class PhiPlusIterD(DilatorExpr):
    index: OrderExpr
    count: OrderExpr

    def to_sexpr(self):
        return f"(phi+iter {self.index.to_sexpr()} {self.count.to_sexpr()})"


@dataclass(frozen=True)
class GammaPlusD(DilatorExpr):
    def to_sexpr(self):
        return "gamma+"


@dataclass(frozen=True)
class GammaPlusIterD(DilatorExpr):
    count: OrderExpr

    def to_sexpr(self):
        return f"(gamma+iter {self.count.to_sexpr()})"


def one_plus_order(a: OrderExpr) -> OrderExpr:
    return Sum(ONE_ORDER, a)


def successor_order(a: OrderExpr) -> OrderExpr:
    return Sum(a, ONE_ORDER)


def is_pi12(t: TheoryExpr) -> bool:
    """Whether the theory is known to be Pi^1_2-axiomatizable."""
    if isinstance(t, (ACA0, ATR0)):
        return True
    if isinstance(t, (OmegaR, SynR)):
        return is_pi12(t.over)
    return False


def reflection_class(t: TheoryExpr) -> int:
    """n such that t is Pi^1_{n+1}-axiomatizable, as needed by full reflection."""
    if is_pi12(t):
        return 1
    if isinstance(t, (SigmaAC0, DCLike)):
        return 2
    raise RewriteError(f"no axiomatization class known for {t.to_sexpr()}", t)


def successor_dilator(d: DilatorExpr) -> DilatorExpr:
    """Dilator of one omega-model reflection step over a theory with dilator d."""
    if not isinstance(d, PhiPlusD):
        raise RewriteError(f"successor rule needs a phi+ dilator, got {d.to_sexpr()}", d)
    return PhiPlusD(successor_order(d.index))


def theory_dilator(t: TheoryExpr) -> DilatorExpr:
    if isinstance(t, ACA0):
        return PhiPlusD(ONE_ORDER)
    if isinstance(t, ATR0):
        return GammaPlusD()
    if isinstance(t, OmegaR):
        if isinstance(t.over, ACA0):
            return PhiPlusD(one_plus_order(t.along))
        if order_size(t.along) == 1 and is_pi12(t.over):
            return successor_dilator(theory_dilator(t.over))
        raise RewriteError(f"no rule for {t.to_sexpr()}", t)
    if isinstance(t, SynR):
        if t.cls == 2:
            if isinstance(t.over, SigmaAC0):
                return theory_dilator(OmegaR(t.along, ACA0()))
            if isinstance(t.over, DCLike):
                return theory_dilator(OmegaR(ProdLex(Omega(), t.along), ACA0()))
            if is_pi12(t.over):
                d = theory_dilator(t.over)
                if isinstance(d, PhiPlusD):
                    return PhiPlusIterD(d.index, OmegaPower(t.along))
        raise RewriteError(f"no rule for {t.to_sexpr()}", t)
    if isinstance(t, FullRFN):
        return theory_dilator(SynR(reflection_class(t.over), EPS0_ORDER, t.over))
    raise RewriteError(f"no rule for {t.to_sexpr()}", t)


def apply_dilator(d: DilatorExpr, arg: OrderExpr) -> Notation:
    if isinstance(d, PhiPlusD):
        return Notation(PhiPlus(d.index, arg))
    if isinstance(d, PhiPlusIterD):
        return Notation(PhiPlusIter(d.index, d.count, arg))
    if isinstance(d, GammaPlusD):
        return Notation(GammaPlus(arg))
    if isinstance(d, GammaPlusIterD):
        return Notation(GammaPlusIter(d.count, arg))
    raise RewriteError(f"not a dilator: {d!r}", d)


# -- closed rendering -------------------------------------------------------------

def _is_empty(o: OrderExpr) -> bool:
    return order_size(o) == 0


def render_order(o: OrderExpr) -> OrdTerm:
    """The order type of a closed order as a term."""
    n = order_size(o) if not isinstance(o, Notation) else None
    if n is not None:
        return numeral(n)
    if isinstance(o, Omega):
        return OMEGA
    if isinstance(o, Sum):
        return mk_sum([render_order(o.left), render_order(o.right)])
    if isinstance(o, OmegaPower):
        return mk_phi(ZERO, render_order(o.exp))
    if isinstance(o, ProdLex):
        b, a = render_order(o.base), render_order(o.exp)
        k = as_numeral(a)
        if k is not None:
            return mk_sum([b] * k)
        if b == OMEGA:
            return omega_times(a)
        raise RenderError(f"cannot render product {o.to_sexpr()}")
    if isinstance(o, Notation) and _is_empty(o.system.base):
        s = o.system
        if isinstance(s, EpsPlus):
            return EPS0
        if isinstance(s, PhiPlus):
            return dilator_ordinal(PhiPlusD(s.index))
        if isinstance(s, PhiPlusIter):
            return dilator_ordinal(PhiPlusIterD(s.index, s.count))
        if isinstance(s, GammaPlus):
            return dilator_ordinal(GammaPlusD())
        if isinstance(s, GammaPlusIter):
            return dilator_ordinal(GammaPlusIterD(s.count))
    raise RenderError(f"cannot render order {o.to_sexpr()} as a closed term")


def count_offset(c: OrdTerm) -> OrdTerm:
    """Left inverse of one_plus: the z with 1+z = c."""
    n = as_numeral(c)
    if n == 0:
        raise RenderError("count order must be nonempty")
    if n is not None:
        return numeral(n - 1)
    return c


def dilator_ordinal(d: DilatorExpr) -> OrdTerm:
    """Value of the dilator at the empty order, as a closed term."""
    if isinstance(d, PhiPlusD):
        return mk_phi(render_order(d.index), ZERO)
    if isinstance(d, PhiPlusIterD):
        return mk_phi(render_order(d.index), count_offset(render_order(d.count)))
    if isinstance(d, GammaPlusD):
        return Gamma(ZERO)
    if isinstance(d, GammaPlusIterD):
        return mk_gamma(count_offset(render_order(d.count)))
    raise RenderError(f"not a dilator: {d!r}")


def iter_dilator(t: TheoryExpr) -> DilatorExpr:
    """Dilator-style description of Pi^1_1 iterated reflection over ACA0 or ATR0."""
    if isinstance(t, SynR) and t.cls == 1:
        if isinstance(t.over, ACA0):
            return PhiPlusIterD(ONE_ORDER, one_plus_order(t.along))
        if isinstance(t.over, ATR0):
            return GammaPlusIterD(one_plus_order(t.along))
    raise RewriteError(f"no iteration rule for {t.to_sexpr()}", t)


def iter_ordinal(t: TheoryExpr) -> OrdTerm:
    return dilator_ordinal(iter_dilator(t))


def pi11_ordinal(t: TheoryExpr) -> OrdTerm:
    if isinstance(t, FullRFN):
        t = SynR(reflection_class(t.over), EPS0_ORDER, t.over)
    if isinstance(t, SynR) and t.cls == 1 and isinstance(t.over, (ACA0, ATR0)):
        return iter_ordinal(t)
    return dilator_ordinal(theory_dilator(t))


# -- well-ordering principles ------------------------------------------------------

@dataclass(frozen=True)
class Principle:
    text: str
    ascii: str
    family: Callable[[OrderExpr], OrderExpr]


def wop(t: TheoryExpr) -> Principle:
    if isinstance(t, ACA0):
        return Principle("WO(α)→WO(ω^α)", "WO(a)->WO(w^a)", OmegaPower)
    if t == ACA0plus:
        return Principle("WO(α)→WO(φ₁(α))", "WO(a)->WO(phi(1,a))",
                         lambda a: apply_dilator(PhiPlusIterD(ONE_ORDER, one_plus_order(a)),
                                                 EMPTY_ORDER))
    if isinstance(t, ATR0):
        return Principle("WO(α)→WO(φ_α(0))", "WO(a)->WO(phi(a,0))",
                         lambda a: apply_dilator(PhiPlusD(one_plus_order(a)), EMPTY_ORDER))
    raise RenderError(f"no well-ordering principle for {t.to_sexpr()}")

