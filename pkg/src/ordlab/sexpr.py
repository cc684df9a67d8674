"""S-expression readers for order, notation-system and theory expressions."""
from __future__ import annotations

import json
import os

from .errors import DomainError, ParseError
from .orders import KB, Cone, Finite, FiniteTree, Omega, OmegaPower, OmegaStar, OrderExpr, ProdLex, Sum
from .disj import Disj
from .notation import EpsPlus, GammaPlus, GammaPlusIter, Notation, PhiPlus, PhiPlusIter
from .dilators import (ACA0, ATR, ATR0, DCLike, FullRFN, OmegaR, SigmaAC, SigmaAC0, SynR,
                       ACA0plus, EPS0_ORDER)

_DEC = json.JSONDecoder()


class _Json:
    """A JSON literal embedded in an s-expression."""

    def __init__(self, value):
        self.value = value


def read(text: str):
    items, pos = _read(text, 0)
    pos = _skip(text, pos)
    if pos != len(text):
        raise ParseError(f"trailing input at {pos}: {text[pos:pos + 20]!r}")
    return items


def _skip(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _read(text, pos):
    pos = _skip(text, pos)
    if pos >= len(text):
        raise ParseError("unexpected end of expression")
    ch = text[pos]
    if ch == "(":
        out = []
        pos += 1
        while True:
            pos = _skip(text, pos)
            if pos >= len(text):
                raise ParseError("unbalanced parenthesis")
            if text[pos] == ")":
                return out, pos + 1
            item, pos = _read(text, pos)
            out.append(item)
    if ch == ")":
        raise ParseError(f"unexpected ')' at {pos}")
    if ch in '["{':
        try:
            value, end = _DEC.raw_decode(text, pos)
        except ValueError as e:
            raise ParseError(f"bad JSON literal at {pos}: {e}") from None
        return _Json(value), end
    end = pos
    while end < len(text) and not text[end].isspace() and text[end] not in "()":
        end += 1
    tok = text[pos:end]
    if tok.lstrip("-").isdigit():
        return int(tok), end
    return tok, end


def parse_order(text: str, base_dir: str = ".") -> OrderExpr:
    return to_order(read(text), base_dir)


def to_order(x, base_dir: str = ".") -> OrderExpr:
    if isinstance(x, int):
        if x < 0:
            raise ParseError("finite order size must be natural")
        return Finite(tuple(range(x)))
    if x == "omega":
        return Omega()
    if x == "omega*":
        return OmegaStar()
    if x == "eps0":
        return EPS0_ORDER
    if not isinstance(x, list) or not x or not isinstance(x[0], str):
        raise ParseError(f"not an order expression: {_show(x)}")
    head, args = x[0], x[1:]
    try:
        if head == "finite":
            if not all(isinstance(a, int) for a in args):
                raise ParseError("finite expects naturals")
            return Finite(tuple(args))
        if head in ("sum", "prodlex", "disj"):
            _arity(head, args, 2)
            a, b = to_order(args[0], base_dir), to_order(args[1], base_dir)
            return {"sum": Sum, "prodlex": ProdLex, "disj": Disj}[head](a, b)
        if head == "w^":
            _arity(head, args, 1)
            return OmegaPower(to_order(args[0], base_dir))
        if head == "cone":
            _arity(head, args, 2)
            parent = to_order(args[0], base_dir)
            raw = args[1].value if isinstance(args[1], _Json) else args[1]
            return Cone(parent, parent.decode(raw))
        if head == "kb":
            _arity(head, args, 1)
            src = args[0]
            if isinstance(src, _Json):
                return KB(FiniteTree.from_json(src.value))
            path = os.path.join(base_dir, src)
            try:
                with open(path) as fh:
                    return KB(FiniteTree.from_json(json.load(fh)))
            except OSError as e:
                raise ParseError(f"cannot read tree file {src}: {e.strerror}") from None
        if head == "notation":
            _arity(head, args, 1)
            return Notation(to_spec(args[0], base_dir))
    except DomainError as e:
        raise ParseError(str(e)) from None
    raise ParseError(f"unknown order constructor {head!r}")


def to_spec(x, base_dir: str = "."):
    if not isinstance(x, list) or not x:
        raise ParseError(f"not a notation system: {_show(x)}")
    head, args = x[0], [to_order(a, base_dir) for a in x[1:]]
    kinds = {"eps+": (EpsPlus, 1), "phi+": (PhiPlus, 2), "phi+iter": (PhiPlusIter, 3),
             "gamma+": (GammaPlus, 1), "gamma+iter": (GammaPlusIter, 2)}
    if head not in kinds:
        raise ParseError(f"unknown notation system {head!r}")
    cls, n = kinds[head]
    _arity(head, args, n)
    return cls(*args)


def parse_spec(text: str, base_dir: str = "."):
    x = read(text)
    if isinstance(x, list) and x and x[0] == "notation":
        _arity("notation", x[1:], 1)
        x = x[1]
    return to_spec(x, base_dir)


_THEORY_NAMES = {"ACA0": ACA0(), "ATR0": ATR0(), "SigmaAC0": SigmaAC0(), "DCLike": DCLike(),
                 "ACA0+": ACA0plus, "ACA0plus": ACA0plus, "SigmaAC": SigmaAC, "ATR": ATR}


def parse_theory(text: str, base_dir: str = "."):
    return to_theory(read(text), base_dir)


def to_theory(x, base_dir: str = "."):
    if isinstance(x, str):
        if x in _THEORY_NAMES:
            return _THEORY_NAMES[x]
        raise ParseError(f"unknown theory {x!r}")
    if not isinstance(x, list) or not x:
        raise ParseError(f"not a theory expression: {_show(x)}")
    head, args = x[0], x[1:]
    if head == "synR":
        _arity(head, args, 3)
        if args[0] not in (1, 2):
            raise ParseError("synR class must be 1 or 2")
        return SynR(args[0], to_order(args[1], base_dir), to_theory(args[2], base_dir))
    if head == "omegaR":
        _arity(head, args, 2)
        return OmegaR(to_order(args[0], base_dir), to_theory(args[1], base_dir))
    if head == "fullRFN":
        _arity(head, args, 1)
        return FullRFN(to_theory(args[0], base_dir))
    raise ParseError(f"unknown theory constructor {head!r}")


def _arity(head, args, n):
    if len(args) != n:
        raise ParseError(f"{head} takes {n} argument(s), got {len(args)}")


def _show(x):
    if isinstance(x, _Json):
        return json.dumps(x.value)
    if isinstance(x, list):
        return "(" + " ".join(_show(i) for i in x) + ")"
    return str(x)
