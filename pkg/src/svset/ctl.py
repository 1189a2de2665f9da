"""CTL formulas: syntax tree, textual grammar, desugaring, simplification.

The core the evaluator understands is ``true``, ``fireable(t)``, ``!``,
``||``, ``EX``, ``EG`` and ``E[. U .]``; everything else desugars into
it.  Grammar (loosest to tightest): ``||``, ``&&``, then ``!`` and the
temporal unaries.
"""

from __future__ import annotations

from dataclasses import dataclass


class CtlSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return _fmt(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class Fireable(Formula):
    transition: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class EX(Formula):
    child: Formula


@dataclass(frozen=True)
class EF(Formula):
    child: Formula


@dataclass(frozen=True)
class EG(Formula):
    child: Formula


@dataclass(frozen=True)
class AX(Formula):
    child: Formula


@dataclass(frozen=True)
class AF(Formula):
    child: Formula


@dataclass(frozen=True)
class AG(Formula):
    child: Formula


@dataclass(frozen=True)
class EU(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class AU(Formula):
    left: Formula
    right: Formula


TRUE = TrueF()
FALSE = Not(TRUE)

_CORE = (TrueF, Fireable, Not, Or, EX, EG, EU)
_UNARY_TEMPORAL = {"EX": EX, "EF": EF, "EG": EG, "AX": AX, "AF": AF, "AG": AG}


def is_core(f: Formula) -> bool:
    """Whether only core node kinds occur in the tree."""
    if not isinstance(f, _CORE):
        return False
    kids = _children(f)
    return all(is_core(c) for c in kids)


def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, EX, EF, EG, AX, AF, AG)):
        return (f.child,)
    if isinstance(f, (Or, And, EU, AU)):
        return (f.left, f.right)
    return ()


# -- parsing -------------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if text.startswith("||", i):
                self.tokens.append(("OR", "||", i))
                i += 2
            elif text.startswith("&&", i):
                self.tokens.append(("AND", "&&", i))
                i += 2
            elif c in "!()[]":
                kind = {"!": "NOT", "(": "LP", ")": "RP", "[": "LB", "]": "RB"}[c]
                self.tokens.append((kind, c, i))
                i += 1
            elif c.isalpha() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("WORD", text[i:j], i))
                i = j
            else:
                raise CtlSyntaxError(f"unknown token {c!r}", i)

    def peek(self) -> tuple[str, str, int]:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ("EOF", "", len(self.text))

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.index += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise CtlSyntaxError(f"expected {what}, got {tok[1]!r}", tok[2])
        return tok


def parse_formula(text: str) -> Formula:
    """Parse the textual CTL grammar into a syntax tree."""
    tz = _Tokenizer(text)
    f = _parse_or(tz)
    tok = tz.peek()
    if tok[0] != "EOF":
        raise CtlSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
    return f


def _parse_or(tz: _Tokenizer) -> Formula:
    f = _parse_and(tz)
    while tz.peek()[0] == "OR":
        tz.next()
        f = Or(f, _parse_and(tz))
    return f


def _parse_and(tz: _Tokenizer) -> Formula:
    f = _parse_unary(tz)
    while tz.peek()[0] == "AND":
        tz.next()
        f = And(f, _parse_unary(tz))
    return f


def _parse_unary(tz: _Tokenizer) -> Formula:
    kind, value, pos = tz.peek()
    if kind == "NOT":
        tz.next()
        return Not(_parse_unary(tz))
    if kind == "WORD" and value in _UNARY_TEMPORAL:
        tz.next()
        return _UNARY_TEMPORAL[value](_parse_unary(tz))
    if kind == "WORD" and value in ("E", "A"):
        tz.next()
        tz.expect("LB", "'['")
        left = _parse_or(tz)
        word = tz.expect("WORD", "'U'")
        if word[1] != "U":
            raise CtlSyntaxError(f"expected 'U', got {word[1]!r}", word[2])
        right = _parse_or(tz)
        tz.expect("RB", "']'")
        return EU(left, right) if value == "E" else AU(left, right)
    return _parse_atom(tz)


def _parse_atom(tz: _Tokenizer) -> Formula:
    kind, value, pos = tz.next()
    if kind == "LP":
        f = _parse_or(tz)
        tz.expect("RP", "')'")
        return f
    if kind == "WORD":
        if value == "true":
            return TRUE
        if value == "false":
            return FALSE
        if value == "fireable":
            tz.expect("LP", "'('")
            name = tz.expect("WORD", "transition id")
            tz.expect("RP", "')'")
            return Fireable(name[1])
    raise CtlSyntaxError(f"unexpected token {value!r}", pos)


def _fmt(f: Formula) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Fireable):
        return f"fireable({f.transition})"
    if isinstance(f, Not):
        return f"!{_fmt_tight(f.child)}"
    if isinstance(f, Or):
        return f"{_fmt(f.left)} || {_fmt(f.right)}"
    if isinstance(f, And):
        return f"{_fmt_tight(f.left)} && {_fmt_tight(f.right)}"
    if isinstance(f, (EX, EF, EG, AX, AF, AG)):
        return f"{type(f).__name__} {_fmt_tight(f.child)}"
    if isinstance(f, EU):
        return f"E[{_fmt(f.left)} U {_fmt(f.right)}]"
    if isinstance(f, AU):
        return f"A[{_fmt(f.left)} U {_fmt(f.right)}]"
    raise TypeError(f"unknown node {f!r}")


def _fmt_tight(f: Formula) -> str:
    text = _fmt(f)
    if isinstance(f, (Or, And)):
        return f"({text})"
    return text


# -- desugaring ----------------------------------------------------------------


def desugar(f: Formula) -> Formula:
    """Rewrite extended operators into the EX/EG/EU core."""
    if isinstance(f, (TrueF, Fireable)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.child))
    if isinstance(f, Or):
        return Or(desugar(f.left), desugar(f.right))
    if isinstance(f, And):
        return Not(Or(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, EX):
        return EX(desugar(f.child))
    if isinstance(f, EF):
        return EU(TRUE, desugar(f.child))
    if isinstance(f, EG):
        return EG(desugar(f.child))
    if isinstance(f, AX):
        return Not(EX(Not(desugar(f.child))))
    if isinstance(f, AG):
        return Not(EU(TRUE, Not(desugar(f.child))))
    if isinstance(f, AF):
        return Not(EG(Not(desugar(f.child))))
    if isinstance(f, EU):
        return EU(desugar(f.left), desugar(f.right))
    if isinstance(f, AU):
        # A[p U q] == !(E[!q U !(p || q)] || EG !q)
        p, q = desugar(f.left), desugar(f.right)
        return Not(Or(EU(Not(q), Not(Or(p, q))), EG(Not(q))))
    raise TypeError(f"unknown node {f!r}")


# -- simplification ------------------------------------------------------------


def _is_false(f: Formula) -> bool:
    return isinstance(f, Not) and isinstance(f.child, TrueF)


def _rewrite(f: Formula) -> Formula:
    if isinstance(f, Not) and isinstance(f.child, Not):
        return f.child.child
    if isinstance(f, Or):
        if f.left == f.right:
            return f.left
        if isinstance(f.left, TrueF) or isinstance(f.right, TrueF):
            return TRUE
        if _is_false(f.left):
            return f.right
        if _is_false(f.right):
            return f.left
    if isinstance(f, EF) and isinstance(f.child, EF):
        return f.child
    if isinstance(f, EG) and isinstance(f.child, EG):
        return f.child
    if isinstance(f, AG) and isinstance(f.child, AG):
        return f.child
    if isinstance(f, EX) and _is_false(f.child):
        return FALSE
    return f


def reduce_formula(f: Formula) -> Formula:
    """Apply the local rewrite rules bottom-up until nothing changes."""
    while True:
        g = _reduce_once(f)
        if g == f:
            return f
        f = g


def _reduce_once(f: Formula) -> Formula:
    if isinstance(f, (Not, EX, EF, EG, AX, AF, AG)):
        f = type(f)(_reduce_once(f.child))
    elif isinstance(f, (Or, And, EU, AU)):
        f = type(f)(_reduce_once(f.left), _reduce_once(f.right))
    return _rewrite(f)
