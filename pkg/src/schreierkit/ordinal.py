"""Ordinals below omega^omega in Cantor normal form.

An :class:`Ordinal` is a tuple of ``(exponent, coefficient)`` terms with
strictly decreasing natural exponents, so structural equality coincides with
ordinal equality and Python's tuple ordering coincides with the ordinal order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Tuple

__all__ = [
    "Ordinal",
    "OrdinalSyntaxError",
    "ZERO",
    "ONE",
    "OMEGA",
    "parse_ordinal",
    "format_ordinal",
    "compare",
    "add",
    "classify",
    "FundSeqPolicy",
    "DiagonalPolicy",
    "PlusOnePolicy",
    "DEFAULT_POLICY",
    "PLUS_ONE_POLICY",
    "fund_seq",
    "finite",
    "omega_poly",
]

Term = Tuple[int, int]


class OrdinalSyntaxError(ValueError):
    """Malformed ordinal literal; ``position`` is the offending 0-based offset."""

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} at position {position} in {text!r}")


def _canonical(terms: Iterable[Term]) -> tuple[Term, ...]:
    """Fold an arbitrary sequence of terms, left to right, by ordinal addition."""
    out: list[Term] = []
    for e, c in terms:
        if c == 0:
            continue
        if e < 0 or c < 0:
            raise ValueError(f"invalid term ({e}, {c})")
        # a term absorbs everything to its left with a smaller exponent
        while out and out[-1][0] < e:
            out.pop()
        if out and out[-1][0] == e:
            out[-1] = (e, out[-1][1] + c)
        else:
            out.append((e, c))
    return tuple(out)


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        terms = tuple((int(e), int(c)) for e, c in self.terms)
        for i, (e, c) in enumerate(terms):
            if e < 0 or c < 1:
                raise ValueError(f"non-canonical term ({e}, {c})")
            if i and terms[i - 1][0] <= e:
                raise ValueError("exponents must be strictly decreasing")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_terms(cls, terms: Iterable[Term]) -> "Ordinal":
        """Build from terms in any order/multiplicity, read as a left-to-right sum."""
        return cls(_canonical(terms))

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms < other.terms

    def __add__(self, other):
        if isinstance(other, int):
            other = finite(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return add(self, other)

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] > 0

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    @property
    def finite_part(self) -> int:
        """Coefficient of omega^0, i.e. the trailing natural."""
        if self.terms and self.terms[-1][0] == 0:
            return self.terms[-1][1]
        return 0

    @property
    def limit_part(self) -> "Ordinal":
        """The ordinal with its trailing natural stripped (zero or a limit)."""
        if self.terms and self.terms[-1][0] == 0:
            return Ordinal(self.terms[:-1])
        return self

    def __int__(self):
        if not self.is_finite:
            raise ValueError(f"{self} is not finite")
        return self.finite_part

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise ValueError(f"{self} has no predecessor")
        *head, (_, c) = self.terms
        if c == 1:
            return Ordinal(tuple(head))
        return Ordinal((*head, (0, c - 1)))


ZERO = Ordinal()
ONE = Ordinal(((0, 1),))
OMEGA = Ordinal(((1, 1),))


def finite(k: int) -> Ordinal:
    if k < 0:
        raise ValueError("ordinals are non-negative")
    return Ordinal(((0, k),)) if k else ZERO


def omega_poly(*coeffs: int) -> Ordinal:
    """``omega_poly(a, b, c)`` is w^2*a + w*b + c (highest power first)."""
    top = len(coeffs) - 1
    return Ordinal(tuple((top - i, c) for i, c in enumerate(coeffs) if c))


_NAT = r"[1-9][0-9]*"
_TERM_RE = re.compile(rf"(?P<nat>{_NAT})|w(?:\^(?P<exp>{_NAT}))?(?:\*(?P<coef>{_NAT}))?")


def parse_ordinal(text: str) -> Ordinal:
    """Parse a literal such as ``w^2*3+w+5``; terms may come in any order."""
    if text == "0":
        return ZERO
    if not text:
        raise OrdinalSyntaxError(text, 0, "empty literal")
    terms: list[Term] = []
    pos = 0
    while True:
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise OrdinalSyntaxError(text, pos, "expected a term")
        if m.group("nat"):
            terms.append((0, int(m.group("nat"))))
        else:
            e = int(m.group("exp")) if m.group("exp") else 1
            c = int(m.group("coef")) if m.group("coef") else 1
            terms.append((e, c))
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != "+":
            raise OrdinalSyntaxError(text, pos, f"unexpected character {text[pos]!r}")
        pos += 1
        if pos == len(text):
            raise OrdinalSyntaxError(text, pos, "dangling '+'")
    return Ordinal.from_terms(terms)


def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e == 0:
            parts.append(str(c))
            continue
        s = "w" if e == 1 else f"w^{e}"
        if c != 1:
            s += f"*{c}"
        parts.append(s)
    return "+".join(parts)


def compare(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return (a.terms > b.terms) - (a.terms < b.terms)


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    lead_e, lead_c = b.terms[0]
    head = [t for t in a.terms if t[0] > lead_e]
    same = [c for e, c in a.terms if e == lead_e]
    if same:
        lead_c += same[0]
    return Ordinal((*head, (lead_e, lead_c), *b.terms[1:]))


def classify(a: Ordinal) -> tuple[str, Ordinal | None]:
    """``("zero", None)``, ``("successor", predecessor)`` or ``("limit", None)``."""
    if a.is_zero:
        return "zero", None
    if a.is_successor:
        return "successor", a.predecessor()
    return "limit", None


class FundSeqPolicy:
    """Assigns to every limit ordinal an increasing sequence of successors.

    Subclasses implement :meth:`term`; instances must be hashable and compare
    by value because they are part of memoization keys.
    """

    name = "abstract"

    def term(self, beta: Ordinal, m: int) -> Ordinal:
        raise NotImplementedError

    def __call__(self, beta: Ordinal, m: int) -> Ordinal:
        return fund_seq(self, beta, m)


def _natural_term(beta: Ordinal, m: int) -> Ordinal:
    """The textbook m-th term for a limit: lower the last term's exponent once."""
    *head, (e, c) = beta.terms
    terms = list(head)
    if c > 1:
        terms.append((e, c - 1))
    terms.append((e - 1, m))
    return Ordinal(tuple(terms))


@dataclass(frozen=True)
class DiagonalPolicy(FundSeqPolicy):
    """Descend the natural sequence at index ``m`` until a successor appears.

    omega_m = m, (omega*k + omega)_m = omega*k + m,
    (omega^2)_m = (omega*m)_m = omega*(m-1) + m, and so on.
    """

    name: str = "diagonal"

    def term(self, beta: Ordinal, m: int) -> Ordinal:
        t = _natural_term(beta, m)
        while t.is_limit:
            t = _natural_term(t, m)
        return t


@dataclass(frozen=True)
class PlusOnePolicy(FundSeqPolicy):
    """Take the natural m-th term and add 1 when it is a limit.

    (omega^2)_m = omega*m + 1.
    """

    name: str = "plus_one"

    def term(self, beta: Ordinal, m: int) -> Ordinal:
        t = _natural_term(beta, m)
        return add(t, ONE) if t.is_limit else t


DEFAULT_POLICY = DiagonalPolicy()
PLUS_ONE_POLICY = PlusOnePolicy()


def fund_seq(policy: FundSeqPolicy, beta: Ordinal, m: int) -> Ordinal:
    if not beta.is_limit:
        raise ValueError(f"{beta} is not a limit ordinal")
    if m < 1:
        raise ValueError("approximating index starts at 1")
    return policy.term(beta, m)
