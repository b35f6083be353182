"""Schreier families S_alpha on finite subsets of the positive integers.

Sets are plain ascending tuples of positive ints (``FinSet``).  Two independent
routes decide membership:

* :func:`member` -- the recursive decision procedure (greedy peeling at
  successor levels, existential search over approximating terms at limits);
* :func:`enumerate_family` -- a bitmask closure that builds
  ``S_alpha`` restricted to ``{1..N}`` from the recursive definition by
  trying every block sequence, with no peeling heuristic.

The second exists to validate the first.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .ordinal import DEFAULT_POLICY, FundSeqPolicy, Ordinal, format_ordinal, fund_seq, parse_ordinal

__all__ = [
    "FinSet",
    "FinSetSyntaxError",
    "NotAMemberError",
    "BoundExceededError",
    "Overflow",
    "OVERFLOW",
    "finset",
    "interval",
    "parse_finset",
    "format_finset",
    "SchreierHandle",
    "member",
    "decompose",
    "replay",
    "Leaf",
    "SuccessorNode",
    "LimitNode",
    "Witness",
    "enumerate_family",
    "family_masks",
    "g_value",
    "is_maximal",
    "spreading_counterexample",
    "DEFAULT_ENUM_BOUND",
    "DEFAULT_G_CAP",
]

FinSet = tuple  # ascending tuple[int, ...] of positive ints

DEFAULT_ENUM_BOUND = 14
DEFAULT_G_CAP = 10**18

# membership recursion descends once per successor step and per limit step,
# i.e. roughly F(n, alpha) levels deep for intervals
sys.setrecursionlimit(max(sys.getrecursionlimit(), 50_000))


class FinSetSyntaxError(ValueError):
    pass


class NotAMemberError(ValueError):
    pass


class BoundExceededError(ValueError):
    pass


class Overflow:
    """Result marker for a value that exceeds the configured cap."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Overflow"

    def __reduce__(self):
        return (Overflow, ())


OVERFLOW = Overflow()


def finset(elements: Iterable[int]) -> FinSet:
    """Validate and normalise to an ascending tuple of distinct positive ints."""
    out = tuple(sorted(set(int(e) for e in elements)))
    if out and out[0] < 1:
        raise ValueError("set elements must be >= 1")
    return out


def interval(lo: int, hi: int) -> FinSet:
    return tuple(range(lo, hi + 1))


_ITEM_RE = re.compile(r"^([1-9][0-9]*)(?:\.\.([1-9][0-9]*))?$")


def parse_finset(text: str) -> FinSet:
    """Parse ``{2,5,6}``, ``{4..9}`` or ``{}``; items must be strictly ascending."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise FinSetSyntaxError(f"set literal must be wrapped in braces: {text!r}")
    body = s[1:-1].strip()
    if not body:
        return ()
    out: list[int] = []
    for raw in body.split(","):
        m = _ITEM_RE.match(raw.strip())
        if m is None:
            raise FinSetSyntaxError(f"bad set item {raw.strip()!r} in {text!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) else lo
        if hi < lo:
            raise FinSetSyntaxError(f"empty range {raw.strip()!r}")
        if out and lo <= out[-1]:
            raise FinSetSyntaxError(f"items must be strictly ascending in {text!r}")
        out.extend(range(lo, hi + 1))
    return tuple(out)


def format_finset(e: FinSet) -> str:
    return "{" + ",".join(map(str, e)) + "}"


@dataclass
class SchreierHandle:
    """S_alpha under a fixed approximating-sequence policy, with a shared memo.

    The memo maps ``(ordinal, set)`` to a boolean.  Entries are pure functions
    of their key, so concurrent readers can at worst recompute an entry.
    """

    alpha: Ordinal
    policy: FundSeqPolicy = DEFAULT_POLICY
    memo: dict = field(default_factory=dict, repr=False, compare=False)
    g_memo: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def of(cls, alpha: Union[Ordinal, str, int], policy: FundSeqPolicy = DEFAULT_POLICY) -> "SchreierHandle":
        if isinstance(alpha, str):
            alpha = parse_ordinal(alpha)
        elif isinstance(alpha, int):
            alpha = parse_ordinal(str(alpha))
        return cls(alpha, policy)

    def at(self, alpha: Ordinal) -> "SchreierHandle":
        """A handle for another ordinal sharing this handle's caches."""
        return SchreierHandle(alpha, self.policy, self.memo, self.g_memo)

    def contains(self, e: FinSet) -> bool:
        return member(e, self)

    def __contains__(self, e) -> bool:
        return member(tuple(e), self)


# ---------------------------------------------------------------------------
# membership


def _longest_prefix(e: FinSet, gamma: Ordinal, h: SchreierHandle) -> int:
    """Length of the longest prefix of ``e`` lying in S_gamma (at least 1)."""
    n = len(e)
    # prefixes of a member are members, so membership is monotone in length
    lo, hi = 1, 2
    while hi <= n and _member(e[:hi], gamma, h):
        lo, hi = hi, hi * 2
    hi = min(hi, n + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _member(e[:mid], gamma, h):
            lo = mid
        else:
            hi = mid
    return lo


def _peel(e: FinSet, gamma: Ordinal, h: SchreierHandle, limit: int) -> list[FinSet] | None:
    """Greedy split of ``e`` into S_gamma blocks; None once more than ``limit`` are needed."""
    blocks = []
    rest = e
    while rest:
        if len(blocks) == limit:
            return None
        k = _longest_prefix(rest, gamma, h)
        blocks.append(rest[:k])
        rest = rest[k:]
    return blocks


def _member(e: FinSet, a: Ordinal, h: SchreierHandle) -> bool:
    if len(e) <= 1:
        return True
    if a.is_zero:
        return False
    key = (a, e)
    hit = h.memo.get(key)
    if hit is not None:
        return hit
    if a.is_successor:
        res = _peel(e, a.predecessor(), h, e[0]) is not None
    else:
        res = False
        for m in range(e[0], 0, -1):
            if _member(e, fund_seq(h.policy, a, m), h):
                res = True
                break
    h.memo[key] = res
    return res


def member(e: FinSet, h: SchreierHandle) -> bool:
    """True iff ``e`` belongs to S_alpha for the handle's ordinal and policy."""
    return _member(tuple(e), h.alpha, h)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Leaf:
    alpha: Ordinal
    elements: FinSet

    kind = "leaf"


@dataclass(frozen=True)
class SuccessorNode:
    alpha: Ordinal
    elements: FinSet
    blocks: tuple  # of Witness, one per block, each at the predecessor ordinal

    kind = "successor"


@dataclass(frozen=True)
class LimitNode:
    alpha: Ordinal
    elements: FinSet
    m: int
    beta_m: Ordinal
    child: "Witness"

    kind = "limit"


Witness = Union[Leaf, SuccessorNode, LimitNode]


def _decompose(e: FinSet, a: Ordinal, h: SchreierHandle) -> Witness:
    if not e or (len(e) == 1 and not a.is_limit):
        return Leaf(a, e)
    if a.is_limit:
        for m in range(1, e[0] + 1):
            b = fund_seq(h.policy, a, m)
            if _member(e, b, h):
                return LimitNode(a, e, m, b, _decompose(e, b, h))
    elif a.is_successor:
        gamma = a.predecessor()
        blocks = _peel(e, gamma, h, e[0])
        if blocks is not None:
            return SuccessorNode(a, e, tuple(_decompose(b, gamma, h) for b in blocks))
    raise NotAMemberError(f"{format_finset(e)} is not in S_{format_ordinal(a)}")


def decompose(e: FinSet, h: SchreierHandle) -> Witness:
    """A certificate tree proving ``e`` in S_alpha; raises NotAMemberError otherwise."""
    return _decompose(tuple(e), h.alpha, h)


def replay(w: Witness, policy: FundSeqPolicy = DEFAULT_POLICY) -> bool:
    """Re-check a witness bottom-up against the recursive definition alone.

    Leaves certify sets of size <= 1, which lie in S_0 and hence in every
    S_alpha.
    """
    e = w.elements
    if list(e) != sorted(set(e)) or (e and e[0] < 1):
        return False
    if isinstance(w, Leaf):
        return len(e) <= 1
    if isinstance(w, SuccessorNode):
        if not w.alpha.is_successor or not w.blocks:
            return False
        gamma = w.alpha.predecessor()
        union: list[int] = []
        for child in w.blocks:
            if child.alpha != gamma or not child.elements:
                return False
            if union and child.elements[0] <= union[-1]:
                return False
            union.extend(child.elements)
            if not replay(child, policy):
                return False
        return tuple(union) == e and len(w.blocks) <= e[0]
    if isinstance(w, LimitNode):
        if not w.alpha.is_limit or not e or not 1 <= w.m <= e[0]:
            return False
        if fund_seq(policy, w.alpha, w.m) != w.beta_m:
            return False
        return w.child.alpha == w.beta_m and w.child.elements == e and replay(w.child, policy)
    return False


def witness_to_dict(w: Witness) -> dict:
    d = {"kind": w.kind, "alpha": format_ordinal(w.alpha), "set": list(w.elements)}
    if isinstance(w, SuccessorNode):
        d["blocks"] = [witness_to_dict(b) for b in w.blocks]
    elif isinstance(w, LimitNode):
        d["m"] = w.m
        d["beta_m"] = format_ordinal(w.beta_m)
        d["child"] = witness_to_dict(w.child)
    return d


def witness_to_text(w: Witness, indent: int = 0) -> str:
    pad = "  " * indent
    head = f"{pad}{format_finset(w.elements)} in S_{format_ordinal(w.alpha)}"
    if isinstance(w, Leaf):
        return head + " [size <= 1]"
    if isinstance(w, SuccessorNode):
        lines = [head + f" [{len(w.blocks)} block(s) <= min {w.elements[0]}]"]
        lines += [witness_to_text(b, indent + 1) for b in w.blocks]
        return "\n".join(lines)
    return "\n".join(
        [head + f" [m={w.m}, beta_m={format_ordinal(w.beta_m)}]", witness_to_text(w.child, indent + 1)]
    )


# ---------------------------------------------------------------------------
# enumeration oracle


def _low(mask: int) -> int:
    """1-based index of the least element of a nonzero mask."""
    return (mask & -mask).bit_length()


def _successor_family(base: frozenset, n: int) -> frozenset:
    # Breadth-first over block counts: ``best`` records, for each union of
    # strictly increasing blocks, the fewest blocks that produce it.
    blocks = sorted(b for b in base if b)
    by_low: list[list[int]] = [[] for _ in range(n + 2)]
    for b in blocks:
        by_low[_low(b)].append(b)
    best = {b: 1 for b in blocks}
    frontier = list(blocks)
    count = 1
    while frontier:
        nxt = []
        for mask in frontier:
            if count >= _low(mask):
                continue
            top = mask.bit_length()
            for lo in range(top + 1, n + 1):
                for b in by_low[lo]:
                    u = mask | b
                    if u not in best:
                        best[u] = count + 1
                        nxt.append(u)
        frontier = nxt
        count += 1
    return frozenset([0] + [u for u, k in best.items() if k <= _low(u)])


def family_masks(alpha: Ordinal, n: int, policy: FundSeqPolicy = DEFAULT_POLICY,
                 cache: dict | None = None) -> frozenset:
    """S_alpha restricted to {1..n}, as a frozenset of bitmasks (bit i-1 is element i)."""
    if cache is None:
        cache = {}
    key = (alpha, n)
    if key in cache:
        return cache[key]
    if alpha.is_zero:
        fam = frozenset([0] + [1 << i for i in range(n)])
    elif alpha.is_limit:
        acc = {0}
        for m in range(1, n + 1):
            sub = family_masks(fund_seq(policy, alpha, m), n, policy, cache)
            acc.update(u for u in sub if u and _low(u) >= m)
        fam = frozenset(acc)
    else:
        # climb from the limit part; the restriction depends only on the
        # previous restriction, so a repeat is a fixed point
        base = alpha.limit_part
        fam = family_masks(base, n, policy, cache)
        for k in range(1, alpha.finite_part + 1):
            step = base + k
            if (step, n) in cache:
                nxt = cache[(step, n)]
            else:
                nxt = _successor_family(fam, n)
                cache[(step, n)] = nxt
            if nxt == fam:
                fam = nxt
                break
            fam = nxt
    cache[key] = fam
    return fam


def _mask_to_set(mask: int) -> FinSet:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def enumerate_family(alpha: Ordinal, n: int, policy: FundSeqPolicy = DEFAULT_POLICY,
                     bound: int = DEFAULT_ENUM_BOUND, cache: dict | None = None) -> set:
    """Every E subset of {1..n} in S_alpha, built by closure of the definition."""
    if n > bound:
        raise BoundExceededError(f"N={n} exceeds the enumeration bound {bound}")
    return {_mask_to_set(u) for u in family_masks(alpha, n, policy, cache)}


def iter_family(alpha: Ordinal, n: int, policy: FundSeqPolicy = DEFAULT_POLICY,
                bound: int = DEFAULT_ENUM_BOUND) -> Iterator[FinSet]:
    """Members in shortlex order; single-consumer."""
    yield from sorted(enumerate_family(alpha, n, policy, bound), key=lambda s: (len(s), s))


# ---------------------------------------------------------------------------
# maximal intervals


def _g(n: int, a: Ordinal, h: SchreierHandle, cap: int):
    if n > cap:
        return OVERFLOW
    key = (n, a, cap)
    hit = h.g_memo.get(key)
    if hit is not None:
        return hit
    if a.is_zero:
        res = n
    elif a.is_successor:
        gamma = a.predecessor()
        if gamma.is_zero:
            # n singleton blocks starting at n
            res = 2 * n - 1
        else:
            # n maximal S_gamma blocks laid end to end; each step at least
            # doubles, so the loop overflows after ~log2(cap) steps
            x = n - 1
            for _ in range(n):
                x = _g(x + 1, gamma, h, cap)
                if x is OVERFLOW:
                    break
            res = x
    else:
        res = n
        for m in range(1, n + 1):
            v = _g(n, fund_seq(h.policy, a, m), h, cap)
            if v is OVERFLOW:
                res = OVERFLOW
                break
            res = max(res, v)
    if res is not OVERFLOW and res > cap:
        res = OVERFLOW
    h.g_memo[key] = res
    return res


def g_value(n: int, h: SchreierHandle, cap: int = DEFAULT_G_CAP):
    """Largest m >= n with {n..m} in S_alpha, or OVERFLOW if it exceeds ``cap``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _g(n, h.alpha, h, cap)


def is_maximal(e: FinSet, h: SchreierHandle) -> bool:
    """No single element of {1..max(E)+1} can be added while staying in S_alpha."""
    e = tuple(e)
    if not member(e, h):
        raise NotAMemberError(f"{format_finset(e)} is not in S_{format_ordinal(h.alpha)}")
    top = e[-1] + 1 if e else 1
    present = set(e)
    return not any(member(tuple(sorted(present | {k})), h) for k in range(1, top + 1) if k not in present)


def spreading_counterexample(alpha: Ordinal, n: int, policy: FundSeqPolicy = DEFAULT_POLICY,
                             bound: int = DEFAULT_ENUM_BOUND):
    """First ``(E, F)`` with E in S_alpha, F an elementary spread of E, F not in S_alpha.

    Spreads are generated by single moves of one element up by one, so checking
    those within {1..n} is exhaustive for the window.  Returns None if none.
    """
    if n > bound:
        raise BoundExceededError(f"N={n} exceeds the enumeration bound {bound}")
    fam = family_masks(alpha, n, policy)
    for u in sorted(fam):
        for i in range(n - 1):
            bit, up = 1 << i, 1 << (i + 1)
            if u & bit and not u & up:
                v = (u & ~bit) | up
                if v not in fam:
                    return _mask_to_set(u), _mask_to_set(v)
    return None
