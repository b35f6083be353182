"""Transformations of approximating sequences and finite-scale diagnostics."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .ordinal import DEFAULT_POLICY, FundSeqPolicy, Ordinal, add, finite, format_ordinal, fund_seq, parse_ordinal
from .ordtree import f_value
from .schreier import (
    DEFAULT_ENUM_BOUND,
    DEFAULT_G_CAP,
    OVERFLOW,
    BoundExceededError,
    SchreierHandle,
    _mask_to_set,
    family_masks,
    g_value,
    interval,
    member,
)

__all__ = [
    "GrowthFn",
    "ShiftPolicy",
    "BoostPolicy",
    "shift_policy",
    "boost_policy",
    "check_chain_inclusion",
    "check_inclusion",
    "uniform_bound_check",
    "interval_gap_scan",
    "f_growth",
    "policy_from_json",
]


@dataclass(frozen=True)
class GrowthFn:
    """A non-decreasing N -> N function tabulated on 1..len(values).

    Beyond the table the last value is repeated.
    """

    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if not vals:
            raise ValueError("GrowthFn needs at least one value")
        if any(v < 0 for v in vals):
            raise ValueError("GrowthFn values must be naturals")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError("GrowthFn must be non-decreasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, fn, length: int) -> "GrowthFn":
        return cls(tuple(fn(n) for n in range(1, length + 1)))

    @classmethod
    def from_json(cls, text: str) -> "GrowthFn":
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
            raise ValueError("GrowthFn literal must be a JSON array of naturals")
        return cls(tuple(data))

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError("GrowthFn is defined on n >= 1")
        return self.values[min(n, len(self.values)) - 1]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ShiftPolicy(FundSeqPolicy):
    """(beta, m) -> base(beta, m) + g(m) for every limit beta."""

    base: FundSeqPolicy
    g: GrowthFn
    name: str = "shift"

    def term(self, beta: Ordinal, m: int) -> Ordinal:
        return add(fund_seq(self.base, beta, m), finite(self.g(m)))


@dataclass(frozen=True)
class BoostPolicy(FundSeqPolicy):
    """Shift only the limits listed in ``boosts``, each by its own function."""

    base: FundSeqPolicy
    boosts: tuple  # sorted ((limit Ordinal, GrowthFn), ...)
    name: str = "boost"
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_lookup", dict(self.boosts))

    def term(self, beta: Ordinal, m: int) -> Ordinal:
        t = fund_seq(self.base, beta, m)
        h = self._lookup.get(beta)
        return add(t, finite(h(m))) if h is not None else t


def shift_policy(base: FundSeqPolicy, g: GrowthFn) -> FundSeqPolicy:
    return ShiftPolicy(base, g)


def boost_policy(base: FundSeqPolicy, h_map: Mapping[Ordinal, GrowthFn]) -> FundSeqPolicy:
    for beta in h_map:
        if not beta.is_limit:
            raise ValueError(f"boost key {format_ordinal(beta)} is not a limit ordinal")
    if not h_map:
        return base
    return BoostPolicy(base, tuple(sorted(h_map.items())))


def policy_from_json(data: dict) -> FundSeqPolicy:
    """``{"base": "default"|"plus_one", "shift": [..], "boost": {"w": [..]}}``."""
    from .ordinal import PLUS_ONE_POLICY

    bases = {"default": DEFAULT_POLICY, "diagonal": DEFAULT_POLICY, "plus_one": PLUS_ONE_POLICY}
    unknown = set(data) - {"base", "shift", "boost"}
    if unknown:
        raise ValueError(f"unknown policy keys: {sorted(unknown)}")
    try:
        pol = bases[data.get("base", "default")]
    except KeyError:
        raise ValueError(f"unknown base policy {data.get('base')!r}") from None
    if "shift" in data:
        pol = shift_policy(pol, GrowthFn(tuple(data["shift"])))
    if "boost" in data:
        pol = boost_policy(pol, {parse_ordinal(k): GrowthFn(tuple(v)) for k, v in data["boost"].items()})
    return pol


def check_inclusion(alpha: Ordinal, beta: Ordinal, n: int, policy: FundSeqPolicy = DEFAULT_POLICY,
                    cache: dict | None = None, bound: int = DEFAULT_ENUM_BOUND) -> list:
    """Sets of S_alpha within {1..n} missing from S_beta (empty list = inclusion holds)."""
    if n > bound:
        raise BoundExceededError(f"N={n} exceeds the enumeration bound {bound}")
    cache = {} if cache is None else cache
    a = family_masks(alpha, n, policy, cache)
    b = family_masks(beta, n, policy, cache)
    return sorted((_mask_to_set(u) for u in a - b), key=lambda s: (len(s), s))


def check_chain_inclusion(policy: FundSeqPolicy, beta: Ordinal, m_max: int, n: int,
                          bound: int = DEFAULT_ENUM_BOUND, max_examples: int = 5) -> dict:
    """Does S_{beta_m} sit inside S_{beta_(m+1)} within {1..n}, for 1 <= m < m_max?"""
    if not beta.is_limit:
        raise ValueError(f"{format_ordinal(beta)} is not a limit ordinal")
    if n > bound:
        raise BoundExceededError(f"N={n} exceeds the enumeration bound {bound}")
    cache: dict = {}
    steps = []
    for m in range(1, m_max):
        lo, hi = fund_seq(policy, beta, m), fund_seq(policy, beta, m + 1)
        missing = check_inclusion(lo, hi, n, policy, cache, bound)
        steps.append({
            "m": m,
            "beta_m": format_ordinal(lo),
            "beta_m_plus_1": format_ordinal(hi),
            "holds": not missing,
            "counterexamples": [list(s) for s in missing[:max_examples]],
            "counterexample_count": len(missing),
        })
    return {
        "policy": policy.name,
        "beta": format_ordinal(beta),
        "m_max": m_max,
        "N": n,
        "all_hold": all(s["holds"] for s in steps),
        "steps": steps,
    }


def uniform_bound_check(H: Iterable[GrowthFn], g: GrowthFn, length: int | None = None) -> dict:
    """For each h, the least N_h with h(n) < g(n) on N_h < n <= L, else unbounded."""
    H = list(H)
    if length is None:
        lengths = {len(h) for h in H} | {len(g)}
        if len(lengths) != 1:
            raise ValueError("tabulation lengths differ; pass length explicitly")
        length = lengths.pop()
    rows = []
    for i, h in enumerate(H):
        if h(length) >= g(length):
            rows.append({"index": i, "N_h": None, "bounded": False})
            continue
        last_bad = 0
        for n in range(1, length + 1):
            if h(n) >= g(n):
                last_bad = n
        rows.append({"index": i, "N_h": last_bad, "bounded": True})
    return {"L": length, "all_bounded": all(r["bounded"] for r in rows), "rows": rows}


def f_growth(alpha: Ordinal, length: int, policy: FundSeqPolicy = DEFAULT_POLICY) -> GrowthFn:
    """n -> F(n, alpha) tabulated on 1..length (non-decreasing in n)."""
    return GrowthFn.from_function(lambda n: f_value(n, alpha, policy), length)


def interval_gap_scan(alphas: Iterable[Ordinal], policy: FundSeqPolicy = DEFAULT_POLICY, n_max: int = 10,
                      cap: int = DEFAULT_G_CAP, certify_limit: int = 4096) -> list[dict]:
    """Per n, the largest G(n, alpha) over the list and the interval that escapes the union.

    ``certified`` is True when membership of {n..max+1} in every listed S_alpha
    was refuted by :func:`member` (intervals up to ``certify_limit`` long),
    None when the interval is too long to check.
    """
    alphas = list(alphas)
    handles = [SchreierHandle(a, policy) for a in alphas]
    rows = []
    for n in range(1, n_max + 1):
        values = [g_value(n, h, cap) for h in handles]
        if not values:
            continue
        if any(v is OVERFLOW for v in values):
            rows.append({"n": n, "max_G": "Overflow", "gap": None, "certified": None})
            continue
        top = max(values)
        gap = (n, top + 1)
        certified = None
        if top + 2 - n <= certify_limit:
            e = interval(n, top + 1)
            certified = not any(member(e, h) for h in handles)
        rows.append({"n": n, "max_G": top, "gap": list(gap), "certified": certified})
    return rows
