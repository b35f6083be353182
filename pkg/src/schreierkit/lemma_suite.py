"""Named, reproducible verification experiments over finite grids.

Each ``check_*`` function returns a :class:`CheckReport` whose cells record
the parameters, the verdict and, on failure, a replayable witness.  Nothing is
random; rerunning a cell reproduces its witness exactly.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .ordinal import DEFAULT_POLICY, FundSeqPolicy, Ordinal, add, finite, format_ordinal, fund_seq, parse_ordinal
from .ordtree import build_graph, f_value, find_separation, longest_successor_path
from .policy import GrowthFn, boost_policy, check_inclusion
from .schreier import OVERFLOW, SchreierHandle, enumerate_family, format_finset, g_value, interval, member

__all__ = [
    "Cell",
    "CheckReport",
    "SuiteConfig",
    "DEFAULT_ORDINALS",
    "CHECKS",
    "UNTESTABLE",
    "check_lemma_2_1",
    "check_cor_2_2",
    "check_lemma_2_3",
    "check_lemma_3_1",
    "check_lemma_4_1",
    "check_lemma_4_3",
    "check_g_definition",
    "check_graph_agreement",
    "check_member_oracle",
    "run_all",
    "run_checks",
    "campaign_json",
]

DEFAULT_ORDINALS = tuple(parse_ordinal(s) for s in (
    "0", "1", "2", "3", "4", "5", "w", "w+1", "w+5", "w*2", "w*3", "w^2", "w^2+w", "w^2*2", "w^3",
))

UNTESTABLE = [
    "pigeonhole over uncountably many ordinals (positive answer under the cardinality condition)",
    "reduction from eventually-all finite sets to full greedy/unconditional bases",
    "union of aleph_1 families covering all finite sets beyond some n (finite shadow only: intervals)",
    "uniform boundedness of an aleph_1-sized set of F-rows (finite shadow in policy.uniform_bound_check)",
    "the omega_1-indexed family built from an uncountable defining set",
]


@dataclass
class Cell:
    params: dict
    passed: bool
    witness: object = None
    micros: int = 0

    def to_json(self, timing: bool = False) -> dict:
        d = {"params": self.params, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        if timing:
            d["micros"] = self.micros
        return d


@dataclass
class CheckReport:
    check: str
    grid: dict
    cells: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    wall_micros: int = 0

    @property
    def failures(self) -> list:
        return [c for c in self.cells if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = False) -> dict:
        d = {
            "check": self.check,
            "grid": self.grid,
            "cells": [c.to_json(timing) for c in self.cells],
            "failures": len(self.failures),
        }
        if self.excluded:
            d["excluded"] = self.excluded
        if timing:
            d["wall_micros"] = self.wall_micros
        return d

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.check}: {len(self.cells) - len(self.failures)}/{len(self.cells)} cells"


@dataclass(frozen=True)
class SuiteConfig:
    policy: FundSeqPolicy = DEFAULT_POLICY
    ordinals: tuple = DEFAULT_ORDINALS
    n_max: int = 8
    closed_form_n: int = 50
    enum_n: int = 12
    scan_limit: int = 40
    interval_limit: int = 4096


def _timed(params: dict, fn: Callable[[], tuple]) -> Cell:
    t0 = time.perf_counter_ns()
    passed, witness = fn()
    return Cell(params, bool(passed), witness, (time.perf_counter_ns() - t0) // 1000)


def _fmt(a: Ordinal) -> str:
    return format_ordinal(a)


def _report(name: str, grid: dict, cells_fn) -> CheckReport:
    t0 = time.perf_counter_ns()
    rep = CheckReport(name, grid)
    cells_fn(rep)
    rep.wall_micros = (time.perf_counter_ns() - t0) // 1000
    return rep


def check_lemma_2_1(ordinals: Iterable[Ordinal] = DEFAULT_ORDINALS, ns: Iterable[int] = range(1, 9),
                    policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """F(n,0) = 0, F(n,a+1) = F(n,a) + 1, F(n,limit) = max over m <= n of F(n, a_m)."""
    ordinals, ns = list(ordinals), list(ns)

    def one(n: int, a: Ordinal):
        v = f_value(n, a, policy)
        if a.is_zero:
            return v == 0, None if v == 0 else {"F": v}
        if a.is_successor:
            p = f_value(n, a.predecessor(), policy)
            return v == p + 1, None if v == p + 1 else {"F": v, "F_pred": p}
        sub = [f_value(n, fund_seq(policy, a, m), policy) for m in range(1, n + 1)]
        return v == max(sub), None if v == max(sub) else {"F": v, "branches": sub}

    def fill(rep):
        for a in ordinals:
            for n in ns:
                rep.cells.append(_timed({"n": n, "alpha": _fmt(a)}, lambda: one(n, a)))

    return _report("check_lemma_2_1", {"ordinals": [_fmt(a) for a in ordinals], "n": ns, "policy": policy.name}, fill)


def check_cor_2_2(ordinals: Iterable[Ordinal] = DEFAULT_ORDINALS, ns: Iterable[int] = range(1, 9),
                  m_max: int = 10, policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """F(n, a+m) >= m."""
    ordinals, ns = list(ordinals), list(ns)

    def fill(rep):
        for a in ordinals:
            for n in ns:
                for m in range(1, m_max + 1):
                    def one(a=a, n=n, m=m):
                        v = f_value(n, add(a, finite(m)), policy)
                        return v >= m, None if v >= m else {"F": v}
                    rep.cells.append(_timed({"n": n, "alpha": _fmt(a), "m": m}, one))

    grid = {"ordinals": [_fmt(a) for a in ordinals], "n": ns, "m_max": m_max, "policy": policy.name}
    return _report("check_cor_2_2", grid, fill)


DEFAULT_SEPARATION_PAIRS = tuple((parse_ordinal(a), parse_ordinal(b)) for a, b in (
    ("3", "5"), ("5", "w"), ("w", "w+1"), ("w+5", "w*2"), ("w+5", "w^2"), ("w*2", "w*3"),
    ("w^2", "w^2+w"), ("w^2+w", "w^2*2"), ("w^2*2", "w^3"),
))


def check_lemma_2_3(pairs: Iterable[tuple] = DEFAULT_SEPARATION_PAIRS, scan_limit: int = 40,
                    policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """For a < b, F(n, a) < F(n, b) for all n past some N (found within the scan)."""
    pairs = list(pairs)

    def fill(rep):
        for a, b in pairs:
            def one(a=a, b=b):
                sep = find_separation(a, b, policy, scan_limit)
                return sep is not None, {"N": sep}
            rep.cells.append(_timed({"alpha": _fmt(a), "beta": _fmt(b)}, one))

    grid = {"pairs": [[_fmt(a), _fmt(b)] for a, b in pairs], "scan_limit": scan_limit, "policy": policy.name}
    return _report("check_lemma_2_3", grid, fill)


def check_lemma_3_1(ordinals: Iterable[Ordinal] = DEFAULT_ORDINALS, ns: Iterable[int] = range(1, 9),
                    policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """{n, ..., n + F(n, a)} lies in S_a, and so G(n, a) >= n + F(n, a)."""
    ordinals, ns = list(ordinals), list(ns)

    def fill(rep):
        for a in ordinals:
            h = SchreierHandle(a, policy)
            for n in ns:
                def one(a=a, n=n, h=h):
                    f = f_value(n, a, policy)
                    inside = member(interval(n, n + f), h)
                    g = g_value(n, h)
                    bridge = g is OVERFLOW or g >= n + f
                    ok = inside and bridge
                    if ok:
                        return True, None
                    return False, {"F": f, "interval": [n, n + f], "member": inside,
                                   "G": "Overflow" if g is OVERFLOW else g}
                rep.cells.append(_timed({"n": n, "alpha": _fmt(a)}, one))

    return _report("check_lemma_3_1", {"ordinals": [_fmt(a) for a in ordinals], "n": ns, "policy": policy.name}, fill)


DEFAULT_INCLUSION_PAIRS = tuple((parse_ordinal(a), parse_ordinal(b)) for a, b in (
    ("1", "1"), ("1", "2"), ("2", "w"), ("w", "w+1"), ("w", "w*2"), ("w+1", "w^2"),
))


def check_lemma_4_1(pairs: Iterable[tuple] = DEFAULT_INCLUSION_PAIRS, k_max: int = 2, n: int = 10,
                    policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """If S_a is inside S_b (within {1..N}) then S_{a+i} is inside S_{b+j} for i <= j <= k_max.

    Pairs whose base inclusion already fails are recorded as excluded with a
    "hypothesis fails" verdict rather than as failures.
    """
    pairs = list(pairs)

    def fill(rep):
        cache: dict = {}
        for a, b in pairs:
            base = check_inclusion(a, b, n, policy, cache)
            if base:
                rep.excluded.append({"alpha": _fmt(a), "beta": _fmt(b), "verdict": "hypothesis fails",
                                     "witness": list(base[0])})
                continue
            for i in range(k_max + 1):
                for j in range(i, k_max + 1):
                    def one(a=a, b=b, i=i, j=j):
                        missing = check_inclusion(add(a, finite(i)), add(b, finite(j)), n, policy, cache)
                        return not missing, {"missing": list(missing[0])} if missing else None
                    rep.cells.append(_timed({"alpha": _fmt(a), "beta": _fmt(b), "i": i, "j": j}, one))

    grid = {"pairs": [[_fmt(a), _fmt(b)] for a, b in pairs], "k_max": k_max, "N": n, "policy": policy.name}
    return _report("check_lemma_4_1", grid, fill)


def default_boosts(length: int = 20) -> dict:
    return {
        parse_ordinal("w"): GrowthFn.from_function(lambda m: 2 * m, length),
        parse_ordinal("w*2"): GrowthFn.from_function(lambda m: m * m, length),
    }


def check_lemma_4_3(h_map: Mapping[Ordinal, GrowthFn] | None = None, length: int = 20,
                    policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """Boosting the sequence of each listed limit by h gives F(n, limit) >= h(n)."""
    if h_map is None:
        h_map = default_boosts(length)
    boosted = boost_policy(policy, h_map)

    def fill(rep):
        for beta, h in sorted(h_map.items()):
            for n in range(1, length + 1):
                def one(beta=beta, h=h, n=n):
                    v = f_value(n, beta, boosted)
                    return v >= h(n), None if v >= h(n) else {"F": v, "h": h(n)}
                rep.cells.append(_timed({"beta": _fmt(beta), "n": n}, one))

    grid = {"boosts": {_fmt(b): list(h.values) for b, h in sorted(h_map.items())}, "L": length,
            "policy": policy.name}
    return _report("check_lemma_4_3", grid, fill)


def check_g_definition(ordinals: Iterable[Ordinal] = DEFAULT_ORDINALS, ns: Iterable[int] = range(1, 9),
                       closed_form_n: int = 50, interval_limit: int = 4096,
                       policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """{n..G(n,a)} is in S_a and {n..G(n,a)+1} is not; closed forms for a = 1, 2.

    Cells whose interval is longer than ``interval_limit`` (or overflows the
    cap) cannot be replayed through :func:`member` and are listed as excluded.
    """
    ordinals, ns = list(ordinals), list(ns)

    def fill(rep):
        for a in ordinals:
            h = SchreierHandle(a, policy)
            for n in ns:
                g = g_value(n, h)
                if g is OVERFLOW or g + 2 - n > interval_limit:
                    rep.excluded.append({"n": n, "alpha": _fmt(a),
                                         "G": "Overflow" if g is OVERFLOW else g, "reason": "interval too long"})
                    continue

                def one(h=h, n=n, g=g):
                    inside = member(interval(n, g), h)
                    outside = not member(interval(n, g + 1), h)
                    return inside and outside, None if inside and outside else {"G": g, "in": inside, "out": outside}
                rep.cells.append(_timed({"n": n, "alpha": _fmt(a)}, one))
        one_h, two_h = SchreierHandle(finite(1), policy), SchreierHandle(finite(2), policy)
        for n in range(1, closed_form_n + 1):
            rep.cells.append(_timed({"n": n, "alpha": "1", "closed_form": "2n-1"},
                                    lambda n=n: (g_value(n, one_h) == 2 * n - 1, None)))
        for n in range(1, 11):
            rep.cells.append(_timed({"n": n, "alpha": "2", "closed_form": "n*2^n-1"},
                                    lambda n=n: (g_value(n, two_h) == n * 2**n - 1, None)))

    grid = {"ordinals": [_fmt(a) for a in ordinals], "n": ns, "closed_form_n": closed_form_n,
            "interval_limit": interval_limit, "policy": policy.name}
    return _report("check_g_definition", grid, fill)


def check_graph_agreement(ordinals: Iterable[Ordinal] | None = None, ns: Iterable[int] = range(1, 5),
                          policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """Longest successor-edge path in the explicit graph G_n equals F(n, a)."""
    if ordinals is None:
        ordinals = [a for a in DEFAULT_ORDINALS if a <= parse_ordinal("w^2*2")]
    ordinals, ns = list(ordinals), list(ns)

    def fill(rep):
        for a in ordinals:
            for n in ns:
                def one(a=a, n=n):
                    dp = longest_successor_path(build_graph(n, a, policy))
                    f = f_value(n, a, policy)
                    return dp == f, None if dp == f else {"graph": dp, "F": f}
                rep.cells.append(_timed({"n": n, "alpha": _fmt(a)}, one))

    return _report("check_graph_agreement", {"ordinals": [_fmt(a) for a in ordinals], "n": ns,
                                             "policy": policy.name}, fill)


DEFAULT_ORACLE_ORDINALS = tuple(parse_ordinal(s) for s in ("1", "2", "3", "w", "w+1", "w*2", "w^2"))


def check_member_oracle(ordinals: Iterable[Ordinal] = DEFAULT_ORACLE_ORDINALS, n: int = 12,
                        policy: FundSeqPolicy = DEFAULT_POLICY) -> CheckReport:
    """The decision procedure agrees with the closure enumeration on every subset of {1..N}."""
    ordinals = list(ordinals)

    def fill(rep):
        cache: dict = {}
        for a in ordinals:
            def one(a=a):
                fam = enumerate_family(a, n, policy, cache=cache)
                h = SchreierHandle(a, policy)
                for mask in range(1 << n):
                    e = tuple(i + 1 for i in range(n) if mask >> i & 1)
                    if member(e, h) != (e in fam):
                        return False, {"set": format_finset(e), "member": not (e in fam)}
                return True, {"family_size": len(fam)}
            rep.cells.append(_timed({"alpha": _fmt(a), "N": n}, one))

    return _report("check_member_oracle", {"ordinals": [_fmt(a) for a in ordinals], "N": n,
                                           "policy": policy.name}, fill)


def _configured(cfg: SuiteConfig) -> dict:
    ns = range(1, cfg.n_max + 1)
    p = cfg.policy
    return {
        "check_cor_2_2": lambda: check_cor_2_2(cfg.ordinals, ns, policy=p),
        "check_g_definition": lambda: check_g_definition(cfg.ordinals, ns, cfg.closed_form_n, cfg.interval_limit, p),
        "check_graph_agreement": lambda: check_graph_agreement(ns=range(1, 5), policy=p),
        "check_lemma_2_1": lambda: check_lemma_2_1(cfg.ordinals, ns, p),
        "check_lemma_2_3": lambda: check_lemma_2_3(scan_limit=cfg.scan_limit, policy=p),
        "check_lemma_3_1": lambda: check_lemma_3_1(cfg.ordinals, ns, p),
        "check_lemma_4_1": lambda: check_lemma_4_1(policy=p),
        "check_lemma_4_3": lambda: check_lemma_4_3(policy=p),
        "check_member_oracle": lambda: check_member_oracle(n=cfg.enum_n, policy=p),
    }


CHECKS = tuple(sorted(_configured(SuiteConfig())))


def run_checks(names: Iterable[str], config: SuiteConfig | None = None) -> list[CheckReport]:
    cfg = config or SuiteConfig()
    table = _configured(cfg)
    names = sorted(set(names))
    unknown = [n for n in names if n not in table]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    return [table[n]() for n in names]


def run_all(config: SuiteConfig | None = None) -> list[CheckReport]:
    return run_checks(CHECKS, config)


def campaign_json(reports: list[CheckReport], config: SuiteConfig | None = None, timing: bool = False) -> str:
    cfg = config or SuiteConfig()
    doc = {
        "policy": cfg.policy.name,
        "checks": [r.to_json(timing) for r in reports],
        "failing_cells": sum(len(r.failures) for r in reports),
        "untestable_at_desk_scale": UNTESTABLE,
    }
    return json.dumps(doc, indent=2, sort_keys=False)
