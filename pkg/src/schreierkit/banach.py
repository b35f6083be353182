"""Norms on finitely supported sequences and empirical F-unconditional / F-greedy constants.

Three norms on vectors supported in a window ``{1..N}``:

``schreier``  max over E in S_alpha of sum_{i in E} |x_i|
``summing``   max_k |x_1 + ... + x_k|
``sup``       max_i |x_i|

All arithmetic is generic: pass :class:`fractions.Fraction` coefficients (or
``exact=True``) for exact rational results.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .ordinal import DEFAULT_POLICY, FundSeqPolicy, Ordinal, format_ordinal
from .schreier import FinSet, SchreierHandle, format_finset

__all__ = [
    "Vector",
    "NormSpec",
    "GreedySet",
    "AllSubsets",
    "ALL",
    "ZeroVectorError",
    "SupportError",
    "norm",
    "project",
    "family_max_weight",
    "iter_members",
    "greedy_sets",
    "uncond_search",
    "uncond_constant",
    "GreedyResult",
    "greedy_constant",
    "witness_vectors",
    "constant_growth_table",
]

GREEDY_SET_CAP = 10**4


class ZeroVectorError(ValueError):
    pass


class SupportError(ValueError):
    pass


@dataclass(frozen=True)
class Vector:
    """Finitely supported coefficients, stored as sorted ``(index, value)`` pairs with value != 0."""

    items: tuple = ()

    def __post_init__(self):
        d: dict = {}
        for i, v in self.items:
            i = int(i)
            if i < 1:
                raise ValueError("vector indices start at 1")
            d[i] = d.get(i, 0) + v
        object.__setattr__(self, "items", tuple(sorted((i, v) for i, v in d.items() if v != 0)))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, float]) -> "Vector":
        return cls(tuple(coeffs.items()))

    @classmethod
    def from_dense(cls, values: Sequence) -> "Vector":
        return cls(tuple((i + 1, v) for i, v in enumerate(values)))

    @classmethod
    def from_json(cls, obj: Union[str, Mapping]) -> "Vector":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, Mapping):
            raise ValueError("vector literal must be a JSON object {index: value}")
        for v in obj.values():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"vector coefficient {v!r} is not a number")
        return cls(tuple((int(k), v) for k, v in obj.items()))

    def to_json(self) -> dict:
        return {str(i): v for i, v in self.items}

    def __getitem__(self, i: int):
        return self.as_dict().get(i, 0)

    def as_dict(self) -> dict:
        return dict(self.items)

    @property
    def support(self) -> FinSet:
        return tuple(i for i, _ in self.items)

    def dense(self, n: int) -> list:
        d = self.as_dict()
        return [d.get(i, 0) for i in range(1, n + 1)]

    def __add__(self, other: "Vector") -> "Vector":
        return Vector(self.items + other.items)

    def __sub__(self, other: "Vector") -> "Vector":
        return Vector(self.items + tuple((i, -v) for i, v in other.items))

    def __mul__(self, c) -> "Vector":
        return Vector(tuple((i, c * v) for i, v in self.items))

    __rmul__ = __mul__

    def exact(self) -> "Vector":
        return Vector(tuple((i, Fraction(v)) for i, v in self.items))


def project(x: Vector, a: Iterable[int]) -> Vector:
    """P_A x: keep only the coordinates in A."""
    a = set(a)
    return Vector(tuple((i, v) for i, v in x.items if i in a))


@dataclass(frozen=True)
class NormSpec:
    variant: str  # "schreier" | "summing" | "sup"
    N: int
    alpha: Ordinal | None = None
    policy: FundSeqPolicy = DEFAULT_POLICY

    def __post_init__(self):
        if self.variant not in ("schreier", "summing", "sup"):
            raise ValueError(f"unknown norm variant {self.variant!r}")
        if self.variant == "schreier" and self.alpha is None:
            raise ValueError("schreier norm needs an ordinal")
        if self.N < 1:
            raise ValueError("window size must be >= 1")

    @classmethod
    def schreier(cls, alpha: Ordinal, n: int, policy: FundSeqPolicy = DEFAULT_POLICY) -> "NormSpec":
        return cls("schreier", n, alpha, policy)

    @classmethod
    def summing(cls, n: int) -> "NormSpec":
        return cls("summing", n)

    @classmethod
    def sup(cls, n: int) -> "NormSpec":
        return cls("sup", n)

    def with_window(self, n: int) -> "NormSpec":
        return NormSpec(self.variant, n, self.alpha, self.policy)

    def label(self) -> str:
        if self.variant == "schreier":
            return f"schreier({format_ordinal(self.alpha)})"
        return self.variant


class AllSubsets:
    """The family of every finite set."""

    def contains(self, e) -> bool:
        return True

    def __repr__(self):
        return "ALL"


ALL = AllSubsets()


def _family_label(family) -> str:
    if isinstance(family, SchreierHandle):
        return f"S_{format_ordinal(family.alpha)}"
    return "all"


_handles: dict = {}


def _norm_handle(spec: NormSpec) -> SchreierHandle:
    key = (spec.alpha, spec.policy)
    h = _handles.get(key)
    if h is None:
        h = _handles[key] = SchreierHandle(spec.alpha, spec.policy)
    return h


def family_max_weight(weights: Mapping[int, object], family) -> tuple:
    """max over A in ``family`` of sum_{i in A} w_i for non-negative weights.

    Branch and bound over the indices with positive weight in increasing
    order.  A set that leaves the family is never extended: the family is
    hereditary, so its supersets are out too.
    """
    cand = sorted(i for i, w in weights.items() if w > 0)
    w = [weights[i] for i in cand]
    suffix = [0] * (len(w) + 1)
    for k in range(len(w) - 1, -1, -1):
        suffix[k] = suffix[k + 1] + w[k]
    best_val = 0
    best_set: tuple = ()

    def dfs(k: int, cur: tuple, val) -> None:
        nonlocal best_val, best_set
        if val > best_val:
            best_val, best_set = val, cur
        if k == len(cand) or val + suffix[k] <= best_val:
            return
        nxt = cur + (cand[k],)
        if family.contains(nxt):
            dfs(k + 1, nxt, val + w[k])
        dfs(k + 1, cur, val)

    dfs(0, (), 0)
    return best_val, best_set


def norm(x: Vector, spec: NormSpec):
    if x.items and x.items[-1][0] > spec.N:
        raise SupportError(f"support {format_finset(x.support)} leaves the window 1..{spec.N}")
    if not x.items:
        return 0
    if spec.variant == "sup":
        return max(abs(v) for _, v in x.items)
    if spec.variant == "summing":
        s = 0
        best = 0
        for _, v in x.items:
            s += v
            best = max(best, abs(s))
        return best
    return family_max_weight({i: abs(v) for i, v in x.items}, _norm_handle(spec))[0]


def iter_members(family, window: Sequence[int], max_size: int | None = None) -> Iterator[FinSet]:
    """Every member of a hereditary family inside ``window`` (ascending indices)."""
    window = sorted(window)

    def rec(k: int, cur: tuple):
        yield cur
        if max_size is not None and len(cur) >= max_size:
            return
        for j in range(k, len(window)):
            nxt = cur + (window[j],)
            if family.contains(nxt):
                yield from rec(j + 1, nxt)

    yield from rec(0, ())


@dataclass(frozen=True)
class GreedySet:
    indices: FinSet
    order: int


def greedy_sets(x: Vector, m: int, window: int | None = None, cap: int = GREEDY_SET_CAP) -> list[GreedySet]:
    """All Lambda of size m with min_{Lambda}|x_n| >= max_{outside}|x_n| inside {1..window}.

    ``window`` defaults to the larger of m and the last support index.
    """
    if m < 0:
        raise ValueError("order must be >= 0")
    if window is None:
        window = max(m, x.items[-1][0] if x.items else 0)
    if m > window:
        return []
    d = x.as_dict()
    mags = {i: abs(d.get(i, 0)) for i in range(1, window + 1)}
    if m == 0:
        return [GreedySet((), 0)]
    threshold = sorted(mags.values(), reverse=True)[m - 1]
    must = [i for i, a in mags.items() if a > threshold]
    ties = [i for i, a in mags.items() if a == threshold]
    out = []
    for extra in itertools.combinations(ties, m - len(must)):
        out.append(GreedySet(tuple(sorted(must + list(extra))), m))
        if len(out) >= cap:
            break
    return out


# ---------------------------------------------------------------------------
# unconditionality


@dataclass(frozen=True)
class UncondResult:
    ratio: object
    witness: FinSet
    norm_x: object
    norm_residual: object


def _functionals(spec: NormSpec):
    """Sign-weighted index sets whose max of |phi(x)| is the norm (polyhedral norms only)."""
    if spec.variant == "summing":
        return [tuple(range(1, k + 1)) for k in range(1, spec.N + 1)]
    if spec.variant == "sup":
        return [(k,) for k in range(1, spec.N + 1)]
    return None


def uncond_search(x: Vector, family, spec: NormSpec, exact: bool = False, method: str = "auto") -> UncondResult:
    """max over A in ``family`` (inside the window) of ||x - P_A x|| / ||x||, with a maximiser.

    ``method="functional"`` (summing/sup only) swaps the two maxima: for each
    norming functional phi, the best A removes the coordinates where phi*x is
    negative, which is a weighted-family maximisation.  ``method="enumerate"``
    walks every member of the family inside the support.
    """
    if exact:
        x = x.exact()
    nx = norm(x, spec)
    if nx == 0:
        raise ZeroVectorError("the zero vector has no unconditionality ratio")
    funcs = _functionals(spec)
    if method == "auto":
        method = "functional" if funcs is not None else "enumerate"
    d = x.as_dict()
    best_val, best_a = None, ()
    if method == "functional":
        if funcs is None:
            raise ValueError(f"no functional description for {spec.variant}")
        for f_set in funcs:
            base = sum(d.get(i, 0) for i in f_set)
            for sign in (1, -1):
                weights = {i: -sign * d[i] for i in f_set if i in d and -sign * d[i] > 0}
                gain, a = family_max_weight(weights, family)
                val = sign * base + gain
                if best_val is None or val > best_val:
                    best_val, best_a = val, a
    elif method == "enumerate":
        for a in iter_members(family, x.support):
            val = norm(x - project(x, a), spec)
            if best_val is None or val > best_val:
                best_val, best_a = val, a
    else:
        raise ValueError(f"unknown method {method!r}")
    residual = norm(x - project(x, best_a), spec)
    ratio = Fraction(residual) / Fraction(nx) if exact else residual / nx
    return UncondResult(ratio, best_a, nx, residual)


def uncond_constant(x: Vector, family, spec: NormSpec, exact: bool = False, method: str = "auto"):
    return uncond_search(x, family, spec, exact, method).ratio


# ---------------------------------------------------------------------------
# greedy constant


@dataclass(frozen=True)
class GreedyResult:
    ratio: float
    numerator: float
    denominator: float
    greedy_set: FinSet
    approx_set: FinSet
    coefficients: dict
    mode: str
    bound: str = "lower"  # the denominator is an upper estimate of the infimum


def _coordinate_descent(x: Vector, a_set: FinSet, spec: NormSpec, tol: float, max_sweeps: int):
    """Minimise ||x - sum_{n in A} a_n e_n|| one coordinate at a time, starting at a_n = x_n.

    Each coordinate step is an exact-enough bounded scalar minimisation of a
    convex piecewise-linear function; only strict improvements are kept, so
    the result never exceeds the starting (projection) value.
    """
    d = x.as_dict()
    coeffs = {n: float(d.get(n, 0)) for n in a_set}

    def value(c: dict) -> float:
        return float(norm(x - Vector(tuple(c.items())), spec))

    f = value(coeffs)
    for _ in range(max_sweeps):
        f_old = f
        for n in a_set:
            if f == 0:
                break
            # any minimiser keeps |x_n - a_n| <= 2 * current value
            lo, hi = float(d.get(n, 0)) - 2 * f, float(d.get(n, 0)) + 2 * f
            trial = dict(coeffs)

            def g(t, n=n, trial=trial):
                trial[n] = t
                return value(trial)

            res = minimize_scalar(g, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
            if res.fun < f:
                coeffs[n] = float(res.x)
                f = float(res.fun)
        if f_old - f <= tol:
            break
    return f, coeffs


def greedy_constant(x: Vector, m: int, family, spec: NormSpec, mode: str = "projection",
                    strict: bool = True, tol: float = 1e-6, max_sweeps: int = 1000) -> GreedyResult:
    """Worst greedy residual over the best approximation by sets A in ``family``.

    The denominator is estimated over A with |A| < m (``strict``) or |A| <= m.
    ``projection`` uses a_n = x_n; ``optimize`` then runs coordinate descent.
    Both denominators are upper estimates of the true infimum, so the returned
    ratio is a lower bound on the constant.  A zero denominator with a
    positive numerator gives ``math.inf``.
    """
    if mode not in ("projection", "optimize"):
        raise ValueError(f"unknown mode {mode!r}")
    lambdas = greedy_sets(x, m, spec.N)
    if not lambdas:
        raise ValueError(f"no greedy set of order {m} inside the window")
    num, lam = max(((norm(x - project(x, g.indices), spec), g.indices) for g in lambdas), key=lambda t: t[0])
    size = m - 1 if strict else m
    if size < 0:
        raise ValueError("order 0 with strict sets leaves nothing to approximate with")
    den, best_a, best_c = None, (), {}
    d = x.as_dict()
    for a in iter_members(family, range(1, spec.N + 1), max_size=size):
        if mode == "projection":
            val, coeffs = norm(x - project(x, a), spec), {n: d.get(n, 0) for n in a}
        else:
            val, coeffs = _coordinate_descent(x, a, spec, tol, max_sweeps)
        if den is None or val < den:
            den, best_a, best_c = val, a, coeffs
        if den == 0:
            break
    if den == 0:
        ratio = math.inf if num > 0 else 0.0
    else:
        ratio = float(num) / float(den)
    return GreedyResult(ratio, float(num), float(den), lam, best_a, best_c, mode)


# ---------------------------------------------------------------------------
# tables


def witness_vectors(n: int, seed: int = 0, n_random: int = 8) -> list[tuple[str, Vector]]:
    """Alternating signs, all ones, and seeded uniform[-1, 1] vectors on {1..n}."""
    out = [
        ("alternating", Vector.from_dense([(-1) ** i for i in range(1, n + 1)])),
        ("ones", Vector.from_dense([1] * n)),
    ]
    rng = np.random.default_rng(seed)
    for k in range(n_random):
        vals = rng.uniform(-1.0, 1.0, size=n)
        out.append((f"random[{seed}:{k}]", Vector.from_dense([float(v) for v in vals])))
    return out


def constant_growth_table(basis_spec: NormSpec, alphas: Iterable[Ordinal], n_list: Iterable[int],
                          policy: FundSeqPolicy = DEFAULT_POLICY, seed: int = 0, n_random: int = 8) -> list[dict]:
    """One row per (alpha, N): the largest S_alpha-unconditionality ratio over the witness vectors."""
    n_list = list(n_list)
    rows = []
    for alpha in alphas:
        fam = SchreierHandle(alpha, policy)
        for n in n_list:
            spec = basis_spec.with_window(n)
            best = None
            for name, v in witness_vectors(n, seed, n_random):
                r = uncond_search(v, fam, spec)
                if best is None or r.ratio > best[0]:
                    best = (r.ratio, name, r.witness)
            rows.append({
                "alpha": format_ordinal(alpha),
                "N": n,
                "constant": float(best[0]),
                "mode": "exact-search",
                "witness": f"{best[1]} A={format_finset(best[2])}",
            })
    return rows
