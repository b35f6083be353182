"""Exit criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL - detail`` line; pytest
also repeats them in an "acceptance" section of the terminal summary.
Run directly (``python tests/test_acceptance.py``) to get just those lines.
"""
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import (  # noqa: E402
    brute_summing_uncond,
    definitional_member,
    record_acceptance,
    s1_sets,
    subsets,
)

from schreierkit.banach import NormSpec, Vector, uncond_search  # noqa: E402
from schreierkit.cli import main as cli_main  # noqa: E402
from schreierkit.lemma_suite import (  # noqa: E402
    CHECKS,
    DEFAULT_ORDINALS,
    check_cor_2_2,
    check_graph_agreement,
    check_lemma_2_1,
    check_lemma_3_1,
    check_lemma_4_3,
)
from schreierkit.ordinal import omega_poly, parse_ordinal  # noqa: E402
from schreierkit.ordtree import f_value  # noqa: E402
from schreierkit.schreier import SchreierHandle, enumerate_family, g_value, interval, member  # noqa: E402

pytestmark = pytest.mark.acceptance
P = parse_ordinal


def test_criterion_1_oracle_equivalence():
    t0 = time.perf_counter()
    mismatches = 0
    cases = 0
    cache: dict = {}
    for s in ("1", "2", "3", "w", "w+1", "w*2", "w^2"):
        a = P(s)
        fam = enumerate_family(a, 12, cache=cache)
        h = SchreierHandle(a)
        for mask in range(1 << 12):
            e = tuple(i + 1 for i in range(12) if mask >> i & 1)
            cases += 1
            mismatches += member(e, h) != (e in fam)
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and cases == 7 * 4096 and dt < 60
    record_acceptance(1, ok, f"{mismatches} mismatches over {cases} cases in {dt:.1f}s")
    assert ok


def s2_by_splits(e):
    """E in S_2 iff E splits into at most min E consecutive blocks B with |B| <= min B (the S_1 rule)."""
    k = len(e)
    fewest = [0] + [None] * k  # fewest[j]: blocks covering e[:j]
    for j in range(1, k + 1):
        for i in range(j):
            if fewest[i] is not None and j - i <= e[i] and (fewest[j] is None or fewest[i] + 1 < fewest[j]):
                fewest[j] = fewest[i] + 1
    return not e or (fewest[k] is not None and fewest[k] <= e[0])


def test_criterion_2_closed_forms():
    # the split DP is itself checked against the recursive definition on {1..10}
    assert all(s2_by_splits(e) == definitional_member(e, P("2")) for e in subsets(10))
    one, two = SchreierHandle(P("1")), SchreierHandle(P("2"))
    bad = [n for n in range(1, 51) if g_value(n, one) != 2 * n - 1]
    bad += [("2", n) for n in range(1, 11) if g_value(n, two) != n * 2**n - 1]
    # cross-check for n <= 6: S_1 by exhaustive enumeration of {1..12}, S_2 by an all-splits DP
    fam1 = enumerate_family(P("1"), 12)
    for n in range(1, 7):
        g = 2 * n - 1
        if not (interval(n, g) in fam1 and interval(n, g + 1) not in fam1):
            bad.append(("oracle", "1", n))
        g = n * 2**n - 1
        if not (s2_by_splits(interval(n, g)) and not s2_by_splits(interval(n, g + 1))):
            bad.append(("oracle", "2", n))
    ok = not bad
    record_acceptance(2, ok, "G(n,1)=2n-1 for n<=50, G(n,2)=n*2^n-1 for n<=10" + ("" if ok else f"; bad {bad}"))
    assert ok


def test_criterion_3_f_fidelity():
    ns = range(1, 9)
    r21 = check_lemma_2_1(DEFAULT_ORDINALS, ns)
    r22 = check_cor_2_2(DEFAULT_ORDINALS, ns)
    rows = {
        "w": lambda n: n,
        "w*2": lambda n: 2 * n,
        "w^2": lambda n: n * n,
    }
    bad = [(a, n) for a, fn in rows.items() for n in range(1, 21) if f_value(n, P(a)) != fn(n)]
    ok = r21.passed and r22.passed and not bad
    detail = (f"recursion {len(r21.cells) - len(r21.failures)}/{len(r21.cells)}, "
              f"F(n,a+m)>=m {len(r22.cells) - len(r22.failures)}/{len(r22.cells)}, closed rows bad={bad}")
    record_acceptance(3, ok, detail)
    assert ok


def test_criterion_4_bridge():
    rep = check_lemma_3_1(DEFAULT_ORDINALS, range(1, 9))
    fails = [(c.params["alpha"], c.params["n"]) for c in rep.failures]
    ok = not fails
    record_acceptance(4, ok, f"{len(rep.cells) - len(fails)}/{len(rep.cells)} cells"
                      + ("" if ok else f"; failing (alpha, n): {fails}"))
    assert ok


def test_criterion_5_graph_agreement():
    top = P("w^2*2")
    ords = sorted({omega_poly(a, b, c) for a in range(3) for b in range(3) for c in range(3)} | set(DEFAULT_ORDINALS))
    ords = [a for a in ords if a <= top]
    rep = check_graph_agreement(ords, range(1, 5))
    ok = rep.passed
    record_acceptance(5, ok, f"{len(rep.cells) - len(rep.failures)}/{len(rep.cells)} cells, alpha <= w^2*2, n <= 4")
    assert ok


def test_criterion_6_boosts():
    rep = check_lemma_4_3(length=20)
    ok = rep.passed and len(rep.cells) == 40
    record_acceptance(6, ok, f"{len(rep.cells) - len(rep.failures)}/{len(rep.cells)} cells, n <= 20")
    assert ok


def _alternating(n):
    return Vector.from_dense([(-1) ** i for i in range(1, n + 1)])


def test_criterion_7_summing_growth():
    t0 = time.perf_counter()
    h = SchreierHandle(P("1"))
    problems = []
    ratios = {}
    for m in range(2, 11):
        n = 4 * m
        x = _alternating(n)
        spec = NormSpec.summing(n)
        if m <= 3:
            r = uncond_search(x, h, spec, exact=True)
            if not (isinstance(r.ratio, Fraction) and r.ratio >= m):
                problems.append(m)
        else:
            r = uncond_search(x, h, spec)
            if not r.ratio >= m * (1 - 1e-9):
                problems.append(m)
        ratios[m] = r.ratio
        if m <= 5:
            brute = brute_summing_uncond(x.dense(n), s1_sets(n))
            if abs(float(r.ratio) - brute) > 1e-9 * brute:
                problems.append(("brute", m))
    dt = time.perf_counter() - t0
    ok = not problems and dt < 300
    shown = ", ".join(f"{m}:{float(v):g}" for m, v in ratios.items())
    record_acceptance(7, ok, f"ratios {shown} in {dt:.1f}s" + ("" if ok else f"; problems {problems}"))
    assert ok


def test_criterion_8_schreier_control():
    spec = NormSpec.schreier(P("1"), 8)
    h = SchreierHandle(P("1"))
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for _ in range(1000):
        x = Vector.from_dense([float(v) for v in rng.uniform(-1, 1, 8)])
        worst = max(worst, float(uncond_search(x, h, spec).ratio))
    ok = worst <= 1 + 1e-9
    record_acceptance(8, ok, f"max ratio {worst!r} over 1000 vectors")
    assert ok


def test_criterion_9_verify_all(capsys):
    t0 = time.perf_counter()
    code = cli_main(["verify", "all", "--format", "json"])
    out = capsys.readouterr().out
    dt = time.perf_counter() - t0
    doc = json.loads(out)
    listed = [c["check"] for c in doc["checks"]]
    failing = {c["check"]: c["failures"] for c in doc["checks"] if c["failures"]}
    ok = code == 0 and listed == list(CHECKS) and doc["failing_cells"] == 0 and dt < 600
    with capsys.disabled():
        record_acceptance(9, ok, f"exit {code}, {len(listed)} checks, {doc['failing_cells']} failing cells "
                          f"{failing or ''} in {dt:.1f}s")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
