import itertools
from functools import lru_cache

import pytest

from schreierkit.ordinal import DEFAULT_POLICY, fund_seq, parse_ordinal


def subsets(n):
    """Every subset of {1..n} as an ascending tuple."""
    for k in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), k)


@lru_cache(maxsize=None)
def definitional_member(e, alpha, policy=DEFAULT_POLICY):
    """Membership straight from the recursive definition, trying every block split."""
    if not e:
        return True
    if alpha.is_zero:
        return len(e) == 1
    if alpha.is_limit:
        return any(definitional_member(e, fund_seq(policy, alpha, m), policy) for m in range(1, e[0] + 1))
    gamma = alpha.predecessor()

    @lru_cache(maxsize=None)
    def fewest_blocks(start):
        if start == len(e):
            return 0
        best = None
        for stop in range(start + 1, len(e) + 1):
            if definitional_member(e[start:stop], gamma, policy):
                rest = fewest_blocks(stop)
                if rest is not None and (best is None or rest + 1 < best):
                    best = rest + 1
        return best

    k = fewest_blocks(0)
    return k is not None and k <= e[0]


@pytest.fixture
def P():
    return parse_ordinal


def s1_sets(n):
    """S_1 inside {1..n} generated directly from the rule |E| <= min E."""
    yield ()
    for k in range(1, n + 1):
        rest = range(k + 1, n + 1)
        for j in range(0, k):
            for tail in itertools.combinations(rest, j):
                yield (k,) + tail


def brute_summing_uncond(dense, sets):
    """max over the given A of the summing norm of x - P_A x, divided by the summing norm of x."""
    def summing(xs):
        s, best = 0, 0
        for v in xs:
            s += v
            best = max(best, abs(s))
        return best

    best = 0
    for a in sets:
        a = set(a)
        best = max(best, summing([0 if i + 1 in a else v for i, v in enumerate(dense)]))
    return best / summing(dense)


ACCEPTANCE_LINES: dict = {}


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
