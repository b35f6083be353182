"""Command-line interface.

Exit codes: 0 success, 1 not a member (``decompose``), 2 usage, 3 bound
exceeded or overflow, 4 failing checks.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import threading
from dataclasses import dataclass
from typing import Sequence

from .banach import ALL, NormSpec, Vector, constant_growth_table, greedy_constant, uncond_search
from .ordinal import DEFAULT_POLICY, PLUS_ONE_POLICY, FundSeqPolicy, OrdinalSyntaxError, format_ordinal, parse_ordinal
from .ordtree import GraphTooLargeError, build_graph, export_dot, f_value, find_separation, table_to_csv
from .policy import GrowthFn, boost_policy, check_chain_inclusion, policy_from_json, shift_policy
from .schreier import (
    DEFAULT_ENUM_BOUND,
    DEFAULT_G_CAP,
    OVERFLOW,
    BoundExceededError,
    FinSetSyntaxError,
    NotAMemberError,
    SchreierHandle,
    decompose,
    format_finset,
    g_value,
    iter_family,
    member,
    parse_finset,
    witness_to_dict,
    witness_to_text,
)

EXIT_OK, EXIT_NOT_MEMBER, EXIT_USAGE, EXIT_BOUND, EXIT_CHECKS = 0, 1, 2, 3, 4
POLICY_ENV = "SCHREIER_POLICY_FILE"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    policy: FundSeqPolicy
    bound: int
    g_cap: int
    fmt: str
    seed: int
    timing: bool


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def resolve_policy(selector: str | None, env: dict | None = None) -> FundSeqPolicy:
    env = os.environ if env is None else env
    if selector is None:
        path = env.get(POLICY_ENV)
        if not path:
            return DEFAULT_POLICY
        try:
            return policy_from_json(_load_json(path))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad policy file {path}: {exc}") from None
    if selector in ("default", "diagonal"):
        return DEFAULT_POLICY
    if selector == "plus_one":
        return PLUS_ONE_POLICY
    kind, _, path = selector.partition(":")
    try:
        if kind == "shift" and path:
            data = _load_json(path)
            return shift_policy(DEFAULT_POLICY, GrowthFn.from_json(json.dumps(data)))
        if kind == "boost" and path:
            data = _load_json(path)
            if not isinstance(data, dict):
                raise ValueError("boost file must be a JSON object {ordinal: [values]}")
            return boost_policy(DEFAULT_POLICY, {parse_ordinal(k): GrowthFn(tuple(v)) for k, v in data.items()})
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad policy {selector!r}: {exc}") from None
    raise UsageError(f"unknown policy selector {selector!r} (default | plus_one | shift:FILE | boost:FILE)")


def _ordinal(text: str):
    try:
        return parse_ordinal(text)
    except OrdinalSyntaxError as exc:
        raise UsageError(str(exc)) from None


def _ordinal_list(text: str):
    return [_ordinal(t) for t in text.split(",") if t]


def _finset(text: str):
    try:
        return parse_finset(text)
    except FinSetSyntaxError as exc:
        raise UsageError(str(exc)) from None


def _range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return [int(text)]
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected A..B") from None
    if lo_i < 1:
        raise UsageError("n starts at 1")
    return list(range(lo_i, hi_i + 1))


def _emit(obj, cfg: CliConfig, header: list[str] | None = None, text: str | None = None) -> None:
    if cfg.fmt == "json":
        print(json.dumps(obj, indent=2))
    elif cfg.fmt == "csv":
        if header is None:
            raise UsageError("this command has no CSV form")
        sys.stdout.write(table_to_csv(obj, header))
    else:
        print(text if text is not None else json.dumps(obj, indent=2))


# ---------------------------------------------------------------------------
# commands


def cmd_member(args, cfg: CliConfig) -> int:
    e, alpha = _finset(args.set), _ordinal(args.alpha)
    h = SchreierHandle(alpha, cfg.policy)
    res = member(e, h)
    out = {"set": list(e), "alpha": format_ordinal(alpha), "member": res}
    if args.witness and res:
        out["witness"] = witness_to_dict(decompose(e, h))
    text = "true" if res else "false"
    if args.witness and res:
        text += "\n" + witness_to_text(decompose(e, h))
    _emit(out, cfg, text=text)
    return EXIT_OK


def cmd_decompose(args, cfg: CliConfig) -> int:
    e, alpha = _finset(args.set), _ordinal(args.alpha)
    try:
        w = decompose(e, SchreierHandle(alpha, cfg.policy))
    except NotAMemberError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_MEMBER
    _emit(witness_to_dict(w), cfg, text=witness_to_text(w))
    return EXIT_OK


def cmd_enumerate(args, cfg: CliConfig) -> int:
    alpha = _ordinal(args.alpha)
    sets = list(iter_family(alpha, args.N, cfg.policy, cfg.bound))
    rows = [{"set": format_finset(s)} for s in sets]
    _emit([list(s) for s in sets] if cfg.fmt == "json" else rows, cfg, header=["set"],
          text="\n".join(format_finset(s) for s in sets))
    return EXIT_OK


def cmd_table(args, cfg: CliConfig) -> int:
    alphas = _ordinal_list(args.alpha)
    ns = _range(args.n) if args.n else []
    rows = []
    overflow = False
    for a in alphas:
        h = SchreierHandle(a, cfg.policy)
        for n in ns:
            if args.kind == "F":
                rows.append({"alpha": format_ordinal(a), "n": n, "F": f_value(n, a, cfg.policy)})
            else:
                g = g_value(n, h, cfg.g_cap)
                overflow |= g is OVERFLOW
                rows.append({"alpha": format_ordinal(a), "n": n, "G": "Overflow" if g is OVERFLOW else g})
    header = ["alpha", "n", args.kind]
    text = table_to_csv(rows, header).replace("\r\n", "\n").rstrip("\n")
    _emit(rows, cfg, header=header, text=text)
    return EXIT_BOUND if overflow else EXIT_OK


def cmd_graph(args, cfg: CliConfig) -> int:
    g = build_graph(args.n, _ordinal(args.alpha), cfg.policy, args.max_vertices)
    sys.stdout.write(export_dot(g))
    return EXIT_OK


def cmd_separation(args, cfg: CliConfig) -> int:
    a, b = _ordinal(args.alpha), _ordinal(args.beta)
    if not a < b:
        raise UsageError("separation needs alpha < beta")
    sep = find_separation(a, b, cfg.policy, args.scan_limit)
    out = {"alpha": format_ordinal(a), "beta": format_ordinal(b), "scan_limit": args.scan_limit,
           "N": sep if sep is not None else "NotFound"}
    _emit(out, cfg, text=str(out["N"]))
    return EXIT_OK


def cmd_policy_check(args, cfg: CliConfig) -> int:
    beta = _ordinal(args.beta)
    if not beta.is_limit:
        raise UsageError(f"{args.beta} is not a limit ordinal")
    rep = check_chain_inclusion(cfg.policy, beta, args.m_max, args.N, cfg.bound)
    lines = [f"{s['beta_m']} <= {s['beta_m_plus_1']}: {'holds' if s['holds'] else 'FAILS'}"
             + ("" if s["holds"] else f" e.g. {s['counterexamples'][0]}") for s in rep["steps"]]
    _emit(rep, cfg, text="\n".join(lines) or "vacuous (m_max <= 1)")
    return EXIT_OK


def _basis(text: str, n: int) -> NormSpec:
    if text in ("summing", "sup"):
        return NormSpec(text, n)
    kind, _, alpha = text.partition(":")
    if kind == "schreier" and alpha:
        return NormSpec.schreier(_ordinal(alpha), n)
    raise UsageError(f"unknown basis {text!r} (summing | sup | schreier:ALPHA)")


def cmd_constants(args, cfg: CliConfig) -> int:
    spec = _basis(args.basis, args.N)
    if args.vectors is None:
        alphas = [] if args.family == "all" else _ordinal_list(args.family)
        rows = constant_growth_table(spec, alphas, _range(args.grid_n) if args.grid_n else [args.N],
                                     cfg.policy, cfg.seed)
        _emit(rows, cfg, header=["alpha", "N", "constant", "mode", "witness"],
              text=table_to_csv(rows, ["alpha", "N", "constant", "mode", "witness"]).replace("\r\n", "\n"))
        return EXIT_OK
    data = _load_json(args.vectors)
    if not isinstance(data, list):
        raise UsageError("vectors file must be a JSON array of {index: value} objects")
    family = ALL if args.family == "all" else SchreierHandle(_ordinal(args.family), cfg.policy)
    rows = []
    for k, obj in enumerate(data):
        try:
            x = Vector.from_json(obj)
        except (ValueError, AttributeError, TypeError) as exc:
            raise UsageError(f"vector {k}: {exc}") from None
        try:
            if args.kind == "uncond":
                r = uncond_search(x, family, spec, exact=args.exact)
            else:
                r = greedy_constant(x, args.m, family, spec, args.mode, strict=not args.nonstrict)
        except ValueError as exc:  # zero vector, support outside the window, no greedy set
            raise UsageError(f"vector {k}: {exc}") from None
        if args.kind == "uncond":
            rows.append({"alpha": args.family, "N": args.N, "constant": float(r.ratio),
                         "mode": "exact" if args.exact else "float", "witness": format_finset(r.witness)})
        else:
            rows.append({"alpha": args.family, "N": args.N, "constant": r.ratio, "mode": args.mode,
                         "witness": f"Lambda={format_finset(r.greedy_set)} A={format_finset(r.approx_set)}"})
    header = ["alpha", "N", "constant", "mode", "witness"]
    _emit(rows, cfg, header=header, text=table_to_csv(rows, header).replace("\r\n", "\n"))
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig) -> int:
    from .lemma_suite import CHECKS, SuiteConfig, campaign_json, run_checks

    names = list(CHECKS) if args.checks == ["all"] or not args.checks else args.checks
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    suite = SuiteConfig(policy=cfg.policy)
    reports = run_checks(names, suite)
    if cfg.fmt == "text":
        for r in reports:
            print(r.summary_line())
    else:
        print(campaign_json(reports, suite, timing=cfg.timing))
    return EXIT_CHECKS if any(r.failures for r in reports) else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--policy", default=None,
                        help=f"default | plus_one | shift:FILE | boost:FILE (fallback: ${POLICY_ENV})")
    common.add_argument("--bound", type=int, default=DEFAULT_ENUM_BOUND, help="enumeration bound on N")
    common.add_argument("--g-cap", type=int, default=DEFAULT_G_CAP, help="cap for G values")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="add timing fields to JSON reports")

    p = argparse.ArgumentParser(prog="schreierkit", description="Schreier families, F and G, greedy constants.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("member", parents=[common], help="decide E in S_alpha")
    s.add_argument("set")
    s.add_argument("--alpha", required=True)
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("decompose", parents=[common], help="certificate tree for E in S_alpha")
    s.add_argument("set")
    s.add_argument("--alpha", required=True)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("enumerate", parents=[common], help="list S_alpha within {1..N}")
    s.add_argument("--alpha", required=True)
    s.add_argument("--N", type=int, required=True)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("table", parents=[common], help="F or G grid")
    s.add_argument("kind", choices=("F", "G"))
    s.add_argument("--alpha", required=True, help="comma-separated ordinals")
    s.add_argument("--n", default="1..10", help="range A..B (empty for none)")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("graph", parents=[common], help="DOT export of G_n from alpha")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", required=True)
    s.add_argument("--max-vertices", type=int, default=10**5)
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("separation", parents=[common], help="least N with F(n,a) < F(n,b) beyond N")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s.add_argument("--scan-limit", type=int, default=50)
    s.set_defaults(func=cmd_separation)

    s = sub.add_parser("policy-check", parents=[common], help="chain inclusion of approximating families")
    s.add_argument("--beta", required=True)
    s.add_argument("--m-max", type=int, default=3)
    s.add_argument("--N", type=int, default=8)
    s.set_defaults(func=cmd_policy_check)

    s = sub.add_parser("constants", parents=[common], help="unconditionality / greedy constants")
    s.add_argument("--basis", required=True, help="summing | sup | schreier:ALPHA")
    s.add_argument("--family", default="all", help="all | ALPHA (comma list without --vectors)")
    s.add_argument("--vectors", default=None, help="JSON array of {index: value}")
    s.add_argument("--N", type=int, default=8)
    s.add_argument("--grid-n", default=None, help="range of N for the growth table")
    s.add_argument("--kind", choices=("uncond", "greedy"), default="uncond")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--mode", choices=("projection", "optimize"), default="projection")
    s.add_argument("--exact", action="store_true")
    s.add_argument("--nonstrict", action="store_true", help="allow |A| <= m in the greedy infimum")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("verify", parents=[common], help="run the verification campaign")
    s.add_argument("checks", nargs="*", default=["all"])
    s.set_defaults(func=cmd_verify)
    return p


def _run(argv: Sequence[str] | None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.fmt == "csv" and args.command in ("member", "decompose", "graph", "separation",
                                                   "policy-check", "verify"):
            raise UsageError(f"--format csv is not available for {args.command}")
        cfg = CliConfig(resolve_policy(args.policy), args.bound, args.g_cap, args.fmt, args.seed, args.timing)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BoundExceededError, GraphTooLargeError) as exc:
        print(f"{parser.prog}: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND


def main(argv: Sequence[str] | None = None) -> int:
    # deep membership recursions need more C stack than the main thread has
    result: list = []
    old = threading.stack_size(256 * 1024 * 1024)
    try:
        t = threading.Thread(target=lambda: result.append(_run_catching(argv)))
        t.start()
    finally:
        threading.stack_size(old)
    t.join()
    return result[0]


def _run_catching(argv) -> int:
    try:
        return _run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
