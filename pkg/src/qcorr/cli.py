"""Command line front end: ``qcorr analyze | verify | ghz-audit | partitions``.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
3 invalid input state, 4 audit failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .correlation import (DEFAULT_TOL, CheckResult, analyze, check_araki_lieb, check_partition_invariance,
                          check_pure_tripartite_identities, check_strong_subadditivity, identity, sig12)
from .errors import InvalidState, QCorrError, SpecFormatError
from .ghz_audit import MAX_AUDIT_N, audit_simultaneous_optimality
from .partitions import MAX_INTEGER_N, enumerate_set_partitions, hardy_ramanujan_estimate, partition_count
from .states import MultipartiteState, bell, load_state, product_state, random_mixed, random_pure

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_INVALID_STATE = 3
EXIT_AUDIT_FAIL = 4

U64_MAX = 2**64 - 1


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    base: str = "2"
    seed: int | None = None
    trials: int | None = None
    tol: float = DEFAULT_TOL
    fmt: str = "json"
    out: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError(f"tolerance must be positive, got {self.tol}")
        if self.trials is not None and self.trials < 1:
            raise UsageError(f"trials must be at least 1, got {self.trials}")
        if self.seed is not None and not 0 <= self.seed <= U64_MAX:
            raise UsageError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def log_base(self):
        return math.e if self.base == "e" else 2

    @property
    def base_label(self):
        return "e" if self.base == "e" else 2


# -- output -------------------------------------------------------------------


def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(obj, dict):
        rows = []
        for key, val in obj.items():
            rows += _flatten(val, f"{prefix}.{key}" if prefix else str(key))
        return rows
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        rows = []
        for i, val in enumerate(obj):
            rows += _flatten(val, f"{prefix}[{i}]")
        return rows
    return [(prefix, obj)]


def _cell(val) -> str:
    if val is None:
        return ""
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, float):
        return repr(sig12(val))
    if isinstance(val, list):
        return " ".join(_cell(v) for v in val)
    return str(val)


def _render(payload: dict, fmt: str, table: tuple[list[str], list[list]] | None = None) -> str:
    """Serialise ``payload``. CSV and text use ``table`` when given, else a
    flattened key/value listing."""
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if table is None:
        table = (["key", "value"], [[k, v] for k, v in _flatten(payload)])
    header, rows = table
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    cells = [header] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -- analyze ------------------------------------------------------------------


def cmd_analyze(paths: Sequence[str], config: RunConfig) -> tuple[int, str]:
    reports = []
    passed = True
    for path in paths:
        state = load_state(path)
        report = analyze(state, config.log_base, config.tol)
        passed &= report.passed
        entry = {"input": path, "label": state.label, "dims": list(state.dims)}
        entry.update(report.to_dict())
        reports.append(entry)
    payload = reports[0] if len(reports) == 1 else {"reports": reports}
    return (EXIT_OK if passed else EXIT_VERIFY_FAIL), _render(payload, config.fmt)


# -- verify -------------------------------------------------------------------

VERIFY_DIMS = [(2, 2, 2), (2, 3, 4), (2, 2, 3), (3, 3, 2)]


def _araki_lieb(seq, base, tol) -> CheckResult:
    rng = np.random.default_rng(seq)
    dims = [(2, 2), (2, 3), (3, 4), (2, 4)][int(rng.integers(4))]
    state = random_mixed(dims, int(rng.integers(1, dims[0] * dims[1] + 1)), rng)
    return check_araki_lieb(state, [0], [1], base, tol)


@lru_cache(maxsize=1)
def _four_party_partitions():
    return enumerate_set_partitions(4)


def _partition_invariance(seq, base, tol) -> CheckResult:
    parts = _four_party_partitions()
    rng = np.random.default_rng(seq)
    state = random_mixed((2, 2, 2, 2), int(rng.integers(1, 17)), rng)
    i, j = rng.choice(len(parts), 2, replace=False)
    res = check_partition_invariance(state, parts[i], parts[j], base, tol)
    return CheckResult([identity("partition_invariance", res.sum_first, res.sum_second, tol)])


def _ssa(seq, base, tol) -> CheckResult:
    rng = np.random.default_rng(seq)
    dims = VERIFY_DIMS[int(rng.integers(len(VERIFY_DIMS)))]
    state = random_mixed(dims, int(rng.integers(1, 9)), rng)
    return check_strong_subadditivity(state, base, tol)


def _pure_state_3(seq):
    rng = np.random.default_rng(seq)
    dims = VERIFY_DIMS[int(rng.integers(len(VERIFY_DIMS)))]
    return random_pure(dims, rng)


def _pure_identities(seq, base, tol) -> CheckResult:
    res = check_pure_tripartite_identities(_pure_state_3(seq), base, tol)
    return CheckResult([v for v in res.verdicts if v.name != "lambda_zero"])


def _lambda_zero(seq, base, tol) -> CheckResult:
    res = check_pure_tripartite_identities(_pure_state_3(seq), base, tol)
    return CheckResult([res["lambda_zero"]])


VERIFY_CHECKS: list[tuple[str, Callable]] = [
    ("araki_lieb", _araki_lieb),
    ("partition_invariance", _partition_invariance),
    ("strong_subadditivity", _ssa),
    ("pure_tripartite_identities", _pure_identities),
    ("lambda_zero", _lambda_zero),
]


def run_verify(trials: int, seed: int, base=2, tol: float = DEFAULT_TOL) -> dict:
    """Run every check on ``trials`` seeded states. Check ``k`` uses child
    ``k`` of the master seed, trial ``t`` its child ``t``, so each result
    depends only on its position."""
    children = np.random.SeedSequence(seed).spawn(len(VERIFY_CHECKS))
    checks = []
    for (name, fn), child in zip(VERIFY_CHECKS, children):
        ok = 0
        worst = math.inf
        worst_name = ""
        for seq in child.spawn(trials):
            res = fn(seq, base, tol)
            ok += res.passed
            v = min(res.verdicts, key=lambda v: v.slack)
            if v.slack < worst:
                worst, worst_name = v.slack, v.name
        checks.append({"check": name, "trials": trials, "passed": ok, "failed": trials - ok,
                       "worst_slack": worst, "worst_verdict": worst_name})
    return {"checks": checks, "passed": all(c["failed"] == 0 for c in checks)}


def cmd_verify(config: RunConfig) -> tuple[int, str]:
    trials = 100 if config.trials is None else config.trials
    seed = 42 if config.seed is None else config.seed
    result = run_verify(trials, seed, config.log_base, config.tol)
    for c in result["checks"]:
        c["worst_slack"] = sig12(c["worst_slack"])
    payload = {"seed": seed, "trials": trials, "tolerance": config.tol, "log_base": config.base_label}
    payload.update(result)
    header = ["check", "trials", "passed", "failed", "worst_slack", "worst_verdict", "tolerance", "log_base"]
    rows = [[c["check"], c["trials"], c["passed"], c["failed"], c["worst_slack"], c["worst_verdict"],
             config.tol, config.base_label] for c in result["checks"]]
    code = EXIT_OK if result["passed"] else EXIT_VERIFY_FAIL
    return code, _render(payload, config.fmt, (header, rows))


# -- ghz-audit ----------------------------------------------------------------


def bell_pairs(n: int):
    """Bell pairs on qubits (0,1), (2,3), ...; needs even ``n``."""
    if n % 2:
        raise UsageError(f"Bell-pair injection needs an even number of qubits, got {n}")
    st = product_state([bell()] * (n // 2))
    return MultipartiteState(st.rho, st.dims, "bell_pairs")


def cmd_ghz_audit(n: int, trials: int, starts: int, seed: int, config: RunConfig,
                  inject_paths: Sequence[str] = (), inject_bell_pairs: bool = False) -> tuple[int, str]:
    if not 2 <= n <= MAX_AUDIT_N:
        raise UsageError(f"n must lie in [2, {MAX_AUDIT_N}], got {n}")
    if starts < 0:
        raise UsageError(f"starts must be non-negative, got {starts}")
    inject = [load_state(p) for p in inject_paths]
    if inject_bell_pairs:
        inject.append(bell_pairs(n))
    for st in inject:
        if st.dims != (2,) * n:
            raise UsageError(f"injected state {st.label or '?'} has dims {st.dims}, expected {n} qubits")
    result = audit_simultaneous_optimality(n, trials, seed, starts, inject=inject)
    payload = result.to_dict()
    payload["tolerance"] = config.tol
    payload["log_base"] = 2
    return (EXIT_OK if result.passed else EXIT_AUDIT_FAIL), _render(payload, config.fmt)


# -- partitions ---------------------------------------------------------------


def cmd_partitions(n_max: int, config: RunConfig) -> tuple[int, str]:
    if not 1 <= n_max <= MAX_INTEGER_N:
        raise UsageError(f"n_max must lie in [1, {MAX_INTEGER_N}], got {n_max}")
    rows = []
    for n in range(1, n_max + 1):
        exact = partition_count(n)
        est = hardy_ramanujan_estimate(n)
        rows.append([n, exact, est, est / exact])
    payload = {"count": "integer_partitions", "rows": [
        {"n": n, "exact": e, "estimate": sig12(est), "ratio": sig12(r)} for n, e, est, r in rows]}
    return EXIT_OK, _render(payload, config.fmt, (["n", "exact", "estimate", "ratio"], rows))


# -- entry point --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _u64(text: str) -> int:
    val = int(text)
    if not 0 <= val <= U64_MAX:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--base", choices=["2", "e"], default="2", help="logarithm base (bits or nats)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="verdict tolerance")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = _Parser(prog="qcorr", description="Multipartite correlation measures for small quantum systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="full report for StateSpec JSON files")
    p.add_argument("inputs", nargs="+")

    p = sub.add_parser("verify", parents=[common], help="inequality and identity checks on seeded ensembles")
    p.add_argument("--seed", type=_u64, default=42)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("ghz-audit", parents=[common], help="search for non-GHZ states with the optimal profile")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--starts", type=int, default=4)
    p.add_argument("--inject", action="append", default=[], metavar="PATH",
                   help="StateSpec file judged alongside the random states (repeatable)")
    p.add_argument("--inject-bell-pairs", action="store_true",
                   help="also judge Bell pairs on qubits (0,1), (2,3), ...")

    p = sub.add_parser("partitions", parents=[common], help="p(n) against its asymptotic estimate")
    p.add_argument("n_max", type=int)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str | None]:
    """Parse ``argv`` and execute; returns (exit code, rendered output, output path)."""
    args = build_parser().parse_args(argv)
    default_fmt = "csv" if args.command == "partitions" else "json"
    config = RunConfig(args.command, list(getattr(args, "inputs", [])), args.base,
                       getattr(args, "seed", None), getattr(args, "trials", None),
                       args.tol, args.fmt or default_fmt, args.out)
    if args.command == "analyze":
        code, text = cmd_analyze(config.inputs, config)
    elif args.command == "verify":
        code, text = cmd_verify(config)
    elif args.command == "ghz-audit":
        code, text = cmd_ghz_audit(args.n, config.trials, args.starts, config.seed, config,
                                   args.inject, args.inject_bell_pairs)
    else:
        code, text = cmd_partitions(args.n_max, config)
    return code, text, config.out


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, text, out = run(argv)
    except UsageError as exc:
        print(f"qcorr: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecFormatError as exc:
        print(f"qcorr: cannot parse input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidState as exc:
        print(f"qcorr: invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE
    except QCorrError as exc:
        print(f"qcorr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
