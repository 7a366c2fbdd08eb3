"""Command-line front end: exponent sweeps, outage campaigns, slope fits,
schedule optimization, baseline curves, and inequality suites.

Results are emitted as CSV (metadata in leading ``# key=value`` comment
lines, then a header row and data rows) or as a JSON object with
``metadata`` and ``rows``.  Exit codes: 0 success, 1 runtime error, 2 usage
error, 3 verification violation.  Randomized subcommands require --seed and
echo it, together with the generator name, in the output metadata.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shlex
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from ._version import __version__
from .cutset import SingleRelaySchedule, TwoHopSchedule
from .dmt import (
    DEFAULT_ORACLE_BUDGET,
    DmtCurve,
    crossing_links_outage_region,
    exponent_grid_oracle,
    miso_dmt,
    optimize_schedule_single,
    parallel_channel_dmt,
    single_relay_exponent_analytic,
    single_relay_outage_region,
    two_hop_exponent_analytic,
)
from .lemmas import CheckKind, run_randomized_suite
from .montecarlo import (
    BoundModel,
    OutageRow,
    OutageTable,
    RunConfig,
    estimate_diversity_slope,
    estimate_outage,
)
from .rng import GENERATOR_NAME

WORKERS_ENV = "HDRELAY_WORKERS"

OUTAGE_COLUMNS = [
    "snr_db",
    "snr_linear",
    "rate_bits",
    "trials",
    "outage_count",
    "p_hat",
    "ci_low",
    "ci_high",
]


class UsageError(Exception):
    """Invalid flag values or inconsistent options."""


def parse_grid(text: str) -> list[float]:
    """Parse 'start:stop:step' (endpoints inclusive within half a step),
    a comma-separated list, or a single number."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if step <= 0:
                raise ValueError("step must be > 0")
            if stop < start:
                raise ValueError("stop must be >= start")
            count = int(math.floor((stop - start) / step + 0.5))
            return [round(start + k * step, 12) for k in range(count + 1)]
        if "," in text:
            return [float(p) for p in text.split(",")]
        return [float(text)]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from exc


def parse_count(text: str) -> int:
    """Parse a positive integer, allowing scientific notation like 1e6."""
    try:
        value = float(text)
    except ValueError as exc:
        raise UsageError(f"bad count {text!r}") from exc
    if not math.isfinite(value):
        raise UsageError(f"count must be a positive integer, got {text!r}")
    rounded = round(value)
    if rounded < 1 or abs(value - rounded) > 1e-9 * max(1.0, abs(value)):
        raise UsageError(f"count must be a positive integer, got {text!r}")
    return int(rounded)


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if not math.isfinite(value):
            return ""
        return repr(value)
    return str(value)


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render(
    columns: Sequence[str],
    rows: Sequence[dict[str, Any]],
    metadata: dict[str, Any] | None,
    fmt: str,
) -> str:
    """Render a table to CSV or JSON text (LF line endings, '.' decimals)."""
    if fmt == "csv":
        buf = io.StringIO()
        if metadata:
            for key, value in metadata.items():
                buf.write(f"# {key}={json.dumps(_json_safe(value))}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row.get(col)) for col in columns])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "metadata": _json_safe(metadata or {}),
            "rows": [_json_safe({col: row.get(col) for col in columns}) for row in rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def emit(
    obj: OutageTable | DmtCurve | tuple[Sequence[str], Sequence[dict[str, Any]]],
    fmt: str = "csv",
    target: str | None = None,
    metadata: dict[str, Any] | None = None,
) -> None:
    """Serialize a result to `target` (a path, or stdout when None).

    Accepts an OutageTable (its own metadata is merged under any explicit
    one), a DmtCurve, or a generic (columns, rows) pair.  The rendered text
    is written in one operation after it is fully built.
    """
    if isinstance(obj, OutageTable):
        columns: Sequence[str] = OUTAGE_COLUMNS
        rows = [{col: getattr(row, col) for col in OUTAGE_COLUMNS} for row in obj.rows]
        merged = dict(obj.metadata)
        merged.update(metadata or {})
        metadata = merged
    elif isinstance(obj, DmtCurve):
        columns = ["r", "d"]
        rows = [{"r": r, "d": d} for r, d in obj.points]
    else:
        columns, rows = obj
    text = render(columns, rows, metadata, fmt)
    if target is None:
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def _base_metadata(argv: Sequence[str]) -> dict[str, Any]:
    return {
        "tool": "hdrelay",
        "version": __version__,
        "command": "hdrelay " + shlex.join(argv),
        "timestamp": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
    }


def _resolve_workers(flag: int | None) -> int:
    if flag is not None:
        workers = flag
    elif os.environ.get(WORKERS_ENV):
        try:
            workers = int(os.environ[WORKERS_ENV])
        except ValueError as exc:
            raise UsageError(f"bad {WORKERS_ENV} value {os.environ[WORKERS_ENV]!r}") from exc
    else:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise UsageError(f"workers must be >= 1, got {workers}")
    return workers


def _usage_wrap(fn, *args, **kwargs):
    """Constructor calls whose ValueErrors are flag problems, not crashes."""
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cmd_exponent(args: argparse.Namespace) -> int:
    r_values = parse_grid(args.r_grid)
    if args.relays < 1:
        raise UsageError(f"--relays must be >= 1, got {args.relays}")
    step = args.oracle_step if args.oracle_step is not None else (0.005 if args.relays == 1 else 0.05)
    rows = []
    for r in r_values:
        if args.relays == 1:
            region = _usage_wrap(single_relay_outage_region, r, args.t)
            d_oracle = _usage_wrap(
                exponent_grid_oracle, region, 3, step, args.budget
            )
            d_analytic = (
                _usage_wrap(single_relay_exponent_analytic, r) if args.t == 0.5 else None
            )
        else:
            # every cut constrains its own N+1 crossing links the same way,
            # so the per-cut minimum equals the one reduced search
            d_oracle = _usage_wrap(
                exponent_grid_oracle,
                _usage_wrap(crossing_links_outage_region, args.relays, r),
                args.relays + 1,
                step,
                args.budget,
            )
            d_analytic = _usage_wrap(two_hop_exponent_analytic, args.relays, r)
        rows.append(
            {
                "r": r,
                "d_analytic": d_analytic,
                "d_oracle": None if math.isinf(d_oracle) else d_oracle,
            }
        )
    metadata = _base_metadata(args.argv)
    metadata.update(
        {"relays": args.relays, "t": args.t if args.relays == 1 else None, "oracle_step": step}
    )
    emit((["r", "d_analytic", "d_oracle"], rows), args.format, args.output, metadata)
    return 0


def _cmd_outage(args: argparse.Namespace) -> int:
    model = BoundModel(args.model)
    trials = parse_count(args.trials)
    workers = _resolve_workers(args.workers)
    if model is BoundModel.SINGLE_RELAY_UB:
        schedule: SingleRelaySchedule | TwoHopSchedule = _usage_wrap(SingleRelaySchedule, args.t)
        n_relays = 1
        if args.relays != 1:
            raise UsageError("--model single-relay-ub requires --relays 1")
    else:
        n_relays = args.relays
        if args.weights is not None:
            weights = tuple(float(w) for w in args.weights.split(","))
            schedule = _usage_wrap(TwoHopSchedule, n_relays, weights)
        else:
            schedule = _usage_wrap(TwoHopSchedule.uniform, n_relays)
    cfg = _usage_wrap(
        RunConfig,
        model=model,
        n_relays=n_relays,
        schedule=schedule,
        r=args.r,
        snr_db_grid=tuple(parse_grid(args.snr_db)),
        trials_per_point=trials,
        seed=args.seed,
        gap_bits=args.gap_bits,
    )
    table = estimate_outage(cfg, workers=workers)
    metadata = _base_metadata(args.argv)
    metadata["workers"] = workers
    emit(table, args.format, args.output, metadata)
    return 0


def _read_table(path: str) -> OutageTable:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path!r}: {exc}") from exc
    metadata: dict[str, Any] = {}
    raw_rows: list[dict[str, Any]] = []
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        metadata = doc.get("metadata", {})
        raw_rows = doc.get("rows", [])
    else:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        data_lines = []
        for ln in lines:
            if ln.startswith("#"):
                key, _, value = ln[1:].strip().partition("=")
                try:
                    metadata[key.strip()] = json.loads(value)
                except json.JSONDecodeError:
                    metadata[key.strip()] = value
            else:
                data_lines.append(ln)
        reader = csv.DictReader(data_lines)
        raw_rows = list(reader)
    rows = []
    try:
        for raw in raw_rows:
            rows.append(
                OutageRow(
                    snr_db=float(raw["snr_db"]),
                    snr_linear=float(raw["snr_linear"]),
                    rate_bits=float(raw["rate_bits"]),
                    trials=int(raw["trials"]),
                    outage_count=int(raw["outage_count"]),
                    p_hat=float(raw["p_hat"]),
                    ci_low=float(raw["ci_low"]),
                    ci_high=float(raw["ci_high"]),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path!r} is not an outage table: {exc}") from exc
    return OutageTable(rows=tuple(rows), metadata=metadata)


def _cmd_slope(args: argparse.Namespace) -> int:
    table = _read_table(args.input)
    if args.min_count < 1:
        raise UsageError(f"--min-count must be >= 1, got {args.min_count}")
    try:
        slope, stderr = estimate_diversity_slope(table, min_count=args.min_count)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    used = sum(1 for row in table.rows if row.outage_count >= args.min_count)
    metadata = _base_metadata(args.argv)
    metadata.update({"input": args.input, "min_count": args.min_count})
    if table.metadata:
        metadata["source"] = table.metadata
    rows = [{"slope": slope, "stderr": stderr, "points_used": used}]
    emit((["slope", "stderr", "points_used"], rows), args.format, args.output, metadata)
    return 0


def _cmd_schedule_opt(args: argparse.Namespace) -> int:
    r_values = parse_grid(args.r_grid)
    rows = []
    for r in r_values:
        t_star, d_star = _usage_wrap(
            optimize_schedule_single, r, args.t_step, args.oracle_step, args.budget
        )
        rows.append({"r": r, "t_star": t_star, "d_star": d_star})
    metadata = _base_metadata(args.argv)
    metadata.update({"t_step": args.t_step, "oracle_step": args.oracle_step})
    emit((["r", "t_star", "d_star"], rows), args.format, args.output, metadata)
    return 0


def _cmd_curves(args: argparse.Namespace) -> int:
    r_values = parse_grid(args.r_grid)
    if args.miso is not None:
        label = f"miso-{args.miso}x1"
        fn = lambda r: miso_dmt(args.miso, r)
    elif args.parallel:
        label = "parallel-channel"
        fn = parallel_channel_dmt
    elif args.single_relay:
        label = "single-relay"
        fn = single_relay_exponent_analytic
    else:
        label = f"two-hop-{args.two_hop}-relays"
        fn = lambda r: two_hop_exponent_analytic(args.two_hop, r)
    curve = _usage_wrap(DmtCurve.from_function, r_values, fn)
    metadata = _base_metadata(args.argv)
    metadata["curve"] = label
    emit(curve, args.format, args.output, metadata)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    report = _usage_wrap(
        run_randomized_suite,
        CheckKind(args.kind),
        args.instances,
        args.seed,
        max_len=args.max_len,
        max_relays=args.max_relays,
    )
    metadata = _base_metadata(args.argv)
    metadata.update({"seed": args.seed, "generator": GENERATOR_NAME})
    rows = [
        {
            "kind": report.kind.value,
            "instances": report.instances,
            "violations": report.violations,
            "worst_margin": report.worst_margin,
            "seed": report.seed,
        }
    ]
    emit(
        (["kind", "instances", "violations", "worst_margin", "seed"], rows),
        args.format,
        args.output,
        metadata,
    )
    if report.violations > 0:
        print(f"verification failed: {report.violations} violations", file=sys.stderr)
        return 3
    return 0


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=["csv", "json"], default="csv", help="output format")
    sub.add_argument("--output", default=None, help="output path (default: stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdrelay",
        description="Cut-set bounds, outage Monte Carlo, and diversity-multiplexing "
        "exponents for half-duplex relay channels.",
    )
    parser.add_argument("--version", action="version", version=f"hdrelay {__version__}")
    subs = parser.add_subparsers(dest="subcommand")

    p = subs.add_parser("exponent", help="analytic vs grid-oracle outage exponents")
    p.add_argument("--relays", type=int, default=1, help="number of relays (1 = single relay)")
    p.add_argument("--t", type=float, default=0.5, help="listen fraction (single relay only)")
    p.add_argument("--r-grid", default="0:1:0.1", help="multiplexing gains, start:stop:step")
    p.add_argument(
        "--oracle-step",
        type=float,
        default=None,
        help="grid step of the oracle (default 0.005 single relay, 0.05 otherwise)",
    )
    p.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET, help="oracle evaluation budget")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_exponent)

    p = subs.add_parser("outage", help="Monte Carlo outage probability over an SNR grid")
    p.add_argument("--model", choices=[m.value for m in BoundModel], default="single-relay-ub")
    p.add_argument("--relays", type=int, default=1)
    p.add_argument("--t", type=float, default=0.5, help="listen fraction (single-relay model)")
    p.add_argument("--weights", default=None, help="two-hop state weights, comma separated (default uniform)")
    p.add_argument("--r", type=float, required=True, help="multiplexing gain; rate = r*log2(snr)")
    p.add_argument("--snr-db", required=True, help="SNR grid in dB, start:stop:step")
    p.add_argument("--trials", default="100000", help="trials per SNR point (accepts 1e6)")
    p.add_argument("--seed", type=int, required=True, help="master seed (echoed in metadata)")
    p.add_argument("--gap-bits", type=float, default=0.0, help="constant gap subtracted from the bound")
    p.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"worker threads (default: ${WORKERS_ENV} or available parallelism); results do not depend on it",
    )
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_outage)

    p = subs.add_parser("slope", help="diversity slope fit from an outage table")
    p.add_argument("--input", required=True, help="CSV or JSON table produced by the outage command")
    p.add_argument("--min-count", type=int, default=50, help="drop rows with fewer outage events")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_slope)

    p = subs.add_parser("schedule-opt", help="optimize the single-relay listen fraction")
    p.add_argument("--r-grid", default="0:1:0.1", help="multiplexing gains, start:stop:step")
    p.add_argument("--t-step", type=float, default=0.05, help="listen-fraction grid step")
    p.add_argument("--oracle-step", type=float, default=0.005, help="grid step of the exponent oracle")
    p.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET, help="oracle evaluation budget")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_schedule_opt)

    p = subs.add_parser("curves", help="closed-form baseline DMT curves")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--miso", type=int, default=None, help="m x 1 MISO curve m*(1-r)")
    group.add_argument("--parallel", action="store_true", help="two-path parallel channel 2*(1-r)")
    group.add_argument("--single-relay", action="store_true", help="single relay at t=0.5, 2*(1-r)")
    group.add_argument("--two-hop", type=int, default=None, help="N-relay two-hop curve (N+1)*(1-r)")
    p.add_argument("--r-grid", default="0:1:0.05", help="multiplexing gains, start:stop:step")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_curves)

    p = subs.add_parser("verify", help="randomized inequality suites (exit 3 on violation)")
    p.add_argument("--kind", choices=[k.value for k in CheckKind], required=True)
    p.add_argument("--instances", type=int, default=10000)
    p.add_argument("--seed", type=int, required=True, help="master seed (echoed in metadata)")
    p.add_argument("--max-len", type=int, default=8, help="max sequence/subset length")
    p.add_argument("--max-relays", type=int, default=6, help="max relays for cut-average instances")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_verify)

    return parser


def run(argv: list[str]) -> int:
    """Parse and execute one command; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help (0) and usage errors (2)
        return 0 if exc.code is None else int(exc.code)
    if not getattr(args, "subcommand", None):
        parser.print_usage(sys.stderr)
        return 2
    args.argv = list(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"hdrelay: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary of the process
        print(f"hdrelay: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
