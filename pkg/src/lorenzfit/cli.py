"""Command-line workflows: fit, validate, measures, simulate, compare, curve, batch.

Reports are JSON (CSV for tabular payloads) written to stdout or ``--out``.
Exit codes: 0 success, 1 I/O / usage / convergence failure, 2 validation
failure (a non-genuine curve under constrained fitting or validation).
Floats in CSV output are serialized with 17 significant digits so a
round trip through text preserves them bit for bit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .curves import FAMILIES, check_validity_analytic, check_validity_numeric, make_model
from .estimation import (
    FitConfig,
    GroupedDataset,
    ewmd_fit,
    fit_all,
)
from .exceptions import DatasetError, LorenzError
from .measures import EconomicContext, measure_set
from .montecarlo import MEASURE_NAMES, SimConfig, simulate

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NOT_GENUINE = 2

DEFAULT_POVERTY_LINE = 3.0
SEED_ENV_VAR = "LORENZFIT_SEED"

CSV_HEADER = ("cum_pop_share", "cum_income_share")


def _fmt(x) -> str:
    """17-significant-digit decimal form; round-trips any float64 exactly."""
    if x is None:
        return ""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# dataset files


def parse_dataset(path: str | Path) -> GroupedDataset:
    """Read a grouped dataset from a .csv or .json file (format by extension)."""
    path = Path(path)
    if not path.exists():
        raise DatasetError("file not found", location=str(path))
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return _parse_csv(path)
    if suffix == ".json":
        return _parse_json(path)
    raise DatasetError(f"unsupported dataset extension {suffix!r}", location=str(path))


def _parse_csv(path: Path) -> GroupedDataset:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError("empty file", location=str(path)) from None
        names = tuple(h.strip() for h in header)
        if names != CSV_HEADER:
            raise DatasetError(
                f"expected header {','.join(CSV_HEADER)!r}, got {','.join(names)!r}",
                location=f"{path}:1",
            )
        u, s = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise DatasetError(
                    f"expected 2 fields, got {len(row)}", location=f"{path}:{lineno}"
                )
            try:
                u.append(float(row[0]))
                s.append(float(row[1]))
            except ValueError:
                raise DatasetError(
                    f"non-numeric value in {row!r}", location=f"{path}:{lineno}"
                ) from None
    meta = _read_sidecar(path)
    try:
        return GroupedDataset(
            u=np.asarray(u), s=np.asarray(s),
            mean=meta.get("mean"), poverty_line=meta.get("poverty_line"),
            id=str(meta.get("id", path.stem)),
        )
    except DatasetError as exc:
        raise DatasetError(str(exc), location=str(path)) from None


def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def _read_sidecar(path: Path) -> dict:
    sidecar = _sidecar_path(path)
    if not sidecar.exists():
        return {}
    with open(sidecar) as handle:
        meta = json.load(handle)
    if not isinstance(meta, dict):
        raise DatasetError("sidecar must hold a JSON object", location=str(sidecar))
    return meta


def _parse_json(path: Path) -> GroupedDataset:
    with open(path) as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"invalid JSON: {exc}", location=str(path)) from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise DatasetError("document must carry a 'points' array", location=str(path))
    u, s = [], []
    for k, point in enumerate(doc["points"]):
        if not isinstance(point, dict) or "u" not in point or "s" not in point:
            raise DatasetError(
                f"point {k} must be an object with 'u' and 's'", location=str(path)
            )
        u.append(float(point["u"]))
        s.append(float(point["s"]))
    try:
        return GroupedDataset(
            u=np.asarray(u), s=np.asarray(s),
            mean=doc.get("mean"), poverty_line=doc.get("poverty_line"),
            id=str(doc.get("id", path.stem)),
        )
    except DatasetError as exc:
        raise DatasetError(str(exc), location=str(path)) from None


def read_reference(path: str | Path) -> dict[str, float]:
    """Optional benchmark measure values shipped with a dataset file."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        with open(path) as handle:
            doc = json.load(handle)
        ref = doc.get("reference", {}) if isinstance(doc, dict) else {}
    else:
        ref = _read_sidecar(path).get("reference", {})
    return {k: float(v) for k, v in ref.items() if k in MEASURE_NAMES}


def write_dataset_csv(data: GroupedDataset, path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for u, s in zip(data.u, data.s):
            writer.writerow([_fmt(u), _fmt(s)])


# ---------------------------------------------------------------------------
# report plumbing


def _envelope(command: str, seed, config: dict) -> dict:
    return {
        "tool": "lorenzfit",
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "seed": seed,
        "config": config,
    }


def _emit(report, args) -> None:
    if getattr(args, "format", "json") == "csv":
        text = _to_csv(report)
    else:
        text = json.dumps(report, indent=2, allow_nan=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_rows(report: dict) -> list[list[str]]:
    command = report.get("command")
    if command == "curve":
        rows = [["p", "L"]]
        rows += [[_fmt(pt["p"]), _fmt(pt["L"])] for pt in report["points"]]
        return rows
    if command == "measures":
        rows = [["measure", "value", "method"]]
        ms = report["measures"]
        for name in MEASURE_NAMES:
            rows.append([name, _fmt(ms[name]), ms["methods"].get(name, "")])
        return rows
    if command == "validate":
        rows = [["check", "genuine", "violations"]]
        for mode in ("analytic", "numeric"):
            rep = report[mode]
            rows.append([
                mode, str(rep["genuine"]),
                "; ".join(v["kind"] for v in rep["violations"]),
            ])
        return rows
    if command in ("fit", "compare"):
        rows = [["family", "rss", "converged", "genuine", "params"]]
        for fam in report["families"]:
            params = ";".join(f"{k}={_fmt(v)}" for k, v in fam["params"].items())
            rows.append([
                fam["family"], _fmt(fam["rss"]), str(fam["converged"]),
                str(fam["validity"]["genuine"]), params,
            ])
        return rows
    if command == "simulate":
        rows = [["measure", "truth", "mean", "bias", "abs_bias", "se"]]
        for name in MEASURE_NAMES:
            st = report["summary"]["stats"][name]
            rows.append([
                name, _fmt(report["summary"]["truth"][name]), _fmt(st["mean"]),
                _fmt(st["bias"]), _fmt(st["abs_bias"]), _fmt(st["se"]),
            ])
        return rows
    if command == "batch":
        families = sorted(report["aggregate"])
        rows = [["metric", "row"] + families]
        metrics = ["rss"] + list(MEASURE_NAMES)
        for metric in metrics:
            for row_name in ("average", "p10", "p25", "p50", "p75", "p90"):
                row = [metric, row_name]
                has_any = False
                for fam in families:
                    block = report["aggregate"][fam].get(
                        "rss" if metric == "rss" else "measures", {}
                    )
                    if metric != "rss":
                        block = block.get(metric, {})
                    value = block.get(row_name)
                    has_any = has_any or value is not None
                    row.append(_fmt(value) if value is not None else "")
                if has_any:
                    rows.append(row)
        return rows
    raise LorenzError(f"no CSV layout for command {command!r}")


def _to_csv(report: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(_csv_rows(report))
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# shared argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are exit 1, not argparse's 2
        self.exit(EXIT_FAILURE, f"{self.prog}: error: {message}\n")


def _add_common(sub, data=False, model=True, economic=False):
    if data:
        sub.add_argument("--data", required=True, help="dataset file (.csv or .json)")
    if model:
        sub.add_argument(
            "--model", default="all",
            choices=sorted(FAMILIES) + ["all"], help="curve family",
        )
        sub.add_argument("--params", help="comma-separated parameters for --model")
    sub.add_argument(
        "--mode", default="constrained", choices=["constrained", "diagnostic"],
    )
    if economic:
        sub.add_argument("--mean", type=float, help="mean income (currency/day)")
        sub.add_argument("--povline", type=float, help="poverty line (currency/day)")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", help="write the report to this path instead of stdout")
    sub.add_argument("--format", default="json", choices=["json", "csv"])


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lorenzfit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"lorenzfit {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("fit", parents=[], help="fit families to a dataset")
    _add_common(p, data=True, economic=True)
    p.add_argument("--multistart", type=int, default=16)

    p = subs.add_parser("validate", help="certify a parametric curve")
    _add_common(p)
    p.add_argument("--grid", type=int, default=10_001)

    p = subs.add_parser("measures", help="poverty and inequality measures")
    _add_common(p, data=False, economic=True)
    p.add_argument("--data", help="fit this dataset first (else use --params)")
    p.add_argument("--multistart", type=int, default=16)

    p = subs.add_parser("simulate", help="Monte Carlo bias and standard errors")
    _add_common(p, economic=True)
    p.add_argument("--n", type=int, default=500, help="sample size per replication")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--groups", type=int, default=10)
    p.add_argument("--refit", choices=sorted(FAMILIES), help="family to refit (default: truth family)")

    p = subs.add_parser("compare", help="fit all families and rank by RSS")
    _add_common(p, data=True, model=False, economic=True)
    p.add_argument("--multistart", type=int, default=16)

    p = subs.add_parser("curve", help="emit curve points for plotting")
    _add_common(p)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(format="csv")

    p = subs.add_parser("batch", help="process a directory of dataset files")
    _add_common(p, model=True, economic=True)
    p.add_argument("--data", required=True, help="directory of .csv/.json datasets")
    p.add_argument("--multistart", type=int, default=16)
    return parser


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            print(f"warning: ignoring non-integer {SEED_ENV_VAR}={env!r}", file=sys.stderr)
    return None


def _parse_params(args) -> list[float]:
    if not getattr(args, "params", None):
        raise LorenzError("--params is required for this command")
    try:
        return [float(tok) for tok in args.params.split(",")]
    except ValueError:
        raise LorenzError(f"could not parse --params {args.params!r}") from None


def _require_model(args):
    if args.model == "all":
        raise LorenzError("this command needs a specific --model, not 'all'")
    return make_model(args.model, _parse_params(args), mode="diagnostic")


def _economic_context(args, data: GroupedDataset | None):
    mean = args.mean if args.mean is not None else (data.mean if data else None)
    if mean is None:
        raise LorenzError(
            "mean income is required to anchor the income scale; pass --mean "
            "or provide it in the dataset metadata"
        )
    z = args.povline if args.povline is not None else (data.poverty_line if data else None)
    if z is None:
        z = DEFAULT_POVERTY_LINE
        print(
            f"warning: no poverty line given; defaulting to {z:.2f} per day",
            file=sys.stderr,
        )
    return EconomicContext(mean, z)


def _fit_payload(data: GroupedDataset, args, seed) -> tuple[dict, int]:
    config = FitConfig(mode=args.mode, multistart=args.multistart, seed=seed)
    if args.model == "all":
        results, failures = fit_all(data, config)
    else:
        results, failures = fit_all(data, config, families=(args.model,))
    families = []
    for result in results:
        entry = result.to_dict()
        try:
            ctx = _economic_context(args, data)
        except LorenzError:
            ctx = None
        if ctx is not None:
            entry["measures"] = measure_set(result.model, ctx).to_dict()
        families.append(entry)
    payload = {
        "dataset": {
            "id": data.id, "n_points": data.n_points,
            "mean": data.mean, "poverty_line": data.poverty_line,
        },
        "families": families,
        "failures": [{"family": f.family, "error": f.error} for f in failures],
        "ranking": [r.family for r in results],
    }
    constrained = [r for r in results if r.mode == "constrained"]
    code = EXIT_OK
    if not results:
        code = EXIT_FAILURE
    elif constrained and not constrained[0].validity.genuine:
        code = EXIT_NOT_GENUINE
    return payload, code


# ---------------------------------------------------------------------------
# command handlers


def _cmd_fit(args) -> int:
    seed = _resolve_seed(args)
    data = parse_dataset(args.data)
    payload, code = _fit_payload(data, args, seed)
    report = _envelope(
        "fit", seed,
        {"data": str(args.data), "model": args.model, "mode": args.mode,
         "multistart": args.multistart},
    )
    report.update(payload)
    _emit(report, args)
    return code


def _cmd_compare(args) -> int:
    seed = _resolve_seed(args)
    data = parse_dataset(args.data)
    args.model = "all"
    payload, code = _fit_payload(data, args, seed)
    report = _envelope(
        "compare", seed,
        {"data": str(args.data), "mode": args.mode, "multistart": args.multistart},
    )
    report.update(payload)
    _emit(report, args)
    return code


def _cmd_validate(args) -> int:
    model = _require_model(args)
    analytic = check_validity_analytic(model)
    numeric = check_validity_numeric(model, grid_size=args.grid)
    genuine = analytic.genuine and numeric.genuine
    report = _envelope(
        "validate", None,
        {"model": args.model, "params": model.param_dict(), "grid": args.grid},
    )
    report.update({
        "family": args.model,
        "params": model.param_dict(),
        "analytic": analytic.to_dict(),
        "numeric": numeric.to_dict(),
        "genuine": genuine,
    })
    _emit(report, args)
    return EXIT_OK if genuine else EXIT_NOT_GENUINE


def _cmd_measures(args) -> int:
    seed = _resolve_seed(args)
    fit_entry = None
    if args.data:
        data = parse_dataset(args.data)
        if args.model == "all":
            raise LorenzError("measures needs a specific --model to fit")
        config = FitConfig(mode=args.mode, multistart=args.multistart, seed=seed)
        result = ewmd_fit(data, args.model, config)
        model = result.model
        fit_entry = result.to_dict()
        ctx = _economic_context(args, data)
    else:
        model = _require_model(args)
        ctx = _economic_context(args, None)
    ms = measure_set(model, ctx)
    report = _envelope(
        "measures", seed,
        {"model": args.model, "mode": args.mode,
         "mean": ctx.mean, "povline": ctx.poverty_line},
    )
    report.update({
        "family": args.model,
        "params": model.param_dict(),
        "context": {"mean": ctx.mean, "poverty_line": ctx.poverty_line},
        "measures": ms.to_dict(),
        "fit": fit_entry,
    })
    _emit(report, args)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    if seed is None:
        seed = 0
    truth = _require_model(args)
    ctx = _economic_context(args, None)
    refit = args.refit or args.model
    config = SimConfig(
        n=args.n, replications=args.reps, groups=args.groups, seed=seed,
        family=refit, fit=FitConfig(mode=args.mode, multistart=4),
    )
    summary = simulate(truth, ctx.mean, ctx.poverty_line, config)
    report = _envelope(
        "simulate", seed,
        {"model": args.model, "params": truth.param_dict(), "refit": refit,
         "n": args.n, "reps": args.reps, "groups": args.groups,
         "mean": ctx.mean, "povline": ctx.poverty_line, "mode": args.mode},
    )
    report.update({
        "family": args.model,
        "params": truth.param_dict(),
        "summary": summary.to_dict(),
    })
    _emit(report, args)
    return EXIT_OK


def _cmd_curve(args) -> int:
    model = _require_model(args)
    if args.points < 2:
        raise LorenzError("--points must be at least 2")
    grid = np.linspace(0.0, 1.0, args.points)
    values = model.evaluate(grid, strict=False)
    report = _envelope(
        "curve", None,
        {"model": args.model, "params": model.param_dict(), "points": args.points},
    )
    report["points"] = [
        {"p": float(p), "L": (float(v) if math.isfinite(v) else None)}
        for p, v in zip(grid, values)
    ]
    _emit(report, args)
    return EXIT_OK


_PCT_ROWS = (("average", None), ("p10", 10), ("p25", 25),
             ("p50", 50), ("p75", 75), ("p90", 90))


def _aggregate_rows(values: list[float], absolute_average: bool) -> dict:
    arr = np.asarray(values, dtype=float)
    out = {}
    for name, q in _PCT_ROWS:
        if q is None:
            out[name] = float(np.mean(np.abs(arr))) if absolute_average else float(arr.mean())
        else:
            out[name] = float(np.percentile(arr, q))
    return out


def _cmd_batch(args) -> int:
    seed = _resolve_seed(args)
    root = Path(args.data)
    if not root.is_dir():
        raise LorenzError(f"--data must be a directory, got {args.data!r}")
    paths = sorted(
        p for p in root.iterdir() if p.suffix.lower() in (".csv", ".json")
        and not p.name.endswith(".meta.json")
    )
    if not paths:
        raise LorenzError(f"no datasets found in {args.data!r}")

    file_reports = []
    rss_by_family: dict[str, list[float]] = {}
    err_by_family: dict[str, dict[str, list[float]]] = {}
    n_failed = 0
    for path in paths:
        try:
            data = parse_dataset(path)
            reference = read_reference(path)
            payload, _ = _fit_payload(data, args, seed)
        except Exception as exc:
            n_failed += 1
            file_reports.append({"path": str(path), "ok": False,
                                 "error": f"{type(exc).__name__}: {exc}"})
            continue
        entry = {"path": str(path), "ok": True, "id": data.id,
                 "families": payload["families"], "failures": payload["failures"]}
        file_reports.append(entry)
        for fam in payload["families"]:
            name = fam["family"]
            if math.isfinite(fam["rss"]):
                rss_by_family.setdefault(name, []).append(fam["rss"])
            measures = fam.get("measures")
            if measures and reference:
                for key, ref_value in reference.items():
                    est = measures.get(key)
                    if est is not None:
                        err_by_family.setdefault(name, {}).setdefault(key, []).append(
                            est - ref_value
                        )

    aggregate = {}
    for family, rss_values in sorted(rss_by_family.items()):
        block = {"rss": _aggregate_rows(rss_values, absolute_average=False),
                 "measures": {}}
        for key, errors in sorted(err_by_family.get(family, {}).items()):
            block["measures"][key] = _aggregate_rows(errors, absolute_average=True)
        aggregate[family] = block

    report = _envelope(
        "batch", seed,
        {"data": str(args.data), "model": args.model, "mode": args.mode,
         "multistart": args.multistart},
    )
    report.update({
        "n_files": len(paths),
        "n_ok": len(paths) - n_failed,
        "n_failed": n_failed,
        "aggregate": aggregate,
        "files": file_reports,
    })
    _emit(report, args)
    return EXIT_OK if n_failed < len(paths) else EXIT_FAILURE


_HANDLERS = {
    "fit": _cmd_fit,
    "validate": _cmd_validate,
    "measures": _cmd_measures,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
    "curve": _cmd_curve,
    "batch": _cmd_batch,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_FAILURE
    try:
        return _HANDLERS[args.command](args)
    except (LorenzError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
