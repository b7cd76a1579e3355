"""Command-line interface.

Subcommands::

    elprior families list | show <spec>
    elprior match check  --family F --order {half,one} --prior-class {simple,elaborate}
    elprior match derive --family F --prior-class {simple,elaborate}
    elprior quantile --family F --prior P --alpha A --order {1,2} --data FILE
    elprior coverage predict  --family F --prior P (--dist D | --moments th,s2,b3,b4) --n N --alpha A --order {half,one}
    elprior coverage simulate --dist D --n N --alpha A --reps R --seed S --family F --prior P --order {1,2}
    elprior table2 --seed S [--reps R]
    elprior cumulants validate --dist D --n N --reps R --seed S

Every subcommand takes ``--json PATH``, ``--csv PATH``, ``--config PATH``
and ``--full-precision``. A config file holds ``key = value`` lines (keys are
long option names) or is a JSON document previously written by ``--json``;
command-line flags override it.

Exit codes: 0 success, 2 invalid input, 3 matching check infeasible,
1 anything unexpected.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .edgeworth import predict_coverage
from .errors import ElPriorError, ParseError
from .likelihood import LikelihoodFamily, parse_family
from .matching import check
from .moments import PopulationMoments, get_distribution, read_data, summarize
from .posterior import normalize_order, quantile
from .prior import Custom, Elaborate, PriorSpec, lambda_of, parse_prior, prior_from_json, prior_to_json
from .simulate import GENERATOR_ID, SimConfig, reproduce_table2, run_coverage, validate_cumulants
from .simulate.table2 import DEFAULT_SEED, table2_csv, table2_rows, format_table2

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3

FAMILY_PRESETS = {
    "el": "usual empirical likelihood",
    "schennach": "Bayesian exponentially tilted EL (geef:mu=1/8)",
    "fm-matching": "family admitting a data-free matching prior to order 1/n",
    "cressie-read:tau3=<r>,tau4=<r>": "empirical discrepancy / Cressie-Read subclass",
    "gel:gamma3=<r>,gamma4=<r>": "generalized empirical likelihoods",
    "geef:mu=<r>": "generalized empirical exponential family likelihoods",
    "file:<path>": "JSON document with the six polynomials",
}


class UsageError(ElPriorError):
    pass


# ---------------------------------------------------------------- output


class Output:
    """Collects a text table, a JSON document and CSV rows for one run."""

    def __init__(self, args: argparse.Namespace):
        self.digits = 17 if args.full_precision else 6
        self.json_path: str | None = args.json
        self.csv_path: str | None = args.csv
        self.config = resolved_config(args)

    def num(self, x: Any) -> str:
        if isinstance(x, (bool, np.bool_)):
            return str(bool(x))
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, (float, np.floating)):
            return f"{float(x):.{self.digits}g}"
        return str(x)

    def table(self, rows: Sequence[tuple[str, Any]]) -> str:
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {self.num(v)}" for k, v in rows)

    def emit(self, text: str, result: Any, csv_rows: list[dict[str, Any]] | None = None) -> None:
        print(text)
        if self.json_path:
            doc = {"config": self.config, "generator": GENERATOR_ID, "result": result}
            Path(self.json_path).write_text(json.dumps(doc, indent=2, default=_json_default) + "\n")
        if self.csv_path:
            rows = csv_rows if csv_rows is not None else [_flatten(result)]
            with open(self.csv_path, "w", newline="") as fh:
                fields = list(rows[0]) + [k for k in self.config if k not in rows[0]]
                writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
                writer.writeheader()
                for row in rows:
                    merged = {k: self.config.get(k) for k in fields}
                    merged.update(row)
                    writer.writerow(merged)


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _flatten(doc: Any, prefix: str = "") -> dict[str, Any]:
    if not isinstance(doc, dict):
        return {prefix or "value": doc}
    out: dict[str, Any] = {}
    for k, v in doc.items():
        key = f"{prefix}.{k}" if prefix else str(k)
        if isinstance(v, dict):
            out.update(_flatten(v, key))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v, default=_json_default)
        else:
            out[key] = v
    return out


_NOT_CONFIG = {"func", "_required", "json", "csv", "config", "full_precision", "command", "subcommand"}


def resolved_config(args: argparse.Namespace) -> dict[str, Any]:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}
    cfg["command"] = " ".join(p for p in (args.command, getattr(args, "subcommand", None)) if p)
    return cfg


# ---------------------------------------------------------------- parsing helpers


def _family(spec: str) -> LikelihoodFamily:
    return parse_family(spec)


def _prior(spec: str, family: LikelihoodFamily | None) -> PriorSpec:
    head, sep, body = spec.strip().partition(":")
    if head == "file" and sep:
        try:
            doc = json.loads(Path(body).read_text())
            # accept a bare prior document or a ``quantile --json`` result
            if "kind" not in doc:
                doc = doc["result"]["prior"]
            return prior_from_json(doc)
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"cannot read prior file {body!r}: {exc}") from exc
    return parse_prior(spec, family)


def _moments(text: str) -> PopulationMoments:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise UsageError("--moments needs theta,sigma2,beta3,beta4")
    try:
        return PopulationMoments(*(float(p) for p in parts))
    except ValueError as exc:
        raise UsageError(f"bad --moments {text!r}: {exc}") from exc


def _alpha(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _posint(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


# ---------------------------------------------------------------- commands


def cmd_families(args: argparse.Namespace) -> int:
    out = Output(args)
    if args.action == "list":
        rows = [{"spec": k, "description": v} for k, v in FAMILY_PRESETS.items()]
        width = max(len(k) for k in FAMILY_PRESETS)
        text = "\n".join(f"{k:<{width}}  {v}" for k, v in FAMILY_PRESETS.items())
        out.emit(text, {"presets": rows}, rows)
        return EXIT_OK
    if not args.spec:
        raise UsageError("families show needs a family spec")
    fam = _family(args.spec)
    rows = [(c, str(p)) for c, p in fam.coefficients().items()]
    text = f"family {fam.name}\n" + out.table(rows)
    out.emit(text, fam.to_json(), [{"coefficient": c, "polynomial": p} for c, p in rows])
    return EXIT_OK


def _match_report(args: argparse.Namespace, order: str) -> int:
    out = Output(args)
    fam = _family(args.family)
    report = check(fam, order, args.prior_class)
    lines = [f"family {fam.name}: order {order}, {args.prior_class} prior class"]
    for c in report.conditions:
        status = "pass" if c.passed else "FAIL"
        lines.append(f"  [{status}] {c.name}: {c.description}")
        if not c.passed:
            lines.append(f"         fails {c.name} condition; residual: {c.residual}")
    if report.derived_chi is not None:
        lines.append(f"  derived chi    = {report.derived_chi}")
    if report.derived_lambda is not None:
        lines.append(f"  derived lambda = {report.derived_lambda}")
    lines.append("feasible" if report.feasible else "infeasible")
    rows = [{"condition": c.name, "pass": c.passed, "residual": str(c.residual)} for c in report.conditions]
    out.emit("\n".join(lines), report.to_json(), rows)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_match(args: argparse.Namespace) -> int:
    if args.subcommand == "check":
        return _match_report(args, args.order)
    # derive: the strongest order reachable within the requested class
    return _match_report(args, "one")


def cmd_quantile(args: argparse.Namespace) -> int:
    out = Output(args)
    fam = _family(args.family)
    prior = _prior(args.prior, fam)
    data = read_data(args.data)
    summary = summarize(data)
    order = normalize_order(args.order)
    q = quantile(fam, prior, summary, args.alpha, order)
    if isinstance(prior, Elaborate) and lambda_of(prior).eval(summary.g3, summary.g4) > 0:
        print(
            "notice: the quadratic prior term is positive for this sample, so the prior "
            "grows in theta; posterior propriety is assumed, not checked",
            file=sys.stderr,
        )
    rows = [
        ("n", summary.n), ("mean", summary.mean), ("m2", summary.m2), ("g3", summary.g3), ("g4", summary.g4),
        ("alpha", q.alpha), ("z", q.z), ("u1", q.u1), ("u2", q.u2),
        ("theta1", q.theta1), ("theta2", q.theta2), ("order", order), ("quantile", q.theta),
    ]
    result: dict[str, Any] = {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in rows}
    result["family"] = fam.to_json()
    if not isinstance(prior, Custom):
        result["prior"] = prior_to_json(prior)
    out.emit(out.table(rows), result)
    return EXIT_OK


def cmd_coverage(args: argparse.Namespace) -> int:
    out = Output(args)
    fam = _family(args.family)
    prior = _prior(args.prior, fam)
    if args.subcommand == "predict":
        if bool(args.dist) == bool(args.moments):
            raise UsageError("give exactly one of --dist or --moments")
        pop = get_distribution(args.dist).moments if args.dist else _moments(args.moments)
        rep = predict_coverage(fam, prior, pop, args.n, args.alpha, args.order)
        result = rep.to_dict()
        out.emit(out.table(list(result.items())), result)
        return EXIT_OK
    if not args.dist:
        raise UsageError("coverage simulate needs --dist")
    config = SimConfig(
        dist=args.dist, n=args.n, alpha=args.alpha, reps=args.reps,
        family=fam, prior=prior, order=args.order, master_seed=args.seed,
    )
    report = run_coverage(config, workers=args.workers)
    rows = [
        ("distribution", config.dist.label), ("n", config.n), ("alpha", config.alpha),
        ("order", config.order), ("reps", config.reps), ("hits", report.hits),
        ("degenerate_skipped", report.degenerate_skipped), ("coverage", report.coverage),
        ("mc_stderr", report.mc_stderr), ("seed", config.master_seed), ("generator", report.generator),
    ]
    out.emit(out.table(rows), report.to_dict())
    return EXIT_OK


def cmd_table2(args: argparse.Namespace) -> int:
    out = Output(args)
    cells = reproduce_table2(master_seed=args.seed, reps=args.reps, workers=args.workers)
    worst = max(c.abs_diff for c in cells)
    text = (
        format_table2(cells)
        + f"\n\nsimulated (published); reps={args.reps}, seed={args.seed}, generator={GENERATOR_ID}"
        + f"\nmax |simulated - published| = {out.num(worst)}"
    )
    rows = table2_rows(cells, args.seed)
    out.emit(text, {"cells": rows, "max_abs_diff": worst}, rows)
    if out.csv_path is None and args.table_csv:
        Path(args.table_csv).write_text(table2_csv(cells, args.seed))
    return EXIT_OK


def cmd_cumulants(args: argparse.Namespace) -> int:
    out = Output(args)
    rep = validate_cumulants(args.dist, args.n, args.reps, args.seed, alpha=args.alpha, workers=args.workers)
    header = f"{'':<4}{'estimate':>14}{'stderr':>14}{'predicted':>14}{'z':>10}"
    lines = [f"{rep.dist}, n={rep.n}, reps={rep.reps}, seed={rep.master_seed}", header]
    for e in rep.estimates:
        lines.append(
            f"{e.name:<4}{out.num(e.estimate):>14}{out.num(e.stderr):>14}{out.num(e.predicted):>14}{e.z_score:>10.2f}"
        )
    rows = [
        {"cumulant": e.name, "estimate": e.estimate, "stderr": e.stderr, "predicted": e.predicted, "z_score": e.z_score}
        for e in rep.estimates
    ]
    out.emit("\n".join(lines), rep.to_dict(), rows)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="write a JSON result document")
    p.add_argument("--csv", metavar="PATH", help="write CSV rows")
    p.add_argument("--config", metavar="PATH", help="key = value file or a previous --json document")
    p.add_argument("--full-precision", action="store_true", help="print 17 significant digits")


def build_parser() -> tuple[argparse.ArgumentParser, dict[tuple[str, ...], argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="elprior", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    leaves: dict[tuple[str, ...], argparse.ArgumentParser] = {}

    p = sub.add_parser("families", help="list or show likelihood families")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("spec", nargs="?")
    _common(p)
    p.set_defaults(func=cmd_families)
    leaves[("families",)] = p

    match = sub.add_parser("match", help="exact matching-condition checks")
    msub = match.add_subparsers(dest="subcommand", required=True)
    for name in ("check", "derive"):
        p = msub.add_parser(name)
        p.add_argument("--family")
        p.add_argument("--prior-class", choices=("simple", "elaborate"), default="simple")
        if name == "check":
            p.add_argument("--order", choices=("half", "one"), default="half")
        _common(p)
        p.set_defaults(func=cmd_match, _required=("family",))
        leaves[("match", name)] = p

    p = sub.add_parser("quantile", help="approximate posterior quantile from data")
    p.add_argument("--family", default="el")
    p.add_argument("--prior", default="eq29")
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--order", choices=("1", "2"), default="1")
    p.add_argument("--data")
    _common(p)
    p.set_defaults(func=cmd_quantile, _required=("data",))
    leaves[("quantile",)] = p

    cov = sub.add_parser("coverage", help="predicted or simulated frequentist coverage")
    csub = cov.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("predict")
    p.add_argument("--family", default="el")
    p.add_argument("--prior", default="eq29")
    p.add_argument("--dist")
    p.add_argument("--moments", help="theta,sigma2,beta3,beta4")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--order", choices=("half", "one"), default="one")
    _common(p)
    p.set_defaults(func=cmd_coverage, _required=("n",))
    leaves[("coverage", "predict")] = p

    p = csub.add_parser("simulate")
    p.add_argument("--dist")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--reps", type=_posint, default=10_000)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.add_argument("--family", default="el")
    p.add_argument("--prior", default="eq29")
    p.add_argument("--order", choices=("1", "2"), default="1")
    p.add_argument("--workers", type=_posint, default=1)
    _common(p)
    p.set_defaults(func=cmd_coverage, _required=("n", "dist"))
    leaves[("coverage", "simulate")] = p

    p = sub.add_parser("table2", help="reproduce the published coverage table")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.add_argument("--reps", type=_posint, default=10_000)
    p.add_argument("--workers", type=_posint, default=1)
    p.add_argument("--table-csv", metavar="PATH", help=argparse.SUPPRESS)
    _common(p)
    p.set_defaults(func=cmd_table2)
    leaves[("table2",)] = p

    cum = sub.add_parser("cumulants", help="Monte Carlo check of the pivot cumulants")
    usub = cum.add_subparsers(dest="subcommand", required=True)
    p = usub.add_parser("validate")
    p.add_argument("--dist")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--reps", type=_posint, default=1_000_000)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--workers", type=_posint, default=1)
    _common(p)
    p.set_defaults(func=cmd_cumulants, _required=("dist",))
    leaves[("cumulants", "validate")] = p

    return parser, leaves


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines, or the ``config`` block of a JSON result."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        cfg = doc.get("config", doc)
        return {k: v if isinstance(v, str) else json.dumps(v) for k, v in cfg.items() if k != "command"}
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}: line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _leaf_for(args: argparse.Namespace, leaves: dict) -> argparse.ArgumentParser:
    key = tuple(p for p in (args.command, getattr(args, "subcommand", None)) if p)
    return leaves[key]


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser, leaves = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        leaf = _leaf_for(args, leaves)
        known = {a.dest for a in leaf._actions}
        file_values = {k: v for k, v in read_config(args.config).items() if k in known}
        leaf.set_defaults(**file_values)
        args = parser.parse_args(argv)
    missing = [name for name in getattr(args, "_required", ()) if getattr(args, name, None) is None]
    if missing:
        flags = ", ".join("--" + m.replace("_", "-") for m in missing)
        raise UsageError(f"missing required option(s): {flags}")
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ElPriorError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ElPriorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
