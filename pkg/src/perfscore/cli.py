"""Command-line interface: ``perfscore simulate | score | avte | replay``.

Each command writes its output plus a ``<out>.manifest.json`` sidecar holding
the fully resolved arguments, so ``perfscore replay <sidecar>`` reproduces the
run.  Failures exit nonzero with one stderr line ``error[<category>]: ...``.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, report
from .data import DataError, load_csv, write_csv
from .ensemble import EmptyOOBError, EnsembleConfig, train_ensemble
from .evaluation import AvteConfig, Loss, avte
from .importance import AS_WRITTEN, ERROR_INCREASE, perf_scores, vi_scores
from .learners import OLS, TREE, BaseLearnerSpec, fit
from .simulation import DEFAULT_COEFFICIENTS, SimulationConfig, simulate_regression

EXIT_CODES = {"usage": 2, "input": 3, "config": 4, "runtime": 5}


class CLIError(Exception):
    def __init__(self, category, message):
        super().__init__(message)
        self.category = category


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError("usage", message)


def _parse_coef(text):
    coef = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        try:
            k, v = part.split(":")
            coef[int(k)] = float(v)
        except ValueError:
            raise CLIError("usage", f"--coef: cannot parse {part!r}; expected INDEX:VALUE") from None
    return coef


def _format_coef(coef):
    return ",".join(f"{k}:{v!r}" for k, v in sorted(coef.items()))


def _task_hint(flag):
    return {"auto": None, "reg": "regression", "clf": "classification"}[flag]


def _learner(args, task):
    kind = args.learner
    if kind == "auto":
        kind = TREE if task.is_classification else OLS
    spec = BaseLearnerSpec(kind=kind, max_depth=args.max_depth, min_leaf=args.min_leaf)
    try:
        spec.validate(task)
    except ValueError as exc:
        raise CLIError("config", f"--learner: {exc}") from None
    return spec


def _sidecar(out):
    return Path(str(out) + ".manifest.json")


def _write_sidecar(out, command, argv, manifest, started):
    side = dict(manifest, command=command, argv=argv,
                duration_seconds=round(time.perf_counter() - started, 6))
    _sidecar(out).write_text(report.dumps(side), encoding="utf-8")


def cmd_simulate(args, argv, started):
    coef = _parse_coef(args.coef)
    try:
        config = SimulationConfig(n=args.n, p=args.p, rho=args.rho, tau=args.tau, coefficients=coef,
                                  intercept=args.intercept, noise_sd=args.noise_sd, seed=args.seed)
    except ValueError as exc:
        raise CLIError("config", str(exc)) from None
    dataset = simulate_regression(config)
    write_csv(dataset, args.out, target="y")
    manifest = {"version": __version__, "seed": args.seed, "config": config.as_dict(),
                "dataset_fingerprint": dataset.fingerprint()}
    _write_sidecar(args.out, "simulate", argv, manifest, started)


def _load(args):
    return load_csv(args.data, args.target, _task_hint(args.task))


def cmd_score(args, argv, started):
    dataset = _load(args)
    spec = _learner(args, dataset.task)
    try:
        config = EnsembleConfig(B=args.B, d=args.d, learner=spec, seed=args.seed)
        config = config.resolve(dataset.p, dataset.task)
    except ValueError as exc:
        raise CLIError("config", str(exc)) from None
    ensemble = train_ensemble(dataset, config)
    if args.vi == "on":
        rep = vi_scores(ensemble, dataset, sign_convention=args.vi_sign, n_repeats=args.vi_repeats,
                        names=dataset.feature_names)
    else:
        rep = perf_scores(ensemble, names=dataset.feature_names)
    rep.config.update(task=str(dataset.task), loss=ensemble.loss.value)
    manifest = {"version": __version__, "seed": args.seed, "data": str(args.data),
                "target": args.target, "dataset_fingerprint": dataset.fingerprint(),
                "n": dataset.n, "p": dataset.p}
    report.write_json(report.report_document(rep, manifest), args.out)
    if args.csv:
        Path(args.csv).write_text(report.to_csv(rep), encoding="utf-8")
    if args.plot:
        Path(args.plot).write_text(report.render_svg(rep), encoding="utf-8")
    _write_sidecar(args.out, "score", argv, manifest, started)


def _parse_subset(text, names):
    cols = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        if part in names:
            cols.append(names.index(part))
        elif part.isdigit() and 1 <= int(part) <= len(names):
            cols.append(int(part) - 1)
        else:
            raise CLIError("input", f"--subset: unknown column {part!r}")
    if not cols:
        raise CLIError("usage", "--subset is empty")
    return sorted(set(cols))


def cmd_avte(args, argv, started):
    dataset = _load(args)
    spec = _learner(args, dataset.task)
    cols = list(range(dataset.p)) if args.subset is None else _parse_subset(args.subset, list(dataset.feature_names))
    data = dataset.subset_columns(cols)
    try:
        config = AvteConfig(R=args.R, test_fraction=args.test_fraction, seed=args.seed)
    except ValueError as exc:
        raise CLIError("config", str(exc)) from None

    def trainer(train):
        return fit(spec, train.features, train.response, train.task).predict

    loss = Loss.for_task(dataset.task)
    try:
        result = avte(data, trainer, config, loss)
    except DataError as exc:
        raise CLIError("config", str(exc)) from None
    doc = {
        "avte": {"value": result.value, "replicates": list(result.replicates), "R": config.R,
                 "test_fraction": config.test_fraction, "loss": loss.value},
        "config": {"learner": spec.as_dict(), "task": str(dataset.task),
                   "variables": [dataset.feature_names[c] for c in cols], "seed": args.seed},
        "manifest": {"version": __version__, "seed": args.seed, "data": str(args.data),
                     "target": args.target, "dataset_fingerprint": dataset.fingerprint()},
    }
    text = report.dumps(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _write_sidecar(args.out, "avte", argv, doc["manifest"], started)
    else:
        sys.stdout.write(text)


def cmd_replay(args, argv, started):
    try:
        side = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        old = side["argv"]
    except (OSError, ValueError, KeyError) as exc:
        raise CLIError("input", f"cannot read manifest {args.manifest}: {exc}") from None
    run(old)


def _add_learner_flags(p):
    p.add_argument("--data", required=True, help="input CSV with a header row")
    p.add_argument("--target", default="y", help="response column name (default: y)")
    p.add_argument("--task", choices=["auto", "reg", "clf"], default="auto")
    p.add_argument("--learner", choices=["auto", OLS, TREE], default="auto",
                   help="base learner; auto picks ols for regression, tree for classification")
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--min-leaf", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = _Parser(prog="perfscore", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="write a simulated sparse regression dataset")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--p", type=int, default=17)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--coef", default=_format_coef(DEFAULT_COEFFICIENTS),
                   help='1-based INDEX:VALUE pairs, e.g. "3:2,7:1,9:3"')
    p.add_argument("--intercept", type=float, default=1.0)
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("score", help="train an ensemble and report PERF / VI")
    _add_learner_flags(p)
    p.add_argument("--B", type=int, default=500)
    p.add_argument("--d", type=int, default=None,
                   help="variables per member (default ceil(p/3) regression, ceil(sqrt p) classification)")
    p.add_argument("--vi", choices=["on", "off"], default="on")
    p.add_argument("--vi-sign", choices=[AS_WRITTEN, ERROR_INCREASE], default=AS_WRITTEN)
    p.add_argument("--vi-repeats", type=int, default=1)
    p.add_argument("--out", required=True, help="JSON report path")
    p.add_argument("--csv", help="also write the per-variable table as CSV")
    p.add_argument("--plot", help="also write an SVG bar chart of PERF")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("avte", help="average test error over random splits")
    _add_learner_flags(p)
    p.add_argument("--R", type=int, default=100)
    p.add_argument("--test-fraction", type=float, default=1 / 3)
    p.add_argument("--subset", help="comma-separated column names or 1-based numbers")
    p.add_argument("--out", help="JSON report path (default: stdout)")
    p.set_defaults(func=cmd_avte)

    p = sub.add_parser("replay", help="rerun a command from its manifest sidecar")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def run(argv):
    """Run one command; raises :class:`CLIError` on failure."""
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        args.func(args, list(argv), started)
    except DataError as exc:
        raise CLIError("input", str(exc)) from None
    except EmptyOOBError as exc:
        raise CLIError("runtime", str(exc)) from None
    except OSError as exc:
        raise CLIError("input", str(exc)) from None
    except ValueError as exc:
        raise CLIError("config", str(exc)) from None


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        run(argv)
    except CLIError as exc:
        msg = " ".join(str(exc).split())
        print(f"error[{exc.category}]: {msg}", file=sys.stderr)
        return EXIT_CODES[exc.category]
    return 0


if __name__ == "__main__":
    sys.exit(main())
