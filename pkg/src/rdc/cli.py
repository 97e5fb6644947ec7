"""Command-line front end.

Subcommands: compute, test, power, bench, panel, select.  Every run echoes
its fully resolved configuration (auto-resolved scales, derived projection
seeds) as ``#`` comment lines ahead of the output table, so a run is
reproducible from its own output.  Identical flags and seed produce
byte-identical output.

Exit codes: 0 success, 2 input format error (malformed files, unknown
tags), 3 usage or precondition error, 4 numerical degeneracy.
"""

import argparse
import math
import os
import sys

from . import __version__, harness, synth, tabular
from .coefficient import (RdcParams, bartlett_test, permutation_test,
                          projection_seeds, rdc)
from .errors import (CapacityError, DataFormatError, DegenerateDataError,
                     InvalidInputError, RdcError)

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_USAGE = 3
EXIT_DEGENERATE = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports flag problems through our exit-code scheme."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _default_seed():
    raw = os.environ.get("RDC_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"RDC_SEED must be an integer, got {raw!r}") from None


def _add_common(sub, fmt_default="csv"):
    sub.add_argument("--seed", type=int, default=None,
                     help="base seed (default: $RDC_SEED or 0)")
    sub.add_argument("--format", choices=tabular.FORMATS, default=fmt_default,
                     help=f"output format (default {fmt_default})")
    sub.add_argument("--out", default=None, help="write output to this file (atomic)")


def _add_rdc_params(sub):
    sub.add_argument("--k", type=int, default=10, help="random directions per side")
    sub.add_argument("--s-x", default="auto",
                     help="weight variance for the x side, or 'auto' (median heuristic)")
    sub.add_argument("--s-y", default="auto", help="same for the y side")
    sub.add_argument("--ridge", type=float, default=1e-8,
                     help="relative ridge for the correlation solve")
    sub.add_argument("--bias-mode", choices=("normative", "appended-normal"),
                     default="normative", help="phase convention of the feature map")
    sub.add_argument("--r-compat", action="store_true",
                     help="shorthand for --bias-mode appended-normal")


def _add_inputs(sub):
    sub.add_argument("--x", required=True,
                     help="x input: a file path, or column selectors when --data is given")
    sub.add_argument("--y", required=True,
                     help="y input: a file path, or column selectors when --data is given")
    sub.add_argument("--data", default=None,
                     help="single file; --x/--y then select its columns")
    sub.add_argument("--header", action="store_true",
                     help="first data row of each input is a header")


def _parse_scale(text, flag):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise _UsageError(f"{flag} must be 'auto' or a positive real, got {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise _UsageError(f"{flag} must be positive and finite, got {text}")
    return value


def _comma_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _load_xy(args):
    if args.data is not None:
        x, x_names = tabular.read_matrix(args.data, header=args.header,
                                         columns=_comma_list(args.x))
        y, y_names = tabular.read_matrix(args.data, header=args.header,
                                         columns=_comma_list(args.y))
        sources = {"data": args.data, "x": args.x, "y": args.y}
    else:
        x, x_names = tabular.read_matrix(args.x, header=args.header)
        y, y_names = tabular.read_matrix(args.y, header=args.header)
        sources = {"x": args.x, "y": args.y}
    return x, y, x_names, y_names, sources


def _params_from_args(args, seed):
    bias = "appended-normal" if args.r_compat else args.bias_mode
    return RdcParams(k=args.k,
                     s_x=_parse_scale(args.s_x, "--s-x"),
                     s_y=_parse_scale(args.s_y, "--s-y"),
                     seed=seed, ridge=args.ridge, bias_mode=bias)


def _echo_params(command, sources, params, extra=()):
    ff = tabular.format_float
    seed_x, seed_y = projection_seeds(params.seed)
    lines = [f"command: {command}", f"version: {__version__}"]
    lines += [f"{k}: {v}" for k, v in sources.items()]
    lines += [
        f"k: {params.k}",
        f"s_x: {ff(params.s_x)}",
        f"s_y: {ff(params.s_y)}",
        f"seed: {params.seed}",
        f"projection_seed_x: {seed_x}",
        f"projection_seed_y: {seed_y}",
        f"ridge: {ff(params.ridge)}",
        f"bias_mode: {params.bias_mode}",
    ]
    lines += list(extra)
    return lines


def _emit(colnames, rows, args, comments):
    text = tabular.format_table(colnames, rows, args.format, comments)
    tabular.write_output(text, args.out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_compute(args):
    seed = args.seed if args.seed is not None else _default_seed()
    x, y, *_ , sources = _load_xy(args)
    result = rdc(x, y, _params_from_args(args, seed))
    comments = _echo_params("compute", sources, result.params_used,
                            extra=[f"n: {result.n}"])
    rows = [("coefficient", result.coefficient)]
    rows += [(f"rho_{i + 1}", float(v)) for i, v in enumerate(result.correlations)]
    _emit(("statistic", "value"), rows, args, comments)
    return EXIT_OK


def _cmd_test(args):
    seed = args.seed if args.seed is not None else _default_seed()
    x, y, *_, sources = _load_xy(args)
    params = _params_from_args(args, seed)
    if args.method == "bartlett":
        result = rdc(x, y, params)
        test = bartlett_test(result.correlations, result.correlations.size, result.n)
        resolved = result.params_used
    else:
        test = permutation_test(x, y, params, n_perm=args.n_perm)
        resolved = params
    extra = [f"method: {args.method}", f"alpha: {tabular.format_float(args.alpha)}"]
    if args.method == "permutation":
        extra.append(f"n_perm: {args.n_perm}")
    comments = _echo_params("test", sources, resolved, extra=extra)
    decision = "reject" if test.p_value < args.alpha else "accept"
    rows = [("statistic", test.statistic),
            ("dof", float(test.dof) if test.dof is not None else None),
            ("p_value", test.p_value),
            ("decision", decision)]
    if test.degenerate:
        rows.append(("degenerate", "true"))
    _emit(("quantity", "value"), rows, args, comments)
    return EXIT_OK


def _validate_tags(tags, valid, kind):
    for tag in tags:
        if tag not in valid:
            raise DataFormatError(
                f"unknown {kind} {tag!r}; valid {kind}s: {', '.join(valid)}")


def _parse_noise_grid(text):
    tokens = _comma_list(text)
    if len(tokens) == 1 and tokens[0].isdigit():
        return tuple(float(v) for v in synth.noise_variance_grid(int(tokens[0])))
    try:
        grid = tuple(float(t) for t in tokens)
    except ValueError:
        raise _UsageError(
            f"--noise-grid must be a level count or comma-separated variances, "
            f"got {text!r}") from None
    if not grid or any(v <= 0 for v in grid):
        raise _UsageError("noise variances must be positive")
    return grid


def _cmd_power(args):
    seed = args.seed if args.seed is not None else _default_seed()
    patterns = tuple(_comma_list(args.patterns))
    measures = tuple(_comma_list(args.measures))
    _validate_tags(patterns, synth.PATTERN_ORDER, "pattern")
    _validate_tags(measures, tuple(harness.MEASURES), "measure")
    config = harness.PowerConfig(
        patterns=patterns, noise_variances=_parse_noise_grid(args.noise_grid),
        n=args.n, repetitions=args.reps, alpha=args.alpha,
        measures=measures, seed=seed)
    report = harness.estimate_power(config, jobs=args.jobs)
    ff = tabular.format_float
    comments = [
        "command: power", f"version: {__version__}",
        f"patterns: {','.join(patterns)}",
        f"noise_variances: {','.join(ff(v) for v in config.noise_variances)}",
        f"n: {config.n}", f"repetitions: {config.repetitions}",
        f"alpha: {ff(config.alpha)}", f"measures: {','.join(measures)}",
        f"seed: {seed}",
    ]
    rows = [(c.measure, c.pattern, c.noise_variance, c.power) for c in report.cells]
    _emit(("measure", "pattern", "noise_variance", "power"), rows, args, comments)
    if args.plot:
        from . import figures
        figures.save_power_figure(report, args.plot)
    return EXIT_OK


def _cmd_bench(args):
    seed = args.seed if args.seed is not None else _default_seed()
    measures = tuple(_comma_list(args.measures))
    _validate_tags(measures, tuple(harness.MEASURES), "measure")
    try:
        sizes = tuple(int(t) for t in _comma_list(args.sizes))
    except ValueError:
        raise _UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    report = harness.benchmark_runtimes(measures, sizes=sizes,
                                        repetitions=args.reps,
                                        timeout=args.timeout, seed=seed)
    ff = tabular.format_float
    comments = [
        "command: bench", f"version: {__version__}",
        f"measures: {','.join(measures)}",
        f"sizes: {','.join(str(s) for s in report.sizes)}",
        f"repetitions: {report.repetitions}",
        f"timeout_seconds: {ff(report.timeout)}", f"seed: {seed}",
    ]
    if args.format == "pretty":
        colnames = ("measure",) + tuple(f"n={s}" for s in report.sizes)
        by_measure = {}
        for c in report.cells:
            by_measure.setdefault(c.measure, {})[c.n] = c.seconds
        rows = [(m,) + tuple(by_measure[m].get(s) for s in report.sizes)
                for m in measures]
    else:
        colnames = ("measure", "n", "mean_seconds", "status")
        rows = [(c.measure, c.n, c.seconds, c.status) for c in report.cells]
    _emit(colnames, rows, args, comments)
    if args.plot:
        from . import figures
        figures.save_bench_figure(report, args.plot)
    return EXIT_OK


def _cmd_panel(args):
    seed = args.seed if args.seed is not None else _default_seed()
    measures = tuple(_comma_list(args.measures))
    _validate_tags(measures, tuple(harness.MEASURES), "measure")
    tags = (tuple(_comma_list(args.associations))
            if args.associations else harness.DEFAULT_ASSOCIATIONS)
    valid_fixed = ("independent",) + synth.PATTERN_ORDER
    for tag in tags:
        if tag not in valid_fixed and not tag.startswith("gaussian:"):
            raise DataFormatError(
                f"unknown association {tag!r}; valid: gaussian:<rho>, "
                f"{', '.join(valid_fixed)}")
    report = harness.value_panel(tags, n=args.n, seed=seed, measures=measures)
    comments = [
        "command: panel", f"version: {__version__}",
        f"associations: {','.join(tags)}", f"n: {args.n}",
        f"measures: {','.join(measures)}", f"seed: {seed}",
    ]
    values = {(c.association, c.measure): c.value for c in report.cells}
    rows = [(tag,) + tuple(values[(tag, m)] for m in measures) for tag in tags]
    _emit(("association",) + measures, rows, args, comments)
    if args.plot:
        from . import figures
        figures.save_panel_figure(report, args.plot)
    return EXIT_OK


def _cmd_select(args):
    seed = args.seed if args.seed is not None else _default_seed()
    if args.measure not in harness.MEASURES:
        raise DataFormatError(
            f"unknown measure {args.measure!r}; valid measures: "
            f"{', '.join(harness.MEASURES)}")
    matrix, names = tabular.read_matrix(args.data, header=args.header)
    target_idx = tabular.resolve_columns(_comma_list(args.target), names, args.data)
    feature_idx = [i for i in range(len(names)) if i not in target_idx]
    if not feature_idx:
        raise InvalidInputError("no feature columns left after removing the target")
    trace = harness.greedy_select(matrix[:, feature_idx], matrix[:, target_idx],
                                  measure=args.measure, max_steps=args.steps,
                                  seed=seed)
    comments = [
        "command: select", f"version: {__version__}", f"data: {args.data}",
        f"target: {args.target}", f"measure: {args.measure}",
        f"steps: {args.steps}", f"seed: {seed}",
    ]
    feature_names = [names[i] for i in feature_idx]
    rows = [(step + 1, feature_idx[idx] + 1, feature_names[idx], value, nmse)
            for step, (idx, value, nmse)
            in enumerate(zip(trace.indices, trace.values, trace.nmse))]
    _emit(("step", "column", "name", "dependence", "nmse"), rows, args, comments)
    if args.plot:
        from . import figures
        figures.save_selection_figure(trace, args.plot, feature_names=feature_names)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rdc",
                     description="Randomized dependence coefficient toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    compute = subs.add_parser("compute", help="coefficient between two samples")
    _add_inputs(compute)
    _add_rdc_params(compute)
    _add_common(compute)
    compute.set_defaults(run=_cmd_compute)

    test = subs.add_parser("test", help="independence test")
    _add_inputs(test)
    _add_rdc_params(test)
    test.add_argument("--method", choices=("bartlett", "permutation"),
                      default="bartlett")
    test.add_argument("--alpha", type=float, default=0.05)
    test.add_argument("--n-perm", type=int, default=500)
    _add_common(test)
    test.set_defaults(run=_cmd_test)

    power = subs.add_parser("power", help="statistical power over pattern/noise grid")
    power.add_argument("--patterns", default=",".join(synth.PATTERN_ORDER))
    power.add_argument("--noise-grid", default="30",
                       help="level count (default 30 spanning 1/30..3) or "
                            "comma-separated variances")
    power.add_argument("--n", type=int, default=500)
    power.add_argument("--reps", type=int, default=500)
    power.add_argument("--alpha", type=float, default=0.05)
    power.add_argument("--measures", default=",".join(harness.DEFAULT_MEASURES))
    power.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes over grid cells")
    power.add_argument("--plot", default=None, metavar="FILE",
                       help="also render the power curves to this image file")
    _add_common(power)
    power.set_defaults(run=_cmd_power)

    bench = subs.add_parser("bench", help="runtime benchmark")
    bench.add_argument("--sizes", default="1000,10000,100000,1000000")
    bench.add_argument("--measures", default=",".join(harness.DEFAULT_MEASURES))
    bench.add_argument("--reps", type=int, default=3)
    bench.add_argument("--timeout", type=float, default=600.0,
                       help="seconds; a slower run marks the cell absent")
    bench.add_argument("--plot", default=None, metavar="FILE")
    _add_common(bench)
    bench.set_defaults(run=_cmd_bench)

    panel = subs.add_parser("panel", help="measure values per association")
    panel.add_argument("--associations", default=None,
                       help="comma-separated tags (default: reference set)")
    panel.add_argument("--n", type=int, default=1000)
    panel.add_argument("--measures", default=",".join(harness.DEFAULT_MEASURES))
    panel.add_argument("--plot", default=None, metavar="FILE")
    _add_common(panel)
    panel.set_defaults(run=_cmd_panel)

    select = subs.add_parser("select", help="greedy feature selection")
    select.add_argument("--data", required=True)
    select.add_argument("--target", required=True,
                        help="target column (name or 1-based index)")
    select.add_argument("--measure", default="rdc")
    select.add_argument("--steps", type=int, default=10)
    select.add_argument("--header", action="store_true")
    select.add_argument("--plot", default=None, metavar="FILE")
    _add_common(select)
    select.set_defaults(run=_cmd_select)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.run(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (DegenerateDataError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InvalidInputError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RdcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


def entrypoint():
    raise SystemExit(main())
