"""
scalemodel command line.

    python application/cli.py arch      --config spark_fc.json
    python application/cli.py sweep     --config spark_fc.json --out curve.csv --svg curve.svg
    python application/cli.py optimal   --config spark_fc.json
    python application/cli.py validate  --config c.json --empirical emp.csv --kind time
    python application/cli.py partition --config bp.json --n 1..8 --seed 7 --trials 100

Exit codes: 0 success, 1 usage error, 2 model/domain error.
"""
import logging
import sys
import argparse
import traceback

import core_model
import curve_output
import model_config
import speedup
import utils
import validation

from errors import ConfigError, ScaleModelError

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MODEL = 2

class UsageError(Exception):
    pass

class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

def parse_n_range(text):
    """'MIN..MAX' or a single worker count, 1 <= MIN <= MAX <= MAX_WORKERS."""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            n_min, n_max = int(low), int(high)
        else:
            n_min = n_max = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN..MAX, got '{text}'")
    if not 1 <= n_min <= n_max <= speedup.MAX_WORKERS:
        raise argparse.ArgumentTypeError(
            f"worker range must satisfy 1 <= MIN <= MAX <= {speedup.MAX_WORKERS}, got '{text}'")
    return n_min, n_max

def non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value

def positive_int(text):
    value = non_negative_int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value

def build_parser():
    parser = ArgumentParser(prog="scalemodel", description="Analytical scalability estimator for distributed ML workloads")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def common(sub):
        sub.add_argument("--config", required=True, help="model document (JSON)")
        sub.add_argument("--n", type=parse_n_range, default=None, help="worker range MIN..MAX (overrides sweep)")
        sub.add_argument("--seed", type=non_negative_int, default=None)
        sub.add_argument("--trials", type=positive_int, default=None)
        sub.add_argument("--workers", type=positive_int, default=None, help="threads for Monte-Carlo trials")

    sub = subparsers.add_parser("arch", help="print network weight and multiply-add counts")
    sub.add_argument("--config", required=True)

    sub = subparsers.add_parser("sweep", help="emit the speedup curve as CSV (and SVG)")
    common(sub)
    sub.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    sub.add_argument("--svg", default=None, help="SVG chart path")

    sub = subparsers.add_parser("optimal", help="print the worker count with the highest speedup")
    common(sub)

    sub = subparsers.add_parser("validate", help="print MAPE against measurements")
    common(sub)
    sub.add_argument("--empirical", required=True, help="CSV with header n,value")
    sub.add_argument("--kind", choices=["time", "speedup"], required=True)
    sub.add_argument("--reference", type=positive_int, default=None,
                     help="reference worker count; with --kind time, compare speedups normalized to it")

    sub = subparsers.add_parser("partition", help="print Monte-Carlo partition estimates as CSV")
    common(sub)
    sub.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    return parser

def _settings(args, config):
    gi = config.workload.graph_inference
    seed = utils.resolve_seed(args.seed, gi.seed if gi else None)
    trials = utils.resolve_trials(args.trials, gi.trials if gi else None)
    workers = args.workers if args.workers is not None else int(utils.config.get("workers", 1))
    if seed < 0:
        raise ConfigError(f"seed must be non-negative, got {seed}")
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    logger.info(f"seed: {seed}, trials: {trials}, workers: {workers}")
    return dict(seed=seed, trials=trials, workers=max(1, workers), n_range=args.n)

def _emit(text, path):
    if path:
        utils.write_text(path, text)
        logger.info(f"wrote {path}")
    else:
        sys.stdout.write(text)

def cmd_arch(args):
    config = model_config.load_config_file(args.config)
    counts = config.network_counts
    if counts is None:
        raise ConfigError("arch needs a gradient_descent workload with an architecture")
    print(f"total_weights: {counts.total_weights}")
    print(f"forward_madds: {counts.forward_madds}")
    print(f"gradient_madds: {counts.gradient_madds}")

def cmd_sweep(args):
    config = model_config.load_config_file(args.config)
    curve = model_config.build_curve(config, **_settings(args, config))
    _emit(curve_output.emit_curve_csv(curve), args.out)
    if args.svg:
        utils.write_text(args.svg, curve_output.emit_curve_svg(curve))
        logger.info(f"wrote {args.svg}")

    efficiency = speedup.parallel_efficiency(curve)
    logger.info(f"optimal n: {speedup.optimal_nodes(curve)}, scalable: {speedup.is_scalable(curve)}, "
                f"efficiency at n={efficiency[-1][0]}: {efficiency[-1][1]:.3f}")

    if config.gd_model is not None and config.topology.variant == "linear":
        m, hw, topo = config.gd_model, config.hardware, config.topology
        if config.mode == "weak":
            limit = core_model.weak_speedup_limit(m, hw, topo, curve.reference_n)
            logger.info(f"linear topology: weak speedup saturates at {limit}")
        else:
            logger.info(f"linear topology scales: {core_model.linear_scales(m, hw, topo)}")

def cmd_optimal(args):
    config = model_config.load_config_file(args.config)
    curve = model_config.build_curve(config, **_settings(args, config))
    n = speedup.optimal_nodes(curve)
    logger.info(f"s({n}) = {curve.speedup_at(n)} over n={curve.points[0].n}..{curve.points[-1].n}")
    print(n)

def cmd_validate(args):
    config = model_config.load_config_file(args.config)
    curve = model_config.build_curve(config, **_settings(args, config))

    try:
        text = utils.read_text(args.empirical)
    except OSError as e:
        raise ConfigError(f"cannot read {args.empirical}: {e}") from e
    reference_n = args.reference if args.kind == "speedup" else None
    series = validation.load_empirical_csv(text, kind=args.kind, reference_n=reference_n)

    if args.kind == "time" and args.reference is not None:
        series = validation.normalize_to_reference(series, args.reference)

    error = validation.curve_mape(curve, series)
    logger.info(f"compared {len(series.points)} points as {series.kind}")
    print(f"MAPE: {error:.2f}%")

def cmd_partition(args):
    config = model_config.load_config_file(args.config)
    estimates = model_config.partition_estimates(config, **_settings(args, config))
    _emit(curve_output.emit_partition_csv(estimates), args.out)

COMMANDS = {
    "arch": cmd_arch,
    "sweep": cmd_sweep,
    "optimal": cmd_optimal,
    "validate": cmd_validate,
    "partition": cmd_partition,
}

def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            utils.set_log_level(args.log_level)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        COMMANDS[args.command](args)
    except ScaleModelError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MODEL
    except Exception as e:
        err_msg = traceback.format_exc()
        logger.debug(f"error message: {err_msg}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MODEL
    return EXIT_OK

def main():
    sys.exit(run())

if __name__ == "__main__":
    main()
