# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Command-line driver: ``oblearn sample | mine | train | eval | optimize |
table | pipeline``.

Exit status is 0 on success, 1 when a command fails at run time (training
divergence, I/O, unsupported function) and 2 on usage or file format
errors. Diagnostics go to stderr; results go to the ``--out`` file or to
stdout.
"""
import argparse
import contextlib
import json
import logging
import os
import sys

from . import (benchfn, evaluation, optimizer, opposition, parser, regressor,
               signals)
from .config import CSV, FORMATS, JSON, RunConfig
from .datautils import format_decimal
from .exceptions import FormatError, OppositionError, UsageError
from .version import __version__

LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# Epoch progress is logged at this interval.
EPOCH_LOG_INTERVAL = 100


@signals.receiver(signals.EPOCH)
def _log_epoch(epoch, train_mse, val_mse):
    if epoch % EPOCH_LOG_INTERVAL == 0:
        LOG.debug("epoch %d: train %.3e, validation %.3e", epoch, train_mse, val_mse)


@signals.receiver(signals.STOPPED)
def _log_stopped(epoch, best_epoch):
    LOG.info("Stopped early at epoch %d; best epoch %d", epoch, best_epoch)


@signals.receiver(signals.RUN_FINISHED)
def _log_run(function, strategy, stats):
    LOG.debug("%s run %d, %s: %s", function, stats.run_index, strategy, stats.cell())


def _existing(path, what):
    if path is None:
        raise UsageError("%s is required" % what)
    if not os.path.exists(path):
        raise UsageError("%s '%s' does not exist" % (what, path))
    return path


def _write_report(config, doc, header, rows, default_format):
    """Write a report as JSON (`doc`) or CSV (`header` and `rows`)."""
    fmt = config.format or default_format
    if fmt == JSON:
        doc = dict(doc, config=config.provenance())
        if config.output is None:
            sys.stdout.write(json.dumps(doc, indent=2) + "\n")
        else:
            parser.write_json(config.output, doc)
    else:
        meta = {"config": config.provenance()}
        if config.output is None:
            sys.stdout.write("# config: %s\n" % json.dumps(meta["config"], sort_keys=True))
            sys.stdout.write(",".join(header) + "\n")
            for row in rows:
                sys.stdout.write(",".join(row) + "\n")
        else:
            parser.write_rows(config.output, header, rows, meta=meta)


@contextlib.contextmanager
def _domain(config):
    """Apply the ``--lower/--upper`` override of `config` for a with-block."""
    box = config.box()
    if box is None:
        yield
    else:
        with benchfn.temp_domain(config.function, box):
            yield


def _require_output(config):
    if config.output is None:
        raise UsageError("--out is required")
    return config.output


def cmd_sample(config):
    if config.function is None:
        raise UsageError("--fn is required")
    data = benchfn.sample(config.function, config.n, mode=config.sampling_mode(),
                          seed=config.seed, box=config.box())
    parser.write_dataset(data, _require_output(config),
                         meta={"config": config.provenance()})
    print("wrote %d samples to %s" % (len(data), config.output))


def cmd_mine(config):
    data = parser.read_dataset(_existing(config.input, "--in"))
    mined = opposition.mine(data, config.scheme)
    parser.write_mined(mined, _require_output(config),
                       meta={"config": config.provenance()})
    stats = mined.stats
    print("y_min=%s y_max=%s y_mean=%s" % tuple(
        format_decimal(v) for v in (stats.y_min, stats.y_max, stats.y_mean)))
    print("wrote %d pairs to %s (%d fallback)" % (
        len(mined), config.output, int(mined.fallback.sum())))


def cmd_train(config):
    mined = parser.read_mined(_existing(config.input, "--in"))
    model, history = regressor.fit(mined, config.hidden, config.train_config())
    regressor.save(model, _require_output(config))
    history_path = config.history or os.path.splitext(config.output)[0] + "_history.csv"
    parser.write_history(history, history_path)
    print("best validation MSE %s at epoch %d; wrote %s and %s" % (
        format_decimal(history.best_val_mse), history.best_epoch,
        config.output, history_path))


def _evaluation_rows(reports):
    header = ["function", "scheme", "n_test", "ann", "reference_proposed",
              "reference_fuzzy", "t", "dof", "p"]
    rows = []
    for r in reports:
        welch = [format_decimal(getattr(r.welch, k)) for k in ("t", "dof", "p")] \
            if r.welch is not None else ["", "", ""]
        rows.append([
            r.function, r.scheme, str(r.n_test), str(r.ann),
            str(r.reference_proposed) if r.reference_proposed else "",
            str(r.reference_fuzzy) if r.reference_fuzzy else "",
        ] + welch)
    return header, rows


def cmd_eval(config):
    if config.function is None:
        raise UsageError("--fn is required")
    model = regressor.load(_existing(config.model, "--model"))
    with _domain(config):
        report = evaluation.evaluate(config.function, model, config.scheme,
                                     n_test=config.n_test, seed=config.seed,
                                     oracle=config.oracle)
    header, rows = _evaluation_rows([report])
    _write_report(config, report.to_dict(), header, rows, JSON)


def cmd_optimize(config):
    if config.function is None:
        raise UsageError("--fn is required")
    model = regressor.load(_existing(config.model, "--model"))
    with _domain(config):
        report = optimizer.compare(config.function, model, n_samples=config.n,
                                   n_runs=config.runs, seed=config.seed)
    _write_report(config, report.to_dict(), report.csv_header(),
                  report.csv_rows(), CSV)


def cmd_table(config):
    reports = evaluation.table1(
        n_samples=config.n, mode=config.mode or benchfn.GRID,
        seed=config.seed, hidden_units=config.hidden,
        cfg=config.train_config(), n_test=config.n_test,
    )
    header, rows = _evaluation_rows(reports)
    _write_report(config, {"reports": [r.to_dict() for r in reports]},
                  header, rows, CSV)


def cmd_pipeline(config):
    """Sample, mine, train and then evaluate (1-D) or optimize (2-D) into
    the ``--out`` directory.
    """
    if config.function is None:
        raise UsageError("--fn is required")
    fn = benchfn.get(config.function)
    outdir = _require_output(config)
    if not os.path.isdir(outdir):
        os.makedirs(outdir)

    def path(name):
        return os.path.join(outdir, name)

    stages = [
        (cmd_sample, dict(output=path("data.csv"))),
        (cmd_mine, dict(input=path("data.csv"), output=path("mined.csv"))),
        (cmd_train, dict(input=path("mined.csv"), output=path("model.json"),
                         history=path("history.csv"))),
    ]
    if fn.arity == 1:
        stages.append((cmd_eval, dict(model=path("model.json"),
                                      output=path("eval.json"), format=JSON)))
    else:
        stages.append((cmd_optimize, dict(model=path("model.json"),
                                          output=path("optimize.csv"), format=CSV)))

    for command, paths in stages:
        stage = RunConfig.from_dict(config.to_dict())
        stage.command = command.__name__[len("cmd_"):]
        for key, value in paths.items():
            setattr(stage, key, value)
        LOG.info("pipeline: %s", stage.command)
        command(stage)


COMMANDS = {
    "sample": cmd_sample,
    "mine": cmd_mine,
    "train": cmd_train,
    "eval": cmd_eval,
    "optimize": cmd_optimize,
    "table": cmd_table,
    "pipeline": cmd_pipeline,
}


def _scheme(value):
    try:
        return opposition.parse_scheme(value)
    except UsageError as ex:
        raise argparse.ArgumentTypeError(str(ex))


def _parent(*adders):
    p = argparse.ArgumentParser(add_help=False)
    for add in adders:
        add(p)
    return p


def _fn_args(p):
    p.add_argument("--fn", dest="function", metavar="ID",
                   help="benchmark function id: %s" % ", ".join(benchfn.FUNCTION_IDS))
    p.add_argument("--lower", type=float, nargs="+", metavar="X",
                   help="override the lower domain bound")
    p.add_argument("--upper", type=float, nargs="+", metavar="X",
                   help="override the upper domain bound")


def _sample_args(p):
    p.add_argument("--n", type=int, help="number of samples (default 1000)")
    p.add_argument("--mode", choices=benchfn.SAMPLING_MODES,
                   help="grid (default for 1-D) or uniform (default for 2-D)")


def _scheme_args(p):
    p.add_argument("--scheme", type=_scheme, help="t1 (default), t2 or t3")


def _seed_args(p):
    p.add_argument("--seed", type=int, help="master seed (default 0)")


def _io_args(p):
    p.add_argument("--in", dest="input", metavar="PATH", help="input file")
    p.add_argument("--out", dest="output", metavar="PATH", help="output file")


def _format_args(p):
    p.add_argument("--format", choices=FORMATS, help="report format")


def _train_args(p):
    p.add_argument("--hidden", type=int, help="hidden units (default 16)")
    p.add_argument("--epochs", type=int, help="training epochs (default 2000)")
    p.add_argument("--lr", type=float, help="learning rate (default 0.01)")
    p.add_argument("--batch", type=int, help="mini-batch size; 0 for full batch")
    p.add_argument("--patience", type=int,
                   help="epochs without validation improvement before stopping")
    p.add_argument("--optimizer", choices=regressor.OPTIMIZERS,
                   help="gd (default), adam or lbfgs")
    p.add_argument("--validation-fraction", type=float, metavar="F")
    p.add_argument("--history", metavar="PATH", help="loss history CSV")


def _eval_args(p):
    p.add_argument("--model", metavar="PATH", help="model file")
    p.add_argument("--n-test", type=int, help="held-out test points (default 200)")
    p.add_argument("--oracle", action="store_true", default=None,
                   help="also compare with the exact type-II opposites")


def _runs_args(p):
    p.add_argument("--runs", type=int, help="optimizer runs (default 5)")


def build_parser():
    p = argparse.ArgumentParser(
        prog="oblearn",
        description="Learn type-II opposites of benchmark functions and use "
                    "them in opposition-guided search.",
    )
    p.add_argument("--version", action="version", version=__version__)
    verbosity = p.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true",
                           help="log debug messages")
    verbosity.add_argument("-q", "--quiet", action="store_true",
                           help="log warnings and errors only")

    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser("sample", help="sample a benchmark function",
                   parents=[_parent(_fn_args, _sample_args, _seed_args, _io_args)])
    sub.add_parser("mine", help="mine quasi-opposite pairs from a dataset",
                   parents=[_parent(_scheme_args, _io_args)])
    sub.add_parser("train", help="train a network on mined pairs",
                   parents=[_parent(_train_args, _seed_args, _io_args)])
    sub.add_parser("eval", help="evaluate learned opposites",
                   parents=[_parent(_fn_args, _scheme_args, _eval_args,
                                    _seed_args, _io_args, _format_args)])
    sub.add_parser("optimize", help="compare search strategies",
                   parents=[_parent(_fn_args, _sample_args, _eval_args,
                                    _runs_args, _seed_args, _io_args,
                                    _format_args)])
    sub.add_parser("table", help="learn and evaluate every 1-D function and scheme",
                   parents=[_parent(_sample_args, _train_args, _eval_args,
                                    _seed_args, _io_args, _format_args)])
    sub.add_parser("pipeline", help="sample, mine, train and evaluate or optimize",
                   parents=[_parent(_fn_args, _sample_args, _scheme_args,
                                    _train_args, _eval_args, _runs_args,
                                    _seed_args, _io_args)])
    return p


def _configure_logging(args):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    """Run the command line and return the exit status."""
    args = build_parser().parse_args(argv)
    _configure_logging(args)

    try:
        config = RunConfig.from_args(args)
        COMMANDS[args.command](config)
    except (UsageError, FormatError) as ex:
        LOG.error("%s", ex)
        return EXIT_USAGE
    except (OppositionError, OSError) as ex:
        LOG.error("%s", ex)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
