# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Opposition-guided random search on the 2-D benchmark functions.

Every iteration draws a random guess, optionally computes its opposite
(type-I reflection or a learned type-II prediction) and keeps whichever of
the two has the lower error. The error of a point is its function value,
since every registered optimum has value 0. All strategies of a run with
the same seed see the same sequence of random guesses.
"""
import collections
import logging

import numpy as np

from . import benchfn, fields, regressor, signals
from .datautils import as_matrix, derive_seed
from .entities import Entity
from .exceptions import UsageError
from .opposition import T1, mine

LOG = logging.getLogger(__name__)

RANDOM_ONLY = "random_only"
TYPE1 = "type1"
TYPE2_MODEL = "type2_model"
STRATEGY_TAGS = (RANDOM_ONLY, TYPE1, TYPE2_MODEL)

DEFAULT_N_SAMPLES = 1000
DEFAULT_N_RUNS = 5

# Fraction of the sample budget spent as search iterations.
ITERATION_FRACTION = 0.1


class Strategy(object):
    """How a random guess is paired with an opposite guess.

    Use the :meth:`random_only`, :meth:`type1` and :meth:`type2_model`
    constructors.
    """
    def __init__(self, tag, model=None):
        if tag not in STRATEGY_TAGS:
            raise UsageError("Unknown strategy '%s'" % (tag,))
        if tag == TYPE2_MODEL and model is None:
            raise UsageError("The type2_model strategy needs a trained model")
        self.tag = tag
        self.model = model

    @classmethod
    def random_only(cls):
        return cls(RANDOM_ONLY)

    @classmethod
    def type1(cls):
        return cls(TYPE1)

    @classmethod
    def type2_model(cls, model):
        return cls(TYPE2_MODEL, model)

    def opposites(self, xs, box):
        """Return the opposite guesses of the rows of `xs`, or None for
        random_only.
        """
        if self.tag == RANDOM_ONLY:
            return None
        elif self.tag == TYPE1:
            return box.clip(box.lower_array + box.upper_array - xs)

        if self.model.arch.input_dim != box.arity:
            raise UsageError(
                "Model arity {0} does not match function arity {1}".format(
                    self.model.arch.input_dim, box.arity
                )
            )
        return box.clip(regressor.predict_many(self.model, xs))

    def __repr__(self):
        return "Strategy(%s)" % self.tag


class RunStats(Entity):
    """Per-iteration errors of one search run and their mean and sample
    standard deviation.
    """
    strategy = fields.ChoiceField("strategy", STRATEGY_TAGS)
    run_index = fields.IntegerField("run_index")
    seed = fields.IntegerField("seed")
    mean = fields.FloatField("mean")
    std = fields.FloatField("std")
    per_iteration_errors = fields.VectorField("per_iteration_errors")

    def __init__(self, strategy=None, run_index=None, seed=None, errors=()):
        super(RunStats, self).__init__()
        self.strategy = strategy
        self.run_index = run_index
        self.seed = seed
        self.set_errors(errors)

    def set_errors(self, errors):
        arr = np.asarray(errors, dtype=np.float64).reshape(-1)
        if arr.shape[0] == 0:
            self.mean = self.std = None
            self.per_iteration_errors = None
            return
        self.mean = float(np.mean(arr))
        self.std = float(np.std(arr, ddof=1)) if arr.shape[0] > 1 else 0.0
        self.per_iteration_errors = arr

    def cell(self):
        """Format as a "mean ± std" report cell."""
        return "%.2f ± %.2f" % (self.mean, self.std)


def _check_function(name):
    fn = benchfn.get(name)
    if fn.arity != 2 or fn.minimizer is None:
        raise UsageError(
            "Function '{0}' is not a 2-D optimization benchmark; expected one "
            "of: {1}".format(name, ", ".join(benchfn.OPTIMIZATION_IDS))
        )
    return fn


def guess_errors(name, strategy, xs):
    """Errors of the strategy's choice for each random guess in `xs`.

    Returns:
        ``f(x)`` for random_only, otherwise ``min(f(x), f(opposite(x)))``
        per row.
    """
    _check_function(name)
    box = benchfn.get_domain(name)
    xs = as_matrix(xs, dim=box.arity)
    errors = benchfn.evaluate_many(name, xs)
    opposites = strategy.opposites(xs, box)
    if opposites is not None:
        errors = np.minimum(errors, benchfn.evaluate_many(name, opposites))
    return errors


def run(name, strategy, n_iters, seed, run_index=0):
    """Run one opposition-guided random search.

    Args:
        name: Id of a 2-D benchmark function.
        strategy: A Strategy.
        n_iters: Number of iterations (>= 1).
        seed: Seed of the random guesses; equal seeds give equal guesses
            whatever the strategy.
        run_index: Recorded in the returned RunStats.

    Returns:
        A RunStats.

    Raises:
        UsageError: If `name` is not 2-D, `n_iters` < 1 or the model arity
            does not match.
    """
    _check_function(name)
    if n_iters < 1:
        raise UsageError("n_iters must be >= 1, got %d" % n_iters)

    box = benchfn.get_domain(name)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(box.lower_array, box.upper_array, size=(n_iters, box.arity))

    stats = RunStats(strategy.tag, run_index, seed, guess_errors(name, strategy, xs))
    LOG.debug("%s run %d (%s): %s", name, run_index, strategy.tag, stats.cell())
    signals.emit(signals.RUN_FINISHED, name, strategy.tag, stats)
    return stats


class ComparisonRow(Entity):
    """The three strategies of one run."""
    run = fields.IntegerField("run")
    random = fields.TypedField("random", RunStats)
    type2_ann = fields.TypedField("type2_ann", RunStats)
    type1 = fields.TypedField("type1", RunStats)

    def __init__(self, run=None, random=None, type2_ann=None, type1=None):
        super(ComparisonRow, self).__init__()
        self.run = run
        self.random = random
        self.type2_ann = type2_ann
        self.type1 = type1


REPORT_COLUMNS = ("random", "type2_ann", "type1")


class ComparisonReport(Entity):
    """Mean ± std of per-iteration errors per run and strategy."""
    function = fields.TextField("function")
    n_samples = fields.IntegerField("n_samples")
    n_iters = fields.IntegerField("n_iters")
    n_runs = fields.IntegerField("n_runs")
    seed = fields.IntegerField("seed")
    rows = fields.TypedField("rows", ComparisonRow, multiple=True)
    reference = fields.TypedField("reference", list)

    def __init__(self, function=None, n_samples=None, n_iters=None,
                 n_runs=None, seed=None):
        super(ComparisonReport, self).__init__()
        self.function = function
        self.n_samples = n_samples
        self.n_iters = n_iters
        self.n_runs = n_runs
        self.seed = seed

    def column_means(self, column):
        """Mean error of `column` for every run."""
        return [getattr(row, column).mean for row in self.rows]

    def csv_header(self):
        return ["run"] + list(REPORT_COLUMNS)

    def csv_rows(self):
        return [[str(row.run)] + [getattr(row, c).cell() for c in REPORT_COLUMNS]
                for row in self.rows]


def compare(name, model, n_samples=DEFAULT_N_SAMPLES, n_runs=DEFAULT_N_RUNS,
            seed=0):
    """Compare random guessing, type-I opposites and learned type-II
    opposites over `n_runs` runs of ``0.1 * n_samples`` iterations.

    Run ``r`` (1-based) uses the seed ``derive_seed(seed, r)`` for all three
    strategies.

    Returns:
        A ComparisonReport with one row per run.
    """
    _check_function(name)
    if n_runs < 1:
        raise UsageError("n_runs must be >= 1, got %d" % n_runs)
    n_iters = max(1, int(round(ITERATION_FRACTION * n_samples)))

    strategies = collections.OrderedDict((
        ("random", Strategy.random_only()),
        ("type2_ann", Strategy.type2_model(model)),
        ("type1", Strategy.type1()),
    ))

    report = ComparisonReport(name, n_samples, n_iters, n_runs, seed)
    for r in range(1, n_runs + 1):
        run_seed = derive_seed(seed, r)
        results = {column: run(name, strategy, n_iters, run_seed, run_index=r)
                   for column, strategy in strategies.items()}
        report.rows.append(ComparisonRow(r, **results))

    if name in TABLE2_REFERENCE:
        report.reference = [dict(run=i + 1, **cells)
                            for i, cells in enumerate(reference_cells(name))]

    LOG.info("%s: mean errors random %.2f, type2_ann %.2f, type1 %.2f", name,
             *(float(np.mean(report.column_means(c))) for c in REPORT_COLUMNS))
    return report


def train_type2_model(name, n_samples=DEFAULT_N_SAMPLES, seed=0,
                      hidden_units=regressor.DEFAULT_HIDDEN_UNITS, cfg=None,
                      mode=benchfn.UNIFORM):
    """Sample a 2-D function, mine T1 opposites and train a model on them.

    Without `cfg` the model trains with Adam seeded by `seed`.

    Returns:
        A tuple ``(model, history)``.
    """
    _check_function(name)
    data = benchfn.sample(name, n_samples, mode=mode, seed=derive_seed(seed, 0))
    mined = mine(data, T1)
    cfg = cfg or regressor.TrainConfig(optimizer=regressor.ADAM, seed=seed)
    return regressor.fit(mined, hidden_units, cfg)


#: Published per-run mean and standard deviation of the search errors for
#: random guesses, learned type-II opposites, a fuzzy-system variant and
#: type-I opposites. Reference text only; the error scale is not
#: reproducible.
TABLE2_REFERENCE = collections.OrderedDict((
    ("ackley", (
        ((487.70, 516.362), (108.00, 139.03), (117.43, 150.53), (198.91, 222.677)),
        ((377.43, 455.85), (108.65, 136.91), (116.62, 138.02), (155.24, 187.24)),
        ((512.31, 529.517), (156.66, 162.61), (143.05, 153.73), (238.00, 246.19)),
        ((374.87, 388.63), (124.20, 124.50), (123.83, 134.19), (154.55, 139.38)),
        ((415.84, 465.70), (146.94, 157.14), (128.90, 145.57), (175.28, 218.05)),
    )),
    ("booth", (
        ((424.53, 502.66), (302.66, 274.64), (337.39, 304.37), (183.97, 197.39)),
        ((420.03, 443.28), (303.23, 318.19), (330.74, 328.68), (191.13, 166.01)),
        ((391.28, 445.53), (318.19, 276.40), (328.68, 280.56), (166.01, 195.55)),
        ((338.94, 406.02), (292.60, 290.77), (123.83, 295.41), (154.55, 174.13)),
        ((430.72, 496.36), (323.67, 286.38), (338.95, 289.79), (187.19, 211.87)),
    )),
    ("bulkin", (
        ((120.40, 41.00), (47.26, 18.99), (63.89, 24.04), (101.21, 38.46)),
        ((119.20, 50.42), (53.78, 15.48), (68.58, 26.75), (97.11, 42.71)),
        ((126.78, 45.16), (43.09, 17.24), (72.83, 29.55), (103.427, 38.58)),
        ((118.39, 47.31), (49.17, 20.12), (64.02, 30.43), (94.27, 39.96)),
        ((128.58, 44.49), (48.23, 20.96), (66.43, 30.63), (100.40, 38.16)),
    )),
))

REFERENCE_COLUMNS = ("random", "type2_ann", "fis", "type1")


def reference_cells(name):
    """Return the published rows of `name` as dicts of "mean ± std" text."""
    return [
        collections.OrderedDict(
            (column, "%s ± %s" % cell) for column, cell in zip(REFERENCE_COLUMNS, row)
        )
        for row in TABLE2_REFERENCE.get(name, ())
    ]
