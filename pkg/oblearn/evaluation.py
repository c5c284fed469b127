# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Measuring learned opposites: the exact type-II oracle, the percent error of
a predicted opposite, summary statistics and a one-sided Welch test for
comparing two samples of errors.
"""
import collections
import logging

import numpy as np
from scipy.special import betainc

from . import benchfn, fields, regressor
from .datautils import as_matrix, as_vector, derive_seed
from .entities import Entity
from .exceptions import (DegenerateRangeError, UndefinedStatisticError,
                         UnsupportedFunctionError, UsageError)
from .opposition import (SCHEMES, OutputStats, mine, opposite_value,
                         opposite_values, output_stats, parse_scheme)

LOG = logging.getLogger(__name__)

DEFAULT_N_TEST = 200

# Bisection gives up after this many halvings even if the bracket can
# still be split.
MAX_BISECTIONS = 200


class ErrorSummary(Entity):
    """Sample mean and standard deviation (n - 1 denominator) of errors.

    ``n`` is None for published reference values whose sample size is
    unknown.
    """
    mean = fields.FloatField("mean")
    std = fields.FloatField("std")
    n = fields.IntegerField("n")

    def __init__(self, mean=None, std=None, n=None):
        super(ErrorSummary, self).__init__()
        self.mean = mean
        self.std = std
        self.n = n

    def __str__(self):
        return "%.2f ± %.2f" % (self.mean, self.std)


class WelchResult(Entity):
    """Outcome of a one-sided Welch test. Small ``p`` means the first
    sample has the smaller mean.
    """
    t = fields.FloatField("t")
    dof = fields.FloatField("dof")
    p = fields.FloatField("p")

    def __init__(self, t=None, dof=None, p=None):
        super(WelchResult, self).__init__()
        self.t = t
        self.dof = dof
        self.p = p


OracleResult = collections.namedtuple("OracleResult", "opposite target clamped")
OracleResult.__doc__ = """The exact type-II opposite of an input.

Attributes:
    opposite: The input vector whose output is the target.
    target: The opposite output value aimed for.
    clamped: True if the target lay outside the function's range on its
        domain and the nearest endpoint was returned instead.
"""


def _stats_of(source):
    if isinstance(source, OutputStats):
        return source
    return output_stats(source)


def _check_monotone(name):
    fn = benchfn.get(name)
    if fn.arity != 1 or not fn.monotone:
        raise UnsupportedFunctionError(name)
    return fn


def _bisect(fn, lo, hi, target):
    """Find x in [lo, hi] with fn(x) == target for a strictly monotone fn.

    Halves the bracket until its midpoint is no longer distinct from the
    ends, then returns whichever end is closer in output.
    """
    f = lambda x: float(fn.eval_many(np.array([[x]]))[0])
    increasing = f(hi) > f(lo)

    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        value = f(mid)
        if value == target:
            return mid
        if (value < target) == increasing:
            lo = mid
        else:
            hi = mid

    return lo if abs(f(lo) - target) <= abs(f(hi) - target) else hi


def oracle_type2(name, x, scheme, stats_source):
    """Compute the true type-II opposite of `x` from the function itself.

    The target is the scheme's opposite of ``f(x)`` under the output
    statistics of `stats_source`; the input reaching it is found by
    bisection over the function's domain.

    Args:
        name: Id of a strictly monotone 1-D function.
        x: The input.
        scheme: A scheme tag.
        stats_source: A Dataset or OutputStats.

    Returns:
        An OracleResult.

    Raises:
        UnsupportedFunctionError: If `name` is not strictly monotone 1-D.
    """
    fn = _check_monotone(name)
    stats = _stats_of(stats_source)
    target = opposite_value(benchfn.evaluate(name, x), stats, scheme)

    box = benchfn.get_domain(name)
    lo, hi = float(box.lower[0]), float(box.upper[0])
    f_lo, f_hi = fn.eval_many(np.array([[lo], [hi]]))
    low_end, high_end = (lo, hi) if f_hi > f_lo else (hi, lo)

    if target <= min(f_lo, f_hi):
        return OracleResult(as_vector(low_end), target, target < min(f_lo, f_hi))
    if target >= max(f_lo, f_hi):
        return OracleResult(as_vector(high_end), target, target > max(f_lo, f_hi))

    return OracleResult(as_vector(_bisect(fn, lo, hi, target)), target, False)


def _span(stats):
    span = abs(stats.y_max - stats.y_min)
    if span == 0:
        raise DegenerateRangeError(stats.y_min)
    return span


def type2_error(name, x, x_pred, scheme, stats):
    """Percent-of-output-range error of a predicted type-II opposite.

    Returns:
        ``100 * |y* - f(x_pred)| / (y_max - y_min)`` where ``y*`` is the
        scheme's opposite of ``f(x)``.

    Raises:
        DegenerateRangeError: If ``y_max == y_min``.
    """
    span = _span(stats)
    target = opposite_value(benchfn.evaluate(name, x), stats, scheme)
    return 100.0 * abs(target - benchfn.evaluate(name, x_pred)) / span


def type2_errors(name, xs, preds, scheme, stats):
    """Vectorized :func:`type2_error` over rows of `xs` and `preds`."""
    span = _span(stats)
    targets, _ = opposite_values(benchfn.evaluate_many(name, xs), stats, scheme)
    return 100.0 * np.abs(targets - benchfn.evaluate_many(name, preds)) / span


def summarize(errors):
    """Return the ErrorSummary of a sequence of errors. A single error has
    standard deviation 0.

    Raises:
        UsageError: If `errors` is empty.
    """
    arr = np.asarray(errors, dtype=np.float64).reshape(-1)
    if arr.shape[0] == 0:
        raise UsageError("Cannot summarize an empty error sample")
    std = float(np.std(arr, ddof=1)) if arr.shape[0] > 1 else 0.0
    return ErrorSummary(float(np.mean(arr)), std, int(arr.shape[0]))


def welch_summary(mean_a, std_a, n_a, mean_b, std_b, n_b):
    """One-sided Welch test from summary statistics.

    The p-value is the Student-t CDF of ``t`` at the Welch-Satterthwaite
    degrees of freedom, evaluated through the regularized incomplete beta
    function.

    Raises:
        UsageError: If either sample has fewer than two members.
        UndefinedStatisticError: If both standard deviations are zero.
    """
    if n_a < 2 or n_b < 2:
        raise UsageError("Welch's test needs at least 2 samples per group")

    va = std_a ** 2 / n_a
    vb = std_b ** 2 / n_b
    combined = va + vb
    if not combined > 0:
        raise UndefinedStatisticError(
            "Welch's t is undefined for samples with zero variance"
        )

    t = (mean_a - mean_b) / np.sqrt(combined)
    dof = combined ** 2 / (va ** 2 / (n_a - 1) + vb ** 2 / (n_b - 1))

    tail = 0.5 * float(betainc(0.5 * dof, 0.5, dof / (dof + t * t)))
    p = tail if t < 0 else 1.0 - tail
    return WelchResult(float(t), float(dof), p)


def welch(a, b):
    """One-sided Welch test of "mean of `a` is smaller than mean of `b`"."""
    sa = summarize(a)
    sb = summarize(b)
    return welch_summary(sa.mean, sa.std, sa.n, sb.mean, sb.std, sb.n)


PROPOSED = "proposed"
FUZZY = "fuzzy"
NOT_SIGNIFICANT = "not significant"
VERDICTS = (PROPOSED, FUZZY, NOT_SIGNIFICANT)


class ReferenceRow(Entity):
    """A published comparison between learned opposites and an evolving
    fuzzy inference system, in percent-of-range units.
    """
    function = fields.TextField("function")
    scheme = fields.ChoiceField("scheme", SCHEMES)
    proposed = fields.TypedField("proposed", ErrorSummary)
    fuzzy = fields.TypedField("fuzzy", ErrorSummary)
    p_value = fields.FloatField("p_value")
    verdict = fields.ChoiceField("verdict", VERDICTS)
    confidence = fields.FloatField("confidence")

    def __init__(self, function=None, scheme=None, proposed=None, fuzzy=None,
                 p_value=None, verdict=None, confidence=0.95):
        super(ReferenceRow, self).__init__()
        self.function = function
        self.scheme = scheme
        self.proposed = proposed
        self.fuzzy = fuzzy
        self.p_value = p_value
        self.verdict = verdict
        self.confidence = confidence

    @property
    def significant(self):
        """True where the learned opposites won at 95% confidence."""
        return self.verdict == PROPOSED and self.confidence >= 0.95


def _ref(function, scheme, proposed, fuzzy, p_value, verdict, confidence=0.95):
    return ReferenceRow(function, scheme, ErrorSummary(*proposed),
                        ErrorSummary(*fuzzy), p_value, verdict, confidence)


#: Published errors of learned opposites and of the fuzzy baseline per
#: (function, scheme). The linear2x/t3 p-value is unreadable in the source
#: and stored as missing.
TABLE1_REFERENCE = collections.OrderedDict(
    ((r.function, r.scheme), r) for r in (
        _ref("cubic_shift", "t1", (0.76, 0.85), (4.41, 2.44), 0.0005, PROPOSED),
        _ref("cubic_shift", "t2", (9.53, 12.99), (11.96, 12.82), 0.3398, NOT_SIGNIFICANT),
        _ref("cubic_shift", "t3", (4.65, 9.95), (6.82, 10.62), 0.3214, NOT_SIGNIFICANT),
        _ref("log_shift", "t1", (18.95, 18.00), (30.05, 20.87), 0.11, PROPOSED, 0.80),
        _ref("log_shift", "t2", (10.02, 15.73), (11.20, 18.48), 0.4398, NOT_SIGNIFICANT),
        _ref("log_shift", "t3", (2.98, 9.85), (6.39, 7.87), 0.2020, NOT_SIGNIFICANT),
        _ref("linear2x", "t1", (0.19, 0.26), (0.01, 0.01), 0.9693, FUZZY),
        _ref("linear2x", "t2", (6.24, 11.08), (21.03, 14.31), 0.0091, PROPOSED),
        _ref("linear2x", "t3", (0.30, 0.58), (0.25, 0.65), None, NOT_SIGNIFICANT),
        _ref("square", "t1", (0.49, 0.55), (3.04, 1.72), 0.0005, PROPOSED),
        _ref("square", "t2", (8.46, 12.56), (15.02, 14.31), 0.1456, NOT_SIGNIFICANT),
        _ref("square", "t3", (3.61, 7.98), (4.41, 6.38), 0.4039, NOT_SIGNIFICANT),
        _ref("sqrt", "t1", (0.60, 1.15), (0.04, 0.13), 0.9188, FUZZY),
        _ref("sqrt", "t2", (2.91, 7.68), (18.99, 16.33), 0.0074, PROPOSED),
        _ref("sqrt", "t3", (2.70, 5.91), (3.74, 4.22), 0.3287, NOT_SIGNIFICANT),
        _ref("pow32", "t1", (0.37, 0.31), (1.68, 1.03), 0.0014, PROPOSED),
        _ref("pow32", "t2", (5.16, 10.52), (17.89, 14.92), 0.0212, PROPOSED),
        _ref("pow32", "t3", (2.15, 4.27), (2.66, 4.12), 0.4022, NOT_SIGNIFICANT),
        _ref("cubic_poly", "t1", (1.36, 2.84), (4.42, 2.72), 0.0122, PROPOSED),
        _ref("cubic_poly", "t2", (9.84, 12.57), (11.82, 12.95), 0.3656, NOT_SIGNIFICANT),
        _ref("cubic_poly", "t3", (5.13, 10.79), (6.31, 9.99), 0.4022, NOT_SIGNIFICANT),
        _ref("sqrt_shift_third", "t1", (1.63, 3.50), (0.06, 0.11), 0.9061, FUZZY),
        _ref("sqrt_shift_third", "t2", (4.27, 8.17), (18.20, 16.79), 0.0173, PROPOSED),
        _ref("sqrt_shift_third", "t3", (2.11, 5.15), (3.74, 4.61), 0.2332, NOT_SIGNIFICANT),
    )
)


def reference_row(name, scheme):
    """Return the published ReferenceRow for (`name`, `scheme`), or None."""
    return TABLE1_REFERENCE.get((name, parse_scheme(scheme)))


class EvaluationReport(Entity):
    """Errors of a trained model on a held-out test set, compared with the
    published fuzzy baseline where one exists.
    """
    function = fields.TextField("function")
    scheme = fields.ChoiceField("scheme", SCHEMES)
    n_test = fields.IntegerField("n_test")
    ann = fields.TypedField("ann", ErrorSummary)
    reference_fuzzy = fields.TypedField("reference_fuzzy", ErrorSummary)
    reference_proposed = fields.TypedField("reference_proposed", ErrorSummary)
    welch = fields.TypedField("welch", WelchResult)
    oracle_gap = fields.TypedField("oracle_gap", ErrorSummary)

    def __init__(self, function=None, scheme=None, n_test=None, ann=None):
        super(EvaluationReport, self).__init__()
        self.function = function
        self.scheme = scheme
        self.n_test = n_test
        self.ann = ann


def evaluate(name, model, scheme, stats=None, n_test=DEFAULT_N_TEST, seed=0,
             oracle=False):
    """Evaluate the learned opposites of `model` on fresh inputs.

    Test inputs are drawn uniformly from the model's box (the function's
    domain for an untrained model) with a seed derived from `seed`.

    Args:
        name: Function id the model was trained for.
        model: A trained RegressorModel.
        scheme: The scheme the model was trained under.
        stats: OutputStats defining the opposites; defaults to the output
            statistics stored with the model.
        n_test: Number of held-out inputs.
        seed: Master seed.
        oracle: Also report the input-space gap to the oracle's answers.

    Returns:
        An EvaluationReport.

    Raises:
        UsageError: If no output statistics are available or `n_test` < 2.
        UnsupportedFunctionError: If `oracle` is set for a function that is
            not strictly monotone 1-D.
    """
    scheme = parse_scheme(scheme)
    if oracle:
        _check_monotone(name)
    stats = stats or model.output_stats
    if stats is None:
        raise UsageError("Output statistics are required to evaluate opposites")
    if n_test < 2:
        raise UsageError("n_test must be >= 2, got %d" % n_test)

    box = model.box or benchfn.get_domain(name)
    xs = benchfn.sample(name, n_test, mode=benchfn.UNIFORM,
                        seed=derive_seed(seed, n_test), box=box).xs
    preds = regressor.predict_many(model, xs)
    errors = type2_errors(name, xs, preds, scheme, stats)

    report = EvaluationReport(name, scheme, n_test, summarize(errors))

    ref = reference_row(name, scheme)
    if ref is not None:
        report.reference_fuzzy = ref.fuzzy
        report.reference_proposed = ref.proposed
        with_spread = report.ann.std > 0 or ref.fuzzy.std > 0
        if with_spread:
            report.welch = welch_summary(report.ann.mean, report.ann.std, n_test,
                                         ref.fuzzy.mean, ref.fuzzy.std, n_test)

    if oracle:
        exact = as_matrix([oracle_type2(name, x, scheme, stats).opposite[0] for x in xs])
        report.oracle_gap = summarize(np.abs(preds - exact).reshape(-1))

    LOG.info("%s/%s: mean error %.3f%% over %d test points", name, scheme,
             report.ann.mean, n_test)
    return report


def table1(n_samples=1000, mode=benchfn.GRID, seed=0,
           hidden_units=regressor.DEFAULT_HIDDEN_UNITS, cfg=None,
           n_test=DEFAULT_N_TEST, functions=None, schemes=SCHEMES):
    """Learn and evaluate opposites for every (function, scheme) pair.

    Each function is sampled once; every scheme mines its own pairs from
    that sample and trains its own model. Without `cfg` the models train
    with L-BFGS-B seeded by `seed`.

    Returns:
        A list of EvaluationReports, functions outer and schemes inner.
    """
    cfg = cfg or regressor.TrainConfig(optimizer=regressor.LBFGS, seed=seed)
    reports = []
    for i, name in enumerate(functions or benchfn.MONOTONE_IDS):
        data = benchfn.sample(name, n_samples, mode=mode, seed=derive_seed(seed, i))
        for scheme in schemes:
            mined = mine(data, scheme)
            model, _ = regressor.fit(mined, hidden_units, cfg)
            reports.append(evaluate(name, model, scheme, mined.stats,
                                    n_test=n_test, seed=seed))
    return reports
