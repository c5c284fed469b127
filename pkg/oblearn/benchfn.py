# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Registry of the benchmark functions, their domains and known optima, and
the sampling of datasets from them.

Eight strictly monotone 1-D functions are used to measure how well type-II
opposites are learned; three 2-D global-optimization functions drive the
opposition-guided search experiment.

Function ids:

=================  ========================  =====================
id                 formula                   default domain
=================  ========================  =====================
cubic_shift        (2x + 8)^3                [0, 10]
log_shift          log(x + 3)                [0, 10]
linear2x           2x                        [0, 10]
square             x^2                       [0, 10]
sqrt               sqrt(x)                   [0, 10]
pow32              x^(3/2)                   [0, 10]
cubic_poly         x^3 + x^2 + 1             [0, 10]
sqrt_shift_third   sqrt(x + 1) / 3           [0, 10]
ackley             Ackley                    [-35, 35]^2
bulkin             Bulkin                    [-15, -5] x [-3, 3]
booth              Booth                     [-10, 10]^2
=================  ========================  =====================

Domains can be overridden process-wide with :func:`set_domain` or
temporarily with :func:`temp_domain`.
"""
import collections
import contextlib
import logging
import threading

import numpy as np
from ordered_set import OrderedSet

from .datautils import as_matrix, as_vector
from .exceptions import DomainError, UnknownFunctionError, UsageError

LOG = logging.getLogger(__name__)

GRID = "grid"
UNIFORM = "uniform"
SAMPLING_MODES = (GRID, UNIFORM)

_DomainBoxTuple = collections.namedtuple("DomainBox", "lower upper")


class DomainBox(_DomainBoxTuple):
    """An axis-aligned box of admissible inputs. ``lower`` and ``upper`` are
    tuples of floats of the same length (the arity).
    """
    def __new__(cls, lower, upper):
        lower = tuple(float(v) for v in as_vector(lower))
        upper = tuple(float(v) for v in as_vector(upper, dim=len(lower)))

        if not all(lo < hi for lo, hi in zip(lower, upper)):
            raise UsageError(
                "Domain bounds must satisfy lower < upper, got {0} and "
                "{1}".format(list(lower), list(upper))
            )
        return super(DomainBox, cls).__new__(cls, lower, upper)

    @classmethod
    def bounding(cls, points):
        """Return the smallest box containing `points`. A coordinate that
        never varies is widened by 0.5 on each side.
        """
        arr = as_matrix(points)
        lower = arr.min(axis=0)
        upper = arr.max(axis=0)
        flat = lower == upper
        lower = np.where(flat, lower - 0.5, lower)
        upper = np.where(flat, upper + 0.5, upper)
        return cls(lower, upper)

    @property
    def arity(self):
        return len(self.lower)

    @property
    def lower_array(self):
        return np.asarray(self.lower, dtype=np.float64)

    @property
    def upper_array(self):
        return np.asarray(self.upper, dtype=np.float64)

    @property
    def midpoint(self):
        return 0.5 * (self.lower_array + self.upper_array)

    def contains(self, x):
        """Return True if every component of `x` lies within the box."""
        vec = as_vector(x, dim=self.arity)
        return bool(np.all(vec >= self.lower_array) and
                    np.all(vec <= self.upper_array))

    def contains_all(self, xs):
        arr = as_matrix(xs, dim=self.arity)
        return bool(np.all(arr >= self.lower_array) and
                    np.all(arr <= self.upper_array))

    def check(self, x):
        """Return `x` as a vector, raising DomainError if it is outside."""
        vec = as_vector(x, dim=self.arity)
        if not self.contains(vec):
            raise DomainError(vec, self)
        return vec

    def clip(self, x):
        return np.clip(x, self.lower_array, self.upper_array)

    def to_dict(self):
        return {"lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["lower"], d["upper"])


class Dataset(object):
    """An ordered sample set of inputs and outputs of some function.

    Args:
        xs: An (n, arity) array of input vectors. A flat sequence is read as
            n one-dimensional inputs.
        ys: A length-n sequence of outputs, parallel to `xs`.
        box: The DomainBox the inputs were drawn from. Defaults to the
            bounding box of `xs`.

    Raises:
        UsageError: If fewer than two samples are given or `xs` and `ys`
            differ in length.
        DomainError: If an input lies outside `box`.
    """
    def __init__(self, xs, ys, box=None):
        xs = as_matrix(xs).copy()
        ys = np.array(ys, dtype=np.float64).reshape(-1)

        if xs.shape[0] != ys.shape[0]:
            raise UsageError(
                "xs and ys differ in length: {0} != {1}".format(
                    xs.shape[0], ys.shape[0]
                )
            )
        if ys.shape[0] < 2:
            raise UsageError("A dataset needs at least 2 samples, got %d" % ys.shape[0])

        if box is None:
            box = DomainBox.bounding(xs)
        elif box.arity != xs.shape[1]:
            raise UsageError(
                "Box arity {0} does not match input arity {1}".format(
                    box.arity, xs.shape[1]
                )
            )

        outside = np.any((xs < box.lower_array) | (xs > box.upper_array), axis=1)
        if np.any(outside):
            raise DomainError(xs[np.argmax(outside)], box)

        xs.flags.writeable = False
        ys.flags.writeable = False
        self.xs = xs
        self.ys = ys
        self.box = box

    def __len__(self):
        return self.ys.shape[0]

    @property
    def arity(self):
        return self.xs.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.box == other.box and
                np.array_equal(self.xs, other.xs) and
                np.array_equal(self.ys, other.ys))

    __hash__ = None

    def __repr__(self):
        return "Dataset(n=%d, arity=%d, box=%r)" % (len(self), self.arity, self.box)


class BenchmarkFunction(object):
    """A registered benchmark function.

    Attributes:
        name: The function id.
        formula: Human readable formula.
        arity: Number of input variables.
        box: The default DomainBox.
        minimizer: The registered global minimizer (2-D functions only).
        monotone: True if the function is strictly monotone on its default
            domain (the 1-D functions).
    """
    def __init__(self, name, formula, arity, func, lower, upper,
                 minimizer=None, monotone=False):
        self.name = name
        self.formula = formula
        self.arity = arity
        self.box = DomainBox(lower, upper)
        self.minimizer = tuple(minimizer) if minimizer is not None else None
        self.monotone = monotone
        self._func = func

    def eval_many(self, xs):
        """Evaluate on an (n, arity) array without domain checks."""
        arr = as_matrix(xs, dim=self.arity)
        return np.asarray(self._func(arr), dtype=np.float64)

    def __repr__(self):
        return "BenchmarkFunction(%s: %s)" % (self.name, self.formula)


def _ackley(xs):
    x1, x2 = xs[:, 0], xs[:, 1]
    radial = 20.0 * (1.0 - np.exp(-0.2 * np.sqrt(0.5 * (x1 ** 2 + x2 ** 2))))
    # e - exp(0.5 * (cos + cos)), written so it never drops below zero
    periodic = np.e * (1.0 - np.exp(0.5 * (np.cos(2 * np.pi * x1) +
                                           np.cos(2 * np.pi * x2)) - 1.0))
    return radial + periodic


def _bulkin(xs):
    x1, x2 = xs[:, 0], xs[:, 1]
    return 100.0 * np.sqrt(np.abs(x2 - 0.01 * x1 ** 2)) + 0.01 * np.abs(x1 + 10.0)


def _booth(xs):
    x1, x2 = xs[:, 0], xs[:, 1]
    return (x1 + 2 * x2 - 7) ** 2 + (2 * x1 + x2 - 5) ** 2


_REGISTRY = collections.OrderedDict()


def _register(fn):
    _REGISTRY[fn.name] = fn


for _fn in (
    BenchmarkFunction("cubic_shift", "(2x + 8)^3", 1,
                      lambda xs: (2 * xs[:, 0] + 8) ** 3, [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("log_shift", "log(x + 3)", 1,
                      lambda xs: np.log(xs[:, 0] + 3), [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("linear2x", "2x", 1,
                      lambda xs: 2 * xs[:, 0], [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("square", "x^2", 1,
                      lambda xs: xs[:, 0] ** 2, [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("sqrt", "sqrt(x)", 1,
                      lambda xs: np.sqrt(xs[:, 0]), [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("pow32", "x^(3/2)", 1,
                      lambda xs: np.power(xs[:, 0], 1.5), [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("cubic_poly", "x^3 + x^2 + 1", 1,
                      lambda xs: xs[:, 0] ** 3 + xs[:, 0] ** 2 + 1, [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("sqrt_shift_third", "sqrt(x + 1) / 3", 1,
                      lambda xs: np.sqrt(xs[:, 0] + 1) / 3, [0.0], [10.0],
                      monotone=True),
    BenchmarkFunction("ackley", "Ackley", 2, _ackley,
                      [-35.0, -35.0], [35.0, 35.0], minimizer=(0.0, 0.0)),
    BenchmarkFunction("bulkin", "Bulkin", 2, _bulkin,
                      [-15.0, -3.0], [-5.0, 3.0], minimizer=(-10.0, 1.0)),
    BenchmarkFunction("booth", "Booth", 2, _booth,
                      [-10.0, -10.0], [10.0, 10.0], minimizer=(1.0, 3.0)),
):
    _register(_fn)

#: All registered function ids, in registration order.
FUNCTION_IDS = OrderedSet(_REGISTRY)

#: The strictly monotone 1-D functions.
MONOTONE_IDS = OrderedSet(k for k, v in _REGISTRY.items() if v.monotone)

#: The 2-D global-optimization functions.
OPTIMIZATION_IDS = OrderedSet(k for k, v in _REGISTRY.items() if v.arity == 2)

# Process-wide domain overrides, keyed by function id
_domains = {}

# Synchronize access to _domains
_lock = threading.Lock()


def get(name):
    """Return the BenchmarkFunction registered under `name`.

    Raises:
        UnknownFunctionError: If `name` is not a registry id.
    """
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownFunctionError(name, FUNCTION_IDS) from None


def get_domain(name):
    """Return the effective DomainBox of `name` (override or default)."""
    fn = get(name)
    with _lock:
        return _domains.get(name, fn.box)


def set_domain(name, box):
    """Override the domain of `name` for the whole process.

    Args:
        name: A function id.
        box: A DomainBox, or a (lower, upper) pair.
    """
    fn = get(name)
    if not isinstance(box, DomainBox):
        box = DomainBox(*box)
    if box.arity != fn.arity:
        raise UsageError(
            "Domain arity {0} does not match {1} (arity {2})".format(
                box.arity, name, fn.arity
            )
        )
    with _lock:
        _domains[name] = box
    LOG.debug("Domain of %s set to %r", name, box)


def reset_domains():
    """Drop all domain overrides."""
    with _lock:
        _domains.clear()


@contextlib.contextmanager
def temp_domain(name, box):
    """Override the domain of `name` for the duration of a with-block."""
    with _lock:
        saved = _domains.get(name)
    try:
        set_domain(name, box)
        yield get_domain(name)
    finally:
        with _lock:
            if saved is None:
                _domains.pop(name, None)
            else:
                _domains[name] = saved


def evaluate(name, x):
    """Evaluate function `name` at the point `x`.

    Args:
        name: A function id.
        x: A real number (1-D functions) or a vector of matching arity.

    Returns:
        The exact function value as a float.

    Raises:
        UsageError: On an arity mismatch.
        DomainError: If `x` lies outside the function's domain.
    """
    fn = get(name)
    vec = get_domain(name).check(as_vector(x, dim=fn.arity))
    return float(fn.eval_many(vec.reshape(1, -1))[0])


def evaluate_many(name, xs, box=None):
    """Evaluate function `name` on every row of `xs`.

    Raises:
        DomainError: If any row lies outside `box` (the function's
            effective domain by default).
    """
    fn = get(name)
    box = box or get_domain(name)
    arr = as_matrix(xs, dim=fn.arity)
    outside = np.any((arr < box.lower_array) | (arr > box.upper_array), axis=1)
    if np.any(outside):
        raise DomainError(arr[np.argmax(outside)], box)
    return fn.eval_many(arr)


def minimizer(name):
    """Return the registered global minimizer of a 2-D function."""
    fn = get(name)
    if fn.minimizer is None:
        raise UsageError("Function '%s' has no registered minimizer" % name)
    return np.asarray(fn.minimizer, dtype=np.float64)


def grid_points(box, n):
    """Return an (n, arity) array of equispaced points covering `box`,
    endpoints included. For arity d, `n` must be a perfect d-th power; the
    points form an m x ... x m mesh in row-major order.
    """
    if n < 2:
        raise UsageError("Need at least 2 samples, got %d" % n)
    d = box.arity
    m = int(round(n ** (1.0 / d)))
    if m ** d != n or m < 2:
        raise UsageError(
            "Grid sampling of a {0}-D box needs n = m^{0} with m >= 2, got "
            "n = {1}".format(d, n)
        )
    axes = [np.linspace(lo, hi, m) for lo, hi in zip(box.lower, box.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.reshape(-1) for g in mesh], axis=1)


def sample(name, n, mode=GRID, seed=0, box=None):
    """Sample `n` input/output pairs of function `name`.

    Args:
        name: A function id.
        n: The number of samples (>= 2).
        mode: ``"grid"`` for equispaced points including both endpoints, or
            ``"uniform"`` for i.i.d. uniform draws from the box.
        seed: Seed of the generator used in uniform mode.
        box: Optional DomainBox overriding the function's domain.

    Returns:
        A Dataset; identical arguments produce identical datasets.
    """
    fn = get(name)
    if n < 2:
        raise UsageError("Need at least 2 samples, got %d" % n)
    box = box or get_domain(name)
    if box.arity != fn.arity:
        raise UsageError("Box arity does not match function %s" % name)

    if mode == GRID:
        xs = grid_points(box, n)
    elif mode == UNIFORM:
        rng = np.random.default_rng(seed)
        xs = rng.uniform(box.lower_array, box.upper_array, size=(n, fn.arity))
    else:
        raise UsageError(
            "Unknown sampling mode '{0}'; expected one of {1}".format(
                mode, ", ".join(SAMPLING_MODES)
            )
        )

    LOG.debug("Sampled %d points of %s (%s, seed=%s)", n, name, mode, seed)
    return Dataset(xs, fn.eval_many(xs), box)


def is_strictly_monotone(name, points=10000, box=None):
    """Check strict monotonicity of a 1-D function by comparing consecutive
    values on a `points`-point grid.
    """
    fn = get(name)
    if fn.arity != 1:
        return False
    ys = fn.eval_many(grid_points(box or get_domain(name), points))
    steps = np.diff(ys)
    return bool(np.all(steps > 0) or np.all(steps < 0))
