# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Type-I opposites, the output-space oppositeness schemes and opposition
mining.

A type-I opposite reflects an input inside its box. A type-II opposite is
an input whose *output* is the opposite of the current output; with only a
finite sample of the function available, :func:`mine` pairs every sample
with the sample whose output is closest to the opposite output (a
quasi-opposite).

Oppositeness schemes, for an output value ``v`` and output statistics
``(y_min, y_max, y_mean)``:

``T1``  ``y_max + y_min - v``
``T2``  ``(v + (y_min + y_max) / 2) mod y_max`` (floored modulo)
``T3``  ``2 * y_mean - v``

Whenever a T2 or T3 value leaves ``[y_min, y_max]`` (or y_max <= 0 makes the
T2 modulus meaningless) the T1 value is used instead.
"""
import collections
import logging

import numpy as np

from . import signals
from .benchfn import Dataset, DomainBox
from .datautils import as_matrix
from .exceptions import InvalidSchemeError, UsageError

LOG = logging.getLogger(__name__)

T1 = "t1"
T2 = "t2"
T3 = "t3"
SCHEMES = (T1, T2, T3)

# Rows are scanned in blocks of this many targets in nearest searches.
_NEAREST_BLOCK = 256


def parse_scheme(value):
    """Return the canonical scheme tag for `value`.

    Accepts ``"t1"``/``"T1"`` style tags and the 0/1/2 scheme indices.

    Raises:
        InvalidSchemeError: If `value` names no scheme.
    """
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        if 0 <= value < len(SCHEMES):
            return SCHEMES[value]
        raise InvalidSchemeError(value)

    tag = str(value).strip().lower()
    if tag in SCHEMES:
        return tag
    raise InvalidSchemeError(value)


_OutputStatsTuple = collections.namedtuple("OutputStats", "y_min y_max y_mean")


class OutputStats(_OutputStatsTuple):
    """Minimum, maximum and mean of a sample of outputs."""
    def __new__(cls, y_min, y_max, y_mean):
        y_min, y_max, y_mean = float(y_min), float(y_max), float(y_mean)
        if not (y_min <= y_mean <= y_max):
            raise UsageError(
                "Output statistics must satisfy y_min <= y_mean <= y_max, got "
                "({0}, {1}, {2})".format(y_min, y_max, y_mean)
            )
        return super(OutputStats, cls).__new__(cls, y_min, y_max, y_mean)

    @property
    def span(self):
        return self.y_max - self.y_min

    def to_dict(self):
        return {"y_min": self.y_min, "y_max": self.y_max, "y_mean": self.y_mean}

    @classmethod
    def from_dict(cls, d):
        return cls(d["y_min"], d["y_max"], d["y_mean"])


def output_stats(data):
    """Compute the OutputStats of a Dataset (or of a sequence of outputs).

    Raises:
        UsageError: If there are no outputs.
    """
    ys = data.ys if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)
    ys = ys.reshape(-1)
    if ys.shape[0] == 0:
        raise UsageError("Cannot compute output statistics of empty data")

    y_min = float(ys.min())
    y_max = float(ys.max())
    # Summation rounding can push the mean of near-constant data just
    # outside [y_min, y_max].
    y_mean = min(max(float(ys.mean()), y_min), y_max)
    return OutputStats(y_min, y_max, y_mean)


def opposite_values(values, stats, scheme):
    """Vectorized :func:`opposite_value`.

    Args:
        values: Output values inside ``[stats.y_min, stats.y_max]``.
        stats: An OutputStats.
        scheme: A scheme tag (see :func:`parse_scheme`).

    Returns:
        A tuple ``(opposites, fallback)`` of float and boolean arrays;
        ``fallback[i]`` is True where the T1 value replaced the scheme's.
    """
    scheme = parse_scheme(scheme)
    v = np.asarray(values, dtype=np.float64)
    reflected = stats.y_max + stats.y_min - v

    if scheme == T1:
        result = reflected
        fallback = np.zeros(v.shape, dtype=bool)
    else:
        if scheme == T2:
            if stats.y_max > 0:
                raw = np.mod(v + 0.5 * (stats.y_min + stats.y_max), stats.y_max)
            else:
                raw = np.full(v.shape, np.nan)
        else:
            raw = 2.0 * stats.y_mean - v

        fallback = ~((raw >= stats.y_min) & (raw <= stats.y_max))
        result = np.where(fallback, reflected, raw)

    # T1 can round one ulp past the range ends.
    return np.clip(result, stats.y_min, stats.y_max), fallback


def opposite_value(v, stats, scheme):
    """Return the opposite of the output value `v` under `scheme`.

    Args:
        v: An output value with ``stats.y_min <= v <= stats.y_max``.
        stats: The OutputStats of the data `v` comes from.
        scheme: ``"t1"``, ``"t2"`` or ``"t3"``.

    Returns:
        The opposite value; always inside ``[stats.y_min, stats.y_max]``.
    """
    result, _ = opposite_values(np.array([v], dtype=np.float64), stats, scheme)
    return float(result[0])


def type1_opposite_input(x, box):
    """Reflect the input `x` inside `box`: ``lower + upper - x``.

    Raises:
        DomainError: If `x` lies outside `box`.
    """
    vec = box.check(x)
    return box.clip(box.lower_array + box.upper_array - vec)


def nearest_indices(ys, targets):
    """Return, for every target, the index of the closest element of `ys`.

    Ties are broken by the smallest index.
    """
    ys = np.asarray(ys, dtype=np.float64).reshape(-1)
    if ys.shape[0] == 0:
        raise UsageError("Cannot search an empty sequence")
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)

    found = np.empty(targets.shape[0], dtype=np.intp)
    for start in range(0, targets.shape[0], _NEAREST_BLOCK):
        block = targets[start:start + _NEAREST_BLOCK]
        distance = np.abs(ys[np.newaxis, :] - block[:, np.newaxis])
        # argmin returns the first occurrence of the minimum
        found[start:start + _NEAREST_BLOCK] = np.argmin(distance, axis=1)
    return found


def nearest_index(ys, target):
    """Return ``argmin_i |ys[i] - target|``, ties broken by smallest index.

    Raises:
        UsageError: If `ys` is empty.
    """
    return int(nearest_indices(ys, [target])[0])


class MinedSet(object):
    """Quasi-opposite pairs mined from a Dataset.

    Attributes:
        inputs: (n, arity) array of inputs, in dataset order.
        opposites: (n, arity) array; ``opposites[i]`` is the dataset input
            whose output is closest to ``targets[i]``.
        ys: The dataset outputs of ``inputs``.
        targets: The opposite output values the search aimed for.
        achieved: The outputs of ``opposites``.
        fallback: True where the T1 fallback produced the target.
        scheme: The scheme tag.
        stats: The OutputStats used.
        box: The DomainBox of the mined data.
    """
    def __init__(self, inputs, opposites, ys, targets, achieved, scheme,
                 stats, fallback=None, box=None):
        self.inputs = as_matrix(inputs).copy()
        self.opposites = as_matrix(opposites, dim=self.inputs.shape[1]).copy()
        self.ys = np.array(ys, dtype=np.float64).reshape(-1)
        self.targets = np.array(targets, dtype=np.float64).reshape(-1)
        self.achieved = np.array(achieved, dtype=np.float64).reshape(-1)

        n = self.inputs.shape[0]
        if n == 0:
            raise UsageError("A mined set needs at least one pair")
        if fallback is None:
            fallback = np.zeros(n, dtype=bool)
        self.fallback = np.array(fallback, dtype=bool).reshape(-1)

        lengths = {self.opposites.shape[0], self.ys.shape[0],
                   self.targets.shape[0], self.achieved.shape[0],
                   self.fallback.shape[0]}
        if lengths != {n}:
            raise UsageError("Mined set columns differ in length")

        self.scheme = parse_scheme(scheme)
        self.stats = stats
        if box is None:
            box = DomainBox.bounding(np.vstack([self.inputs, self.opposites]))
        self.box = box

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def arity(self):
        return self.inputs.shape[1]

    def mean_mismatch(self):
        """Mean |achieved - target| over all pairs."""
        return float(np.mean(np.abs(self.achieved - self.targets)))

    def __eq__(self, other):
        if not isinstance(other, MinedSet):
            return NotImplemented
        return (self.scheme == other.scheme and self.stats == other.stats and
                self.box == other.box and
                all(np.array_equal(getattr(self, a), getattr(other, a))
                    for a in ("inputs", "opposites", "ys", "targets",
                              "achieved", "fallback")))

    __hash__ = None


def mine(data, scheme):
    """Mine quasi type-II opposites from `data`.

    For every sample, the opposite of its output is computed under `scheme`
    and the sample whose output is closest to it becomes its opposite.
    Only inputs that occur in `data` are ever selected.

    Args:
        data: A Dataset.
        scheme: A scheme tag.

    Returns:
        A MinedSet in the same order as ``data.xs``.
    """
    scheme = parse_scheme(scheme)
    stats = output_stats(data)
    targets, fallback = opposite_values(data.ys, stats, scheme)
    idx = nearest_indices(data.ys, targets)

    if np.any(fallback):
        LOG.info("Scheme %s fell back to T1 for %d of %d samples",
                 scheme, int(fallback.sum()), len(data))
        for i in np.flatnonzero(fallback):
            signals.emit(signals.FALLBACK, int(i), scheme, float(targets[i]))

    return MinedSet(
        inputs=data.xs,
        opposites=data.xs[idx],
        ys=data.ys,
        targets=targets,
        achieved=data.ys[idx],
        scheme=scheme,
        stats=stats,
        fallback=fallback,
        box=data.box,
    )
