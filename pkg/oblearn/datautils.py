# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Common routines for working with Python objects, vectors and seeds.
"""
import numpy as np

from .exceptions import UsageError


def is_sequence(value):
    """Determine if a value is a sequence type.

    Returns:
      ``True`` if `value` is a sequence type (e.g., ``list``, ``tuple`` or
      a numpy array). String types will return ``False``.
    """
    return (hasattr(value, "__iter__") and not
            isinstance(value, (str, bytes)))


def as_vector(value, dim=None):
    """Return `value` as a 1-D float64 array.

    Scalars become length-1 vectors so 1-D functions can be called with
    either ``5`` or ``(5,)``.

    Args:
        value: A real number or a sequence of real numbers.
        dim: If given, the required length of the vector.

    Raises:
        UsageError: If `value` is not one-dimensional or its length is not
            `dim`.
    """
    vec = np.atleast_1d(np.asarray(value, dtype=np.float64))
    if vec.ndim != 1:
        raise UsageError("Expected a vector, got shape %s" % (vec.shape,))
    if dim is not None and vec.shape[0] != dim:
        raise UsageError(
            "Arity mismatch: expected {0} components, got {1}".format(
                dim, vec.shape[0]
            )
        )
    return vec


def as_matrix(values, dim=None):
    """Return `values` as an (n, dim) float64 array. A flat sequence is
    read as n one-dimensional points.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise UsageError("Expected a matrix of points, got shape %s" % (arr.shape,))
    if dim is not None and arr.shape[1] != dim:
        raise UsageError(
            "Arity mismatch: expected {0} columns, got {1}".format(
                dim, arr.shape[1]
            )
        )
    return arr


def derive_seed(master, *keys):
    """Derive a child seed from a master seed and a path of integer keys.

    The same (master, keys) always produces the same child, and distinct
    key paths produce independent streams.

    Args:
        master: The master seed (non-negative integer).
        *keys: Non-negative integers identifying the child stream.

    Returns:
        A 32-bit unsigned integer seed.
    """
    entropy = [int(master)] + [int(k) for k in keys]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def format_decimal(value):
    """Format a float in positional decimal notation using the shortest
    digit string that reads back to exactly the same float.
    """
    return np.format_float_positional(float(value), unique=True, trim="-")
