# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Exception hierarchy.

Every error raised on purpose by oblearn derives from
:class:`OppositionError`. Errors that signal a broken precondition also
derive from ``ValueError`` so callers that only know the builtin types keep
working.
"""


class OppositionError(Exception):
    """Base class for all oblearn errors."""
    pass


class UsageError(OppositionError, ValueError):
    """An operation was called with arguments that violate its
    preconditions (wrong arity, too few samples, zero epochs, ...).
    """
    pass


class UnknownFunctionError(UsageError):
    """A benchmark function id is not in the registry. The registered ids
    are available from the ``known`` attribute.
    """
    def __init__(self, name, known=()):
        super(UnknownFunctionError, self).__init__(
            "Unknown function '{0}'; expected one of: {1}".format(
                name, ", ".join(known)
            )
        )
        self.name = name
        self.known = tuple(known)


class InvalidSchemeError(UsageError):
    """An oppositeness scheme tag could not be resolved."""
    def __init__(self, scheme):
        super(InvalidSchemeError, self).__init__(
            "invalid opposition scheme: %s" % (scheme,)
        )
        self.scheme = scheme


class DomainError(UsageError):
    """A point lies outside the domain box of the function or dataset it
    was used with.
    """
    def __init__(self, point, box):
        super(DomainError, self).__init__(
            "Point {0} lies outside the domain [{1}, {2}]".format(
                list(point), list(box.lower), list(box.upper)
            )
        )
        self.point = tuple(point)
        self.box = box


class DegenerateRangeError(OppositionError, ArithmeticError):
    """The output range collapses to a single value (y_max == y_min), so a
    range-normalized quantity is undefined.
    """
    def __init__(self, value):
        super(DegenerateRangeError, self).__init__(
            "Output range is degenerate: y_min == y_max == %r" % (value,)
        )
        self.value = value


class UndefinedStatisticError(OppositionError, ArithmeticError):
    """A test statistic cannot be computed for the given samples."""
    pass


class UnsupportedFunctionError(OppositionError):
    """The requested operation needs a strictly monotone 1-D function."""
    def __init__(self, function, reason="not a strictly monotone 1-D function"):
        super(UnsupportedFunctionError, self).__init__(
            "Function '{0}' is unsupported here: {1}".format(function, reason)
        )
        self.function = function


class TrainingError(OppositionError):
    """Training diverged. The epoch and the offending loss value are
    available from the ``epoch`` and ``loss`` attributes.
    """
    def __init__(self, epoch, loss):
        super(TrainingError, self).__init__(
            "Training diverged at epoch {0}: loss is {1!r}".format(epoch, loss)
        )
        self.epoch = epoch
        self.loss = loss


class FormatError(OppositionError, ValueError):
    """An artifact (CSV or model file) is malformed. ``field`` names the
    offending field or column and ``line`` the 1-based line number when
    known.
    """
    def __init__(self, message, field=None, line=None):
        if line is not None:
            message = "line {0}: {1}".format(line, message)
        super(FormatError, self).__init__(message)
        self.field = field
        self.line = line


class UnknownVersionError(FormatError):
    """A parsed model file contains no version information."""
    pass


class UnsupportedVersionError(FormatError):
    """A parsed model file has a version this release cannot read."""
    def __init__(self, message, expected=None, found=None):
        super(UnsupportedVersionError, self).__init__(message, field="version")
        self.expected = expected
        self.found = found


class ShapeMismatchError(FormatError):
    """Stored arrays disagree with the shape metadata of a model file."""
    pass

