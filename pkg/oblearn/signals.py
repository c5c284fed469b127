# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Registration of signal receivers and emission of progress signals.

Long-running operations (training, optimizer runs) and rare events (the T1
fallback during mining) announce themselves through named signals so that
callers can observe them without the library knowing about any particular
front end. The CLI connects logging receivers; tests connect collectors.

Signals emitted by oblearn:

``EPOCH`` ("Regressor.epoch")
    ``(epoch, train_mse, val_mse)`` after every training epoch.
``STOPPED`` ("Regressor.stopped")
    ``(epoch, best_epoch)`` when early stopping ends training.
``FALLBACK`` ("Opposition.fallback")
    ``(index, scheme, value)`` when a T2/T3 target is replaced by T1.
``RUN_FINISHED`` ("Optimizer.run")
    ``(function, strategy, run_stats)`` after each optimizer run.

Receivers are held through weak references: a receiver that is garbage
collected is silently dropped.
"""
import collections
import logging
import threading
import weakref

EPOCH = "Regressor.epoch"
STOPPED = "Regressor.stopped"
FALLBACK = "Opposition.fallback"
RUN_FINISHED = "Optimizer.run"

# Module-level logger
LOG = logging.getLogger(__name__)

# Signal receiver references, keyed by signal name
_receivers = collections.defaultdict(list)

# Synchronize access to _receivers
_lock = threading.Lock()


def _is_bound_method(method):
    """Return ``True`` if `method` is a method bound to an instance or
    class.
    """
    return getattr(method, "__self__", None) is not None and \
        hasattr(method, "__func__")


def _make_id(receiver):
    """Identify a receiver so equivalent bound methods compare equal."""
    if _is_bound_method(receiver):
        return (id(receiver.__func__), id(receiver.__self__))
    return id(receiver)


def _purge():
    """Drop dead receiver references. The caller must hold ``_lock``."""
    for signal in list(_receivers):
        alive = [ref for ref in _receivers[signal] if ref() is not None]
        _receivers[signal] = alive


def _live_receivers(signal):
    with _lock:
        _purge()
        receivers = [ref() for ref in _receivers.get(signal, ())]
    return [r for r in receivers if r is not None]


def connect(signal, receiver):
    """Register `receiver` to be called whenever `signal` is emitted.

    Args:
        signal: A signal name (see the module constants).
        receiver: A function, callable object or bound method.

    Raises:
        TypeError: If `receiver` is not callable.
    """
    if not callable(receiver):
        raise TypeError(
            "Signal receivers must be functions, callable objects, or "
            "static/class/bound methods."
        )

    ref = weakref.WeakMethod if _is_bound_method(receiver) else weakref.ref

    with _lock:
        _purge()
        _receivers[signal].append(ref(receiver))


def disconnect(signal, receiver):
    """Disconnect `receiver` from `signal`.

    Returns:
        True if the receiver was connected and has been removed, False
        otherwise.
    """
    key = _make_id(receiver)

    with _lock:
        _purge()
        refs = _receivers.get(signal, [])

        for idx, ref in enumerate(refs):
            connected = ref()
            if connected is not None and _make_id(connected) == key:
                del refs[idx]
                return True

    return False


def receiver(signal):
    """Function decorator which connects the wrapped function to `signal`.

    Warning:
        This will not work with unbound instance methods.
    """
    def decorator(func):
        connect(signal, func)
        return func
    return decorator


def emit(signal, *args, **kwargs):
    """Call every live receiver of `signal` with the given arguments.

    A receiver that raises is logged and skipped.
    """
    if signal not in _receivers:
        return

    for func in _live_receivers(signal):
        try:
            func(*args, **kwargs)
        except Exception:
            LOG.exception("Receiver %r for signal '%s' failed", func, signal)
