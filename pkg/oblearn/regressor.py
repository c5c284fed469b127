# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
A small feedforward network that learns the map from an input to its
type-II opposite from a :class:`~oblearn.opposition.MinedSet`.

The network has one tanh hidden layer and an identity output layer and is
written directly against numpy: forward pass, backpropagation, plain
gradient descent and Adam updates, and a finite-difference gradient check.
The ``lbfgs`` optimizer hands the same loss and gradients to scipy's
L-BFGS-B instead.

Inputs and targets are min-max normalized to [0, 1] with parameters fitted
on the training split; predictions are mapped back and clamped into the
box of the training inputs.
"""
import collections
import itertools
import json
import logging

import numpy as np
import scipy.optimize

from . import fields, signals
from .benchfn import DomainBox
from .datautils import as_matrix, as_vector
from .entities import Entity
from .exceptions import FormatError, ShapeMismatchError, TrainingError, UsageError
from .opposition import OutputStats
from .parser import MODEL_FORMAT_VERSION, ModelParser

LOG = logging.getLogger(__name__)

DEFAULT_HIDDEN_UNITS = 16
DEFAULT_EPOCHS = 2000
DEFAULT_LEARNING_RATE = 0.01
DEFAULT_VALIDATION_FRACTION = 0.2
DEFAULT_PATIENCE = 200

GD = "gd"
ADAM = "adam"
LBFGS = "lbfgs"
OPTIMIZERS = (GD, ADAM, LBFGS)

TANH = "tanh"
IDENTITY = "identity"

_ADAM_BETA1 = 0.9
_ADAM_BETA2 = 0.999
_ADAM_EPSILON = 1e-8

FD_STEP = 1e-6


def _at_least(minimum, what):
    def hook(instance, value):
        if value is not None and value < minimum:
            raise UsageError("%s must be >= %s, got %r" % (what, minimum, value))
    return hook


def _check_learning_rate(instance, value):
    if value is not None and not value > 0:
        raise UsageError("learning_rate must be > 0, got %r" % (value,))


def _check_validation_fraction(instance, value):
    if value is not None and not 0 < value <= 0.5:
        raise UsageError("validation_fraction must be in (0, 0.5], got %r" % (value,))


class Architecture(Entity):
    """Layer sizes of the network. The hidden activation is always tanh and
    the output activation is always the identity.
    """
    input_dim = fields.IntegerField("input_dim", preset_hook=_at_least(1, "input_dim"))
    hidden_units = fields.IntegerField("hidden_units", preset_hook=_at_least(1, "hidden_units"))
    output_dim = fields.IntegerField("output_dim", preset_hook=_at_least(1, "output_dim"))
    hidden_activation = fields.ChoiceField("hidden_activation", (TANH,))
    output_activation = fields.ChoiceField("output_activation", (IDENTITY,))

    def __init__(self, input_dim=1, hidden_units=DEFAULT_HIDDEN_UNITS, output_dim=None):
        super(Architecture, self).__init__()
        self.input_dim = input_dim
        self.hidden_units = hidden_units
        self.output_dim = input_dim if output_dim is None else output_dim
        self.hidden_activation = TANH
        self.output_activation = IDENTITY

    @property
    def layer_sizes(self):
        return (self.input_dim, self.hidden_units, self.output_dim)


class TrainConfig(Entity):
    """Training hyperparameters.

    ``batch`` 0 means full-batch updates; a positive value is the mini-batch
    size. Training stops early after ``patience`` epochs without a new best
    validation loss.

    With ``lbfgs`` an epoch is one L-BFGS-B iteration over the full
    training split; ``learning_rate`` and ``batch`` are not used.
    """
    epochs = fields.IntegerField("epochs", preset_hook=_at_least(1, "epochs"))
    learning_rate = fields.FloatField("learning_rate", preset_hook=_check_learning_rate)
    batch = fields.IntegerField("batch", preset_hook=_at_least(0, "batch"))
    validation_fraction = fields.FloatField(
        "validation_fraction", preset_hook=_check_validation_fraction
    )
    patience = fields.IntegerField("patience", preset_hook=_at_least(1, "patience"))
    optimizer = fields.ChoiceField("optimizer", OPTIMIZERS)
    seed = fields.IntegerField("seed")

    def __init__(self, epochs=DEFAULT_EPOCHS, learning_rate=DEFAULT_LEARNING_RATE,
                 batch=0, validation_fraction=DEFAULT_VALIDATION_FRACTION,
                 patience=DEFAULT_PATIENCE, optimizer=GD, seed=0):
        super(TrainConfig, self).__init__()
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.batch = batch
        self.validation_fraction = validation_fraction
        self.patience = patience
        self.optimizer = optimizer
        self.seed = seed


_NormalizerTuple = collections.namedtuple("Normalizer", "lo hi")


class Normalizer(_NormalizerTuple):
    """Per-dimension affine map of [lo, hi] onto [0, 1]."""
    def __new__(cls, lo, hi):
        lo = as_vector(lo).copy()
        hi = as_vector(hi, dim=lo.shape[0]).copy()
        if not np.all(hi > lo):
            raise UsageError("Normalization bounds must satisfy max > min")
        return super(Normalizer, cls).__new__(cls, lo, hi)

    @classmethod
    def identity(cls, dim):
        return cls(np.zeros(dim), np.ones(dim))

    @classmethod
    def fit(cls, values):
        """Fit to the columns of `values`. A constant column gets span 1."""
        arr = as_matrix(values)
        lo = arr.min(axis=0)
        hi = arr.max(axis=0)
        hi = np.where(hi > lo, hi, lo + 1.0)
        return cls(lo, hi)

    def normalize(self, values):
        return (values - self.lo) / (self.hi - self.lo)

    def denormalize(self, values):
        return self.lo + values * (self.hi - self.lo)

    def __eq__(self, other):
        return (isinstance(other, Normalizer) and
                np.array_equal(self.lo, other.lo) and
                np.array_equal(self.hi, other.hi))

    __hash__ = None

    def to_dict(self):
        return {"min": self.lo.tolist(), "max": self.hi.tolist()}


class RegressorModel(object):
    """Network weights plus the normalization that frames them.

    Attributes:
        arch: The Architecture.
        weights: List of ``(W, b)`` pairs, one per layer; ``W`` has shape
            (fan_in, fan_out).
        norm_in: Normalizer of the inputs.
        norm_out: Normalizer of the outputs.
        seed: The initialization seed.
        box: DomainBox predictions are clamped into (None before training).
        output_stats: OutputStats of the data the model was trained on, if
            known.
    """
    def __init__(self, arch, weights, norm_in, norm_out, seed, box=None,
                 output_stats=None):
        sizes = arch.layer_sizes
        if len(weights) != len(sizes) - 1:
            raise ShapeMismatchError(
                "Expected %d layers, got %d" % (len(sizes) - 1, len(weights)),
                field="weights",
            )
        for k, (w, b) in enumerate(weights):
            if w.shape != (sizes[k], sizes[k + 1]) or b.shape != (sizes[k + 1],):
                raise ShapeMismatchError(
                    "Layer {0} has shapes {1}/{2}, expected {3}/{4}".format(
                        k, w.shape, b.shape, (sizes[k], sizes[k + 1]), (sizes[k + 1],)
                    ),
                    field="weights",
                )
        if norm_in.lo.shape[0] != arch.input_dim or norm_out.lo.shape[0] != arch.output_dim:
            raise ShapeMismatchError("Normalization does not match architecture",
                                     field="norm_in")

        self.arch = arch
        self.weights = [(np.array(w, dtype=np.float64), np.array(b, dtype=np.float64))
                        for w, b in weights]
        self.norm_in = norm_in
        self.norm_out = norm_out
        self.seed = int(seed)
        self.box = box
        self.output_stats = output_stats

    def copy_params(self):
        return [[w.copy(), b.copy()] for w, b in self.weights]

    def replace(self, weights=None, norm_in=None, norm_out=None, box=None,
                output_stats=None):
        """Return a new model sharing nothing mutable with this one."""
        return RegressorModel(
            self.arch,
            weights if weights is not None else self.copy_params(),
            norm_in if norm_in is not None else self.norm_in,
            norm_out if norm_out is not None else self.norm_out,
            self.seed,
            box=box if box is not None else self.box,
            output_stats=output_stats if output_stats is not None else self.output_stats,
        )

    def to_dict(self):
        doc = {
            "version": MODEL_FORMAT_VERSION,
            "arch": self.arch.to_dict(),
            "norm_in": self.norm_in.to_dict(),
            "norm_out": self.norm_out.to_dict(),
            "weights": [
                {"shape": list(w.shape), "w": w.reshape(-1).tolist(), "b": b.tolist()}
                for w, b in self.weights
            ],
            "seed": self.seed,
        }
        if self.box is not None:
            doc["box"] = self.box.to_dict()
        if self.output_stats is not None:
            doc["output_stats"] = self.output_stats.to_dict()
        return doc

    @classmethod
    def from_dict(cls, doc):
        """Build a model from a model document (see :func:`save`).

        Raises:
            FormatError: Naming the first missing or malformed field.
            ShapeMismatchError: If stored arrays disagree with their shape
                metadata or with the architecture.
        """
        for key in ("arch", "norm_in", "norm_out", "weights", "seed"):
            if key not in doc:
                raise FormatError("missing field '%s'" % key, field=key)

        try:
            arch = Architecture.from_dict(doc["arch"])
        except (TypeError, ValueError) as ex:
            raise FormatError("bad architecture: %s" % ex, field="arch") from ex

        def normalizer(key):
            try:
                return Normalizer(doc[key]["min"], doc[key]["max"])
            except (KeyError, TypeError, ValueError) as ex:
                raise FormatError("bad normalization: %s" % ex, field=key) from ex

        weights = []
        for k, layer in enumerate(doc["weights"]):
            try:
                shape = tuple(int(s) for s in layer["shape"])
                flat = np.asarray(layer["w"], dtype=np.float64)
                bias = np.asarray(layer["b"], dtype=np.float64)
            except (KeyError, TypeError, ValueError) as ex:
                raise FormatError("bad layer %d: %s" % (k, ex), field="weights") from ex
            if len(shape) != 2 or flat.ndim != 1 or flat.shape[0] != shape[0] * shape[1]:
                raise ShapeMismatchError(
                    "layer %d holds %d weights but declares shape %s"
                    % (k, flat.size, list(shape)),
                    field="weights",
                )
            weights.append((flat.reshape(shape), bias))

        box = None
        if "box" in doc:
            try:
                box = DomainBox.from_dict(doc["box"])
            except (KeyError, TypeError, ValueError) as ex:
                raise FormatError("bad box: %s" % ex, field="box") from ex

        stats = None
        if "output_stats" in doc:
            try:
                stats = OutputStats.from_dict(doc["output_stats"])
            except (KeyError, TypeError, ValueError) as ex:
                raise FormatError("bad output_stats: %s" % ex, field="output_stats") from ex

        try:
            seed = int(doc["seed"])
        except (TypeError, ValueError) as ex:
            raise FormatError("bad seed: %s" % ex, field="seed") from ex

        return cls(arch, weights, normalizer("norm_in"), normalizer("norm_out"),
                   seed, box=box, output_stats=stats)


class LossHistory(object):
    """Per-epoch training and validation MSE, in normalized units."""

    def __init__(self):
        self.epochs = []
        self.train_mse = []
        self.val_mse = []
        self.best_epoch = None

    def append(self, epoch, train_mse, val_mse):
        self.epochs.append(epoch)
        self.train_mse.append(train_mse)
        self.val_mse.append(val_mse)

    def best_so_far(self):
        """Running minimum of the validation curve."""
        return np.minimum.accumulate(np.asarray(self.val_mse, dtype=np.float64))

    @property
    def best_val_mse(self):
        return min(self.val_mse) if self.val_mse else None

    def __len__(self):
        return len(self.epochs)

    def rows(self):
        return zip(self.epochs, self.train_mse, self.val_mse)


def init(arch, seed):
    """Create an untrained model.

    Weights are drawn uniformly from ``[-sqrt(6 / (fan_in + fan_out)),
    +sqrt(6 / (fan_in + fan_out))]``, biases are zero, normalization is the
    identity.
    """
    if arch.hidden_units is None or arch.hidden_units < 1:
        raise UsageError("hidden_units must be >= 1")

    rng = np.random.default_rng(seed)
    sizes = arch.layer_sizes
    weights = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append((rng.uniform(-limit, limit, size=(fan_in, fan_out)),
                        np.zeros(fan_out)))

    return RegressorModel(arch, weights, Normalizer.identity(arch.input_dim),
                          Normalizer.identity(arch.output_dim), seed)


def _forward(params, X):
    """Return the list of layer activations (input first) and the output."""
    activations = [X]
    a = X
    last = len(params) - 1
    for k, (w, b) in enumerate(params):
        z = a @ w + b
        a = z if k == last else np.tanh(z)
        activations.append(a)
    return activations, a


def _loss(params, X, T):
    """Half the mean over samples of the squared residual norm."""
    _, out = _forward(params, X)
    r = out - T
    return 0.5 * np.mean(np.sum(r * r, axis=1))


def _gradients(params, X, T):
    """Backpropagate :func:`_loss`. Returns (grads, residuals)."""
    activations, out = _forward(params, X)
    n = X.shape[0]
    delta = out - T
    residual = delta
    grads = [None] * len(params)

    for k in range(len(params) - 1, -1, -1):
        w, _ = params[k]
        a_prev = activations[k]
        grads[k] = [a_prev.T @ delta / n, delta.sum(axis=0) / n]
        if k > 0:
            delta = (delta @ w.T) * (1.0 - a_prev * a_prev)

    return grads, residual


def _mse(params, X, T):
    _, out = _forward(params, X)
    return float(np.mean((out - T) ** 2))


def _split(n, fraction, rng):
    """Return sorted (train, validation) index arrays."""
    if n < 2:
        idx = np.arange(n)
        return idx, idx
    n_val = int(round(fraction * n))
    n_val = min(max(n_val, 1), n - 1)
    perm = rng.permutation(n)
    return np.sort(perm[n_val:]), np.sort(perm[:n_val])


def _check_arity(model, arity):
    if model.arch.input_dim != arity or model.arch.output_dim != arity:
        raise UsageError(
            "Model arity {0}->{1} does not match data arity {2}".format(
                model.arch.input_dim, model.arch.output_dim, arity
            )
        )


class _StopTraining(Exception):
    pass


class _Checkpoint(object):
    """Per-epoch bookkeeping: the loss history, the best weights seen on the
    validation split and the early-stopping counter.
    """
    def __init__(self, params, patience):
        self.patience = patience
        self.history = LossHistory()
        self.best_val = np.inf
        self.best_params = [[p.copy() for p in layer] for layer in params]
        self.since_best = 0

    def record(self, epoch, params, train_mse, val_mse):
        """Record an epoch. Returns True when training should stop.

        Raises:
            TrainingError: If either loss is not finite.
        """
        if not (np.isfinite(train_mse) and np.isfinite(val_mse)):
            raise TrainingError(epoch, val_mse if np.isfinite(train_mse) else train_mse)

        self.history.append(epoch, train_mse, val_mse)
        signals.emit(signals.EPOCH, epoch, train_mse, val_mse)

        if val_mse < self.best_val:
            self.best_val = val_mse
            self.best_params = [[p.copy() for p in layer] for layer in params]
            self.history.best_epoch = epoch
            self.since_best = 0
            return False

        self.since_best += 1
        if self.since_best < self.patience:
            return False
        LOG.debug("Early stop at epoch %d (best epoch %d)", epoch, self.history.best_epoch)
        signals.emit(signals.STOPPED, epoch, self.history.best_epoch)
        return True


def _descend(params, train_split, val_split, cfg, rng, checkpoint):
    """Gradient descent or Adam updates of `params`, in place."""
    X_train, T_train = train_split
    X_val, T_val = val_split
    first = [[np.zeros_like(p) for p in layer] for layer in params]
    second = [[np.zeros_like(p) for p in layer] for layer in params]
    step = 0
    n_train = X_train.shape[0]
    batch = cfg.batch if cfg.batch and cfg.batch < n_train else n_train

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n_train) if batch < n_train else np.arange(n_train)
        sq_sum = 0.0

        for start in range(0, n_train, batch):
            rows = order[start:start + batch]
            grads, residual = _gradients(params, X_train[rows], T_train[rows])
            sq_sum += float(np.sum(residual * residual))
            step += 1

            for k, layer in enumerate(params):
                for j in range(2):
                    g = grads[k][j]
                    if cfg.optimizer == ADAM:
                        m = _ADAM_BETA1 * first[k][j] + (1 - _ADAM_BETA1) * g
                        v = _ADAM_BETA2 * second[k][j] + (1 - _ADAM_BETA2) * g * g
                        first[k][j], second[k][j] = m, v
                        m_hat = m / (1 - _ADAM_BETA1 ** step)
                        v_hat = v / (1 - _ADAM_BETA2 ** step)
                        g = m_hat / (np.sqrt(v_hat) + _ADAM_EPSILON)
                    layer[j] = layer[j] - cfg.learning_rate * g

        train_mse = sq_sum / T_train.size
        if checkpoint.record(epoch, params, train_mse, _mse(params, X_val, T_val)):
            return


def _flatten(params):
    return np.concatenate([p.reshape(-1) for layer in params for p in layer])


def _unflatten(theta, template):
    params = []
    start = 0
    for layer in template:
        pair = []
        for p in layer:
            pair.append(np.array(theta[start:start + p.size]).reshape(p.shape))
            start += p.size
        params.append(pair)
    return params


def _minimize_lbfgs(params, train_split, val_split, cfg, checkpoint):
    """Full-batch L-BFGS-B on the training loss; at most ``cfg.epochs``
    iterations.
    """
    X_train, T_train = train_split
    X_val, T_val = val_split
    epochs = itertools.count(1)

    def objective(theta):
        grads, residual = _gradients(_unflatten(theta, params), X_train, T_train)
        loss = 0.5 * np.mean(np.sum(residual * residual, axis=1))
        return float(loss), _flatten(grads)

    def callback(theta):
        current = _unflatten(theta, params)
        val_mse = _mse(current, X_val, T_val)
        if checkpoint.record(next(epochs), current, _mse(current, X_train, T_train),
                             val_mse):
            raise _StopTraining()

    try:
        scipy.optimize.minimize(
            objective, _flatten(params), jac=True, method="L-BFGS-B",
            callback=callback,
            options={"maxiter": cfg.epochs, "ftol": 0.0, "gtol": 0.0},
        )
    except _StopTraining:
        pass

    if not checkpoint.history:
        # Converged before completing an iteration.
        checkpoint.record(1, params, _mse(params, X_train, T_train),
                          _mse(params, X_val, T_val))


def train(model, data, cfg=None):
    """Train `model` on the pairs of a MinedSet.

    Minimizes the squared error between predicted and mined opposites in
    normalized space. Normalization is fitted on the training split only;
    the weights with the lowest validation MSE are returned.

    Args:
        model: A RegressorModel whose arity matches `data`.
        data: A MinedSet.
        cfg: A TrainConfig (defaults apply when omitted).

    Returns:
        A tuple ``(trained_model, history)``. `model` is left unchanged.

    Raises:
        UsageError: On empty data or an arity mismatch.
        TrainingError: If the loss becomes non-finite.
    """
    cfg = cfg or TrainConfig()
    if cfg.epochs is None or cfg.epochs < 1:
        raise UsageError("epochs must be >= 1")
    if len(data) == 0:
        raise UsageError("Cannot train on an empty mined set")
    _check_arity(model, data.arity)

    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = _split(len(data), cfg.validation_fraction, rng)

    norm_in = Normalizer.fit(data.inputs[train_idx])
    norm_out = Normalizer.fit(data.opposites[train_idx])
    X = norm_in.normalize(data.inputs)
    T = norm_out.normalize(data.opposites)
    X_train, T_train = X[train_idx], T[train_idx]
    X_val, T_val = X[val_idx], T[val_idx]

    params = model.copy_params()
    checkpoint = _Checkpoint(params, cfg.patience)

    with np.errstate(over="ignore", invalid="ignore"):
        if cfg.optimizer == LBFGS:
            _minimize_lbfgs(params, (X_train, T_train), (X_val, T_val), cfg, checkpoint)
        else:
            _descend(params, (X_train, T_train), (X_val, T_val), cfg, rng, checkpoint)

    history = checkpoint.history
    LOG.info("Trained %s network (%s): best validation MSE %.3g at epoch %d",
             "-".join(str(s) for s in model.arch.layer_sizes), cfg.optimizer,
             checkpoint.best_val, history.best_epoch)

    trained = model.replace(
        weights=[tuple(layer) for layer in checkpoint.best_params],
        norm_in=norm_in,
        norm_out=norm_out,
        box=data.box,
        output_stats=data.stats,
    )
    return trained, history


def fit(data, hidden_units=DEFAULT_HIDDEN_UNITS, cfg=None, seed=None):
    """Initialize a network for `data` and train it.

    The initialization seed defaults to the training seed.
    """
    cfg = cfg or TrainConfig()
    arch = Architecture(data.arity, hidden_units, data.arity)
    model = init(arch, cfg.seed if seed is None else seed)
    return train(model, data, cfg)


def predict_many(model, xs):
    """Predict the opposites of every row of `xs`.

    Returns:
        An (n, output_dim) array, clamped into the model's box.
    """
    arr = as_matrix(xs, dim=model.arch.input_dim)
    _, out = _forward(model.weights, model.norm_in.normalize(arr))
    pred = model.norm_out.denormalize(out)
    if model.box is not None:
        pred = np.clip(pred, model.box.lower_array, model.box.upper_array)
    return pred


def predict(model, x):
    """Predict the type-II opposite of the input `x`.

    Raises:
        UsageError: If `x` does not have ``input_dim`` components.
    """
    vec = as_vector(x, dim=model.arch.input_dim)
    return predict_many(model, vec.reshape(1, -1))[0]


def _normalized(model, data):
    _check_arity(model, data.arity)
    return (model.norm_in.normalize(data.inputs),
            model.norm_out.normalize(data.opposites))


def gradients(model, data):
    """Analytic loss gradients at the current weights, as a list of
    ``[dW, db]`` pairs. Data is mapped with the model's own normalization.
    """
    X, T = _normalized(model, data)
    params = [[w, b] for w, b in model.weights]
    grads, _ = _gradients(params, X, T)
    return grads


def grad_check(model, data, step=FD_STEP):
    """Compare backpropagation against central finite differences.

    Returns:
        The largest relative discrepancy ``|a - n| / (|a| + |n|)`` over the
        weight matrices and bias vectors, with norms taken per array.
    """
    if len(data) == 0:
        raise UsageError("Cannot check gradients on empty data")
    X, T = _normalized(model, data)
    params = model.copy_params()
    analytic, _ = _gradients(params, X, T)

    worst = 0.0
    for k, layer in enumerate(params):
        for j, p in enumerate(layer):
            numeric = np.zeros_like(p)
            flat = p.reshape(-1)
            out = numeric.reshape(-1)
            for i in range(flat.shape[0]):
                saved = flat[i]
                flat[i] = saved + step
                up = _loss(params, X, T)
                flat[i] = saved - step
                down = _loss(params, X, T)
                flat[i] = saved
                out[i] = (up - down) / (2 * step)

            a = analytic[k][j]
            scale = np.linalg.norm(a) + np.linalg.norm(numeric)
            if scale > 0:
                worst = max(worst, float(np.linalg.norm(a - numeric) / scale))
    return worst


def save(model, path):
    """Write `model` to `path` as a versioned JSON document."""
    with open(path, "w") as f:
        json.dump(model.to_dict(), f, indent=1)
        f.write("\n")
    LOG.debug("Saved model to %s", path)


def load(path):
    """Read a model written by :func:`save`.

    Raises:
        FormatError: If the document is malformed; ``UnknownVersionError``
            or ``UnsupportedVersionError`` for version problems.
    """
    return RegressorModel.from_dict(ModelParser().parse(path))
