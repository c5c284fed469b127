# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
The effective configuration of a command-line run.

Every option has a declared default here; the configuration (minus file
locations) is echoed into every report the CLI writes.
"""
from . import benchfn, fields, optimizer, regressor
from .entities import Entity
from .exceptions import UsageError
from .evaluation import DEFAULT_N_TEST
from .opposition import SCHEMES, T1

CSV = "csv"
JSON = "json"
FORMATS = (CSV, JSON)

DEFAULT_N = 1000

# Fields naming files or directories. They are left out of report echoes so
# identical experiments written to different places produce identical
# reports.
PATH_FIELDS = ("input", "output", "model", "history")


class RunConfig(Entity):
    command = fields.TextField("command")
    function = fields.TextField("function")
    scheme = fields.ChoiceField("scheme", SCHEMES)
    n = fields.IntegerField("n")
    mode = fields.ChoiceField("mode", benchfn.SAMPLING_MODES)
    seed = fields.IntegerField("seed")
    lower = fields.VectorField("lower")
    upper = fields.VectorField("upper")
    hidden = fields.IntegerField("hidden")
    epochs = fields.IntegerField("epochs")
    lr = fields.FloatField("lr")
    batch = fields.IntegerField("batch")
    patience = fields.IntegerField("patience")
    optimizer = fields.ChoiceField("optimizer", regressor.OPTIMIZERS)
    validation_fraction = fields.FloatField("validation_fraction")
    n_test = fields.IntegerField("n_test")
    runs = fields.IntegerField("runs")
    oracle = fields.BooleanField("oracle")
    format = fields.ChoiceField("format", FORMATS)
    input = fields.TextField("input")
    output = fields.TextField("output")
    model = fields.TextField("model")
    history = fields.TextField("history")

    def __init__(self, command=None):
        super(RunConfig, self).__init__()
        self.command = command
        self.function = None
        self.scheme = T1
        self.n = DEFAULT_N
        self.mode = None
        self.seed = 0
        self.lower = None
        self.upper = None
        self.hidden = regressor.DEFAULT_HIDDEN_UNITS
        self.epochs = regressor.DEFAULT_EPOCHS
        self.lr = regressor.DEFAULT_LEARNING_RATE
        self.batch = 0
        self.patience = regressor.DEFAULT_PATIENCE
        self.optimizer = regressor.GD
        self.validation_fraction = regressor.DEFAULT_VALIDATION_FRACTION
        self.n_test = DEFAULT_N_TEST
        self.runs = optimizer.DEFAULT_N_RUNS
        self.oracle = False
        self.format = None
        self.input = None
        self.output = None
        self.model = None
        self.history = None

    @classmethod
    def from_args(cls, args):
        """Build a RunConfig from an ``argparse.Namespace``. Options the
        namespace does not carry, or carries as None, keep their defaults.
        """
        config = cls(getattr(args, "command", None))
        for field in cls.typed_fields():
            value = getattr(args, field.name, None)
            if value is not None and field.name != "command":
                field.__set__(config, value)
        return config

    def train_config(self):
        """Return the TrainConfig these options describe."""
        return regressor.TrainConfig(
            epochs=self.epochs,
            learning_rate=self.lr,
            batch=self.batch,
            validation_fraction=self.validation_fraction,
            patience=self.patience,
            optimizer=self.optimizer,
            seed=self.seed,
        )

    def box(self):
        """Return the DomainBox override given by ``lower``/``upper``, or
        None.
        """
        if self.lower is None and self.upper is None:
            return None
        if self.function is None:
            raise UsageError("--lower/--upper need --fn")
        default = benchfn.get_domain(self.function)
        lower = self.lower if self.lower is not None else default.lower
        upper = self.upper if self.upper is not None else default.upper
        return benchfn.DomainBox(lower, upper)

    def sampling_mode(self):
        """The sampling mode, defaulting to grid for 1-D functions and
        uniform otherwise.
        """
        if self.mode is not None:
            return self.mode
        if self.function is not None and benchfn.get(self.function).arity > 1:
            return benchfn.UNIFORM
        return benchfn.GRID

    def provenance(self):
        """The configuration as a dict, without file locations."""
        d = self.to_dict()
        for key in PATH_FIELDS:
            d.pop(key, None)
        return d
