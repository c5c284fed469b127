# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Entity field data descriptors (TypedFields) and associated classes.
"""
import functools
import inspect

import numpy as np

from .datautils import as_vector, is_sequence
from .exceptions import UsageError
from .typedlist import TypedList


def iterfields(klass):
    """Iterate over the input class members and yield its TypedFields.

    Args:
        klass: A class (usually an Entity subclass).

    Yields:
        (class attribute name, TypedField instance) tuples.
    """
    is_field = lambda x: isinstance(x, TypedField)

    for name, field in inspect.getmembers(klass, predicate=is_field):
        yield name, field


class TypedField(object):

    def __init__(self, name, type_=None, key_name=None, multiple=False,
                 preset_hook=None):
        """
        Create a new field.

        Args:
            `name` (str): name of the field.
            `type_` (type): Required type for values assigned to this field.
                If `None`, no type checking is performed.
            `key_name` (str): name for field when represented as a dictionary.
                (Optional) If omitted, `name.lower()` will be used.
            `multiple` (boolean): Whether the field holds a list of values.
            `preset_hook` (callable): called with (instance, value) before
                assigning a value to this field, after cleaning. Use it for
                validation that depends on the value.
        """
        self.name = name
        self.type_ = type_
        self.multiple = multiple
        self.preset_hook = preset_hook
        self._key_name = key_name or name.lower()

        if type_:
            self._listfunc = functools.partial(TypedList, type_)
        else:
            self._listfunc = list

    def __get__(self, instance, owner=None):
        """Return the field value for `instance`. An unset "multiple" field
        is initialized to an empty list.
        """
        if instance is None:
            return self
        elif self in instance._fields:
            return instance._fields[self]
        elif self.multiple:
            return instance._fields.setdefault(self, self._listfunc())
        else:
            return None

    def _clean(self, value):
        """Validate and clean a candidate value for this field."""
        if value is None:
            return None
        elif self.type_ is None:
            return value
        elif self.check_type(value):
            return value
        elif getattr(self.type_, "_try_cast", False):
            return self.type_(value)

        error_fmt = "%s must be a %s, not a %s"
        error = error_fmt % (self.name, self.type_, type(value))
        raise TypeError(error)

    def __set__(self, instance, value):
        """Sets the field value on `instance` for this TypedField.

        If the field is ``multiple``, a non-sequence `value` is wrapped in
        a list.
        """
        if self.multiple:
            if value is None:
                value = self._listfunc()
            elif not is_sequence(value):
                value = self._listfunc([self._clean(value)])
            else:
                value = self._listfunc(
                    self._clean(x) for x in value if x is not None
                )
        else:
            value = self._clean(value)

        if self.preset_hook:
            self.preset_hook(instance, value)

        instance._fields[self] = value

    def __str__(self):
        return self.name

    def check_type(self, value):
        if not self.type_:
            return True
        elif hasattr(self.type_, "istypeof"):
            return self.type_.istypeof(value)
        else:
            return isinstance(value, self.type_)

    @property
    def key_name(self):
        return self._key_name

    def dict_value(self, value):
        return value

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        """TypedFields are class-level descriptors that key the instance
        ``_fields`` dictionary, so copies must reuse the same object.
        """
        memo[id(self)] = self
        return self


class TextField(TypedField):
    def _clean(self, value):
        if value is None:
            return None
        return str(value)


class BooleanField(TypedField):
    def _clean(self, value):
        if value is None:
            return None
        return bool(value)


class IntegerField(TypedField):
    def _clean(self, value):
        if value in (None, ""):
            return None
        elif isinstance(value, str):
            return int(value, 0)
        elif isinstance(value, (float, np.floating)) and not float(value).is_integer():
            raise TypeError("%s must be an integer, not %r" % (self.name, value))
        return int(value)


class FloatField(TypedField):
    def _clean(self, value):
        if value in (None, ""):
            return None
        return float(value)


class VectorField(TypedField):
    """A fixed sequence of floats, stored as a tuple."""
    def _clean(self, value):
        if value is None:
            return None
        return tuple(float(v) for v in as_vector(value))

    def dict_value(self, value):
        return list(value)


class ChoiceField(TypedField):
    """A text field whose value must be one of `choices`."""
    def __init__(self, name, choices, **kwargs):
        super(ChoiceField, self).__init__(name, **kwargs)
        self.choices = tuple(choices)

    def _clean(self, value):
        if value is None:
            return None
        value = str(value)
        if value not in self.choices:
            raise UsageError(
                "{0} must be one of {1}, not '{2}'".format(
                    self.name, ", ".join(self.choices), value
                )
            )
        return value
