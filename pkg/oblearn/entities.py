# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Base class for the serializable records of oblearn (configurations,
summaries and reports).

An Entity declares its data as class-level :class:`~oblearn.fields.TypedField`
descriptors. Values live in the instance ``_fields`` dictionary in the order
they were assigned, which makes :meth:`Entity.to_json` output byte-stable for
a given construction order.
"""
import json

from . import fields as _fields_module


def _dictify(field, value):
    """Make `value` suitable for a dictionary."""
    if value is None:
        return None
    elif field.type_ and hasattr(value, "to_dict"):
        return value.to_dict()
    return field.dict_value(value)


class Entity(object):
    """Base class for all oblearn records."""

    # Entities are built from dicts with from_dict(), never by calling the
    # constructor on an arbitrary value.
    _try_cast = False

    def __init__(self):
        self._fields = {}

    @classmethod
    def typed_fields(cls):
        """Return a tuple of this entity's TypedFields."""
        # cls.__dict__ excludes inherited attributes, so a subclass never
        # picks up its parent's cached tuple.
        klassdict = cls.__dict__

        try:
            return klassdict["_typed_fields"]
        except KeyError:
            found = tuple(f for _, f in _fields_module.iterfields(cls))
            cls._typed_fields = found
        return cls._typed_fields

    def __eq__(self, other):
        if other is self:
            return True

        if self.__class__ != other.__class__:
            return False

        typedfields = self.typed_fields()

        # Without fields there is nothing to establish equality.
        if not typedfields:
            return False

        return all(f.__get__(self) == f.__get__(other) for f in typedfields)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def to_dict(self):
        """Convert to a ``dict``.

        Returns:
            Python dict with keys set from this Entity, in assignment order.
            ``None`` values and empty lists are omitted.
        """
        entity_dict = {}

        for field, val in self._fields.items():
            if field.multiple:
                val = [_dictify(field, x) for x in val] if val else []
            else:
                val = _dictify(field, val)

            if val is not None and val != []:
                entity_dict[field.key_name] = val

        return entity_dict

    @classmethod
    def from_dict(cls, cls_dict):
        """Build an instance from a dictionary produced by :meth:`to_dict`.

        Nested Entity fields are rebuilt with the nested class's
        ``from_dict``. Keys that are absent leave the constructor default in
        place.
        """
        if cls_dict is None:
            return None

        entity = cls()

        for field in cls.typed_fields():
            if field.key_name not in cls_dict:
                continue

            val = cls_dict[field.key_name]
            transformer = field.type_ if hasattr(field.type_, "from_dict") else None

            if transformer:
                if field.multiple:
                    val = [transformer.from_dict(x) for x in (val or [])]
                else:
                    val = transformer.from_dict(val)

            field.__set__(entity, val)

        return entity

    def to_json(self, **kwargs):
        """Export an object as a JSON string. `kwargs` are passed to
        ``json.dumps``.
        """
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, json_doc):
        """Parse a JSON string or file-like object and build an entity."""
        try:
            d = json.load(json_doc)
        except AttributeError:  # catch the read() error
            d = json.loads(json_doc)

        return cls.from_dict(d)

    @classmethod
    def istypeof(cls, obj):
        """Check if `cls` is the type of `obj`."""
        return isinstance(obj, cls)

    def __repr__(self):
        return "%s(%s)" % (self.__class__.__name__, self.to_dict())
