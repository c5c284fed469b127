# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
from collections.abc import MutableSequence

from .datautils import is_sequence


class TypedList(MutableSequence):
    """A list whose items all share one type.

    Entity types are accepted only as instances (see ``Entity.istypeof``).
    Other values are passed through `item_type` when it is a plain
    constructor such as ``float``. ``None`` items are dropped.

    Args:
        item_type: The item type.
        items: Optional initial items.
    """

    def __init__(self, item_type, items=()):
        self.item_type = item_type
        self._items = []
        self.extend(items)

    def _coerce(self, value):
        istypeof = getattr(self.item_type, "istypeof", None)
        if istypeof is not None:
            if istypeof(value):
                return value
        elif isinstance(value, self.item_type):
            return value
        elif getattr(self.item_type, "_try_cast", True):
            try:
                return self.item_type(value)
            except (TypeError, ValueError):
                pass
        raise TypeError("%r is not a %s" % (value, self.item_type.__name__))

    def __getitem__(self, key):
        return self._items[key]

    def __setitem__(self, key, value):
        if isinstance(key, slice):
            self._items[key] = [self._coerce(v) for v in value if v is not None]
        else:
            self._items[key] = self._coerce(value)

    def __delitem__(self, key):
        del self._items[key]

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        return is_sequence(other) and list(self) == list(other)

    def insert(self, idx, value):
        if value is not None:
            self._items.insert(idx, self._coerce(value))

    def __repr__(self):
        return "TypedList(%s, %r)" % (self.item_type.__name__, self._items)
