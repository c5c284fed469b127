# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.

import unittest

from oblearn import fields
from oblearn.entities import Entity
from oblearn.exceptions import UsageError


def _positive(instance, value):
    if value is not None and value <= 0:
        raise UsageError("must be positive")


class MockEntity(Entity):
    foo = fields.TypedField("foo")
    bar = fields.TypedField("bar")


class MockRecord(Entity):
    count = fields.IntegerField("count", preset_hook=_positive)
    rate = fields.FloatField("rate")
    point = fields.VectorField("point")
    kind = fields.ChoiceField("kind", ("a", "b"))
    tags = fields.TypedField("tags", str, multiple=True)


class TestTypedField(unittest.TestCase):

    def test_names(self):
        a = fields.TypedField("Some_Field", None)
        self.assertEqual("Some_Field", a.name)
        self.assertEqual("some_field", a.key_name)

        a = fields.TypedField("From", None, key_name="src")
        self.assertEqual("src", a.key_name)

    def test_iterfields(self):
        # Instantiating must not change the reported fields.
        MockRecord()
        self.assertEqual(2, len(list(fields.iterfields(MockEntity))))
        self.assertEqual(5, len(list(fields.iterfields(MockRecord))))

    def test_type_check(self):
        class Typed(Entity):
            value = fields.TypedField("value", MockEntity)

        t = Typed()
        t.value = MockEntity()
        with self.assertRaises(TypeError):
            t.value = "not an entity"


class TestCleaningFields(unittest.TestCase):

    def test_integer(self):
        r = MockRecord()
        r.count = "12"
        self.assertEqual(r.count, 12)
        r.count = 3.0
        self.assertEqual(r.count, 3)
        with self.assertRaises(TypeError):
            r.count = 1.5

    def test_preset_hook(self):
        r = MockRecord()
        with self.assertRaises(UsageError):
            r.count = 0
        self.assertIsNone(r.count)

    def test_only_preset_hook(self):
        self.assertRaises(TypeError, fields.TypedField, "x", postset_hook=print)
        self.assertRaises(TypeError, fields.TypedField, "x", comparable=False)

    def test_float(self):
        r = MockRecord()
        r.rate = "0.25"
        self.assertEqual(r.rate, 0.25)

    def test_vector(self):
        r = MockRecord()
        r.point = [1, 2]
        self.assertEqual(r.point, (1.0, 2.0))
        self.assertEqual(r.to_dict(), {"point": [1.0, 2.0]})

    def test_choice(self):
        r = MockRecord()
        r.kind = "b"
        self.assertEqual(r.kind, "b")
        with self.assertRaises(UsageError):
            r.kind = "c"

    def test_multiple(self):
        r = MockRecord()
        self.assertEqual(len(r.tags), 0)
        r.tags = "x"
        self.assertEqual(list(r.tags), ["x"])
        r.tags.append("y")
        self.assertEqual(r.to_dict(), {"tags": ["x", "y"]})


if __name__ == "__main__":
    unittest.main()
