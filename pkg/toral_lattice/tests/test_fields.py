# -*- coding:utf-8 -*-

from django import forms
from django.core.exceptions import ValidationError

from toral_lattice.entropy import PRESETS as PARTITION_PRESETS
from toral_lattice.fields import (IntegerListField, MatrixField,
                                  PartitionField, PresetField, SeedField)
from toral_lattice.maps import PRESETS as MATRIX_PRESETS
from toral_lattice.maps import ToralMatrix
from toral_lattice.tests.utils import SettingsTestCase


class TestPresetField(SettingsTestCase):
    def setUp(self):
        class FormSingle(forms.Form):
            matrix = MatrixField(required=False)

        self.FormSingle = FormSingle

    def test_objects_arg(self):
        """
        Test, how the field accepts different types of ``objects`` argument.
        """
        as_dict = PresetField(objects=MATRIX_PRESETS)
        as_callable = PresetField(objects=lambda: MATRIX_PRESETS)
        as_list_of_tuples = PresetField(objects=sorted(MATRIX_PRESETS.items()))
        as_iterable = PresetField(objects=lambda: iter(sorted(MATRIX_PRESETS.items())))

        # make sure all of the ``choices`` attrs are the same
        self.assertTrue(as_dict.choices == as_callable.choices == as_list_of_tuples.choices == as_iterable.choices)

        # same for ``objects``
        self.assertTrue(as_dict.objects == as_callable.objects == as_list_of_tuples.objects == as_iterable.objects)

        # ``choices`` should be a list as ``[(name1, str(obj1)), ...]``
        self.assertEqual(list(as_dict.choices), [(k, str(MATRIX_PRESETS[k])) for k in sorted(MATRIX_PRESETS)])

    def test_objects_assignment(self):
        field = PresetField(objects=MATRIX_PRESETS)
        field2 = PresetField(objects={"cat": MATRIX_PRESETS["cat"]})
        field.objects = {"cat": MATRIX_PRESETS["cat"]}

        self.assertEqual(field.objects, field2.objects)
        self.assertEqual(field.choices, field2.choices)

    def test_objects_are_copied(self):
        field = PresetField(objects=MATRIX_PRESETS)
        field.objects["extra"] = None
        self.assertNotIn("extra", field.objects)

    def test_unknown_preset(self):
        field = PresetField(objects=MATRIX_PRESETS)
        with self.assertRaises(ValidationError) as cm:
            field.clean("baker")
        self.assertEqual(cm.exception.code, "invalid")

    def test_behavior(self):
        """
        Test, how the field handles data in form.
        """
        # preset name
        form = self.FormSingle({"matrix": "cat"})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["matrix"], ToralMatrix(2, 1, 1, 1))

        # no value
        form = self.FormSingle({})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["matrix"], None)

        # invalid value
        form = self.FormSingle({"matrix": "2 1 1 2"})
        self.assertFalse(form.is_valid())
        self.assertTrue(form._errors["matrix"])


class TestMatrixField(SettingsTestCase):
    def test_explicit_entries(self):
        field = MatrixField()
        for value in ("2 1 1 1", "2,1, 1,1", " 2 1\n1 1 ", [2, 1, 1, 1], ToralMatrix(2, 1, 1, 1)):
            self.assertEqual(field.clean(value), ToralMatrix(2, 1, 1, 1))
        self.assertEqual(field.clean("shear"), ToralMatrix(1, 1, 0, 1))

    def test_invalid(self):
        field = MatrixField()
        for value in ("1 0 0 1", "-1 0 0 -1", "2 1 1 2", "a b c d", "2 1 1", [1.5, 0, 0, 1]):
            with self.assertRaises(ValidationError) as cm:
                field.clean(value)
            self.assertEqual(cm.exception.code, "invalid", value)
        with self.assertRaises(ValidationError) as cm:
            field.clean("")
        self.assertEqual(cm.exception.code, "required")


class TestPartitionField(SettingsTestCase):
    def test_values(self):
        field = PartitionField()
        self.assertIs(field.clean("quadrants"), PARTITION_PRESETS["quadrants"])
        self.assertEqual(field.clean("0:1/2,0:1;1/2:1,0:1"), PARTITION_PRESETS["halves"])
        self.assertEqual(len(field.clean("0:1/3,0:1;1/3:1,0:1/2;1/3:1,1/2:1")), 3)
        for value in ("0:1/2,0:1", "0:1/2,0:1;1/4:1,0:1", "thirds"):
            self.assertRaises(ValidationError, field.clean, value)


class TestIntegerListField(SettingsTestCase):
    def test_values(self):
        field = IntegerListField(min_value=2)
        self.assertEqual(field.clean("64 128,256"), [64, 128, 256])
        self.assertEqual(field.clean([16]), [16])
        with self.assertRaises(ValidationError) as cm:
            field.clean("1 4")
        self.assertEqual(cm.exception.code, "min_value")
        with self.assertRaises(ValidationError) as cm:
            field.clean("16 x")
        self.assertEqual(cm.exception.code, "invalid")
        self.assertRaises(ValidationError, field.clean, "")
        self.assertIsNone(IntegerListField(required=False).clean(""))


class TestSeedField(SettingsTestCase):
    def test_range(self):
        field = SeedField()
        self.assertEqual(field.clean("0"), 0)
        self.assertEqual(field.clean(str(2 ** 64 - 1)), 2 ** 64 - 1)
        self.assertRaises(ValidationError, field.clean, "-1")
        self.assertRaises(ValidationError, field.clean, str(2 ** 64))
