# -*- coding:utf-8 -*-

import os
import tempfile

from django import forms
from django.core.exceptions import ValidationError

from toral_lattice.discretize import (OBSERVABLES, IndicatorObservable,
                                      TrigObservable)
from toral_lattice.entropy import PRESETS as PARTITION_PRESETS
from toral_lattice.fields import PresetField
from toral_lattice.forms import (ClassifyForm, DiametersForm, EgorovForm,
                                 EntropyForm, ExperimentForm, LocalizeForm,
                                 load_config, merge)
from toral_lattice.maps import ToralMatrix
from toral_lattice.tests.utils import SettingsTestCase


class TestForms(SettingsTestCase):
    def setUp(self):
        self.get_objects = lambda: {"small": 2, "large": 1024}

        class SizeForm(ExperimentForm):
            size = PresetField()
            repeat = forms.IntegerField(required=False, initial=3)

            class Meta:
                objects = {"size": self.get_objects}

        class SizeFormWithoutObjects(ExperimentForm):
            size = PresetField()

        self.SizeForm = SizeForm
        self.SizeFormWithoutObjects = SizeFormWithoutObjects

    def test_meta_objects(self):
        """
        Test, that ``Meta.objects`` transforms to ``PresetField.objects``.
        """
        form = self.SizeForm({"size": "large"})
        self.assertEqual(form.fields["size"].objects, {"small": 2, "large": 1024})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["size"], 1024)

        # the declared field keeps no presets
        self.assertEqual(self.SizeForm.base_fields["size"].objects, {})

    def test_without_objects(self):
        """
        If there is no ``objects`` for field, nothing happens, only
        ``parse`` is left.
        """
        form = self.SizeFormWithoutObjects({"size": "large"})
        self.assertFalse(form.is_valid())
        self.assertTrue(form._errors["size"])

    def test_initials(self):
        """
        Optional fields left empty get their ``initial``.
        """
        form = self.SizeForm({"size": "small"})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["repeat"], 3)
        form = self.SizeForm({"size": "small", "repeat": "5"})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["repeat"], 5)


class TestExperimentForms(SettingsTestCase):
    def test_classify(self):
        form = ClassifyForm({"matrix": "cat"})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["gamma"], 2.0)
        config = form.config()
        self.assertEqual(config["operation"], "classify")
        self.assertEqual(config["matrix"], ToralMatrix(2, 1, 1, 1))
        self.assertNotIn("N", config)

        form = ClassifyForm({"matrix": "cat", "gamma": "1"})
        self.assertFalse(form.is_valid())
        self.assertTrue(form._errors["gamma"])

        form = ClassifyForm({})
        self.assertFalse(form.is_valid())
        self.assertTrue(form._errors["matrix"])

    def test_diameters(self):
        form = DiametersForm({"matrix": "1 1 0 1"})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["n_max"], 12)
        self.assertEqual(form.cleaned_data["samples"], 100000)
        self.assertFalse(DiametersForm({"matrix": "cat", "samples": "10"}).is_valid())

    def test_localize_needs_a_seed(self):
        data = {"matrix": "cat", "N": "64", "n": "2"}
        form = LocalizeForm(data)
        self.assertFalse(form.is_valid())
        self.assertTrue(form._errors["seed"])

        form = LocalizeForm(dict(data, seed="7"))
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["check"], "both")
        self.assertEqual(form.cleaned_data["d0"], 0.1)
        self.assertEqual(form.cleaned_data["trials"], 100000)
        self.assertEqual(form.cleaned_data["gamma"], 2.0)
        self.assertEqual(form.config()["operation"], "localize")

        self.assertFalse(LocalizeForm(dict(data, seed="7", d0="0")).is_valid())
        self.assertFalse(LocalizeForm(dict(data, seed="7", check="neither")).is_valid())

    def test_egorov_observables(self):
        data = {"matrix": "cat", "sizes": "64 128", "j_max": "5"}
        form = EgorovForm(data)
        self.assertTrue(form.is_valid())
        self.assertFalse(form.fields["seed"].required)
        self.assertEqual(form.cleaned_data["seed"], 0)
        self.assertEqual(set(form.fields["observable"].objects), set(OBSERVABLES))
        self.assertIsInstance(form.cleaned_data["observable"], TrigObservable)
        self.assertEqual(form.cleaned_data["sizes"], [64, 128])

        other = EgorovForm(dict(data, observable="half"))
        self.assertTrue(other.is_valid())
        self.assertIsInstance(other.cleaned_data["observable"], IndicatorObservable)
        self.assertFalse(EgorovForm(dict(data, observable="tan-x1")).is_valid())

    def test_entropy(self):
        data = {"matrix": "cat", "sizes": "64 128", "n_max": "4", "seed": "1"}
        form = EntropyForm(data)
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["dynamics"], "map")
        self.assertIs(form.cleaned_data["partition"], PARTITION_PRESETS["quadrants"])
        self.assertEqual(form.cleaned_data["samples"], 1000000)

        self.assertFalse(EntropyForm(dict(data, n_max="1")).is_valid())
        self.assertFalse(EntropyForm(dict(data, sizes="1 64")).is_valid())
        form = EntropyForm(dict((k, v) for k, v in data.items() if k != "seed"))
        self.assertFalse(form.is_valid())
        self.assertTrue(form._errors["seed"])


class TestConfigFiles(SettingsTestCase):
    def write(self, text):
        handle, path = tempfile.mkstemp(suffix=".cfg")
        with os.fdopen(handle, "w") as stream:
            stream.write(text)
        self.addCleanup(os.remove, path)
        return path

    def test_load(self):
        path = self.write("# lattice\nmatrix = cat\n\nN=64\nN=128\n")
        self.assertEqual(load_config(path), {"matrix": "cat", "N": "128"})

    def test_bad_line(self):
        path = self.write("matrix=cat\noops\n")
        self.assertRaises(ValidationError, load_config, path)

    def test_merge(self):
        self.assertEqual(merge({"a": "1", "b": "2"}, {"b": "3", "c": None}), {"a": "1", "b": "3"})
