# -*- coding:utf-8 -*-
"""
One form per experiment, validating the resolved configuration before any
computation starts.

Presets are passed in ``Meta`` like this::

    class Meta:
        objects = {'field_name_1': get_presets1,
                   'field_name_2': get_presets2, ...}
        stochastic = True

``objects`` callables are evaluated per form instance and installed on the
matching ``PresetField``. ``stochastic`` forms require a ``seed``.
"""

from django import forms
from django.core.validators import EMPTY_VALUES
from django.forms.forms import BaseForm, DeclarativeFieldsMetaclass

from .discretize import OBSERVABLES
from .fields import (IntegerListField, MatrixField, PartitionField,
                     PresetField, SeedField)


class ExperimentFormOptions(object):
    def __init__(self, options=None):
        self.objects = getattr(options, "objects", None)
        self.stochastic = getattr(options, "stochastic", False)
        self.operation = getattr(options, "operation", None)


class ExperimentFormMetaclass(DeclarativeFieldsMetaclass):
    """Declarative form metaclass that also reads the inner ``Meta``."""

    def __new__(mcs, name, bases, attrs):
        new_class = super(ExperimentFormMetaclass, mcs).__new__(mcs, name, bases, attrs)
        new_class._meta = ExperimentFormOptions(getattr(new_class, "Meta", None))
        return new_class


class BaseExperimentForm(BaseForm):
    def __init__(self, *args, **kwargs):
        super(BaseExperimentForm, self).__init__(*args, **kwargs)
        opts = self._meta
        if opts.objects:
            for field_name, get_objects in opts.objects.items():
                field = self.fields.get(field_name)
                if isinstance(field, PresetField):
                    field.objects = get_objects()
        if "seed" in self.fields:
            self.fields["seed"].required = opts.stochastic

    def clean(self):
        cleaned_data = super(BaseExperimentForm, self).clean()
        # optional fields fall back to their initial value
        for name, field in self.fields.items():
            if name in cleaned_data and cleaned_data[name] in EMPTY_VALUES and field.initial is not None:
                cleaned_data[name] = field.clean(field.initial)
        return cleaned_data

    def config(self):
        """The resolved configuration, for manifests and CSV headers."""
        config = dict((name, value) for name, value in self.cleaned_data.items() if value is not None)
        config["operation"] = self._meta.operation
        return config


class ExperimentForm(BaseExperimentForm, metaclass=ExperimentFormMetaclass):
    pass


class ClassifyForm(ExperimentForm):
    matrix = MatrixField()
    N = forms.IntegerField(min_value=2, required=False)
    gamma = forms.FloatField(required=False, initial=2.0)

    class Meta:
        operation = "classify"

    def clean_gamma(self):
        gamma = self.cleaned_data.get("gamma")
        if gamma is not None and gamma <= 1:
            raise forms.ValidationError("gamma must be greater than 1")
        return gamma


class DiametersForm(ExperimentForm):
    matrix = MatrixField()
    n_max = forms.IntegerField(min_value=0, required=False, initial=12)
    samples = forms.IntegerField(min_value=64, required=False, initial=100000)

    class Meta:
        operation = "diameters"


class LocalizeForm(ClassifyForm):
    N = forms.IntegerField(min_value=2)
    n = forms.IntegerField(min_value=0)
    d0 = forms.FloatField(required=False, initial=0.1)
    trials = forms.IntegerField(min_value=1, required=False, initial=100000)
    check = forms.ChoiceField(
        choices=[(c, c) for c in ("both", "localization", "shadowing")], required=False, initial="both"
    )
    seed = SeedField()

    class Meta:
        operation = "localize"
        stochastic = True

    def clean_d0(self):
        d0 = self.cleaned_data.get("d0")
        if d0 is not None and d0 <= 0:
            raise forms.ValidationError("d0 must be positive")
        return d0


class EgorovForm(ExperimentForm):
    matrix = MatrixField()
    sizes = IntegerListField(min_value=2)
    j_max = forms.IntegerField(min_value=0)
    grid_factor = forms.IntegerField(min_value=1, required=False, initial=1)
    quadrature = forms.IntegerField(min_value=1, required=False, initial=1)
    observable = PresetField(required=False, initial="sin-x1")
    threshold = forms.FloatField(min_value=0, required=False)
    seed = SeedField(required=False, initial=0)

    class Meta:
        operation = "egorov"
        objects = {"observable": lambda: dict((name, factory()) for name, factory in OBSERVABLES.items())}


class EntropyForm(ExperimentForm):
    matrix = MatrixField()
    dynamics = forms.ChoiceField(choices=[("map", "map"), ("identity", "identity")], required=False, initial="map")
    partition = PartitionField(required=False, initial="quadrants")
    sizes = IntegerListField(min_value=2)
    n_max = forms.IntegerField(min_value=2)
    samples = forms.IntegerField(min_value=1000, required=False, initial=1000000)
    rate_fraction = forms.FloatField(min_value=0, required=False)
    absolute_gap = forms.FloatField(min_value=0, required=False)
    seed = SeedField()

    class Meta:
        operation = "entropy"
        stochastic = True


def load_config(path):
    """
    Read a ``key=value`` file. Blank lines and lines starting with ``#``
    are skipped; the last occurrence of a key wins.
    """
    data = {}
    with open(path) as stream:
        for number, line in enumerate(stream, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise forms.ValidationError("%s:%d: expected key=value" % (path, number))
            data[key.strip()] = value.strip()
    return data


def merge(config, flags):
    """``config`` overridden by every flag that was given."""
    data = dict(config)
    data.update((key, value) for key, value in flags.items() if value is not None)
    return data
