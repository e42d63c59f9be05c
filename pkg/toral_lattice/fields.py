# -*- coding:utf-8 -*-
"""
Form fields for experiment configuration.

Values arrive as strings (from a ``key=value`` file or the command line)
and leave as domain objects. Domain errors raised while building those
objects are reported as ``ValidationError`` like any other bad input.
"""

import re

from django.core.exceptions import ValidationError
from django.core.validators import EMPTY_VALUES
from django.forms import ChoiceField, Field, IntegerField

from .entropy import PRESETS as PARTITION_PRESETS
from .entropy import Partition
from .maps import PRESETS as MATRIX_PRESETS
from .maps import ToralMatrix

SEPARATORS = re.compile(r"[\s,]+")


class PresetField(ChoiceField):
    """
    ``ChoiceField`` over named presets that also accepts explicit values.

    ``objects`` can be:
      * a dict: ``{name1: obj1, name2: obj2, ...}``
      * a list (or any iterable) of tuples: ``[(name1, obj1), (name2, obj2), ...]``
      * a callable returning one of the above

    Anything that is not a preset name goes through ``parse``.
    """

    default_error_messages = {
        "invalid": "%(value)r is neither a preset (%(presets)s) nor valid: %(error)s",
    }

    def __init__(self, objects=(), *args, **kwargs):
        if callable(objects):
            objects = objects()
        super(PresetField, self).__init__(*args, **kwargs)
        self.objects = objects

    @property
    def objects(self):
        return self._objects.copy()

    @objects.setter
    def objects(self, value):
        if isinstance(value, dict):
            self._objects = dict((str(k), v) for k, v in value.items())
            self.choices = [(k, str(self._objects[k])) for k in sorted(self._objects)]
        else:
            objects = list(value)
            self._objects = dict((str(k), v) for k, v in objects)
            self.choices = [(str(k), str(v)) for k, v in objects]

    def parse(self, value):
        raise ValueError("unknown preset")

    def to_python(self, value):
        if value in EMPTY_VALUES:
            return None
        if not isinstance(value, str):
            return self._parse_or_fail(value)
        key = value.strip()
        if key in self._objects:
            return self._objects[key]
        return self._parse_or_fail(key)

    def _parse_or_fail(self, value):
        try:
            return self.parse(value)
        except ValueError as e:
            raise ValidationError(
                self.error_messages["invalid"],
                code="invalid",
                params={"value": value, "presets": ", ".join(sorted(self._objects)), "error": e},
            )

    def validate(self, value):
        return Field.validate(self, value)


class MatrixField(PresetField):
    """A ``ToralMatrix`` from a preset name or four integers ``t11 t12 t21 t22``."""

    def __init__(self, objects=MATRIX_PRESETS, *args, **kwargs):
        super(MatrixField, self).__init__(objects, *args, **kwargs)

    def parse(self, value):
        if isinstance(value, ToralMatrix):
            return value
        if isinstance(value, str):
            value = [v for v in SEPARATORS.split(value) if v]
        try:
            entries = [int(v) for v in value]
        except (TypeError, ValueError):
            raise ValueError("matrix entries must be integers")
        return ToralMatrix.from_sequence(entries)


class PartitionField(PresetField):
    """A ``Partition`` from a preset name or rectangles ``a1:b1,a2:b2;...``."""

    def __init__(self, objects=PARTITION_PRESETS, *args, **kwargs):
        super(PartitionField, self).__init__(objects, *args, **kwargs)

    def parse(self, value):
        if isinstance(value, Partition):
            return value
        return Partition.parse(value)


class IntegerListField(Field):
    """Whitespace or comma separated integers, each at least ``min_value``."""

    default_error_messages = {
        "invalid": "Enter a list of whole numbers.",
        "min_value": "Every entry must be at least %(limit_value)s.",
    }

    def __init__(self, min_value=None, *args, **kwargs):
        self.min_value = min_value
        super(IntegerListField, self).__init__(*args, **kwargs)

    def to_python(self, value):
        if value in EMPTY_VALUES:
            return None
        if isinstance(value, str):
            value = [v for v in SEPARATORS.split(value.strip()) if v]
        try:
            return [int(v) for v in value]
        except (TypeError, ValueError):
            raise ValidationError(self.error_messages["invalid"], code="invalid")

    def validate(self, value):
        super(IntegerListField, self).validate(value)
        if value and self.min_value is not None and min(value) < self.min_value:
            raise ValidationError(
                self.error_messages["min_value"], code="min_value", params={"limit_value": self.min_value}
            )


class SeedField(IntegerField):
    """Unsigned 64-bit run seed."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("min_value", 0)
        kwargs.setdefault("max_value", 2 ** 64 - 1)
        super(SeedField, self).__init__(*args, **kwargs)
