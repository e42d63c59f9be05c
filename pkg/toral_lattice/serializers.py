# -*- coding:utf-8 -*-
"""
JSON manifests and commented CSV tables.

Output is deterministic: JSON keys are sorted, floats are written by
``repr`` and CSV rows keep the order they were produced in, so identical
runs produce identical bytes.
"""

import csv
import enum
import json
from fractions import Fraction

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

SCHEMA = "toral-lattice/1"


class ManifestEncoder(DjangoJSONEncoder):
    """
    ``DjangoJSONEncoder`` that also knows fractions, numpy values, enums
    and the package value types (through their ``str``).
    """

    def default(self, o):
        from .discretize import Observable
        from .entropy import Partition
        from .maps import ToralMatrix

        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, enum.Enum):
            return o.value
        if isinstance(o, (Partition, Observable)):
            return str(o)
        if isinstance(o, ToralMatrix):
            return list(o)
        return super(ManifestEncoder, self).default(o)


def _stringify_keys(value):
    # integer keys (lattice sizes) would not sort against strings
    if isinstance(value, dict):
        return dict((str(k), _stringify_keys(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_stringify_keys(v) for v in value]
    return value


def dumps(report, config=None):
    """Manifest JSON for ``report`` with the schema tag and resolved config."""
    manifest = dict(report)
    manifest["schema"] = SCHEMA
    if config is not None:
        manifest["config"] = config
    return json.dumps(_stringify_keys(manifest), cls=ManifestEncoder, sort_keys=True, indent=2) + "\n"


def format_value(value):
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return " ".join(format_value(v) for v in value)
    return str(value)


def write_csv(stream, header, rows, config=None):
    """
    Header comments ``# key=value`` (sorted by key), then the column names
    ``header``, then ``rows``.
    """
    for key in sorted(config or {}):
        stream.write("# %s=%s\n" % (key, format_value(config[key])))
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])


def read_csv(stream):
    """``(config, header, rows)`` of a file written by ``write_csv``; values stay strings."""
    config = {}
    lines = []
    for line in stream:
        if line.startswith("# "):
            key, _, value = line[2:].rstrip("\n").partition("=")
            config[key] = value
        else:
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    return config, header, list(reader)
