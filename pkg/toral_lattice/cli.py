# -*- coding:utf-8 -*-
"""
``toral-lattice`` command line.

Every subcommand validates its configuration (``--config`` file merged
with flags, flags win) through the matching form, runs, and writes either
CSV or a JSON manifest. Exit codes: 0 success, 2 invalid input, 3 a
configured capacity limit was hit.

CSV columns:

* ``diameters``: ``n, formula, bruteforce, rel_err``
* ``egorov``: ``j, N, defect``
* ``entropy``: ``n, N, S_cs, S_ks, gap, rate, S_measurement, S_dynamical,
  epsilon, delta, fannes_bound``
"""

import argparse
import io
import logging
import os
import sys

from django.core.exceptions import ValidationError

from . import __version__, conf
from .discretize import (egorov_sweep, verify_dynamical_localization,
                         verify_orbit_shadowing)
from .entropy import theorem3_comparison
from .exceptions import CapacityExceeded, ThresholdUnmet
from .forms import (ClassifyForm, DiametersForm, EgorovForm, EntropyForm,
                    LocalizeForm, load_config, merge)
from .lattice import LatticeConfig
from .maps import (breaking_time_estimate, classify, diameter_bruteforce,
                   diameter_formula, localization_n0)
from .serializers import dumps, write_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAPACITY = 3

ENTROPY_COLUMNS = (
    "n", "N", "S_cs", "S_ks", "gap", "rate", "S_measurement", "S_dynamical", "epsilon", "delta", "fannes_bound",
)


class Output(object):
    """Primary output (stdout or ``--output``) plus an optional manifest."""

    def __init__(self, body, manifest=None):
        self.body = body
        self.manifest = manifest


def _csv(header, rows, config):
    stream = io.StringIO()
    write_csv(stream, header, rows, config)
    return stream.getvalue()


def cmd_classify(data, config, args):
    T = data["matrix"]
    S = classify(T)
    report = {
        "operation": "classify",
        "matrix": T,
        "family": S.family,
        "semitrace": S.semitrace,
        "eta": S.eta,
        "lambda": S.lam,
        "beta": S.beta,
        "sin_beta": S.sin_beta,
        "J": S.J,
        "phi": S.phi,
        "xi": S.xi,
        "period": S.period,
    }
    if data.get("N") is not None:
        report["N"] = data["N"]
        report["gamma"] = data["gamma"]
        report["breaking_time"] = breaking_time_estimate(S, data["N"], data["gamma"])
    if args.format == "json":
        return Output(dumps(report, config))
    lines = []
    for key, value in report.items():
        if value is None or key == "operation":
            continue
        lines.append("%s=%s" % (key, "%.6f" % value if isinstance(value, float) else value))
    return Output("\n".join(lines) + "\n", manifest=dumps(report, config))


def cmd_diameters(data, config, args):
    T = data["matrix"]
    S = classify(T)
    rows = []
    for n in range(data["n_max"] + 1):
        formula = diameter_formula(S, n)
        brute = diameter_bruteforce(T, n, data["samples"])
        rows.append((n, formula, brute, abs(formula - brute) / formula))
    if args.format == "json":
        report = {"operation": "diameters", "family": S.family, "rows": rows}
        return Output(dumps(report, config))
    return Output(_csv(("n", "formula", "bruteforce", "rel_err"), rows, config))


def cmd_localize(data, config, args):
    T = data["matrix"]
    S = classify(T)
    cfg = LatticeConfig(data["N"])
    report = {"operation": "localize"}
    if data["check"] in ("both", "localization"):
        report["localization"] = verify_dynamical_localization(
            T, cfg, data["n"], data["gamma"], data["d0"], data["trials"], data["seed"]
        )
        try:
            report["n0"] = localization_n0(S, data["gamma"], data["d0"])
        except ThresholdUnmet as e:
            report["n0"] = str(e)
    if data["check"] in ("both", "shadowing"):
        try:
            report["shadowing"] = verify_orbit_shadowing(T, cfg, data["n"], data["trials"], data["seed"])
        except ThresholdUnmet as e:
            if data["check"] == "shadowing":
                raise
            logger.warning("shadowing skipped: %s", e)
            report["shadowing"] = {"skipped": str(e)}
    return Output(dumps(report, config))


def cmd_egorov(data, config, args):
    threshold = data["threshold"] if data.get("threshold") is not None else conf.get_setting("EGOROV_THRESHOLD")
    result = egorov_sweep(
        data["matrix"],
        data["observable"],
        data["sizes"],
        data["j_max"],
        grid_factor=data["grid_factor"],
        threshold=threshold,
        quadrature=data["quadrature"],
        seed=data["seed"],
    )
    report = {
        "operation": "egorov",
        "threshold": threshold,
        "transitions": result["transitions"],
        "crossings": result["crossings"],
        "slope": result["slope"],
        "expected_slope": result["expected_slope"],
    }
    if args.format == "json":
        report["rows"] = result["rows"]
        return Output(dumps(report, config))
    return Output(_csv(("j", "N", "defect"), result["rows"], config), manifest=dumps(report, config))


def cmd_entropy(data, config, args):
    T = data["matrix"] if data["dynamics"] == "map" else None
    report = theorem3_comparison(
        T,
        data["partition"],
        data["n_max"],
        data["sizes"],
        data["samples"],
        data["seed"],
        rate_fraction=data.get("rate_fraction"),
        absolute_gap=data.get("absolute_gap"),
    )
    rows = [tuple(row[column] for column in ENTROPY_COLUMNS) for row in report.pop("rows")]
    if args.format == "json":
        report["rows"] = [dict(zip(ENTROPY_COLUMNS, row)) for row in rows]
        return Output(dumps(report, config))
    return Output(_csv(ENTROPY_COLUMNS, rows, config), manifest=dumps(report, config))


COMMANDS = {
    "classify": (ClassifyForm, cmd_classify),
    "diameters": (DiametersForm, cmd_diameters),
    "localize": (LocalizeForm, cmd_localize),
    "egorov": (EgorovForm, cmd_egorov),
    "entropy": (EntropyForm, cmd_entropy),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override its entries")
    common.add_argument("--output", help="write here instead of stdout (manifest goes next to it as .json)")
    common.add_argument("--format", choices=("text", "csv", "json"), default=None)
    common.add_argument("--verbosity", type=int, choices=(0, 1, 2, 3), default=1)
    common.add_argument("--matrix", nargs="+", help="preset name or t11 t12 t21 t22")

    parser = argparse.ArgumentParser(
        prog="toral-lattice", description="Discretized toral automorphisms on N x N lattices."
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    sub = commands.add_parser("classify", parents=[common], help="family and spectral data of a matrix")
    sub.add_argument("--N", type=int, dest="N")
    sub.add_argument("--gamma", type=float)

    sub = commands.add_parser("diameters", parents=[common], help="CSV: n, formula, bruteforce, rel_err")
    sub.add_argument("--n-max", type=int, dest="n_max")
    sub.add_argument("--samples", type=int)

    sub = commands.add_parser("localize", parents=[common], help="JSON: localization and shadowing reports")
    sub.add_argument("--N", type=int, dest="N")
    sub.add_argument("--n", type=int, dest="n")
    sub.add_argument("--gamma", type=float)
    sub.add_argument("--d0", type=float)
    sub.add_argument("--trials", type=int)
    sub.add_argument("--check", choices=("both", "localization", "shadowing"))
    sub.add_argument("--seed", type=int)

    sub = commands.add_parser("egorov", parents=[common], help="CSV: j, N, defect")
    sub.add_argument("--sizes", nargs="+")
    sub.add_argument("--j-max", type=int, dest="j_max")
    sub.add_argument("--grid-factor", type=int, dest="grid_factor")
    sub.add_argument("--quadrature", type=int)
    sub.add_argument("--observable")
    sub.add_argument("--threshold", type=float)
    sub.add_argument("--seed", type=int, help="seed of the jittered sampling mesh (default 0)")

    sub = commands.add_parser(
        "entropy", parents=[common], help="CSV: " + ", ".join(ENTROPY_COLUMNS) + " and a JSON manifest"
    )
    sub.add_argument("--dynamics", choices=("map", "identity"))
    sub.add_argument("--partition", help="halves, quadrants, or rectangles a1:b1,a2:b2;...")
    sub.add_argument("--sizes", nargs="+")
    sub.add_argument("--n-max", type=int, dest="n_max")
    sub.add_argument("--samples", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--rate-fraction", type=float, dest="rate_fraction")
    sub.add_argument("--absolute-gap", type=float, dest="absolute_gap")
    return parser


OPTIONS = ("config", "output", "format", "verbosity", "command")


def _flags(args):
    flags = {}
    for key, value in vars(args).items():
        if key in OPTIONS:
            continue
        if isinstance(value, list):
            value = " ".join(value)
        flags[key] = value
    return flags


def _write(path, text):
    with open(path, "w", newline="") as stream:
        stream.write(text)


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    conf.setup(verbosity=args.verbosity)
    logging.getLogger("toral_lattice").setLevel(conf.VERBOSITY_LEVELS[args.verbosity])
    form_class, command = COMMANDS[args.command]
    try:
        data = merge(load_config(args.config) if args.config else {}, _flags(args))
        form = form_class(data)
        if not form.is_valid():
            for field, errors in sorted(form.errors.items()):
                stderr.write("%s: %s\n" % (field, " ".join(errors)))
            return EXIT_INVALID
        output = command(form.cleaned_data, form.config(), args)
    except CapacityExceeded as e:
        stderr.write("capacity exceeded: %s\n" % e)
        return EXIT_CAPACITY
    except ValidationError as e:
        stderr.write("invalid configuration: %s\n" % " ".join(e.messages))
        return EXIT_INVALID
    except (ValueError, OSError) as e:
        stderr.write("%s: %s\n" % (type(e).__name__, e))
        return EXIT_INVALID

    if args.output:
        _write(args.output, output.body)
        manifest_path = os.path.splitext(args.output)[0] + ".json"
        if output.manifest is not None and manifest_path != args.output:
            _write(manifest_path, output.manifest)
        logger.info("wrote %s", args.output)
    else:
        stdout.write(output.body)
    return EXIT_OK
