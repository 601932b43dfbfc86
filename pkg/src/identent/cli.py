"""Command-line interface.

Exit codes: 0 on success, 2 for invalid input (unreadable or malformed files,
bad arguments, states violating their invariants), 3 when a numerical routine
cannot certify its result.
"""
import argparse
from importlib import resources
import json
import math
import os
import sys

import jsonschema
import numpy as np

from . import bell
from .criteria import Tolerances, attribute_properties, classify, expectation_E_P
from .errors import IdententError, NumericalError, ValidationError
from .states import (
    Statistics,
    antisymmetrize_product,
    from_coefficients,
    reduced_density,
    schmidt_data,
    symmetrize_product,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_MODES = {"symmetrize": Statistics.BOSON, "antisymmetrize": Statistics.FERMION}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _schema():
    text = resources.files(__package__).joinpath("state_file.schema.json").read_text()
    return json.loads(text)


def _complex_list(values):
    return np.array([complex(re, im) for re, im in values], dtype=np.complex128)


def _pairs(vector):
    return [[float(z.real), float(z.imag)] for z in np.asarray(vector, dtype=np.complex128)]


def _matrix_pairs(matrix):
    return [_pairs(row) for row in np.asarray(matrix)]


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_state(path):
    """Parse and validate a state file."""
    doc = _read_json(path)
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "top level"
        raise ValidationError(f"{path}: {where}: {exc.message}") from None
    return state_from_document(doc)


def state_from_document(doc):
    n = doc["dimension"]
    statistics = Statistics(doc["statistics"])
    if "coefficients" in doc:
        rows = doc["coefficients"]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValidationError(f"coefficients must be a {n}x{n} array")
        return from_coefficients(np.array([_complex_list(r) for r in rows]), statistics)
    product = doc["product"]
    if _MODES[product["mode"]] is not statistics:
        raise ValidationError(f"mode {product['mode']!r} contradicts statistics {statistics.value!r}")
    phi, chi = _complex_list(product["phi"]), _complex_list(product["chi"])
    if phi.size != n or chi.size != n:
        raise ValidationError(f"product vectors must have {n} components")
    if statistics is Statistics.FERMION:
        return antisymmetrize_product(phi, chi)
    return symmetrize_product(phi, chi)


def parse_vector(text):
    """A vector given inline as JSON or as the path of a JSON file.

    Entries are ``[re, im]`` pairs or plain real numbers.
    """
    if os.path.exists(text):
        doc = _read_json(text)
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError:
            raise ValidationError(f"{text!r} is neither a file nor a JSON array") from None
    if not isinstance(doc, list) or not doc:
        raise ValidationError("vector must be a non-empty JSON array")
    out = []
    for entry in doc:
        if isinstance(entry, (int, float)) and not isinstance(entry, bool):
            out.append(complex(entry))
        elif (isinstance(entry, list) and len(entry) == 2
              and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
            out.append(complex(entry[0], entry[1]))
        else:
            raise ValidationError(f"bad vector entry {entry!r}; expected a number or [re, im]")
    return np.array(out, dtype=np.complex128)


def _tolerances(args):
    if args.tol is None:
        return Tolerances()
    if not (math.isfinite(args.tol) and args.tol > 0):
        raise ValidationError("--tol must be a positive number")
    return Tolerances.scaled(args.tol)


def _tolerance_report(tol):
    return {"fact_tol": tol.fact_tol, "rank_tol": tol.rank_tol, "classify_tol": tol.classify_tol}


def classification_report(state, tol):
    result = classify(state, tol.classify_tol, fact_tol=tol.fact_tol, rank_tol=tol.rank_tol)
    data = result.schmidt
    witness = None
    if result.witness is not None:
        witness = {"phi": _pairs(result.witness[0]), "chi": _pairs(result.witness[1])}
    return {
        "statistics": state.statistics.value,
        "dimension": state.dim,
        "verdict": result.verdict.value,
        "subcase": result.subcase.value,
        "slater_or_schmidt_number": result.slater_or_schmidt_number,
        "coefficients": [float(x) for x in data.coefficients[:data.count]],
        "entropy": result.entropy,
        "witness": witness,
        "tolerances": _tolerance_report(tol),
        "residuals": {"reconstruction": data.residual, "unitarity_defect": data.unitarity_defect},
    }


def _cmd_classify(args):
    return classification_report(load_state(args.state), _tolerances(args))


def _cmd_decompose(args):
    state = load_state(args.state)
    tol = _tolerances(args)
    data = schmidt_data(state, fact_tol=tol.fact_tol, rank_tol=tol.rank_tol)
    return {
        "statistics": state.statistics.value,
        "dimension": state.dim,
        "count": data.count,
        "coefficients": [float(x) for x in data.coefficients],
        "basis": _matrix_pairs(data.basis),
        "residual": data.residual,
        "unitarity_defect": data.unitarity_defect,
        "tolerances": _tolerance_report(tol),
    }


def _property_entry(report):
    return {"projector_state": _pairs(report.projector_state),
            "e_p_value": report.e_p_value, "pp_value": report.pp_value}


def _cmd_properties(args):
    state = load_state(args.state)
    tol = _tolerances(args)
    if args.projector is not None:
        p = parse_vector(args.projector)
        return _property_entry(expectation_E_P(state, p, exclusive=args.exclusive))
    witness = attribute_properties(state, tol.classify_tol)
    if witness is None:
        return {"verdict": "entangled", "witness": None}
    return {
        "verdict": "non-entangled",
        "witness": [_property_entry(expectation_E_P(state, w, exclusive=args.exclusive))
                    for w in witness],
    }


def _parse_setting(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise ValidationError("--setting needs four comma-separated angles in degrees")
    try:
        angles = [float(p) for p in parts]
    except ValueError:
        raise ValidationError(f"--setting: cannot parse {text!r} as angles") from None
    if not all(math.isfinite(a) for a in angles):
        raise ValidationError("--setting angles must be finite")
    return angles


def _direction_entry(d):
    return [d.x, d.y, d.z]


def _cmd_bell(args):
    state = bell.build_example_state(args.kind)
    if args.scan is not None:
        if args.scan < 4:
            raise ValidationError("--scan needs at least 4 grid steps")
        value, setting = bell.chsh_scan(state, args.scan, sphere=args.sphere)
        out = {"state": args.kind, "grid_steps": args.scan, "sphere": args.sphere,
               "max_chsh": value,
               "argmax": {k: _direction_entry(getattr(setting, k)) for k in "abcd"}}
        if not args.sphere:
            out["argmax_angles_deg"] = list(setting.angles())
        out["violation"] = value > 2.0 + 1e-9
        return out
    angles = _parse_setting(args.setting)
    setting = bell.BellSetting.from_angles(*angles)
    s = setting
    corr = {
        "E(a,b)": bell.correlation(state, s.a, s.b),
        "E(a,c)": bell.correlation(state, s.a, s.c),
        "E(b,d)": bell.correlation(state, s.b, s.d),
        "E(c,d)": bell.correlation(state, s.c, s.d),
    }
    value = abs(corr["E(a,b)"] - corr["E(a,c)"]) + abs(corr["E(b,d)"] + corr["E(c,d)"])
    return {"state": args.kind, "setting_deg": angles, "correlations": corr,
            "chsh": value, "violation": value > 2.0 + 1e-9}


def _cmd_make_state(args):
    phi, chi = parse_vector(args.phi), parse_vector(args.chi)
    statistics = _MODES[args.mode]
    # build once so that invalid pairs are rejected before anything is written
    if statistics is Statistics.FERMION:
        antisymmetrize_product(phi, chi)
    else:
        symmetrize_product(phi, chi)
    doc = {"dimension": int(phi.size), "statistics": statistics.value,
           "product": {"phi": _pairs(phi), "chi": _pairs(chi), "mode": args.mode}}
    text = json.dumps(doc, indent=2) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ValidationError(f"cannot write {args.output}: {exc.strerror}") from None
    return None


def _format_text(value, indent=""):
    lines = []
    for key, item in value.items():
        if isinstance(item, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_format_text(item, indent + "  "))
        elif isinstance(item, list) and item and isinstance(item[0], dict):
            lines.append(f"{indent}{key}:")
            for k, entry in enumerate(item):
                lines.append(f"{indent}  [{k}]")
                lines.extend(_format_text(entry, indent + "    "))
        else:
            lines.append(f"{indent}{key}: {json.dumps(item)}")
    return lines


def build_parser():
    parser = _Parser(prog="identent",
                     description="Entanglement analysis of two identical particles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def state_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("state", help="state file (JSON)")
        p.add_argument("--tol", type=float, default=None,
                       help="classification tolerance; scales the whole tolerance bundle")
        p.add_argument("--format", choices=("json", "text"), default="json")
        return p

    state_command("classify", "entangled or not, with Slater/Schmidt data and entropy")
    state_command("decompose", "Slater or Schmidt decomposition with residuals")
    p = state_command("properties", "expectation of the property operator E_P")
    p.add_argument("--projector", help="vector spanning P (inline JSON or file)")
    p.add_argument("--exclusive", action="store_true",
                   help="drop the P(x)P term (exactly one particle in p)")

    p = sub.add_parser("bell", help="spin correlations and CHSH value of an example state")
    p.add_argument("kind", choices=[k.value for k in bell.ExampleState])
    group = p.add_mutually_exclusive_group()
    group.add_argument("--scan", type=int, metavar="N", help="grid steps per direction")
    group.add_argument("--setting", default="0,45,135,90", metavar="a,b,c,d",
                       help="angles in degrees in the x-z plane (default: %(default)s)")
    p.add_argument("--sphere", action="store_true", help="scan the full sphere (slow)")
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("make-state", help="write a state file for an (anti)symmetrized product")
    p.add_argument("--mode", choices=tuple(_MODES), required=True)
    p.add_argument("--phi", required=True, help="vector (inline JSON or file)")
    p.add_argument("--chi", required=True, help="vector (inline JSON or file)")
    p.add_argument("-o", "--output", required=True, help="output path, '-' for stdout")
    return parser


_COMMANDS = {
    "classify": _cmd_classify,
    "decompose": _cmd_decompose,
    "properties": _cmd_properties,
    "bell": _cmd_bell,
    "make-state": _cmd_make_state,
}


def _diagnostic(message):
    text = " ".join(str(message).split())
    print(f"identent: error: {text}", file=sys.stderr)


def run(argv=None):
    """Execute one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _diagnostic(exc)
        return EXIT_INPUT
    except SystemExit as exc:
        # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        result = _COMMANDS[args.command](args)
    except NumericalError as exc:
        _diagnostic(exc)
        return EXIT_NUMERICAL
    except IdententError as exc:
        _diagnostic(exc)
        return EXIT_INPUT
    if result is not None:
        if getattr(args, "format", "json") == "text":
            sys.stdout.write("\n".join(_format_text(result)) + "\n")
        else:
            sys.stdout.write(json.dumps(result, indent=2) + "\n")
    return EXIT_OK


def main():
    return run(sys.argv[1:])
