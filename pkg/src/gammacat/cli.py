"""Command-line driver.

Exit codes: 0 success / property holds, 1 input valid but property fails,
2 malformed input or I/O error, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

import numpy as np

from gammacat import io
from gammacat.classify import verify_omega
from gammacat.cochain import is_cocycle3
from gammacat.crossed import build_crossed_product, verify_crossed_product
from gammacat.errors import CapExceeded, GammacatError, NotACocycle, ShapeError, ValidationError, XiMismatch
from gammacat.factorset import (
    are_cohomologous_factor_sets,
    factor_set_from_cocycle,
    induce_cocycle,
    strictify,
    validate_factor_set,
)
from gammacat.grcat import build_gr_category
from gammacat.homology import DEFAULT_CAP, compute_h3
from gammacat.report import Report

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED, EXIT_CAP = 0, 1, 2, 3


class _Malformed(Exception):
    """Raised while reading inputs; always maps to exit 2."""


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise _Malformed(f"cannot read {path}: {e.strerror or e}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise _Malformed(f"{path}: invalid JSON ({e})") from None


def _load(what, fn, *args):
    try:
        return fn(*args)
    except _Malformed:
        raise
    except GammacatError as e:
        raise _Malformed(f"{what}: {type(e).__name__}: {e}") from None
    except (TypeError, ValueError, KeyError, IndexError, OverflowError) as e:
        raise _Malformed(f"{what}: {type(e).__name__}: {e}") from None


def _module(path):
    return _load(path, io.module_from_json, _read(path))


# ---------------------------------------------------------------- text rendering


def _fmt_witness(w):
    return "none" if w is None else json.dumps(w)


def _report_text(rep: dict, title: str) -> str:
    lines = [title]
    for c in rep["checks"]:
        lines.append(f"  {c['name']}: {'pass' if c['pass'] else 'FAIL'}  witness: {_fmt_witness(c['witness'])}")
    lines.append(f"result: {'pass' if all(c['pass'] for c in rep['checks']) else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _h3_text(doc):
    lines = [f"H3 order: {doc['order']}", f"invariant factors: {doc['invariant_factors']}"]
    reps = doc.get("representatives")
    lines.append(f"representatives: {'not computed' if reps is None else len(reps)}")
    return "\n".join(lines) + "\n"


def _generic_text(doc, indent=0):
    pad = "  " * indent
    lines = []
    for k in sorted(doc):
        v = doc[k]
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_generic_text(v, indent + 1).rstrip("\n"))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- verbs


def _cmd_validate(args):
    doc = _read(args.inputs[0])
    try:
        em = io.module_from_json(doc)
    except ShapeError as e:
        raise _Malformed(f"{args.inputs[0]}: {e}") from None
    except ValidationError as e:
        rep = Report().add(f"module:{type(e).__name__}", False, e.witness)
        return EXIT_FAIL, rep.to_dict(), lambda d: _report_text(d, "module validation")
    except (TypeError, ValueError, KeyError, IndexError, OverflowError) as e:
        raise _Malformed(f"{args.inputs[0]}: {type(e).__name__}: {e}") from None
    rep = Report().add("module", True)
    return EXIT_OK, rep.to_dict(), lambda d: _report_text(d, "module validation")


def _cmd_h3(args):
    em = _module(args.inputs[0])
    res = compute_h3(em, method=args.method, cap=args.cap)
    return EXIT_OK, res.to_dict(), _h3_text


def _cmd_cocycle_check(args):
    em = _module(args.inputs[0])
    h = _load(args.inputs[1], io.cochain_from_json, em, _read(args.inputs[1]), 3)
    rep = is_cocycle3(h)
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep.to_dict(), lambda d: _report_text(d, "cocycle check")


def _cmd_factorset_build(args):
    em = _module(args.inputs[0])
    h = _load(args.inputs[1], io.cochain_from_json, em, _read(args.inputs[1]), 3)
    rep = is_cocycle3(h)
    if not rep.ok:
        return EXIT_FAIL, rep.to_dict(), lambda d: _report_text(d, "not a cocycle")
    base = build_gr_category(em, h.h_ppp)
    fs = factor_set_from_cocycle(base, em, h)
    return EXIT_OK, io.factor_set_to_json(fs), _generic_text


def _load_fs(em, path):
    return _load(path, io.factor_set_from_json, em, _read(path))


def _cmd_factorset_induce(args):
    em = _module(args.inputs[0])
    fs = _load_fs(em, args.inputs[1])
    rep = validate_factor_set(fs)
    if not rep.ok:
        return EXIT_FAIL, rep.to_dict(), lambda d: _report_text(d, "invalid factor set")
    if not fs.enough_strict:
        rep = Report().add("enough_strict", False, [int(i) for i in np.argwhere(fs.c.any(-1))[0]])
        return EXIT_FAIL, rep.to_dict(), lambda d: _report_text(d, "factor set is not enough strict")
    return EXIT_OK, io.cochain_to_json(induce_cocycle(fs)), _generic_text


def _cmd_factorset_strictify(args):
    em = _module(args.inputs[0])
    fs = _load_fs(em, args.inputs[1])
    rep = validate_factor_set(fs)
    if not rep.ok:
        return EXIT_FAIL, rep.to_dict(), lambda d: _report_text(d, "invalid factor set")
    out, w = strictify(fs)
    doc = {"factor_set": io.factor_set_to_json(out), "witness": io.witness_to_json(w)}
    return EXIT_OK, doc, _generic_text


def _cmd_cohomologous(args):
    em = _module(args.inputs[0])
    fs1, fs2 = _load_fs(em, args.inputs[1]), _load_fs(em, args.inputs[2])
    for name, fs in (("first", fs1), ("second", fs2)):
        rep = validate_factor_set(fs)
        if not rep.ok:
            return EXIT_FAIL, rep.to_dict(), lambda d, n=name: _report_text(d, f"{n} factor set is invalid")
    if fs1.base != fs2.base:
        return EXIT_FAIL, {"cohomologous": False, "witness": None}, _generic_text
    w = are_cohomologous_factor_sets(fs1, fs2, cap=args.cap)
    doc = {"cohomologous": w is not None, "witness": None if w is None else io.witness_to_json(w)}
    text = lambda d: f"cohomologous: {'yes' if d['cohomologous'] else 'no'}\nwitness: " + (
        "none" if d["witness"] is None else json.dumps(d["witness"]["u"])
    ) + "\n"
    return (EXIT_OK if w is not None else EXIT_FAIL), doc, text


def _cmd_crossed_verify(args):
    em = _module(args.inputs[0])
    fs = _load_fs(em, args.inputs[1])
    if not fs.enough_strict:
        fs = strictify(fs)[0]
    rep = verify_crossed_product(build_crossed_product(fs))
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep.to_dict(), lambda d: _report_text(d, "crossed product")


def _cmd_classify(args):
    em = _module(args.inputs[0])
    if len(args.inputs) > 1:
        xi = _load(args.inputs[1], io.xi_from_json, em, _read(args.inputs[1]))
    else:
        xi = np.zeros((em.n, em.n, em.n, em.k), np.int64)
    base = build_gr_category(em, xi)
    rep = verify_omega(em, base, cap=args.cap)
    doc = rep.to_dict()

    def text(d):
        lines = [
            f"cocycles: {d['cocycle_count']}",
            f"cohomology classes: {d['cohomology_class_count']}",
            f"factor-set classes: {d['factor_set_class_count']}",
            f"bijection verified: {str(d['bijection_verified']).lower()}",
            "class  factor-set-class  fingerprint",
        ]
        lines += [f"{p['cohomology_class']:>5}  {p['factor_set_class']:>16}  {p['fingerprint']}" for p in d["pairing"]]
        return "\n".join(lines) + "\n"

    return (EXIT_OK if rep.bijection_verified else EXIT_FAIL), doc, text


VERBS = {
    "validate": (_cmd_validate, ["module"], "validate an equivariant module"),
    "h3": (_cmd_h3, ["module"], "compute H^3 of the module"),
    "cocycle-check": (_cmd_cocycle_check, ["module", "cochain"], "check the cocycle conditions"),
    "factorset-build": (_cmd_factorset_build, ["module", "cochain"], "factor set of a 3-cocycle"),
    "factorset-induce": (_cmd_factorset_induce, ["module", "factorset"], "3-cocycle of an enough-strict factor set"),
    "factorset-strictify": (_cmd_factorset_strictify, ["module", "factorset"], "strictify a factor set"),
    "cohomologous": (_cmd_cohomologous, ["module", "factorset1", "factorset2"], "decide cohomologousness"),
    "crossed-verify": (_cmd_crossed_verify, ["module", "factorset"], "verify the crossed product axioms"),
    "classify": (_cmd_classify, ["module"], "verify the classification bijection (optional xi file)"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gammacat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, (_, inputs, help_) in VERBS.items():
        sp = sub.add_parser(verb, help=help_)
        nargs = "+" if verb == "classify" else len(inputs)
        sp.add_argument("inputs", nargs=nargs, metavar="|".join(inputs) if verb != "classify" else "module [xi]")
        sp.add_argument("--method", choices=["snf", "enum"], default="snf")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
        sp.add_argument("--output", choices=["json", "text"], default="json")
    return p


def _emit(doc, render: Callable, fmt: str, out):
    out.write(io.dumps(doc) if fmt == "json" else render(doc))


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_MALFORMED
    if args.verb == "classify" and len(args.inputs) > 2:
        parser.print_usage(sys.stderr)
        return EXIT_MALFORMED
    fn = VERBS[args.verb][0]
    err_text = lambda d: f"error: {d['error']}: {d['message']}\nwitness: {_fmt_witness(d['witness'])}\n"
    try:
        code, doc, render = fn(args)
    except _Malformed as e:
        code, doc, render = EXIT_MALFORMED, {"error": "MalformedInput", "message": str(e), "witness": None}, err_text
    except CapExceeded as e:
        code, doc, render = EXIT_CAP, _err(e), err_text
    except (ShapeError, NotACocycle, XiMismatch) as e:
        # shape problems are malformed input; inconsistent cocycle data too
        code = EXIT_MALFORMED if isinstance(e, ShapeError) else EXIT_FAIL
        doc, render = _err(e), err_text
    except ValidationError as e:
        code, doc, render = EXIT_FAIL, _err(e), err_text
    _emit(doc, render, args.output, out)
    return code


def _err(e: GammacatError) -> dict:
    from gammacat.report import _plain

    return {"error": type(e).__name__, "message": str(e), "witness": _plain(e.witness)}


if __name__ == "__main__":
    sys.exit(main())
