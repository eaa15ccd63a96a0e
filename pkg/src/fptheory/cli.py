"""Command-line entry point.

Every subcommand prints one JSON document (or CSV for ``tube gen --format
csv``) to stdout. Exit status: 0 success, 1 failed verification, 2 bad
input. Rationals are serialized as ``"p/q"`` strings and infinity as
``"inf"``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import cycat, fincat, quiver, specmat, tube
from .errors import FPError

SCHEMA_NAMES = (
    "spec",
    "fpq",
    "fincat-fpdim",
    "fincat-bricks",
    "fincat-fpg",
    "fincat-ratio",
    "fincat-sigma-bound",
    "tube-gen",
    "tube-verify",
    "cy-fpcy",
    "cy-member",
    "cy-kodaira",
    "cy-growth",
    "cy-veronese",
    "cy-catalog",
    "classify-weights",
)


class InputError(Exception):
    pass


def load_schema(name: str) -> dict:
    """Shipped JSON schema for the output of subcommand ``name``."""
    if name not in SCHEMA_NAMES:
        raise KeyError(name)
    text = resources.files("fptheory").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path} is not valid UTF-8") from None


def _tol(text: str) -> Fraction:
    try:
        return specmat.as_tol(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid rational {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _bounds(prefix: str, b: specmat.SpectralBounds) -> dict:
    return {f"{prefix}_lo": specmat.format_ext(b.lo), f"{prefix}_hi": specmat.format_ext(b.hi)}


def _category(path: str) -> fincat.CategoryData:
    return fincat.CategoryData.from_json(_read(path))


def _object_list(data: fincat.CategoryData, text: str) -> tuple[int, ...]:
    """Comma-separated object names or indices."""
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if tok in data.objects:
            out.append(data.index(tok))
        elif tok.isdigit() and int(tok) < data.size:
            out.append(int(tok))
        else:
            raise InputError(f"unknown object {tok!r}")
    if not out:
        raise InputError("empty object set")
    return tuple(out)


# -- handlers ---------------------------------------------------------------------


def cmd_spec(args) -> dict:
    A = specmat.parse_matrix(_read(args.file))
    if A.is_finite():
        b = specmat.spectral_radius(A, args.tol)
    else:
        b = specmat.extended_spectral_radius(A, args.tol)
    out = {"n": A.n, "finite": A.is_finite()}
    out.update(_bounds("rho", b))
    return out


def cmd_fpq(args) -> dict:
    Q = quiver.parse_quiver(_read(args.file))
    out = _bounds("fpdim", quiver.fpdim_quiver(Q, args.tol))
    out.update(n_vertices=Q.n_vertices, n_arrows=Q.n_arrows)
    return out


def cmd_fincat_fpdim(args) -> dict:
    data = _category(args.file)
    b = fincat.fpdim(data, args.tol, power=args.power, flavor=args.flavor)
    out = _bounds("fpdim", b)
    out.update(power=args.power, flavor=args.flavor)
    return out


def cmd_fincat_bricks(args) -> dict:
    data = _category(args.file)
    sets = [s.names(data) for s in fincat.enumerate_object_sets(data, args.flavor, args.max_size, workers=args.workers)]
    return {"flavor": args.flavor, "count": len(sets), "sets": sets}


def cmd_fincat_fpg(args) -> dict:
    data = _category(args.file)

    def named(est: fincat.GrowthEstimate) -> dict:
        d = est.as_dict()
        if est.witness is not None:
            d["witness"] = [data.objects[i] for i in est.witness]
        return d

    return {
        "fpg": named(fincat.fpg_estimate(data, args.tol, args.flavor)),
        "lower_fpg": named(fincat.lower_fpg_estimate(data, args.tol, args.flavor)),
        "fpv": named(fincat.fpv_estimate(data, args.tol, args.flavor)),
    }


def cmd_fincat_ratio(args) -> dict:
    data = _category(args.file)
    idx = _object_list(data, args.set)
    out = _bounds("rho", fincat.ratio_spectral_radius(data, idx, args.power, args.tol))
    out.update(set=[data.objects[i] for i in idx], power=args.power)
    return out


def cmd_fincat_sigma_bound(args) -> dict:
    data = _category(args.file)
    blocks = [_object_list(data, b) for b in args.blocks.split(";") if b.strip()]
    b = fincat.sigma_decomposition_bound(data, blocks, args.power, args.tol)
    out = _bounds("bound", b)
    out.update(blocks=[[data.objects[i] for i in blk] for blk in blocks], power=args.power)
    return out


def _tube_matrices(r: int) -> dict:
    model = tube.build_tube_model(r)
    return {
        "r": r,
        "objects": [str(X) for X in model.objects],
        "orientation": "entry [I][J] = dim Hom(X_J, X_I)",
        "hom": [[int(v) for v in row] for row in model.hom.rows],
        "ext": [[int(v) for v in row] for row in model.ext.rows],
        "F": [[int(v) for v in row] for row in model.F.rows],
        "G": [[int(v) for v in row] for row in model.G.rows],
    }


def cmd_tube_gen(args):
    doc = _tube_matrices(args.r)
    if args.format == "json":
        return doc
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for key in ("hom", "ext", "F", "G"):
        writer.writerow([f"# {key}"])
        writer.writerow([""] + doc["objects"])
        for name, row in zip(doc["objects"], doc[key]):
            writer.writerow([name] + row)
    return buf.getvalue()


def cmd_tube_verify(args):
    report = tube.verify_tube(args.r, args.tol, workers=args.workers)
    return report.as_dict(), (0 if report.passed else 1)


def cmd_cy_fpcy(args) -> dict:
    model = cycat.FractionalCYModel(args.a, args.b, args.w, not args.no_atomic)
    a, b = model.reduced
    return {"a": args.a, "b": args.b, "reduced": [a, b], "fpcy": str(cycat.fpcy_fractional(model))}


def cmd_cy_member(args) -> dict:
    model = cycat.FractionalCYModel(args.a, args.b, args.w, not args.no_atomic)
    verdict = cycat.spectrum_membership(model, cycat.SpectrumQuery(args.m, args.n))
    return {"m": args.m, "n": args.n, "membership": verdict.value}


def cmd_cy_kodaira(args) -> dict:
    kappa, kappa_inv = cycat.fp_kodaira_gorenstein(args.d, args.ell, args.gk)
    return {"fpkappa": cycat.format_value(kappa), "fpkappa_inv": cycat.format_value(kappa_inv)}


def _series(args) -> cycat.RationalSeries:
    return cycat.RationalSeries.parse(args.num, args.den)


def cmd_cy_growth(args) -> dict:
    H = _series(args)
    g = cycat.hilbert_growth(H, args.n_check)
    return {
        "series": str(H),
        "pole_order": H.pole_order_at_one(),
        "growth": cycat.format_value(g),
    }


def cmd_cy_veronese(args) -> dict:
    V = cycat.veronese_series(_series(args), args.s)
    return {"s": args.s, "numerator": list(V.numerator), "denominator": list(V.denominator), "series": str(V)}


def cmd_cy_catalog(args) -> dict:
    entries = cycat.catalog_lookup(args.key)
    return {"descriptor": args.key, "entries": [e.as_dict() for e in entries]}


def cmd_classify_weights(args) -> dict:
    try:
        weights = [int(w) for w in args.weights.split(",") if w.strip()]
    except ValueError:
        raise InputError(f"weights must be comma-separated integers, got {args.weights!r}") from None
    return {"class": quiver.classify_weights(weights).value}


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fptheory", description="Exact Frobenius-Perron invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_tol(sp):
        sp.add_argument("--tol", type=_tol, default=specmat.DEFAULT_TOL, help="certification width (rational)")
        return sp

    def handler(sp, fn, schema):
        sp.set_defaults(handler=fn, schema=schema)
        return sp

    sp = with_tol(sub.add_parser("spec", help="certified spectral radius of a matrix file"))
    sp.add_argument("file")
    handler(sp, cmd_spec, "spec")

    sp = with_tol(sub.add_parser("fpq", help="fpdim of a quiver file"))
    sp.add_argument("file")
    handler(sp, cmd_fpq, "fpq")

    fc = sub.add_parser("fincat", help="invariants of a finite Hom table (JSON)").add_subparsers(
        dest="fincat_command", required=True
    )
    flavors = [f.value for f in fincat.Flavor]

    sp = with_tol(fc.add_parser("fpdim"))
    sp.add_argument("file")
    sp.add_argument("--power", type=int, default=1)
    sp.add_argument("--flavor", choices=flavors, default="brick")
    handler(sp, cmd_fincat_fpdim, "fincat-fpdim")

    sp = fc.add_parser("bricks")
    sp.add_argument("file")
    sp.add_argument("--max-size", type=_positive_int, default=None)
    sp.add_argument("--flavor", choices=flavors, default="brick")
    sp.add_argument("--workers", type=_positive_int, default=None)
    handler(sp, cmd_fincat_bricks, "fincat-bricks")

    sp = with_tol(fc.add_parser("fpg"))
    sp.add_argument("file")
    sp.add_argument("--flavor", choices=flavors, default="brick")
    handler(sp, cmd_fincat_fpg, "fincat-fpg")

    sp = with_tol(fc.add_parser("ratio"))
    sp.add_argument("file")
    sp.add_argument("--set", required=True, help="comma-separated object names or indices")
    sp.add_argument("--power", type=int, default=1)
    handler(sp, cmd_fincat_ratio, "fincat-ratio")

    sp = with_tol(fc.add_parser("sigma-bound"))
    sp.add_argument("file")
    sp.add_argument("--blocks", required=True, help="blocks separated by ';', objects by ','")
    sp.add_argument("--power", type=_positive_int, default=1)
    handler(sp, cmd_fincat_sigma_bound, "fincat-sigma-bound")

    tb = sub.add_parser("tube", help="standard stable tube of rank r").add_subparsers(
        dest="tube_command", required=True
    )
    sp = tb.add_parser("gen")
    sp.add_argument("-r", type=_positive_int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    handler(sp, cmd_tube_gen, "tube-gen")

    sp = with_tol(tb.add_parser("verify"))
    sp.add_argument("-r", type=_positive_int, required=True)
    sp.add_argument("--workers", type=_positive_int, default=None)
    handler(sp, cmd_tube_verify, "tube-verify")

    cy = sub.add_parser("cy", help="Calabi-Yau and Kodaira formulas").add_subparsers(dest="cy_command", required=True)

    def model_args(sp):
        sp.add_argument("--a", type=int, required=True)
        sp.add_argument("--b", type=_positive_int, required=True)
        sp.add_argument("--w", type=_positive_int, default=1)
        sp.add_argument("--no-atomic", action="store_true")

    sp = cy.add_parser("fpcy")
    model_args(sp)
    handler(sp, cmd_cy_fpcy, "cy-fpcy")

    sp = cy.add_parser("member")
    model_args(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    handler(sp, cmd_cy_member, "cy-member")

    sp = cy.add_parser("kodaira")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--gk", type=_rational, required=True)
    handler(sp, cmd_cy_kodaira, "cy-kodaira")

    sp = cy.add_parser("growth")
    sp.add_argument("--num", required=True)
    sp.add_argument("--den", required=True)
    sp.add_argument("--n-check", type=_positive_int, default=2000)
    handler(sp, cmd_cy_growth, "cy-growth")

    sp = cy.add_parser("veronese")
    sp.add_argument("--num", required=True)
    sp.add_argument("--den", required=True)
    sp.add_argument("-s", type=_positive_int, required=True)
    handler(sp, cmd_cy_veronese, "cy-veronese")

    sp = cy.add_parser("catalog")
    sp.add_argument("key")
    handler(sp, cmd_cy_catalog, "cy-catalog")

    sp = sub.add_parser("classify-weights", help="domestic / tubular / wild")
    sp.add_argument("weights", help="comma-separated weights, e.g. 2,3,6")
    handler(sp, cmd_classify_weights, "classify-weights")
    return p


def _emit(doc, stream) -> None:
    if isinstance(doc, str):
        stream.write(doc)
    else:
        stream.write(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.handler(args)
    except (FPError, InputError, ValueError, KeyError, IndexError) as exc:
        msg = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"fptheory: error: {msg}", file=stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _emit(result, stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
