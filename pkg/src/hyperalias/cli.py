"""Command-line front-end.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
"""
import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import aliasing, spectrum, tables
from .design import design_to_dict, flatten, surface_area, uniform_design
from .harmonics import HarmonicIndex, embed_arrays

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_design_args(p, required=True):
    p.add_argument("--d", type=int, required=required, help="sphere dimension")
    p.add_argument("--Q", type=_int_list, required=required, help="polar node counts, e.g. 4,4")
    p.add_argument("--M", type=int, required=required, help="azimuth half-count (2M points)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hyperalias", description="Aliasing of hyperspherical harmonic coefficients."
    )
    parser.add_argument("--config", help="flat key=value file mirroring the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("design", help="build a uniform sampling design")
    _add_design_args(p)
    p.add_argument("--format", choices=["json"], default="json")
    common(p)

    p = sub.add_parser("tau", help="evaluate the aliasing function for one pair")
    _add_design_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--m", type=_int_list, required=True)
    p.add_argument("--ell-target", type=int, required=True)
    p.add_argument("--m-target", type=_int_list, required=True)
    common(p)

    p = sub.add_parser("aliases", help="enumerate the aliases of one coefficient")
    _add_design_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--m", type=_int_list, required=True)
    p.add_argument("--s0-max", type=int, required=True)
    p.add_argument("--rule", choices=aliasing.RULES, default="exact")
    p.add_argument("--format", choices=["json", "csv", "table", "figure"], default="json")
    p.add_argument("--oracle", action="store_true", help="cross-check against a brute-force scan")
    p.add_argument("--zero-tol", type=float, default=aliasing.ZERO_TOL)
    p.add_argument("--tol", type=float, default=aliasing.ORACLE_TOL, help="oracle tolerance")
    common(p)

    p = sub.add_parser("fold", help="folding matrix and folded spectrum")
    _add_design_args(p)
    p.add_argument("--ell-max", type=int, required=True)
    p.add_argument("--s0-max", type=int, required=True)
    p.add_argument("--spectrum", help="JSON file: list of C_ell or {values, band_limit}")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    common(p)

    p = sub.add_parser("verify", help="band-limited exactness check on a random field")
    _add_design_args(p, required=False)
    p.add_argument("--L0", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10, help="coefficient tolerance")
    p.add_argument("--recon-tol", type=float, default=1e-9)
    p.add_argument("--check-N", action="store_true", help="only report the sample-size bound")
    common(p)

    p = sub.add_parser("tables", help="diff the printed alias tables against the oracle")
    p.add_argument("--format", choices=["text", "json"], default="text")
    common(p)
    return parser


def _read_config(path):
    args = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "yes", "on"):
                args.append(flag)
            elif value.lower() in ("false", "no", "off"):
                continue
            else:
                args.extend([flag, value])
    return args


def _expand_config(argv):
    """Insert config-file flags after the subcommand so explicit flags win."""
    argv = list(argv)
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a path")
    path = argv[i + 1]
    del argv[i:i + 2]
    extra = _read_config(path)
    commands = {"design", "tau", "aliases", "fold", "verify", "tables"}
    pos = next((k for k, a in enumerate(argv) if a in commands), None)
    if pos is None:
        raise UsageError("no subcommand given")
    return argv[: pos + 1] + extra + argv[pos + 1:]


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hyperalias-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, out)


def _design(args):
    if args.d is None or args.Q is None or args.M is None:
        raise UsageError("--d, --Q and --M are required")
    return uniform_design(args.d, args.Q, args.M)


def _index(ell, m, d):
    if len(m) != d - 1:
        raise UsageError(f"--m needs {d - 1} orders for d={d}")
    return HarmonicIndex(ell, tuple(m))


def cmd_design(args):
    design = _design(args)
    flat = flatten(design)
    total = float(np.sum(flat.weights * flat.f))
    print(
        f"N={design.size} weighted_sum={total:.15g} surface_area={surface_area(design.d):.15g}",
        file=sys.stderr,
    )
    _emit(json.dumps(design_to_dict(design), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_tau(args):
    design = _design(args)
    src = _index(args.ell, args.m, design.d)
    tgt = _index(args.ell_target, args.m_target, design.d)
    direct = aliasing.tau_direct(design, src, tgt)
    sep = aliasing.tau_separable(design, src, tgt)
    out = {
        "source": str(src),
        "target": str(tgt),
        "tau_direct": [direct.real, direct.imag],
        "tau_separable": [sep.real, sep.imag],
    }
    _emit(json.dumps(out) + "\n", args.out)
    return EXIT_OK


def _figure_csv(records, d):
    cols = ["ell"] + [f"m{j}" for j in range(1, d)] + ["class"]
    lines = [",".join(cols)]
    for rec in records:
        vals = [rec.target.ell, *rec.target.orders]
        lines.append(",".join(str(v) for v in vals) + "," + rec.location)
    return "\n".join(lines) + "\n"


def _table_rows(records, src, s0_max, Q):
    rows = {}
    for s0 in range(aliasing.d0_min(src.ell), s0_max + 1):
        if s0 >= 1:
            rows[s0] = {}
    for rec in records:
        label = aliasing.location_columns(rec, Q)
        rows.setdefault(rec.s0, {}).setdefault(label, []).append(rec.target)
    return {s0: {k: tuple(v) for k, v in row.items()} for s0, row in sorted(rows.items())}


def cmd_aliases(args):
    design = _design(args)
    src = _index(args.ell, args.m, design.d)
    records = aliasing.enumerate_aliases(src, design, args.s0_max, args.rule, args.zero_tol)
    if args.format == "json":
        report = aliasing.alias_report(src, design, args.s0_max, records, args.rule)
        text = aliasing.report_to_json(report, indent=2) + "\n"
    elif args.format == "csv":
        text = aliasing.report_to_csv(aliasing.alias_report(src, design, args.s0_max, records))
    elif args.format == "figure":
        text = _figure_csv(records, design.d)
    else:
        columns = tables.COLUMNS if design.d == 3 else ()
        text = tables.format_table(
            _table_rows(records, src, args.s0_max, design.Q), list(design.Q), design.M, columns
        )
    _emit(text, args.out)
    if args.oracle:
        res = aliasing.compare_with_oracle(src, design, args.s0_max, args.rule, args.tol)
        ok = not res["missing"] and not res["extra"] and res["max_intensity_error"] <= args.tol
        print(
            f"oracle: {'PASS' if ok else 'FAIL'} missing={[str(t) for t in res['missing']]} "
            f"extra={[str(t) for t in res['extra']]} "
            f"max_intensity_error={res['max_intensity_error']:.3e}",
            file=sys.stderr,
        )
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_fold(args):
    design = _design(args)
    matrix = spectrum.lambda_matrix(args.ell_max, args.s0_max, design)
    C = None
    if args.spectrum:
        try:
            with open(args.spectrum) as fh:
                C = spectrum.spectrum_from_json(fh.read())
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read spectrum {args.spectrum!r}: {exc}")
    folded = spectrum.fold_spectrum(matrix, C) if C is not None else None
    if args.format == "json":
        obj = spectrum.matrix_to_dict(matrix)
        if folded is not None:
            obj["folded"] = list(folded.values)
        text = json.dumps(obj, indent=2) + "\n"
    else:
        text = spectrum.matrix_to_csv(matrix)
        if folded is not None:
            text += "\n" + spectrum.spectrum_to_csv(folded, "C_folded")
    _emit(text, args.out)
    return EXIT_OK


def _predicted_coeffs(field, design, L0):
    """Aliased coefficients predicted from the enumerated aliases within the field's band."""
    out = {}
    for src in field.coefficients:
        ident = aliasing.eta(src, 0, (0,) * (design.d - 1), design)
        value = ident * field.coefficients[src]
        s0_max = (L0 - src.ell) // 2
        for rec in aliasing.enumerate_aliases(src, design, s0_max):
            if rec.target.ell <= L0:
                value += rec.intensity * field.coefficients[rec.target]
        out[src] = value
    return out


def cmd_verify(args):
    if args.L0 < 1:
        raise UsageError("--L0 must be >= 1")
    if args.check_N:
        d = args.d if args.d is not None else 2
        size = spectrum.check_sample_size(args.L0, d)
        _emit(
            f"L0={args.L0} d={d} Q={list(size.Q)} M={size.M} N={size.N} >= 2*L0^d={size.bound}\n",
            args.out,
        )
        return EXIT_OK
    design = _design(args)
    C = spectrum.PowerSpectrum((1.0,) * (args.L0 + 1), band_limit=args.L0)
    field = spectrum.synthesize_field(C, args.L0, design.d, args.seed)
    samples = spectrum.sample_field(field, design)
    approx = spectrum.aliased_coeffs(samples, design, args.L0)
    coef_err = max(abs(approx[k] - field.coefficients[k]) for k in approx)
    predicted = _predicted_coeffs(field, design, args.L0)
    pred_err = max(abs(approx[k] - predicted[k]) for k in approx)
    rng = np.random.default_rng(spectrum.replica_seed(args.seed, 1))
    theta = np.arccos(rng.uniform(-1.0, 1.0, (args.points, design.d - 1)))
    phi = rng.uniform(0.0, 2 * math.pi, args.points)
    recon = spectrum.reconstruct(samples, design, args.L0, embed_arrays(theta, phi))
    recon_err = float(np.max(np.abs(recon - field.evaluate(theta, phi))))
    ok = coef_err <= args.tol and recon_err <= args.recon_tol
    lines = [
        f"design d={design.d} Q={list(design.Q)} M={design.M} N={design.size}; field L0={args.L0} seed={args.seed}",
        f"max |a_tilde - a|            = {coef_err:.3e} (tol {args.tol:.1e})",
        f"max reconstruction error     = {recon_err:.3e} (tol {args.recon_tol:.1e})",
        f"max |a_tilde - alias model|  = {pred_err:.3e}",
        "PASS" if ok else "FAIL",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _fmt_diff(diff):
    if not diff:
        return ["    no differences"]
    out = []
    for s0, d in diff.items():
        parts = []
        for key in ("missing", "extra", "duplicates"):
            if d[key]:
                parts.append(f"{key}: " + ", ".join(str(t) for t in d[key]))
        if d["misplaced"]:
            parts.append(
                "misplaced: " + ", ".join(f"{t} printed in {p}, belongs in {r}" for t, p, r in d["misplaced"])
            )
        out.append(f"    s0={s0}: " + "; ".join(parts))
    return out


def cmd_tables(args):
    report = tables.compare_printed()
    if args.format == "json":
        def conv(v):
            if isinstance(v, dict):
                return {str(k): conv(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            if isinstance(v, HarmonicIndex):
                return str(v)
            return v
        _emit(json.dumps(conv(report), indent=2) + "\n", args.out)
        return EXIT_OK
    lines = []
    for e in report:
        (qh, mh), (qc, mc) = e["header"], e["caption"]
        lines.append(f"Table {e['table']} block {e['block']}: header Q={qh}, M={mh}; caption Q={qc}, M={mc}")
        if not e["consistent_parameters"]:
            lines.append("  header and caption disagree; both parameter pairs checked")
        for name in ("header", "caption"):
            key = f"vs_oracle_{name}"
            if key in e:
                lines.append(f"  printed vs oracle at {name} parameters:")
                lines.extend(_fmt_diff(e[key]))
                enum = e[f"enumeration_vs_oracle_{name}"]
                lines.append(f"  enumeration vs oracle at {name} parameters: {'agree' if not enum else 'DIFFER'}")
        lines.append(f"  best match: {e['best_match']} parameters")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


COMMANDS = {
    "design": cmd_design,
    "tau": cmd_tau,
    "aliases": cmd_aliases,
    "fold": cmd_fold,
    "verify": cmd_verify,
    "tables": cmd_tables,
}


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        argv = _expand_config(argv)
    except (UsageError, OSError) as exc:
        print(f"hyperalias: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"hyperalias: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
