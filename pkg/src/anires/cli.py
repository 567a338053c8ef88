"""Command-line interface.

Every command writes one deterministic CSV (or JSON) file: rows are computed
in a thread pool but always emitted in sorted grid order, and floats are
rendered with shortest round-trip repr, so identical configurations produce
byte-identical output.  Couplings are entered as g/4 (every figure and table
is parameterized that way); --raw-g switches the flag value to raw g.

Exit status is 0 only if every requested grid point evaluated successfully;
failures are listed on stderr and flip the status to 1.

Environment: ANIRES_QUAD_TOL overrides the default quadrature tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence

from . import benderwu, model, qm, vpt
from .borel import approximant_to_json, build_approximant
from .quadrature import QuadratureSpec
from .series import local_exponent

_CROSSOVER_NOTE = (
    "note: k_cross is the first grid point whose incoming local slope has "
    "crossed -3/4 (midpoint convention of this package)"
)


def _quad_spec(tol: Optional[float]) -> QuadratureSpec:
    env = os.environ.get("ANIRES_QUAD_TOL")
    if tol is None and env is not None:
        tol = float(env)
    if tol is None:
        return QuadratureSpec()
    return QuadratureSpec(abs_tol=tol, rel_tol=tol, max_refinements=12)


def _parse_range(text: str) -> List[Fraction]:
    """Parse 'start:stop:step' into an inclusive exact grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
    start, stop, step = (Fraction(p) for p in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("step must be positive")
    if stop < start:
        raise argparse.ArgumentTypeError("empty range")
    out = []
    x = start
    while x <= stop:
        out.append(x)
        x += step
    return out


def _fraction_decimal(value: Fraction, digits: int = 40) -> str:
    """Decimal expansion of a rational, up to `digits` significant digits."""
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    ipart, rem = divmod(num, den)
    int_digits = len(str(ipart)) if ipart else 0
    frac_digits = max(digits - int_digits, 0)
    scaled = rem * 10**frac_digits
    frac, tail = divmod(scaled, den)
    frac_str = str(frac).rjust(frac_digits, "0") if frac_digits else ""
    if tail == 0:
        frac_str = frac_str.rstrip("0")
    return f"{sign}{ipart}" + (f".{frac_str}" if frac_str else "")


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_rows(path: Optional[str], header: Sequence[str], rows: Sequence[Sequence],
                fmt: str) -> None:
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        if fmt == "csv":
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        else:
            doc = [dict(zip(header, [(_fmt(v) if isinstance(v, Fraction) else v) for v in row]))
                   for row in rows]
            json.dump(doc, out, indent=2)
            out.write("\n")
    finally:
        if path:
            out.close()


def _pool_map(fn, items):
    """Evaluate fn over items in a worker pool; results keep input order."""
    if len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
        return list(pool.map(fn, items))


def _g4_value(args) -> Fraction:
    g4 = Fraction(args.g4)
    if args.raw_g:
        g4 = g4 / 4
    return g4


def _delta_grid(args) -> List[Fraction]:
    if args.delta_range:
        return _parse_range(args.delta_range)
    if args.delta is None:
        raise SystemExit("need --delta or --delta-range")
    return [Fraction(args.delta)]


# ---------------------------------------------------------------- commands


def cmd_model_coeffs(args) -> int:
    mc = model.ModelCoefficients.build(args.kmax)
    rows = [
        (k, n, str(v.numerator), str(v.denominator), _fraction_decimal(v))
        for (k, n), v in mc.table.items()
    ]
    _write_rows(args.out, ["k", "n", "numerator", "denominator", "decimal"], rows, args.format)
    return 0


def cmd_qm_coeffs(args) -> int:
    state = benderwu.build(args.kmax)
    rows = [
        (k, n, str(v.numerator), str(v.denominator), _fraction_decimal(v))
        for (k, n), v in state.energy.items()
    ]
    _write_rows(args.out, ["k", "n", "numerator", "denominator", "decimal"], rows, args.format)
    return 0


def cmd_model_eval(args) -> int:
    spec = _quad_spec(args.tol)
    g = 4.0 * float(_g4_value(args))
    deltas = _delta_grid(args)

    def one(d: Fraction):
        return model.z_reference(g, float(d), spec)

    values = _pool_map(one, deltas)
    rows = [(float(d), v) for d, v in zip(deltas, values)]
    _write_rows(args.out, ["delta", "z_reference"], rows, args.format)
    return 0


def cmd_model_crossover(args) -> int:
    if args.kmax < 16:
        raise SystemExit("crossover scan needs --kmax >= 16")
    delta = float(Fraction(args.delta))
    ks = []
    k = 16
    while k <= args.kmax:
        ks.append(k)
        k *= 2
    column = [model.z_coeff_delta_scaled(k, delta) for k in ks]
    report = local_exponent(column, 4.0, ks)
    rows = []
    for i, k in enumerate(report.k_grid):
        beta = report.beta_local[i - 1] if i >= 1 else ""
        rows.append((k, report.f_values[i], beta))
    _write_rows(args.out, ["k", "f", "beta_local"], rows, args.format)
    print(f"k_cross={report.k_cross}; {_CROSSOVER_NOTE}", file=sys.stderr)
    return 0


def cmd_model_resum(args) -> int:
    spec = _quad_spec(args.tol)
    g = 4.0 * float(_g4_value(args))
    N = args.order
    deltas = _delta_grid(args)
    mc = model.ModelCoefficients.build(N)
    approx = build_approximant(mc.table, N, model.model_large_order_params())
    if args.dump_approximant:
        with open(args.dump_approximant, "w") as fh:
            fh.write(approximant_to_json(approx))

    failures: List[str] = []

    def one(d: Fraction):
        df = float(d)
        try:
            zn = approx.resum(g, df, spec)
            zr = model.z_reference(g, df, spec)
            return (df, zn, zr, abs(zn - zr))
        except Exception as exc:  # propagate per-point failure to stderr
            failures.append(f"delta={df}: {exc}")
            return None

    results = [r for r in _pool_map(one, deltas) if r is not None]
    _write_rows(args.out, ["delta", "z_resummed", "z_reference", "abs_error"],
                sorted(results), args.format)
    for line in failures:
        print(f"FAILED {line}", file=sys.stderr)
    return 1 if failures else 0


def cmd_qm_resum(args) -> int:
    spec = _quad_spec(args.tol)
    gbar = float(_g4_value(args))
    N = args.order
    sigma = Fraction(args.sigma)
    deltas = _delta_grid(args)
    state = benderwu.build(max(N, args.vpt_baseline or 0))
    approx = qm.qm_approximant(state.energy, N, sigma)
    if args.dump_approximant:
        with open(args.dump_approximant, "w") as fh:
            fh.write(approximant_to_json(approx))

    failures: List[str] = []

    def one(d: Fraction):
        try:
            e = approx.resum(gbar, 2.0 * float(d), spec)
            row = [float(d), e]
            if args.vpt_baseline:
                row.append(vpt.vpt_energy(state.energy, args.vpt_baseline,
                                          Fraction(args.g4), d).energy)
            return tuple(row)
        except Exception as exc:
            failures.append(f"delta={float(d)}: {exc}")
            return None

    header = ["delta", "e_resummed"] + (["vpt_baseline"] if args.vpt_baseline else [])
    results = [r for r in _pool_map(one, deltas) if r is not None]
    _write_rows(args.out, header, sorted(results), args.format)
    for line in failures:
        print(f"FAILED {line}", file=sys.stderr)
    return 1 if failures else 0


def cmd_vpt(args) -> int:
    orders = [int(s) for s in args.orders.split(",")]
    state = benderwu.build(max(orders))
    g4 = _g4_value(args)
    deltas = _delta_grid(args)
    selection = "min_omega" if args.min_omega else "min_w"
    rows = []
    for d in deltas:
        for k in orders:
            res = vpt.vpt_energy(state.energy, k, g4, d, selection=selection)
            rows.append((k, float(d), float(g4), res.omega, res.energy, res.kind))
    _write_rows(args.out, ["k", "delta", "g_over_4", "omega_k", "W_k", "candidate_kind"],
                sorted(rows), args.format)
    return 0


def cmd_benderwu(args) -> int:
    state = benderwu.build(args.kmax)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        state.energy.write_csv(out)
    finally:
        if args.out:
            out.close()
    return 0


def cmd_figures(args) -> int:
    which = args.which
    spec = _quad_spec(args.tol)
    if which in ("fig1", "fig2a", "fig2b"):
        cfg = {"fig1": ("1/100", 4096), "fig2a": ("1/10000", 8192), "fig2b": ("1", 4096)}
        delta, kmax = cfg[which]
        args.delta, args.kmax = delta, kmax
        return cmd_model_crossover(args)
    if which == "fig4":
        g = 4.0 * float(Fraction(args.g4 or "1/4"))
        deltas = _parse_range("-1:3/2:1/20")
        mc = model.ModelCoefficients.build(8)
        params = model.model_large_order_params()
        approxes = {N: build_approximant(mc.table, N, params) for N in (2, 4, 6, 8)}
        rows = []
        for d in deltas:
            df = float(d)
            row = [df] + [approxes[N].resum(g, df, spec) for N in (2, 4, 6, 8)]
            row.append(model.z_reference(g, df, spec))
            rows.append(tuple(row))
        _write_rows(args.out, ["delta", "z_N2", "z_N4", "z_N6", "z_N8", "z_reference"],
                    rows, args.format)
        return 0
    if which in ("fig5", "fig6", "fig8", "fig9"):
        gbar_default = {"fig5": "1/10", "fig6": "1", "fig8": "1/10", "fig9": "1"}[which]
        # fig8/fig9 are the larger-sigma refit of fig5/fig6
        sigma_default = "3" if which in ("fig5", "fig6") else "4"
        sigma = Fraction(args.sigma or sigma_default)
        gbar = Fraction(args.g4 or gbar_default)
        orders = (2, 4, 6) if which in ("fig8", "fig9") else (2, 4, 6, 8)
        deltas = _parse_range("-3/2:2:1/10")
        state = benderwu.build(12)
        approxes = {N: qm.qm_approximant(state.energy, N, sigma) for N in orders}
        rows = []
        for d in deltas:
            row = [float(d)]
            row += [approxes[N].resum(float(gbar), 2.0 * float(d), spec) for N in orders]
            row.append(vpt.vpt_energy(state.energy, 11, gbar, d).energy)
            rows.append(tuple(row))
        header = ["delta"] + [f"e_N{N}" for N in orders] + ["vpt_baseline"]
        _write_rows(args.out, header, rows, args.format)
        return 0
    if which == "fig7":
        gbar = Fraction(args.g4 or "1/10")
        state = benderwu.build(5)
        rows = []
        for ds in ("-3/2", "-1/2", "1/2", "3/2"):
            W = vpt.w_laurent(state.energy, 5, gbar, Fraction(ds))
            om = 0.8
            while om <= 2.0 + 1e-9:
                rows.append((float(Fraction(ds)), round(om, 4), W.evaluate(om)))
                om += 0.02
        _write_rows(args.out, ["delta", "omega", "W"], rows, args.format)
        return 0
    raise SystemExit(f"unknown figure {which!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anires",
        description="Anisotropic divergent-series resummation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, g4=False, delta=False, order=False, orders=False,
               sigma=False, kmax=None, tol=True):
        if g4:
            p.add_argument("--g4", help="coupling g/4 (exact decimal or fraction)")
            p.add_argument("--raw-g", action="store_true",
                           help="interpret --g4 as raw g instead of g/4")
        if delta:
            p.add_argument("--delta", help="anisotropy (exact decimal or fraction)")
            p.add_argument("--delta-range", help="grid start:stop:step")
        if order:
            p.add_argument("--order", type=int, default=8, help="resummation order N")
        if orders:
            p.add_argument("--orders", default="1,3,5,7,9,11",
                           help="comma-separated variational orders k")
        if sigma:
            p.add_argument("--sigma", default="3",
                           help="large-order growth parameter in g/4 (default 3)")
        if kmax is not None:
            p.add_argument("--kmax", type=int, default=kmax)
        if tol:
            p.add_argument("--tol", type=float, default=None,
                           help="quadrature tolerance (default 1e-12/1e-10)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("model-coeffs", help="exact model coefficient table")
    common(p, kmax=12, tol=False)
    p.set_defaults(fn=cmd_model_coeffs)

    p = sub.add_parser("model-eval", help="reference model integral on a grid")
    common(p, g4=True, delta=True)
    p.set_defaults(fn=cmd_model_eval)

    p = sub.add_parser("model-crossover", help="large-order crossover scan")
    common(p, delta=True, kmax=4096, tol=False)
    p.set_defaults(fn=cmd_model_crossover)

    p = sub.add_parser("model-resum", help="resummed model vs reference")
    common(p, g4=True, delta=True, order=True)
    p.add_argument("--dump-approximant", help="also write the approximant JSON here")
    p.set_defaults(fn=cmd_model_resum)

    p = sub.add_parser("qm-coeffs", help="exact oscillator energy coefficients")
    common(p, kmax=12, tol=False)
    p.set_defaults(fn=cmd_qm_coeffs)

    p = sub.add_parser("qm-resum", help="resummed oscillator ground-state energy")
    common(p, g4=True, delta=True, order=True, sigma=True)
    p.add_argument("--vpt-baseline", type=int, default=0,
                   help="add a variational baseline column at this order")
    p.add_argument("--dump-approximant", help="also write the approximant JSON here")
    p.set_defaults(fn=cmd_qm_resum)

    p = sub.add_parser("vpt", help="variational energies W_k(Omega_k)")
    common(p, g4=True, delta=True, orders=True, tol=False)
    p.add_argument("--min-omega", action="store_true",
                   help="select the smallest-Omega stationary point instead of min W")
    p.set_defaults(fn=cmd_vpt)

    p = sub.add_parser("benderwu", help="energy table CSV (fixture layout)")
    common(p, kmax=12, tol=False)
    p.set_defaults(fn=cmd_benderwu)

    p = sub.add_parser("figures", help="reproduce a figure's data as CSV")
    p.add_argument("--which", required=True,
                   choices=["fig1", "fig2a", "fig2b", "fig4", "fig5", "fig6",
                            "fig7", "fig8", "fig9"])
    common(p, g4=True)
    p.add_argument("--sigma", default=None,
                   help="growth parameter override (default 3; 4 for fig8/fig9)")
    p.set_defaults(fn=cmd_figures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
