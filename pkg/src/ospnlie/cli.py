"""Command-line front end.

    ospnlie solve --s 1 --J -1 --T 2
    ospnlie sweep --T-min 0.4 --T-max 5 --points 30 --out csv
    ospnlie hte --order 12 --out json
    ospnlie verify --suite all

A config file (``--config run.cfg``) holds ``key = value`` lines with ``#``
comments; keys are the long flag names, flags on the command line win.
Exit codes: 0 success, 2 usage, 3 non-convergence, 4 verification failure.
"""

from __future__ import annotations

import argparse
import io
import json
import re
import sys
from fractions import Fraction

from . import lattice, nlie, verify
from .errors import ConvergenceError, OspNlieError
from .hte import pade, run_hte

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4
CURVE_COLUMNS = ("T", "f", "S", "C_series", "C_pade", "C_nlie")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- formatting

def fmt_float(x) -> str:
    return f"{float(x):.17g}"


def fmt_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


_FLOAT_MARK = "\x00F"


def _mark_floats(obj):
    if isinstance(obj, float):
        return _FLOAT_MARK + fmt_float(obj)
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(v) for v in obj]
    return obj


def to_json(obj) -> str:
    """JSON with every float written at 17 significant digits."""
    text = json.dumps(_mark_floats(obj), indent=2)
    text = re.sub(r'"\\u0000F([^"]*)"', lambda m: _json_number(m.group(1)), text)
    return text + "\n"


def _json_number(tok: str) -> str:
    return {"nan": "NaN", "inf": "Infinity", "-inf": "-Infinity"}.get(tok, tok)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, Fraction):
        return fmt_fraction(v)
    return str(v)


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_cell(row.get(c)) for c in columns) + "\n")
    return buf.getvalue()


def to_text(record) -> str:
    return "".join(f"{k} = {_cell(v)}\n" for k, v in record.items())


def emit_curve(rows, fmt: str, columns=None) -> str:
    """Render T-curve rows (dicts keyed by CURVE_COLUMNS, missing keys allowed)."""
    columns = columns or [c for c in CURVE_COLUMNS if any(c in r for r in rows)]
    if fmt == "csv":
        return to_csv(columns, rows)
    if fmt == "json":
        return to_json({"columns": list(columns), "rows": [{c: r.get(c) for c in columns} for r in rows]})
    widths = [max(len(c), 24) for c in columns]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    for r in rows:
        lines.append("  ".join(_cell(r.get(c)).rjust(w) for c, w in zip(columns, widths)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- config

def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for num, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{num}: expected key = value")
            key, value = (x.strip() for x in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def _apply_config(sub: argparse.ArgumentParser, values: dict):
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in values.items():
        action = actions.get(key)
        if action is None or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r} for this command")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("+", "*"):
            defaults[key] = [action.type(x) if action.type else x for x in value.split()]
        else:
            # argparse applies ``type`` to string defaults
            defaults[key] = value
    sub.set_defaults(**defaults)


# ---------------------------------------------------------------- parser

def _degrees(text: str):
    m, _, n = text.partition("/")
    try:
        return int(m), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError("expected m/n, e.g. 6/6")


def _add_common(p):
    p.add_argument("--config", help="key = value file; command-line flags override it")
    p.add_argument("--out", choices=("json", "csv", "text"), default="text", help="output format")
    p.add_argument("--output", help="write to this file instead of stdout")


def _add_model(p, need_T=True):
    p.add_argument("--s", type=int, default=1, help="rank s, g = 2s+1 (default 1)")
    p.add_argument("--J", type=float, default=-1.0, help="coupling (default -1)")
    if need_T:
        p.add_argument("--T", type=float, required=True, help="temperature")


def _add_solver(p):
    d = nlie.SolverConfig()
    p.add_argument("--r", type=float, default=d.r, help=f"contour radius (default {d.r})")
    p.add_argument("--M", type=int, default=d.M, help=f"nodes per circle (default {d.M})")
    p.add_argument("--tol", type=float, default=d.tol, help=f"relative sup-norm change (default {d.tol})")
    p.add_argument("--max-iter", type=int, default=d.max_iter, help=f"(default {d.max_iter})")
    p.add_argument("--omega", type=float, default=d.omega, help=f"relaxation (default {d.omega})")
    p.add_argument("--init-scale", type=float, default=d.init_scale, help="start from scale * Q (default 1)")
    p.add_argument("--no-auto-relax", action="store_true", help="keep omega fixed")
    p.add_argument("--fixed-nodes", action="store_true", help="no adaptive node doubling")


def _add_grid(p):
    p.add_argument("--T-min", type=float, default=0.4)
    p.add_argument("--T-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=30, help="log-spaced temperatures (default 30)")
    p.add_argument("--order", type=int, default=12, help="series order (default 12)")
    p.add_argument("--pade", type=_degrees, default=(6, 6), help="Pade degrees m/n (default 6/6)")


def build_parser():
    parser = _Parser(prog="ospnlie", description="osp(1|2s) spin chain thermodynamics from a finite NLIE system")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = {}
    p["solve"] = subs.add_parser("solve", help="f, S, C at one temperature")
    _add_model(p["solve"])
    _add_solver(p["solve"])
    p["solve"].add_argument("--rel-step", type=float, default=1e-3, help="relative T step for derivatives")

    p["sweep"] = subs.add_parser("sweep", help="f, S, C over a log-spaced T grid")
    _add_model(p["sweep"], need_T=False)
    _add_solver(p["sweep"])
    _add_grid(p["sweep"])
    p["sweep"].add_argument("--rel-step", type=float, default=1e-3)
    p["sweep"].add_argument("--workers", type=int, default=1)

    p["specific-heat"] = subs.add_parser("specific-heat", help="series and Pade specific heat (s=1)")
    _add_model(p["specific-heat"], need_T=False)
    _add_grid(p["specific-heat"])

    p["hte"] = subs.add_parser("hte", help="exact high-temperature coefficients (s=1)")
    p["hte"].add_argument("--order", type=int, default=12)
    p["hte"].add_argument("--ansatz", action="store_true", help="also emit the a_n(v) families")

    p["finite-n"] = subs.add_parser("finite-n", help="finite Trotter number solve")
    _add_model(p["finite-n"])
    _add_solver(p["finite-n"])
    p["finite-n"].add_argument("--N", type=int, required=True, help="even Trotter number")
    p["finite-n"].add_argument("--L", type=int, help="also report the exact-diagonalization f at length L")

    p["verify"] = subs.add_parser("verify", help="oracle suites")
    p["verify"].add_argument("--suite", nargs="+", default=["all"], choices=list(verify.SUITES) + ["all"])

    for sub in p.values():
        _add_common(sub)
    return parser, p


def _solver_config(args) -> nlie.SolverConfig:
    if not 0 < args.r < 0.25:
        raise UsageError("contour radius must satisfy 0 < r < 1/4")
    if not 0 < args.omega <= 1:
        raise UsageError("omega must lie in (0, 1]")
    if args.tol <= 1e-15:
        raise UsageError("tolerance must exceed 1e-15")
    return nlie.SolverConfig(r=args.r, M=args.M, tol=args.tol, max_iter=args.max_iter, omega=args.omega,
                             auto_relax=not args.no_auto_relax, adaptive_nodes=not args.fixed_nodes,
                             init_scale=args.init_scale)


# ---------------------------------------------------------------- commands

def _series_columns(s, J, temps, order, degrees):
    if s != 1:
        return None
    res = run_hte(order)
    approx = pade([0] + res.specific_heat, *degrees)
    return [(res.specific_heat_value(t, J), approx(J / t)) for t in temps]


def _grid(args):
    if not 0 < args.T_min <= args.T_max or args.points < 1:
        raise UsageError("need 0 < T-min <= T-max and points >= 1")
    return [float(t) for t in nlie.log_grid(args.T_min, args.T_max, args.points)]


def cmd_solve(args):
    config = _solver_config(args)
    sol = nlie.solve_fixed_point(nlie.NlieParams(args.s, args.J, args.T), config, raise_on_failure=True)
    pt = nlie.thermo_point(args.s, args.J, args.T, config, args.rel_step)
    rec = {"s": args.s, "J": args.J, "T": args.T, "f": nlie.free_energy(sol), "S": pt.S, "C": pt.C,
           "iterations": sol.iterations, "residual": sol.change, "nodes": sol.nodes,
           "omega": sol.omega_used}
    return _record(rec, args.out)


def cmd_sweep(args):
    temps = _grid(args)
    pts = nlie.thermo_sweep(args.s, args.J, temps, _solver_config(args), args.rel_step, args.workers)
    series = _series_columns(args.s, args.J, temps, args.order, args.pade)
    rows = []
    for i, p in enumerate(pts):
        row = {"T": p.T, "f": p.f, "S": p.S, "C_nlie": p.C}
        if series:
            row["C_series"], row["C_pade"] = series[i]
        rows.append(row)
    return emit_curve(rows, args.out)


def cmd_specific_heat(args):
    if args.s != 1:
        raise UsageError("the high-temperature series is available for s = 1 only")
    temps = _grid(args)
    rows = [{"T": t, "C_series": cs, "C_pade": cp}
            for t, (cs, cp) in zip(temps, _series_columns(1, args.J, temps, args.order, args.pade))]
    return emit_curve(rows, args.out)


def cmd_hte(args):
    if not 1 <= args.order <= 16:
        raise UsageError("order must lie in 1..16")
    res = run_hte(args.order)
    rows = []
    for n in range(1, args.order + 1):
        c, C = res.f_over_t[n - 1], res.specific_heat[n - 1]
        rows.append({"n": n, "f_over_t": fmt_fraction(c), "f_over_t_decimal": float(c),
                     "C": fmt_fraction(C), "C_decimal": float(C)})
    if args.out == "csv":
        return to_csv(["n", "f_over_t", "f_over_t_decimal", "C", "C_decimal"], rows)
    ansatz = None
    if args.ansatz:
        ansatz = []
        for n in range(1, args.order + 1):
            fam = res.family(n)
            ansatz.append({"n": n, "b": [fmt_fraction(x) for x in fam[Fraction(1)]],
                           "c": [fmt_fraction(x) for x in fam[Fraction(9, 4)]]})
    if args.out == "json":
        doc = {"order": args.order, "constant": "-log 3", "variable": "J/T", "coefficients": rows}
        if ansatz is not None:
            doc["ansatz"] = ansatz
        return to_json(doc)
    lines = ["f/T = -log 3 + sum_n c_n (J/T)^n,  C = sum_n C_n (J/T)^n"]
    lines += [f"{r['n']:3d}  c = {r['f_over_t']}  ({fmt_float(r['f_over_t_decimal'])})"
              f"  C = {r['C']}  ({fmt_float(r['C_decimal'])})" for r in rows]
    for a in ansatz or []:
        lines.append(f"a_{a['n']}: b = [{', '.join(a['b'])}]  c = [{', '.join(a['c'])}]")
    return "\n".join(lines) + "\n"


def cmd_finite_n(args):
    if args.N < 2 or args.N % 2:
        raise UsageError("N must be an even integer >= 2")
    config = _solver_config(args)
    if args.M <= args.N + 1:
        raise UsageError(f"need M > N + 1 nodes for N = {args.N}")
    params = nlie.NlieParams(args.s, args.J, args.T, args.N)
    sol = nlie.solve_fixed_point(params, config, raise_on_failure=True)
    t0 = sol.t(1, 0.0)
    rec = {"s": args.s, "J": args.J, "T": args.T, "N": args.N, "u": params.u,
           "T1_at_0": float(t0.real), "f": nlie.free_energy(sol),
           "f_lattice": nlie.lattice_free_energy(sol),
           "iterations": sol.iterations, "residual": sol.change}
    mp = lattice.ModelParams(args.s, args.J, args.T, N=args.N)
    if (2 * args.s + 1) ** args.N <= lattice.MAX_DENSE_EIG:
        from .bethe import VacuumData, normalization
        lam = lattice.largest_eigenvalue(lattice.qtm_matrix(0.0, mp))
        rec["qtm_normalized"] = float((lam / normalization(1, 1, 0.0, VacuumData(mp.u, args.N))).real)
    if args.L is not None:
        rec["L"] = args.L
        rec["f_ed"] = lattice.finite_L_free_energy(args.s, args.L, args.J, args.T)
    return _record(rec, args.out)


def cmd_verify(args):
    checks = verify.run_suites(args.suite)
    recs = [{"suite": c.suite, "check": c.name, "ok": c.ok, "value": c.value, "bound": c.bound,
             "detail": c.detail} for c in checks]
    if args.out == "json":
        text = to_json({"passed": all(c.ok for c in checks), "checks": recs})
    elif args.out == "csv":
        text = to_csv(["suite", "check", "ok", "value", "bound", "detail"], recs)
    else:
        text = "".join(c.line() + "\n" for c in checks)
    return text, all(c.ok for c in checks)


def _record(rec, fmt):
    if fmt == "json":
        return to_json(rec)
    if fmt == "csv":
        return to_csv(list(rec), [rec])
    return to_text(rec)


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "specific-heat": cmd_specific_heat,
            "hte": cmd_hte, "finite-n": cmd_finite_n, "verify": cmd_verify}


# ---------------------------------------------------------------- entry

def error_record(exc, kind: str) -> dict:
    return {"error": {"kind": kind, "type": type(exc).__name__,
                      "module": getattr(exc, "module", "cli"),
                      "quantity": getattr(exc, "quantity", None), "message": str(exc)}}


def _fail(exc, kind, code, stderr):
    stderr.write(json.dumps(error_record(exc, kind)) + "\n")
    return code


def parse_args(argv):
    parser, subs = build_parser()
    pre = _Parser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    args = parser.parse_args(argv)
    if known.config:
        try:
            values = read_config(known.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
        _apply_config(subs[args.command], values)
        args = parser.parse_args(argv)
    return args


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(exc, "usage", EXIT_USAGE, stderr)
    except ConvergenceError as exc:
        return _fail(exc, "convergence", EXIT_CONVERGENCE, stderr)
    except (OspNlieError, ValueError) as exc:
        return _fail(exc, "usage", EXIT_USAGE, stderr)
    ok = True
    if isinstance(result, tuple):
        result, ok = result
    try:
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(result)
        else:
            stdout.write(result)
    except OSError as exc:
        return _fail(exc, "io", EXIT_USAGE, stderr)
    return EXIT_OK if ok else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
