"""Command-line entry point: ``poincare-reps {verify,table,bracket,mackey}``.

Exit codes: 0 success, 1 a check or verdict failed, 2 invalid configuration or input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import warnings

import numpy as np

from . import irreps, mackey_finite, minkowski, orbits, spinstat
from .checks import SuiteConfig, parse_product, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SCHEMA = 1


class ConfigError(ValueError):
    pass


# ---- output helpers ----------------------------------------------------------


def write_atomic(path: str, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_plain) + "\n"


def matrix_json(M) -> list:
    """Complex matrix as nested [re, im] pairs."""
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


# ---- argument parsing --------------------------------------------------------


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return parse


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _float_list(n=None):
    def parse(text):
        try:
            vals = tuple(float(t) for t in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
        if n is not None and len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {len(vals)}")
        return vals

    return parse


def _eps_seq(text):
    vals = _float_list()(text)
    if len(vals) < 2 or any(v <= 0 for v in vals) or len(set(vals)) != len(vals):
        raise argparse.ArgumentTypeError("eps sequence needs >= 2 distinct positive values")
    return vals


def _angular(text):
    if text == "octahedral":
        return text
    try:
        parse_product(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--twice-spin", type=_nonneg_int, default=1, help="2s (default 1)")
    p.add_argument("--mass", type=_positive(float), default=1.0, help="mass m > 0 (default 1)")
    p.add_argument("--pmax", type=_positive(float), default=None, help="momentum cutoff (default 6m)")
    p.add_argument("--radial", type=_positive(int), default=32, help="radial Gauss-Legendre nodes (default 32)")
    p.add_argument("--angular", type=_angular, default="octahedral",
                   help="'octahedral' (26-point rule) or 'product:NTxNP'")
    p.add_argument("--eps-seq", type=_eps_seq, default=None,
                   help="damping sequence in units of 1/m^2 (default 0.01,0.005,0.0025,0.00125)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poincare-reps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the invariant suites of every module")
    _common(v)
    v.add_argument("--tol-scale", type=_positive(float), default=1.0,
                   help="multiply every invariant tolerance by this factor (default 1)")
    v.add_argument("--corrupt-epsilon", action="store_true", help=argparse.SUPPRESS)

    t = sub.add_parser("table", help="dump D^(s)(A), sigma/gamma sets or boost matrices")
    _common(t)
    t.add_argument("--kind", choices=("rep", "hat-rep", "sigma", "gamma", "boost"), default="rep")
    t.add_argument("--element", default="identity",
                   help="SL(2,C) element as JSON [[a,b],[c,d]] with complex strings like \"1+2j\", or 'identity'")
    t.add_argument("--momentum", type=_float_list(3), default=(0.0, 0.0, 1.0), help="p1,p2,p3 for --kind boost")
    t.add_argument("--section", choices=orbits.BOOST_CHOICES, default=orbits.CANONICAL)

    b = sub.add_parser("bracket", help="(anti)commutator kernel profile and spin-statistics verdict")
    _common(b)
    b.add_argument("--xi", type=_float_list(4), default=(0.0, 1.0, 0.0, 0.0), help="separation t,x,y,z")
    b.add_argument("--ratio", type=_positive(float), default=1e3, help="required wrong/right ratio")
    b.add_argument("--verdict-out", default=None, help="verdict JSON path when --format csv (default stderr)")

    m = sub.add_parser("mackey", help="Mackey classification report for a finite semidirect product")
    _common(m)
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--group", help="builtin group: " + ", ".join(mackey_finite.BUILTIN_GROUPS))
    src.add_argument("--group-file", help='JSON {"A": table, "H": table, "action": table}; "-" reads stdin')
    m.add_argument("--float", dest="exact", action="store_false", help="floating-point characters only")
    return parser


# ---- subcommands -------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = SuiteConfig(
        twice_s=args.twice_spin, mass=args.mass, p_max=args.pmax, radial=args.radial,
        angular=args.angular, eps_seq=args.eps_seq, seed=args.seed, tol_scale=args.tol_scale,
    )
    saved = minkowski.EPSILON
    if args.corrupt_epsilon:
        minkowski.EPSILON = np.array([[0.0, 1.0], [1.0, 0.0]])
    try:
        report = run_suite(cfg)
    finally:
        minkowski.EPSILON = saved
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["module", "invariant", "tolerance", "residual", "passed"])
        for c in report["invariants"]:
            w.writerow([c["module"], c["name"], repr(c["tolerance"]), repr(c["residual"]), c["passed"]])
        emit(buf.getvalue(), args.out)
    else:
        emit(dump_json(report), args.out)
    for name in report["failed"]:
        print(f"FAILED: {name}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def parse_element(text: str) -> np.ndarray:
    if text == "identity":
        return np.eye(2, dtype=complex)
    try:
        raw = json.loads(text)
        A = np.array([[complex(str(z).replace(" ", "")) for z in row] for row in raw], dtype=complex)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"cannot parse element {text!r}: {exc}") from None
    if A.shape != (2, 2):
        raise ConfigError("element must be a 2x2 matrix")
    if abs(np.linalg.det(A) - 1) > 1e-10:
        raise ConfigError(f"element must have determinant 1, got {np.linalg.det(A):.6g}")
    return A


def _index_key(idx) -> str:
    return ",".join(str(i) for i in idx)


def cmd_table(args) -> int:
    n = args.twice_spin
    out = {"schema": SCHEMA, "kind": args.kind, "twice_spin": n}
    if args.kind in ("rep", "hat-rep"):
        A = parse_element(args.element)
        out["element"] = matrix_json(A)
        out["matrix"] = matrix_json(irreps.spin_rep(n, A) if args.kind == "rep" else irreps.hat_rep(n, A))
    elif args.kind == "sigma":
        sig = irreps.extract_sigma(n)
        out["sigma"] = {_index_key(k): matrix_json(v) for k, v in sig.independent_entries().items()}
        out["sigma_hat"] = {_index_key(k): matrix_json(v) for k, v in sig.independent_entries(True).items()}
        out["index_position"] = "upper"
    elif args.kind == "gamma":
        g = irreps.gamma_matrices(n).gamma
        out["gamma"] = {_index_key(k): matrix_json(g[k]) for k in irreps.sym_index_tuples(n)}
        out["index_position"] = "upper"
    else:
        p3 = np.asarray(args.momentum, dtype=float)
        p = np.concatenate([[np.sqrt(p3 @ p3 + args.mass**2)], p3])
        L = orbits.boost(args.mass, p, args.section)
        out.update(mass=args.mass, momentum=p.tolist(), section=args.section,
                   sl2c=matrix_json(L), lorentz=minkowski.covering_map(L).tolist(),
                   spin_rep=matrix_json(irreps.spin_rep(n, L)))
    if args.format == "csv":
        emit(_table_csv(out), args.out)
    else:
        emit(dump_json(out), args.out)
    return EXIT_OK


def _table_csv(obj) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "index", "row", "col", "re", "im"])
    for key in ("matrix", "sl2c", "spin_rep"):
        if key in obj:
            for i, row in enumerate(obj[key]):
                for j, (re, im) in enumerate(row):
                    w.writerow([key, "", i, j, repr(re), repr(im)])
    for key in ("sigma", "sigma_hat", "gamma"):
        for idx, M in obj.get(key, {}).items():
            for i, row in enumerate(M):
                for j, (re, im) in enumerate(row):
                    w.writerow([key, idx, i, j, repr(re), repr(im)])
    return buf.getvalue()


def cmd_bracket(args) -> int:
    n, m = args.twice_spin, args.mass
    xi = np.asarray(args.xi, dtype=float)
    ss = float(minkowski.minkowski_dot(xi, xi))
    on_cone = abs(ss) < spinstat.LIGHT_CONE_FLOOR
    rows, kernels = [], {}
    if on_cone:
        warnings.warn(f"separation {xi.tolist()} lies on the light cone; no kernel and no verdict",
                      spinstat.LightConeWarning, stacklevel=1)
    else:
        kernels = spinstat.bracket_kernels(n, m, xi, args.eps_seq)
        for sign, k in sorted(kernels.items()):
            name = "anticommutator" if sign == spinstat.ANTICOMMUTATOR else "commutator"
            labels = [repr(float(e)) for e in k.eps] + ["0"]
            stack = list(k.samples) + [k.value]
            for label, M in zip(labels, stack):
                for i, row in enumerate(np.asarray(M)):
                    for j, z in enumerate(row):
                        rows.append([name, label, i, j, repr(float(z.real)), repr(float(z.imag))])
    verdict = None
    if not on_cone and ss < 0:
        verdict = spinstat.spin_statistics_verdict((n,), m, [xi], args.eps_seq, ratio_required=args.ratio)
    elif not on_cone:
        warnings.warn("timelike separation: locality does not apply, no verdict", spinstat.LightConeWarning,
                      stacklevel=1)
    local = spinstat.local_sign(n)
    summary = {
        "schema": SCHEMA,
        "twice_spin": n,
        "mass": m,
        "xi": xi.tolist(),
        "interval": ss,
        "local_bracket": "anticommutator" if local == spinstat.ANTICOMMUTATOR else "commutator",
        "verdict": None if verdict is None else verdict["verdict"],
        "details": verdict,
    }
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bracket", "eps", "row", "col", "re", "im"])
        w.writerows(rows)
        emit(buf.getvalue(), args.out)
        if args.verdict_out:
            write_atomic(args.verdict_out, dump_json(summary))
        else:
            sys.stderr.write(dump_json(summary))
    else:
        summary["kernels"] = {
            ("anticommutator" if s == spinstat.ANTICOMMUTATOR else "commutator"): {
                "eps": [float(e) for e in k.eps],
                "magnitudes": [float(x) for x in k.magnitudes],
                "extrapolated": matrix_json(k.value),
                "monotone": k.monotone(),
            }
            for s, k in sorted(kernels.items())
        }
        emit(dump_json(summary), args.out)
    if verdict is None:
        return EXIT_OK
    return EXIT_OK if verdict["verdict"] == "PASS" else EXIT_FAIL


def cmd_mackey(args) -> int:
    try:
        if args.group is not None:
            G = mackey_finite.builtin_group(args.group)
        else:
            text = sys.stdin.read() if args.group_file == "-" else open(args.group_file).read()
            G = mackey_finite.group_from_json(text)
        report = mackey_finite.verify_mackey(G, exact=args.exact, seed=args.seed)
    except OSError as exc:
        raise ConfigError(f"cannot read group file: {exc}") from None
    except mackey_finite.GroupError as exc:
        raise ConfigError(str(exc)) from None
    emit(dump_json(report), args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "table": cmd_table, "bracket": cmd_bracket, "mackey": cmd_mackey}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
