"""Command-line front end.

Subcommands: eval, farfield, tables, verify, reciprocity.  Every output
embeds the run manifest; exit codes are 0 (ok), 1 (check or evaluation
failure) and 2 (usage error).
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import elliptic as ell
from .config import Tolerances, WedgeConfig
from .errors import WedgeError
from .farfield import default_reciprocity_grid, farfield_sweep, reciprocity_report
from .jet import shift_data
from .poles import Label
from .reconstruct import Q_scat_u, Q_total, solution
from .residues import residue_records
from .surface import point_of_zeta, u_of_zeta
from .verify import DEFAULT_THETA_I, run_all

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class NonFiniteOutput(WedgeError):
    pass


def _cx(z):
    z = complex(z)
    return [z.real, z.imag]


def _parse_complex(s):
    try:
        parts = [float(x) for x in s.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse complex value {s!r}; expected 're,im'")
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise UsageError(f"expected 're,im', got {s!r}")
    return complex(parts[0], parts[1])


def _parse_grid(s):
    try:
        a, b, n = s.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"grid must be 'start:stop:count', got {s!r}")
    if n < 1:
        raise UsageError("grid count must be positive")
    if n > 1 and not b > a:
        raise UsageError("grid must be increasing (start < stop)")
    return np.linspace(a, b, n)


def _parse_tols(items):
    kw = {}
    for it in items or []:
        if "=" not in it:
            raise UsageError(f"tolerance override must be key=value, got {it!r}")
        k, v = it.split("=", 1)
        try:
            kw[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"tolerance value must be a number, got {v!r}")
    try:
        return Tolerances().override(**kw)
    except KeyError as e:
        raise UsageError(str(e))


def _config(args):
    if not (math.isfinite(args.theta_i) and math.isfinite(args.eps)):
        raise UsageError("theta-i and eps must be finite")
    try:
        return WedgeConfig(args.theta_i, args.eps, args.k0, _parse_tols(args.tol_override))
    except ValueError as e:
        raise UsageError(str(e))


def _manifest(args, cfg):
    m = dict(schema_version=SCHEMA_VERSION, command=args.command, format=args.format,
             seed=args.seed, cfg=cfg.to_dict())
    for k in ("zeta", "grid", "only"):
        if getattr(args, k, None) is not None:
            m[k] = getattr(args, k)
    return m


def _scan_finite(obj, path="$"):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise NonFiniteOutput(f"non-finite value at {path}")
    elif isinstance(obj, dict):
        for k, v in obj.items():
            _scan_finite(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _scan_finite(v, f"{path}[{i}]")


def _dump_json(obj):
    _scan_finite(obj)
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _dump_csv(manifest, header, rows):
    for r in rows:
        _scan_finite([x for x in r if isinstance(x, float)])
    buf = io.StringIO()
    buf.write("# " + json.dumps(manifest, allow_nan=False) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def cmd_eval(args, cfg, manifest):
    if args.zeta is None:
        raise UsageError("eval requires --zeta re,im")
    z = _parse_complex(args.zeta)
    sol = solution(cfg)
    p = point_of_zeta(z, cfg.tol)
    u = u_of_zeta(z, cfg.tol)
    qs = Q_scat_u(u, sol)
    qt = Q_total(z, sol)
    rec = dict(zeta=_cx(z), zeta_i=_cx(cfg.zeta_i), s_zeta=_cx(np.exp(1j * (z - math.pi / 4))),
               t=_cx(p.t), Y=_cx(p.Y), component=p.component, u=_cx(u),
               u_reduced=_cx(ell.reduce(u)), Q_scat=_cx(qs), Q_total=_cx(qt),
               R_at_u0_before_gauge=_cx(sol.R0),
               jets={k: _cx(getattr(sol.jets, k)) for k in ("p1", "p2", "p3", "q1", "q2", "q3")})
    if args.format == "csv":
        header = ["quantity", "re", "im"]
        rows = [[k, *rec[k]] for k in ("zeta", "t", "Y", "u", "Q_scat", "Q_total")]
        return _dump_csv(manifest, header, rows), EXIT_OK
    return _dump_json(dict(manifest=manifest, result=rec)), EXIT_OK


def _default_farfield_grid():
    return np.linspace(math.pi / 4 + 0.05, 7 * math.pi / 4 - 0.05, 361)


def cmd_farfield(args, cfg, manifest):
    grid = _parse_grid(args.grid) if args.grid else _default_farfield_grid()
    tab = farfield_sweep(grid, cfg)
    if args.format == "csv":
        rows = []
        for r in tab.rows:
            if r.flag:
                rows.append([float(r.theta), "", "", r.flag])
            else:
                rows.append([float(r.theta), r.D.real, r.D.imag, ""])
        return _dump_csv(manifest, ["theta", "re_D", "im_D", "flag"], rows), EXIT_OK
    rows = [dict(theta=float(r.theta), D=None if r.flag else _cx(r.D), flag=r.flag or None,
                 residual=None if r.flag else float(r.residual)) for r in tab.rows]
    return _dump_json(dict(manifest=manifest, metadata=tab.metadata, rows=rows)), EXIT_OK


def table_rows(cfg):
    out = []
    for r in residue_records(cfg):
        sh = shift_data(r.label, r.pole)
        l = r.label
        out.append(dict(label=str(l), m=l.m, sigma=l.sigma, eps_w=l.eps_w, j=l.j, eps_j=l.eps_j,
                        component=r.pole.component, b=_cx(r.pole.b), t=_cx(r.pole.t), Y=_cx(r.pole.Y),
                        u=_cx(r.pole.u), r_I=_cx(r.r_I), alpha=_cx(r.alpha), beta=_cx(r.beta),
                        C=_cx(r.C), d=_cx(r.d), W0=_cx(sh.W0), W1=_cx(sh.W1), W2=_cx(sh.W2)))
    return out


def cmd_tables(args, cfg, manifest):
    rows = table_rows(cfg)
    if args.format == "csv":
        cx = ["b", "t", "Y", "u", "r_I", "alpha", "beta", "C", "d", "W0", "W1", "W2"]
        header = ["label", "m", "sigma", "eps_w", "j", "eps_j", "component"]
        header += [f"{k}_{p}" for k in cx for p in ("re", "im")]
        data = [[r[k] for k in header[:7]] + [v for k in cx for v in r[k]] for r in rows]
        return _dump_csv(manifest, header, data), EXIT_OK
    return _dump_json(dict(manifest=manifest, records=rows)), EXIT_OK


def _parse_label(s):
    try:
        m, sg, ew = s.strip("()").split(",")
        sign = lambda x: 1 if x.strip() in ("+", "+1", "1") else -1
        return Label(int(m), sign(sg), sign(ew))
    except ValueError:
        raise UsageError(f"label must look like '(m,+,-)', got {s!r}")


def cmd_verify(args, cfg, manifest):
    corrupt = _parse_label(args.inject_fault) if args.inject_fault else None
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes a comma-separated list of criterion numbers")
    results = run_all(cfg, args.seed, corrupt=corrupt, only=only)
    lines = [json.dumps(dict(manifest=manifest), allow_nan=False)]
    for r in results:
        d = r.to_dict()
        _scan_finite(d["parts"])
        lines.append(json.dumps(d, allow_nan=False, default=float))
    failed = [r for r in results if not r.passed]
    summary = dict(summary=dict(passed=not failed, n_checks=len(results),
                                failed=[dict(check=r.name, criterion=r.criterion, parts=r.failing())
                                        for r in failed]))
    lines.append(json.dumps(summary))
    return "\n".join(lines) + "\n", (EXIT_FAIL if failed else EXIT_OK)


def cmd_reciprocity(args, cfg, manifest):
    grid = _parse_grid(args.grid) if args.grid else default_reciprocity_grid()
    rep = reciprocity_report(grid, cfg)
    n = len(grid)
    if args.format == "csv":
        rows = []
        for a in range(n):
            for b in range(n):
                dl = rep["delta"][a, b]
                rows.append([float(grid[a]), float(grid[b]), float(dl) if np.isfinite(dl) else "",
                             rep["flags"].get((a, b), "") or rep["flags"].get((b, a), "")])
        return _dump_csv(manifest, ["theta", "theta_prime", "delta", "flag"], rows), EXIT_OK
    delta = [[float(x) if np.isfinite(x) else None for x in row] for row in rep["delta"]]
    out = dict(manifest=manifest, grid=[float(g) for g in grid], max_delta=rep["max_delta"],
               mean_delta=rep["mean_delta"], n_flagged=rep["n_flagged"], delta=delta,
               flags=[dict(theta=float(grid[a]), theta_i=float(grid[b]), flag=f)
                      for (a, b), f in sorted(rep["flags"].items())])
    return _dump_json(out), EXIT_OK


COMMANDS = dict(eval=cmd_eval, farfield=cmd_farfield, tables=cmd_tables, verify=cmd_verify,
                reciprocity=cmd_reciprocity)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta-i", type=float, default=DEFAULT_THETA_I, help="incidence angle (radians)")
    common.add_argument("--eps", type=float, default=1e-3, help="absorption shift of the incident pole")
    common.add_argument("--k0", type=float, default=1.0, help="exterior wavenumber")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--tol-override", action="append", metavar="KEY=VALUE",
                        help="override a numerical tolerance (repeatable)")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="lemniwedge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", parents=[common], help="evaluate Q at a spectral point")
    e.add_argument("--zeta", help="spectral point as 're,im'")
    f = sub.add_parser("farfield", parents=[common], help="diffraction coefficient over an angle grid")
    f.add_argument("--grid", help="start:stop:count (radians)")
    sub.add_parser("tables", parents=[common], help="per-pole residue records")
    v = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    v.add_argument("--only", help="comma-separated criterion numbers")
    v.add_argument("--inject-fault", help=argparse.SUPPRESS)
    r = sub.add_parser("reciprocity", parents=[common], help="reciprocity asymmetry report")
    r.add_argument("--grid", help="start:stop:count (radians)")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = _config(args)
        text, code = COMMANDS[args.command](args, cfg, _manifest(args, cfg))
    except UsageError as e:
        print(json.dumps(dict(error="UsageError", message=str(e))), file=sys.stderr)
        return EXIT_USAGE
    except WedgeError as e:
        print(json.dumps(dict(error=e.name, message=str(e))), file=sys.stderr)
        return EXIT_FAIL
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
