"""Batch front end: config-driven subcommands writing CSV/JSON artifacts.

Subcommands: spectrum, solve, check, sweep, bootstrap, functional.
Common flags: --config <path>, --out <dir>, --workers <k>, --seed <int>.
Outputs are deterministic for a fixed config and seed.
"""

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import conditions, scheme, spectral
from .config import parse_config
from .errors import DiracBVPError


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _json_default(obj):
    # tolerate numpy scalars leaking into report payloads
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError("not JSON serializable: %r" % (obj,))


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, default=_json_default)
        fh.write("\n")


def _prepare(cfg):
    op = cfg.build_operator()
    sd = spectral.decompose(op)
    return op, sd


def cmd_spectrum(cfg, out_dir):
    _, sd = _prepare(cfg)
    rows = [[k, repr(float(lam))] for k, lam in enumerate(sd.eigenvalues)]
    _write_csv(os.path.join(out_dir, "eigenvalues.csv"), ["k", "lambda_k"],
               rows)
    summary = {"lambda1": sd.lambda1, "invertible": sd.invertible}
    if sd.invertible:
        est = spectral.estimate_constants(sd, iota=cfg.iota)
        summary["c1_emp"] = est.c1_emp
        summary["c_half_emp"] = est.c_half_emp
    _write_json(os.path.join(out_dir, "summary.json"), summary)
    return 0


def _certify(cfg, sd, scheme_cfg):
    est = None
    needs_est = cfg.get("constants", "c1").strip() == "empirical" \
        or cfg.get("constants", "c_half").strip() in ("empirical", "formula")
    if needs_est and sd.invertible:
        est = spectral.estimate_constants(sd, iota=cfg.iota)
    consts = cfg.build_constants(sd, scheme_cfg, estimates=est)
    return conditions.check_conditions(consts, cfg.condition_mode), consts


def cmd_solve(cfg, out_dir):
    _, sd = _prepare(cfg)
    model = sd.operator.spec
    scheme_cfg = cfg.build_scheme(model)
    certified = None
    try:
        certified = _certify(cfg, sd, scheme_cfg)[0].certified
    except DiracBVPError:
        pass  # certification is advisory for solve runs
    report = scheme.run(sd, scheme_cfg)
    report.conditions_certified = certified
    _write_csv(os.path.join(out_dir, "trace.csv"),
               ["k", "delta_H12D", "ratio", "u_L2", "u_H1", "pde_residual"],
               scheme.trace_rows(report))
    _write_json(os.path.join(out_dir, "report.json"), report.to_dict())
    return 0


def cmd_check(cfg, out_dir):
    _, sd = _prepare(cfg)
    scheme_cfg = cfg.build_scheme(sd.operator.spec)
    cond_report, consts = _certify(cfg, sd, scheme_cfg)
    payload = cond_report.to_dict()
    payload["constants"] = {
        "n": consts.n, "p": consts.p, "p_A": consts.p_A,
        "c_h": consts.c_h, "C_h": consts.C_h,
        "c1": consts.c1, "c_half": consts.c_half,
        "K_GN": consts.K_GN, "K_GN2": consts.K_GN2, "K_FGN": consts.K_FGN,
        "lambda_abs": consts.lambda_abs, "lambda1_abs": consts.lambda1_abs,
        "Dg_L2": consts.Dg_L2, "g_L2T": consts.g_L2T, "g_H1T": consts.g_H1T,
        "Xi": consts.Xi, "Lambda_cap": consts.Lambda_cap,
    }
    payload["provenance"] = consts.provenance
    payload["c3_lambda_threshold"] = conditions.c3_lambda_threshold(consts)
    _write_json(os.path.join(out_dir, "conditions.json"), payload)
    return 0


def _sweep_point(cfg, values):
    point = cfg
    for (path, *_), val in zip(cfg.sweep.axes, values):
        point = point.with_override(path, val)
    _, sd = _prepare(point)
    scheme_cfg = point.build_scheme(sd.operator.spec)
    certified = False
    try:
        certified = _certify(point, sd, scheme_cfg)[0].certified
    except DiracBVPError:
        pass
    report = scheme.run(sd, scheme_cfg)
    max_ratio = max(report.ratios) if report.ratios else 0.0
    return (report.verdict, report.iterations, report.pde_residual,
            max_ratio, certified, report.bounds_held)


def cmd_sweep(cfg, out_dir):
    if cfg.sweep is None:
        raise DiracBVPError("sweep command needs a [sweep] section")
    points = cfg.sweep.grid()
    names = [axis[0] for axis in cfg.sweep.axes]

    def evaluate(idx_values):
        idx, values = idx_values
        try:
            return idx, values, _sweep_point(cfg, values)
        except DiracBVPError as exc:
            return idx, values, ("error: %s" % exc, 0, float("nan"),
                                 float("nan"), False, False)

    tasks = list(enumerate(points))
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(evaluate, tasks))
    else:
        results = [evaluate(t) for t in tasks]
    results.sort(key=lambda r: r[0])

    header = ["index"] + names + ["verdict", "iterations", "pde_residual",
                                  "max_ratio", "certified", "bounds_held"]
    rows = []
    for idx, values, (verdict, iters, resid, ratio, cert, bounds) in results:
        rows.append([idx] + [repr(float(v)) for v in values]
                    + [verdict, iters, repr(resid), repr(ratio),
                       str(bool(cert)).lower(), str(bool(bounds)).lower()])
    _write_csv(os.path.join(out_dir, "sweep.csv"), header, rows)
    return 0


def cmd_bootstrap(cfg, out_dir):
    from .config import _as_int, _as_real
    trace = conditions.bootstrap_exponents(
        _as_int(cfg.get("bootstrap", "n"), "bootstrap.n"),
        _as_real(cfg.get("bootstrap", "p"), "bootstrap.p"),
        _as_real(cfg.get("bootstrap", "l0"), "bootstrap.l0"))
    rows = [[m, repr(rec), repr(cl)] for m, (rec, cl)
            in enumerate(zip(trace.reciprocals, trace.closed_form))]
    _write_csv(os.path.join(out_dir, "bootstrap.csv"),
               ["M", "reciprocal", "closed_form"], rows)
    _write_json(os.path.join(out_dir, "bootstrap.json"),
                {"m_star": trace.m_star,
                 "agreement": trace.agreement()})
    return 0


def cmd_functional(cfg, out_dir):
    from .config import _as_int
    _, sd = _prepare(cfg)
    m = min(_as_int(cfg.get("functional", "m"), "functional.m"), sd.size)
    n = _as_int(cfg.get("constants", "n"), "constants.n")
    rows = []
    for k in range(m):
        phi = sd.operator.embed(sd.eigenvectors[:, k])
        f_val = conditions.variational_functional(sd, phi, n)
        rows.append([k, repr(float(sd.eigenvalues[k])), repr(f_val)])
    _write_csv(os.path.join(out_dir, "functional.csv"),
               ["k", "lambda_k", "F"], rows)
    return 0


_COMMANDS = {"spectrum": cmd_spectrum, "solve": cmd_solve, "check": cmd_check,
             "sweep": cmd_sweep, "bootstrap": cmd_bootstrap,
             "functional": cmd_functional}


def run_command(cfg, command, out_dir=None):
    """Dispatch a subcommand; returns the process exit status."""
    if command not in _COMMANDS:
        raise DiracBVPError("unknown command %r" % (command,))
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    return _COMMANDS[command](cfg, out_dir)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="diracbvp",
        description="Spectral solver for nonlinear Dirac-type boundary "
                    "value problems on 1D model operators.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True)
        cmd.add_argument("--out", default=None)
        cmd.add_argument("--workers", type=int, default=None)
        cmd.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)

    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        cfg = parse_config(text, base_dir=os.path.dirname(
            os.path.abspath(args.config)))
        if args.workers is not None:
            cfg.raw["run"]["workers"] = str(args.workers)
        if args.seed is not None:
            cfg.raw["run"]["seed"] = str(args.seed)
        return run_command(cfg, args.command, out_dir=args.out)
    except (DiracBVPError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
