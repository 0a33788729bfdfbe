"""Command-line front end.

Subcommands: constants, trace, verify {lemma65, prop67, lemma33,
p-positivity}, sweep.  Geometric units G = c = 1; lengths in units of M
unless --mass is given.

Exit codes: 0 success, 2 invalid parameters or usage, 3 numerical failure,
4 verification found violations, 5 sweep with failed rows.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import KerrflowError, PositivityViolation
from .flow import IntegratorOpts, PhasePoint, classify_fate, integrate, \
    lemma33_campaign, principal_null
from .charts import ChartId, ChartPoint, Covector
from .nullcone import complete_null
from .params import SpacetimeParams
from .trapping import (SearchReport, lemma65_search, p_positivity_scan,
                       prop67_verify, sample_k_point)

SCHEMA_VERSION = "1.0"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VIOLATIONS = 4
EXIT_PARTIAL = 5


def _make_params(mass: float, spin: float) -> SpacetimeParams:
    try:
        return SpacetimeParams(M=mass, a=spin)
    except KerrflowError as exc:
        msg = str(exc)
        if "subextreme" not in msg:
            msg = f"subextreme range required: {msg}"
        raise SystemExit(_fail(EXIT_USAGE, msg))


def _fail(code: int, msg: str) -> int:
    print(msg, file=sys.stderr)
    return code


def _emit(payload: dict, out: str | None) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def cmd_constants(args) -> int:
    params = _make_params(args.mass, args.spin)
    d = params.as_dict()
    # equatorial ergosphere extent of the stationary field: r_plus .. 2M
    d["ergo_equatorial_outer"] = 2.0 * params.M
    d["ergo_equatorial_inner"] = params.r_plus
    _emit({"report": "constants", "values": d}, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# trace
# ---------------------------------------------------------------------------


def _initial_data(args, params: SpacetimeParams) -> PhasePoint:
    if args.principal:
        return principal_null(params, args.r, args.theta, args.principal)
    if args.from_k:
        rng = np.random.default_rng(args.seed)
        x, xi = sample_k_point(params, rng)
        return PhasePoint(x, xi)
    if args.xi_r is None and args.xi_theta is None and args.xi_phi is None:
        raise SystemExit(_fail(
            EXIT_USAGE, "provide --principal, --from-k, or covector flags"))
    x = ChartPoint(ChartId.BL_I, (0.0, args.r, args.theta, args.phi))
    xi = complete_null(params, x, args.xi_r or 0.0, args.xi_theta or 0.0,
                       args.xi_phi or 0.0, args.branch.capitalize())
    return PhasePoint(x, xi)


def cmd_trace(args) -> int:
    params = _make_params(args.mass, args.spin)
    if args.s_max is None:
        # trapped-set data leaves the photon shell by roundoff amplification
        # around s = 30; the certifying budget must sit below that
        args.s_max = 15.0 if args.from_k else 400.0
    opts = IntegratorOpts(s_max=args.s_max, r_escape=args.r_escape)
    try:
        q0 = _initial_data(args, params)
        traj = integrate(params, q0, args.direction, opts)
        fate = classify_fate(params, q0, args.direction, opts)
    except KerrflowError as exc:
        return _fail(EXIT_NUMERICAL, f"integration failed: {exc}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(traj.to_jsonl())
    else:
        sys.stdout.write(traj.to_jsonl())
    d = traj.diagnostics
    print(json.dumps({
        "summary": True,
        "fate": fate.fate,
        "drift_xi_t": d["drift_xi_t"],
        "drift_xi_phi": d["drift_xi_phi"],
        "drift_polar": d["drift_polar"],
        "g_residual_max": d["g_residual_max"],
        "n_steps": d["n_steps"],
    }))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _run_campaign(lemma: str, mass: float, spin: float, n: int,
                  seed: int) -> SearchReport:
    params = SpacetimeParams(M=mass, a=spin)
    if lemma == "lemma65":
        return lemma65_search(params, n, seed)
    if lemma == "prop67":
        return prop67_verify(params, n, seed)
    if lemma == "lemma33":
        return lemma33_campaign(params, n, seed)
    if lemma == "p-positivity":
        try:
            scan = p_positivity_scan(params)
            violations = 0
            extra = scan
        except PositivityViolation as exc:
            violations = 1
            extra = {"violation": str(exc)}
        return SearchReport(campaign="p-positivity", params=params.as_dict(),
                            n=extra.get("grid_points", 0), seed=seed,
                            violations=violations, worst_margin=None,
                            wall_time_s=0.0, extra=extra)
    raise ValueError(f"unknown campaign {lemma!r}")


def cmd_verify(args) -> int:
    _make_params(args.mass, args.spin)  # validates, exits 2 on bad input
    try:
        report = _run_campaign(args.lemma, args.mass, args.spin, args.n,
                               args.seed)
    except KerrflowError as exc:
        return _fail(EXIT_NUMERICAL, f"campaign failed: {exc}")
    _emit({"report": "verify", **report.as_dict()}, args.out)
    return EXIT_OK if report.violations == 0 else EXIT_VIOLATIONS


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_row(task):
    lemma, mass, spin, n, seed = task
    try:
        rep = _run_campaign(lemma, mass, spin, n, seed)
        return (mass, spin, lemma, n, seed, rep.violations,
                rep.worst_margin, "ok")
    except Exception as exc:  # row failure must not kill the sweep
        return (mass, spin, lemma, n, seed, None, None, f"failed: {exc}")


def cmd_sweep(args) -> int:
    if args.spin_steps < 1:
        return _fail(EXIT_USAGE, "--spin-steps must be >= 1")
    spins = np.linspace(args.spin_min, args.spin_max, args.spin_steps)
    for s in spins:
        _make_params(args.mass, float(s))
    # deterministic per-row seeds regardless of execution order
    children = np.random.SeedSequence(args.seed).spawn(len(spins))
    seeds = [int(c.generate_state(1)[0]) for c in children]
    tasks = [(args.campaign, args.mass, float(s), args.n, sd)
             for s, sd in zip(spins, seeds)]
    jobs = args.jobs or int(os.environ.get("KERRFLOW_JOBS",
                                           os.cpu_count() or 1))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    lines = ["M,a,campaign,n,seed,violations,worst_margin,status"]
    for row in rows:
        lines.append(",".join("" if v is None else str(v) for v in row))
    body = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    if any(r[7] != "ok" for r in rows):
        return EXIT_PARTIAL
    if any(r[5] for r in rows):
        return EXIT_VIOLATIONS
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kerrflow",
        description="Kerr null-geodesic flow, trapped-set membership, and "
                    "randomized verification campaigns.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--mass", type=float, default=1.0)
        sp.add_argument("--spin", type=float, default=0.0)
        sp.add_argument("--out", type=str, default=None)

    sp = sub.add_parser("constants", help="horizon and thermodynamic constants")
    common(sp)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("trace", help="integrate one null trajectory")
    common(sp)
    sp.add_argument("--r", type=float, default=6.0)
    sp.add_argument("--theta", type=float, default=math.pi / 2.0)
    sp.add_argument("--phi", type=float, default=0.0)
    sp.add_argument("--xi-r", type=float, default=None)
    sp.add_argument("--xi-theta", type=float, default=None)
    sp.add_argument("--xi-phi", type=float, default=None)
    sp.add_argument("--branch", choices=["plus", "minus"], default="plus")
    sp.add_argument("--principal", choices=["in", "out"], default=None)
    sp.add_argument("--from-k", action="store_true",
                    help="start from a sampled trapped-set point")
    sp.add_argument("--direction", choices=["past", "future"], default="past")
    sp.add_argument("--s-max", type=float, default=None)
    sp.add_argument("--r-escape", type=float, default=1000.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("verify", help="run a verification campaign")
    sp.add_argument("lemma", choices=["lemma65", "prop67", "lemma33",
                                      "p-positivity"])
    common(sp)
    sp.add_argument("--n", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="verification campaign over a spin grid")
    common(sp)
    sp.add_argument("--spin-min", type=float, default=0.1)
    sp.add_argument("--spin-max", type=float, default=0.9)
    sp.add_argument("--spin-steps", type=int, default=9)
    sp.add_argument("--campaign", choices=["lemma65", "prop67", "lemma33",
                                           "p-positivity"], default="lemma65")
    sp.add_argument("--n", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=None)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
