"""Command-line front end: ``hramanujan <command> [options]``.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import charts, flows, hilbert, periods, symplectic
from .config import set_tolerances, tolerances
from .errors import LabError
from .jsonio import complex_matrix, complex_vector, dumps
from .series import eisenstein_series


class UsageError(Exception):
    pass


# -- argument parsing helpers ------------------------------------------------------


def _load(text: str):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise UsageError(f"complex pair expected, got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        try:
            return complex(x.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise UsageError(f"cannot parse complex number {x!r}") from None
    return complex(x)


def parse_complex(text: str) -> complex:
    return _complex(_load(text))


def parse_matrix(text: str) -> np.ndarray:
    """A scalar (1 x 1) or a JSON list of rows; entries are numbers, [re, im] pairs or "1+2i"."""
    data = _load(text)
    if not isinstance(data, list):
        return np.array([[_complex(data)]])
    if not all(isinstance(row, list) for row in data):
        raise UsageError(f"expected a list of rows, got {text!r}")
    try:
        return np.array([[_complex(x) for x in row] for row in data])
    except (TypeError, ValueError):
        raise UsageError(f"cannot parse matrix {text!r}") from None


def parse_vector(text: str) -> np.ndarray:
    data = _load(text)
    if not isinstance(data, list):
        raise UsageError(f"expected a JSON list, got {text!r}")
    return np.array([_complex(x) for x in data])


# -- report ------------------------------------------------------------------------


def make_report(command: str, parameters: dict, passed, payload=None, residuals=None) -> dict:
    return {"command": command, "parameters": parameters, "pass": passed,
            "payload": payload if payload is not None else {},
            "residuals": residuals if residuals is not None else {}}


def emit_report(report: dict, json_mode: bool, out=None) -> None:
    out = sys.stdout if out is None else out
    if json_mode:
        out.write(dumps(report) + "\n")
        return
    status = "PASS" if report["pass"] in (True, None) else "FAIL"
    detail = report.get("summary") or ", ".join(
        f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}"
        for k, v in sorted(report["residuals"].items()))
    out.write(f"{status} {report['command']}" + (f": {detail}" if detail else "") + "\n")


# -- commands ----------------------------------------------------------------------


def cmd_eisenstein(args):
    if args.order < 0:
        raise UsageError("--order must be nonnegative")
    s = eisenstein_series(args.k, args.order)
    rep = make_report("eisenstein", {"k": args.k, "order": args.order}, True, s.to_json())
    rep["summary"] = " ".join(str(c) for c in s.coefficients())
    return rep


SERIES_CHECKS = {"ramanujan": "ramanujan", "chazy": "chazy", "phihat-b": "phihat_b",
                 "j-relation": "j_relation"}
STRUCTURE_CHECKS = ("gm-contract", "gm-curvature", "delta-transfer")


def _contract_check():
    out = {}
    for chart in ("e_chart", "b_chart"):
        m = charts.connection_contract(charts.gauss_manin_matrix(chart), charts.ramanujan_field(chart))
        out[chart] = {"matrix": [[repr(x) for x in row] for row in m],
                      "pass": charts.is_lower_unit(m)}
    return {"check": "gm-contract", "charts": out, "pass": all(v["pass"] for v in out.values())}


def _curvature_check():
    out = {}
    for chart in ("weierstrass", "e_chart", "b_chart"):
        conn = charts.gauss_manin_matrix(chart)
        conv = charts.flatness_convention(conn)
        out[chart] = {"antidiagonal": conn.antidiagonal_ok(), "convention": conv,
                      "pass": conn.antidiagonal_ok() and conv is not None}
    return {"check": "gm-curvature", "charts": out, "pass": all(v["pass"] for v in out.values())}


def _delta_transfer_check():
    transfer = charts.delta_transfer_residual()
    rts = charts.roundtrip_residuals()
    push = charts.pushforward_residual()
    ok_rt = all(p.is_zero() for v in rts.values() for p in v)
    ok_push = all(p.is_zero() for p in push)
    return {"check": "delta-transfer", "transfer_zero": transfer.is_zero(), "roundtrips_zero": ok_rt,
            "pushforward_zero": ok_push, "pass": transfer.is_zero() and ok_rt and ok_push}


def _run_check(name, order):
    if name in SERIES_CHECKS:
        return charts.verify_series_solution(SERIES_CHECKS[name], order)
    return {"gm-contract": _contract_check, "gm-curvature": _curvature_check,
            "delta-transfer": _delta_transfer_check}[name]()


def cmd_verify(args):
    if args.order < 1:
        raise UsageError("--order must be at least 1")
    names = list(SERIES_CHECKS) + list(STRUCTURE_CHECKS) if args.check == "all" else [args.check]
    results = [_run_check(n, args.order) for n in names]
    passed = all(r["pass"] for r in results)
    payload = results[0] if len(results) == 1 else {"results": results}
    rep = make_report("verify", {"check": args.check, "order": args.order}, passed, payload)
    rep["summary"] = ", ".join(f"{n} {'ok' if r['pass'] else 'failed'}" for n, r in zip(names, results))
    return rep


def cmd_periods(args):
    tau = parse_matrix(args.tau)
    if args.g is not None and tau.shape != (args.g, args.g):
        raise UsageError(f"--tau must be {args.g} x {args.g}")
    delta = parse_matrix(args.delta) if args.delta else None
    pt = periods.phi_point(tau, delta)
    T = periods.PolarizedTorus.at(tau)
    data = periods.period_matrices(T, pt.basis)
    tol = tolerances().membership
    res = {"hodge": data.residuals["hodge"], "nu": data.residuals["nu"],
           "Pi_sp": data.residuals["Pi_sp"], "coset_rep": pt.consistency}
    passed = all(v <= tol for v in res.values()) and data.residuals["tau_in_siegel"]
    payload = data.to_json()
    payload["coset_rep"] = complex_matrix(pt.coset_rep)
    return make_report("periods", {"tau": complex_matrix(tau),
                                   "delta": None if delta is None else complex_matrix(delta)},
                       passed, payload, res)


def cmd_flow(args):
    t0, t1 = parse_complex(args.start), parse_complex(args.end)
    if args.step <= 0:
        raise UsageError("--step must be positive")
    start = flows.eisenstein_state(args.chart, t0)
    end = flows.integrate_g1(args.chart, start, t1, args.step)
    oracle = np.array(flows.eisenstein_state(args.chart, t1).point)
    got = np.array(end.point)
    rel = float(np.max(np.abs(got - oracle) / np.abs(oracle)))
    return make_report("flow", {"chart": args.chart, "from": [t0.real, t0.imag],
                                "to": [t1.real, t1.imag], "step": args.step},
                       rel <= args.bound,
                       {"endpoint": complex_vector(got), "oracle": complex_vector(oracle)},
                       {"relative_error": rel})


def cmd_twist(args):
    delta = parse_matrix(args.delta)
    if delta.shape != (2, 2):
        raise UsageError("--delta must be 2 x 2")
    taus = [parse_complex(t) for t in args.tau] if args.tau else \
        [complex(x, y) for x, y in zip(np.linspace(-0.5, 0.5, 10), np.linspace(1.0, 2.0, 10))]
    vals = [flows.twisted_ode_residual(delta, t, args.h) for t in taus]
    worst = max(vals)
    return make_report("twist-check", {"delta": complex_matrix(delta), "h": args.h,
                                       "tau": complex_vector(taus)},
                       worst <= args.bound, {"residuals": vals}, {"max_residual": worst})


def cmd_leaf(args):
    delta = parse_matrix(args.delta)
    tau = parse_matrix(args.tau)
    frame = symplectic.leaf_frame(delta, tau)
    if not frame.in_U_delta:
        return make_report("leaf", {}, False, {"in_U_delta": False})
    payload = {"in_U_delta": True, "p_delta_tau": complex_matrix(frame.p_delta_tau),
               "psi_tau": complex_matrix(frame.psi_tau),
               "psi_delta_tau": complex_matrix(frame.psi_delta_tau)}
    r = frame.identity_residual
    return make_report("leaf", {"delta": complex_matrix(delta), "tau": complex_matrix(tau)},
                       r <= tolerances().identity, payload, {"leaf_identity": r})


def cmd_density(args):
    tau = parse_matrix(args.tau)
    g = tau.shape[0]
    delta = parse_matrix(args.delta) if args.delta else np.eye(2 * g, dtype=complex)
    res = flows.density_probe(delta, tau, args.degree, args.samples, args.seed)
    payload = {"rank": res.rank, "monomial_count": res.monomial_count, "full_rank": res.full_rank,
               "singular_values": list(res.singular_values), "attempts": res.attempts}
    rep = make_report("density", {"delta": complex_matrix(delta), "tau": complex_matrix(tau),
                                  "degree": args.degree, "samples": args.samples,
                                  "seed": args.seed}, res.full_rank, payload)
    rep["summary"] = f"rank {res.rank} of {res.monomial_count}"
    return rep


def _exact_tau_element(ctx):
    # a fixed point of C (x) F with Gaussian-rational coordinates
    G = hilbert.gaussian
    return hilbert.QuadFieldElement(G(Fraction(1, 3), 2), G(Fraction(-1, 5), Fraction(1, 7)), ctx.d)


def cmd_hilbert(args):
    ctx = hilbert.field_context(args.d)
    params = {"d": args.d, "check": args.check}
    tol = tolerances()
    if args.check == "dual-bases":
        rep = hilbert.dual_basis_report(ctx)
        return make_report("hilbert", params, rep["pass"], {"context": ctx.to_json(), **rep},
                           {"embedding": rep["embedding_residual"]})
    if args.check == "h-map":
        tau = parse_vector(args.tau) if args.tau else np.array([1j, 1j])
        h = hilbert.h_map(ctx, tau)
        ok = symplectic.is_siegel(h)
        return make_report("hilbert", {**params, "tau": complex_vector(tau)}, ok,
                           {"h": complex_matrix(h), "in_siegel": ok})
    if args.check == "iota":
        t = _exact_tau_element(ctx)
        one, zero = ctx.el(1), ctx.el(0)
        M = hilbert.iota_embed(ctx, ((one, t), (zero, one)))
        h = hilbert.h_map_exact(ctx, t)
        expected = symplectic.psi(np.array(h, dtype=object))
        exact_ok = bool(np.all(M == expected))
        rng = np.random.default_rng(args.seed)
        integral_ok = all(
            symplectic.is_exact_symplectic(hilbert.iota_embed(ctx, hilbert.random_integral_sl(ctx, 8, rng)))
            for _ in range(20))
        return make_report("hilbert", params, exact_ok and integral_ok,
                           {"psi_identity_exact": exact_ok, "integral_samples_symplectic": integral_ok})
    if args.check == "period-compat":
        if args.tau:
            taus = [parse_vector(args.tau)]
        else:
            rng = np.random.default_rng(args.seed)
            taus = [rng.uniform(-1, 1, 2) + 1j * rng.uniform(0.5, 2, 2) for _ in range(20)]
        reports = [hilbert.hilbert_hodge_check(ctx, t) for t in taus]
        worst = {k: max(r["clauses"][k] for r in reports) for k in reports[0]["clauses"]}
        ok = all(r["lattice_exact"] for r in reports) and all(v <= 1e-10 for v in worst.values())
        return make_report("hilbert", params, ok, {"samples": len(taus)}, worst)
    if args.check == "qexp-map":
        m = hilbert.qexp_exponent_map(ctx)
        return make_report("hilbert", params, True, {k: list(v) for k, v in m.items()})
    raise UsageError(f"unknown hilbert check {args.check!r}")


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="membership tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 42)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a JSON report")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include wall time in the report")

    p = argparse.ArgumentParser(prog="hramanujan", parents=[common],
                                description="Higher Ramanujan equations lab")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eisenstein", parents=[common], help="q-expansion of E2, E4 or E6")
    s.add_argument("--k", type=int, choices=(2, 4, 6), required=True)
    s.add_argument("--order", type=int, default=10)
    s.set_defaults(func=cmd_eisenstein)

    s = sub.add_parser("verify", parents=[common], help="exact identity checks")
    s.add_argument("--check", required=True,
                   choices=list(SERIES_CHECKS) + list(STRUCTURE_CHECKS) + ["all"])
    s.add_argument("--order", type=int, default=50)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("periods", parents=[common], help="period matrices at tau")
    s.add_argument("--g", type=int)
    s.add_argument("--tau", required=True, help="JSON matrix or @file")
    s.add_argument("--delta", help="optional 2g x 2g symplectic matrix")
    s.set_defaults(func=cmd_periods)

    s = sub.add_parser("flow", parents=[common], help="RK4 integration of the g=1 system")
    s.add_argument("--from", dest="start", required=True)
    s.add_argument("--to", dest="end", required=True)
    s.add_argument("--step", type=float, default=1e-3)
    s.add_argument("--chart", choices=("e_chart", "b_chart"), default="e_chart")
    s.add_argument("--bound", type=float, default=1e-8, help="allowed relative error")
    s.set_defaults(func=cmd_flow)

    s = sub.add_parser("twist-check", parents=[common], help="twisted ODE residual")
    s.add_argument("--delta", default="[[1,0],[0,1]]")
    s.add_argument("--tau", action="append", help="repeatable; default is a 10-point grid")
    s.add_argument("--h", type=float, default=1e-4)
    s.add_argument("--bound", type=float, default=1e-5)
    s.set_defaults(func=cmd_twist)

    s = sub.add_parser("leaf", parents=[common], help="leaf frame at (delta, tau)")
    s.add_argument("--delta", required=True)
    s.add_argument("--tau", required=True)
    s.set_defaults(func=cmd_leaf)

    s = sub.add_parser("density", parents=[common], help="Zariski-density rank probe")
    s.add_argument("--delta")
    s.add_argument("--tau", default="[[[0,1]]]")
    s.add_argument("--degree", type=int, default=2)
    s.add_argument("--samples", type=int, default=60)
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("hilbert", parents=[common], help="real multiplication checks")
    s.add_argument("--d", type=int, default=5)
    s.add_argument("--check", required=True,
                   choices=("dual-bases", "h-map", "iota", "period-compat", "qexp-map"))
    s.add_argument("--tau", help="JSON pair of complex numbers")
    s.set_defaults(func=cmd_hilbert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.tol = getattr(args, "tol", 1e-9)
    args.seed = getattr(args, "seed", 42)
    json_mode = getattr(args, "json", False)
    timing = getattr(args, "timing", False)
    previous = set_tolerances(membership=args.tol)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (UsageError, LabError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    finally:
        set_tolerances(**previous.__dict__)
    if timing:
        report["wall_time"] = time.perf_counter() - start
    emit_report(report, json_mode)
    return 0 if report["pass"] in (True, None) else 1


if __name__ == "__main__":
    sys.exit(main())
