"""Command line surface: exact resolution certificates and solver runs as
deterministic JSON reports.

Commands
    resolve2d R A          minimal resolution pipeline for 1/R(1, A)
    resolve3d R A          five-cone family for 1/R(1, 1, A)
    check-subdivision F    certify a user supplied fan subdivision file
    radial RUNFILE         continuity-path solve, decay fit, mass bookkeeping
    sweep2d RMAX           all coprime pairs with r <= RMAX, aggregated

Exit codes: 0 all applicable certificates pass, 1 certificate failure,
2 usage or parse error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .formats import ParseError, parse_run_file, parse_subdivision_file, rational_str, real_str
from .quotient import CyclicQuotient, singularity_data
from .radial import (
    DecayFitError,
    SolverFailure,
    decay_fit,
    mass_integral,
    newton_continuity_solve,
    oracle_deviation,
)
from .resolution import (
    angle_condition,
    build_subdivision,
    hj_resolution,
    three_dim_family,
    validate_subdivision,
)
from .surface import (
    IntersectionMatrix,
    adjunction_check,
    chain_strata,
    energy,
    family_strata,
    volume_density_inequality,
)

PASS, FAIL, NA = "pass", "fail", "not-applicable"

GAMMA_NOTE = "gamma computed by closed formula and re-verified by exact pairing with every cone generator"
ENERGY_NOTE = "energy node terms assume the boundary tube limit at normal crossing points; value is conditional there"


def _meta(command: str) -> dict:
    return {"tool": "alequot", "version": __version__, "command": command}


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def _angle_certificate(verdict) -> dict:
    if verdict.theorem_applies:
        v = PASS
    elif verdict.acceptable:
        v = NA
    else:
        v = FAIL
    return {
        "verdict": v,
        "status": verdict.status,
        "per_ray": list(verdict.labels),
        "beta": [rational_str(ray.beta) for ray in verdict.rays],
    }


def _strata_certificate(report) -> dict:
    return {
        "verdict": _verdict(report.overall),
        "nu": rational_str(report.nu),
        "strata": [
            {
                "rays": list(chk.indices),
                "product": rational_str(chk.product),
                "strict": chk.strict,
            }
            for chk in report.strata
        ],
    }


def _exit_from_certificates(certs: dict) -> int:
    return 1 if any(entry["verdict"] == FAIL for entry in certs.values()) else 0


def resolve2d_report(r: int, a: int) -> tuple[dict, int]:
    q = CyclicQuotient(r=r, weights=(a,))
    data = singularity_data(q)
    chain = hj_resolution(q)
    verdict = angle_condition(chain)
    im = IntersectionMatrix(bs=chain.self_intersections)
    adj_ok = adjunction_check(chain)
    bk = energy(chain)
    strata = volume_density_inequality(chain.rays, chain_strata(len(chain.rays)), data.volume_density)

    certificates = {
        "angle_condition": _angle_certificate(verdict),
        "negative_definite": {
            "verdict": _verdict(im.is_negative_definite()),
            "leading_minors": im.leading_minors(),
        },
        "inverse_nonpositive": {
            "verdict": _verdict(im.inverse_entries_nonpositive()),
            "inverse_first_row": [rational_str(x) for x in im.inverse()[0]],
        },
        "adjunction": {
            "verdict": _verdict(adj_ok),
            "row_targets": [str(b - 2) for b in chain.self_intersections],
        },
        "volume_density": _strata_certificate(strata),
    }
    report = {
        "meta": _meta("resolve2d"),
        "input": {"r": r, "a": a},
        "singularity": {
            "gamma": [rational_str(g) for g in data.gamma],
            "gorenstein_index": data.gorenstein_index,
            "volume_density": rational_str(data.volume_density),
        },
        "resolution": {
            "rays": [list(ray.w) for ray in chain.rays],
            "self_intersections": list(chain.self_intersections),
            "continued_fraction": list(chain.continued_fraction),
            "beta": [rational_str(b) for b in chain.betas],
            "discrepancies": [rational_str(ray.discrepancy) for ray in chain.rays],
        },
        "certificates": certificates,
        "energy": {
            "chi": bk.chi_x,
            "curve_terms": [rational_str(x) for x in bk.curve_terms],
            "node_terms": [rational_str(x) for x in bk.node_terms],
            "group_term": rational_str(bk.group_term),
            "total": rational_str(bk.total),
            "conditional": bk.conditional,
        },
        "notes": [GAMMA_NOTE] + ([ENERGY_NOTE] if bk.conditional else []),
    }
    return report, _exit_from_certificates(certificates)


def resolve3d_report(r: int, a: int) -> tuple[dict, int]:
    fan = three_dim_family(r, a)
    data = fan.parent
    sub_report = validate_subdivision(fan)
    verdict = angle_condition(fan)
    strata = volume_density_inequality(fan.rays, family_strata(), data.volume_density)
    certificates = {
        "unimodularity": {
            "verdict": _verdict(sub_report.all_unimodular),
            "determinants": list(sub_report.cone_determinants),
        },
        "covering": {
            "verdict": _verdict(sub_report.covering_ok),
            "weighted_volume": rational_str(sub_report.covering_sum)
            if sub_report.covering_sum is not None
            else None,
            "expected": sub_report.covering_expected,
        },
        "interiority": {
            "verdict": _verdict(sub_report.all_interior),
            "per_ray": list(sub_report.ray_interior),
        },
        "angle_condition": _angle_certificate(verdict),
        "volume_density": _strata_certificate(strata),
    }
    report = {
        "meta": _meta("resolve3d"),
        "input": {"r": r, "a": a},
        "singularity": {
            "gamma": [rational_str(g) for g in data.gamma],
            "gorenstein_index": data.gorenstein_index,
            "volume_density": rational_str(data.volume_density),
        },
        "subdivision": {
            "cones": [[list(g) for g in cone.generators] for cone in fan.cones],
            "rays": [list(ray.w) for ray in fan.rays],
            "beta": [rational_str(ray.beta) for ray in fan.rays],
            "discrepancies": [rational_str(ray.discrepancy) for ray in fan.rays],
        },
        "certificates": certificates,
        "notes": [GAMMA_NOTE],
    }
    return report, _exit_from_certificates(certificates)


def check_subdivision_report(text: str) -> tuple[dict, int]:
    quotient, cones = parse_subdivision_file(text)
    data = singularity_data(quotient)
    fan = build_subdivision(data, cones)
    sub_report = validate_subdivision(fan)
    verdict = angle_condition(fan)
    certificates = {
        "unimodularity": {
            "verdict": _verdict(sub_report.all_unimodular),
            "determinants": list(sub_report.cone_determinants),
        },
        "covering": {
            "verdict": _verdict(sub_report.covering_ok),
            "weighted_volume": rational_str(sub_report.covering_sum)
            if sub_report.covering_sum is not None
            else None,
            "expected": sub_report.covering_expected,
        },
        "interiority": {
            "verdict": _verdict(sub_report.all_interior),
            "per_ray": list(sub_report.ray_interior),
        },
        "disjointness": {
            "verdict": NA if sub_report.disjoint is None else _verdict(sub_report.disjoint),
        },
        "angle_condition": _angle_certificate(verdict),
    }
    report = {
        "meta": _meta("check-subdivision"),
        "input": {"r": quotient.r, "weights": list(quotient.weights)},
        "singularity": {
            "gamma": [rational_str(g) for g in data.gamma],
            "gorenstein_index": data.gorenstein_index,
            "volume_density": rational_str(data.volume_density),
        },
        "subdivision": {
            "cones": [[list(g) for g in cone.generators] for cone in fan.cones],
            "rays": [list(ray.w) for ray in fan.rays],
            "beta": [rational_str(ray.beta) for ray in fan.rays],
        },
        "certificates": certificates,
        "notes": [GAMMA_NOTE],
    }
    return report, _exit_from_certificates(certificates)


ORACLE_CERT_TOL = 1e-6


def radial_report(text: str) -> tuple[dict, int]:
    config, grid = parse_run_file(text)
    echo = {
        "n": config.n,
        "r": config.r_order,
        "C": real_str(config.calabi_c),
        "s0": real_str(config.s0),
        "w": real_str(config.w),
        "c": real_str(config.c),
        "s_min": real_str(grid.s_min),
        "s_max": real_str(grid.s_max),
        "nodes": grid.m,
        "t_steps": config.t_steps,
        "newton_tol": real_str(config.newton_tol),
    }
    try:
        u, trace = newton_continuity_solve(config, grid)
    except SolverFailure as exc:
        excerpt = [
            {"t": real_str(st.t), "residuals": [real_str(v) for v in st.residuals[-5:]]}
            for st in (exc.trace.steps[-3:] if exc.trace else [])
        ]
        report = {
            "meta": _meta("radial"),
            "input": echo,
            "solver": {"converged": False, "error": str(exc), "trace_excerpt": excerpt},
        }
        return report, 3

    deviation = oracle_deviation(u, config)
    certificates = {
        "solver_converged": {"verdict": PASS, "newton_iterations": trace.newton_iterations},
        "oracle_agreement": {
            "verdict": _verdict(deviation <= ORACLE_CERT_TOL),
            "relative_max_norm": real_str(deviation),
            "tolerance": ORACLE_CERT_TOL,
        },
    }
    decay_entry: dict
    try:
        fit = decay_fit(u, config)
        decay_entry = {
            "exponent_s": real_str(fit.exponent),
            "exponent_r": real_str(fit.exponent_in_r),
            "coefficient": real_str(fit.coefficient),
            "window": [real_str(fit.fit_window[0]), real_str(fit.fit_window[1])],
            "residual": real_str(fit.residual),
            "npoints": fit.npoints,
        }
        certificates["decay_fit"] = {"verdict": PASS}
    except DecayFitError as exc:
        decay_entry = {"error": str(exc)}
        certificates["decay_fit"] = {"verdict": FAIL, "error": str(exc)}

    if config.n >= 3:
        mass = mass_integral(config, grid, solution=u)
        mass_entry = {
            "verdict": PASS,
            "radial_integral": real_str(mass.radial_integral),
            "link_volume": real_str(mass.link_vol),
            "volume_integral": real_str(mass.volume_integral),
            "formula_a": real_str(mass.formula_a),
            "fitted_coefficient": real_str(mass.fitted_coefficient)
            if mass.fitted_coefficient is not None
            else None,
            "ratio": real_str(mass.ratio) if mass.ratio is not None else None,
        }
    else:
        mass_entry = {"verdict": NA, "reason": "mass normalization needs n >= 3"}

    final_step = trace.steps[-1]
    report = {
        "meta": _meta("radial"),
        "input": echo,
        "solver": {
            "converged": True,
            "newton_iterations": trace.newton_iterations,
            "final_residual": real_str(final_step.residuals[-1]),
            "residuals_last_step": [real_str(v) for v in final_step.residuals],
        },
        "oracle": {"relative_max_norm": real_str(deviation)},
        "decay": decay_entry,
        "mass": mass_entry,
        "certificates": certificates,
        "notes": [
            "mass ratio is reported, not asserted; constancy across bump amplitudes is the testable claim"
        ],
    }
    return report, _exit_from_certificates(certificates)


def sweep2d_report(r_max: int) -> tuple[dict, int]:
    from math import gcd

    counts: dict[str, dict[str, int]] = {}
    failures: list[dict] = []
    runs = 0
    for r in range(2, r_max + 1):
        for a in range(1, r):
            if gcd(a, r) != 1:
                continue
            sub_report, _ = resolve2d_report(r, a)
            runs += 1
            for name, entry in sub_report["certificates"].items():
                bucket = counts.setdefault(name, {PASS: 0, FAIL: 0, NA: 0})
                bucket[entry["verdict"]] += 1
                if entry["verdict"] == FAIL:
                    failures.append({"r": r, "a": a, "certificate": name})
    report = {
        "meta": _meta("sweep2d"),
        "input": {"r_max": r_max},
        "runs": runs,
        "certificates": counts,
        "failures": failures,
    }
    return report, 1 if failures else 0


def _print_human(report: dict, stream=sys.stdout) -> None:
    meta = report.get("meta", {})
    print(f"{meta.get('tool', 'alequot')} {meta.get('command', '')}", file=stream)
    for section in ("input", "singularity", "resolution", "subdivision", "solver", "oracle", "decay", "mass", "energy"):
        body = report.get(section)
        if body is None:
            continue
        parts = ", ".join(f"{k}={v}" for k, v in body.items())
        print(f"  {section}: {parts}", file=stream)
    if "runs" in report:
        print(f"  runs: {report['runs']}", file=stream)
        for name, bucket in report.get("certificates", {}).items():
            print(f"  certificate {name}: {bucket}", file=stream)
        print(f"  failures: {report.get('failures', [])}", file=stream)
    else:
        for name, entry in report.get("certificates", {}).items():
            print(f"  certificate {name}: {entry['verdict']}", file=stream)
    for note in report.get("notes", []):
        print(f"  note: {note}", file=stream)


def _emit(report: dict, code: int, json_path: str | None) -> int:
    if json_path is not None:
        document = json.dumps(report, indent=2) + "\n"
        if json_path == "-":
            sys.stdout.write(document)
        else:
            with open(json_path, "w") as fh:
                fh.write(document)
            _print_human(report)
    else:
        _print_human(report)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alequot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p2 = sub.add_parser("resolve2d", help="minimal resolution of 1/R(1, A)")
    p2.add_argument("r", type=int)
    p2.add_argument("a", type=int)
    p2.add_argument("--json", metavar="PATH", default=None)

    p3 = sub.add_parser("resolve3d", help="five-cone family for 1/R(1, 1, A)")
    p3.add_argument("r", type=int)
    p3.add_argument("a", type=int)
    p3.add_argument("--json", metavar="PATH", default=None)

    pc = sub.add_parser("check-subdivision", help="certify a fan subdivision file")
    pc.add_argument("file")
    pc.add_argument("--json", metavar="PATH", default=None)

    pr = sub.add_parser("radial", help="continuity-path solve from a run file")
    pr.add_argument("file")
    pr.add_argument("--json", metavar="PATH", default=None)

    ps = sub.add_parser("sweep2d", help="aggregate certificates for all r <= RMAX")
    ps.add_argument("r_max", type=int)
    ps.add_argument("--json", metavar="PATH", default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "resolve2d":
            report, code = resolve2d_report(args.r, args.a)
        elif args.command == "resolve3d":
            report, code = resolve3d_report(args.r, args.a)
        elif args.command == "check-subdivision":
            with open(args.file) as fh:
                text = fh.read()
            report, code = check_subdivision_report(text)
        elif args.command == "radial":
            with open(args.file) as fh:
                text = fh.read()
            report, code = radial_report(text)
        else:
            report, code = sweep2d_report(args.r_max)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _emit(report, code, args.json)


if __name__ == "__main__":
    sys.exit(main())
