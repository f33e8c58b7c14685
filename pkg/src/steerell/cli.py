"""Command line interface.

Subcommands:
  analyze         full report for one state: ellipsoid, tangency, margins,
                  classification and probability bounds
  tangency        sphere-contact classification only
  section         plane-section parameters for a given normal
  family-sweep    CSV sweep over a closed-form family
  oracle-compare  randomized cross-check of the margin criterion against the
                  in-plane triangle oracle

Exit codes: 0 success, 1 file or argument errors, 2 unphysical state,
3 no usable sphere contact. All output is deterministic for fixed inputs.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import criteria, families, oracle, sampling
from .ellipsoid import SINGLE_TANGENT, plane_section, steering_ellipsoid, tangency
from .errors import NonPhysical, NoTangency, SteerellError
from .paulicore import state_from_json_dict, state_to_json_dict
from .tolerances import BOUNDARY_BAND

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONPHYSICAL = 2
EXIT_NO_TANGENCY = 3


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _emit(payload, out_path):
    text = json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_state(path, tol):
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise _CliError(EXIT_USAGE, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise _CliError(EXIT_USAGE, f"invalid JSON in {path}: {exc}")
    try:
        return state_from_json_dict(data, tol=tol)
    except NonPhysical as exc:
        raise _CliError(EXIT_NONPHYSICAL, f"unphysical state: {exc}")
    except (KeyError, TypeError, ValueError) as exc:
        raise _CliError(EXIT_USAGE, f"bad state file {path}: {exc}")


class _CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _tangency_dict(report):
    return {
        "status": report.status,
        "kernel_dim": report.kernel_dim,
        "cluster_size": report.cluster_size,
        "roots": None if report.roots is None else list(report.roots),
        "point": report.point,
        "axis": report.axis,
        "p_probability": report.p_probability,
    }


def _ellipsoid_dict(ell):
    return {
        "centre": ell.centre,
        "semiaxes": ell.semiaxes,
        "axes": ell.axes,
        "zero_volume": ell.zero_volume,
    }


def cmd_analyze(args):
    state = _load_state(args.state, args.tol)
    ell = steering_ellipsoid(state)
    report = tangency(ell)
    payload = {
        "state": state_to_json_dict(state),
        "alice_purity_gap": state.alice_purity_gap(),
        "ellipsoid": _ellipsoid_dict(ell),
        "tangency": _tangency_dict(report),
    }
    if report.status != SINGLE_TANGENT:
        payload["error"] = f"contact classification is {report.status}; margin analysis needs a single contact point"
        _emit(payload, args.out)
        return EXIT_NO_TANGENCY

    p = report.point
    b = state.b
    payload["pure_state_probability"] = criteria.pure_state_probability(ell, p, b)
    locus = criteria.locus_of_h(ell, b, n_planes=args.planes, p=p)
    margins = np.array([v.margin for v in locus.verdicts])
    classification = (
        criteria.ALL_INSIDE
        if np.all(margins > 0.0)
        else criteria.ALL_OUTSIDE
        if np.all(margins <= 0.0)
        else criteria.CROSSING
    )
    margin_max = float(margins.max())
    margin_min = float(margins.min())
    bounds_ell = criteria.p_bounds(ell, p=p, resolution=(args.planes, 2 * args.planes))
    bounds_pencil = criteria.p_bounds(ell, p=p, b=b, resolution=(args.planes, args.planes))
    payload.update(
        {
            "classification": classification,
            "margin_min": margin_min,
            "margin_max": margin_max,
            "steerable": bool(margin_max > 0.0),
            "indeterminate": bool(abs(margin_max) < args.band),
            "p_bounds": {
                "p_min": bounds_ell.p_min,
                "p_max": bounds_ell.p_max,
                "n_planes": bounds_ell.n_planes,
            },
            "p_bounds_pencil": {
                "p_min": bounds_pencil.p_min,
                "p_max": bounds_pencil.p_max,
                "n_planes": bounds_pencil.n_planes,
            },
        }
    )
    _emit(payload, args.out)
    return EXIT_OK


def cmd_tangency(args):
    state = _load_state(args.state, args.tol)
    ell = steering_ellipsoid(state)
    report = tangency(ell)
    payload = {
        "ellipsoid": _ellipsoid_dict(ell),
        "tangency": _tangency_dict(report),
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_section(args):
    state = _load_state(args.state, args.tol)
    ell = steering_ellipsoid(state)
    report = tangency(ell)
    if report.status != SINGLE_TANGENT:
        sys.stderr.write(f"contact classification is {report.status}\n")
        return EXIT_NO_TANGENCY
    try:
        normal = np.array([float(x) for x in args.normal.split(",")])
        if normal.shape != (3,):
            raise ValueError
    except ValueError:
        raise _CliError(EXIT_USAGE, f"--normal must be three comma-separated numbers, got {args.normal!r}")
    norm = np.linalg.norm(normal)
    if norm == 0:
        raise _CliError(EXIT_USAGE, "--normal must be nonzero")
    section = plane_section(ell, report.point, normal / norm)
    b_local = section.to_plane(state.b)
    verdict = criteria.steerable_in_plane(section, b_local)
    bounds = criteria.p_bounds_in_plane(section)
    payload = {
        "R": section.R,
        "m": section.m,
        "n": section.n,
        "delta": section.delta,
        "point": section.point,
        "normal": section.normal,
        "u_axis": section.u_axis,
        "v_axis": section.v_axis,
        "b_local": b_local,
        "margin": verdict.margin,
        "steerable": verdict.steerable,
        "indeterminate": verdict.indeterminate,
        "h_local": verdict.h_local,
        "plane_p_min": bounds.p_min,
        "plane_p_max": bounds.p_max,
    }
    _emit(payload, args.out)
    return EXIT_OK


def _parse_params(pairs):
    grids = {}
    for pair in pairs or []:
        try:
            name, rng = pair.split("=", 1)
            start, stop, count = rng.split(":")
            grids[name] = np.linspace(float(start), float(stop), int(count))
        except ValueError:
            raise _CliError(EXIT_USAGE, f"bad --param {pair!r}, expected name=start:stop:count")
    return grids


def _sweep_row(state, ell, p, b, planes, pencil_bounds):
    p_pure = criteria.pure_state_probability(ell, p, b)
    locus = criteria.locus_of_h(ell, b, n_planes=planes, p=p)
    margin = float(max(v.margin for v in locus.verdicts))
    if pencil_bounds:
        bounds = criteria.p_bounds(ell, p=p, b=b, resolution=(planes, planes))
    else:
        bounds = criteria.p_bounds(ell, p=p, resolution=(planes, 2 * planes))
    return {
        "steerable": margin > 0.0,
        "p_p": p_pure,
        "p_min": bounds.p_min,
        "p_max": bounds.p_max,
        "margin": margin,
    }


def cmd_family_sweep(args):
    grids = _parse_params(args.param)
    planes = args.planes
    rows = []
    if args.family == "obese":
        cs = grids.get("c", np.linspace(0.0, 0.99, 100))
        for c in cs:
            state = families.obese_state(c)
            ell = steering_ellipsoid(state)
            row = {"c": c}
            row.update(_sweep_row(state, ell, np.array([0.0, 0.0, 1.0]), state.b, planes, False))
            rows.append(row)
        header = ["c", "steerable", "p_p", "p_min", "p_max", "margin"]
    elif args.family == "sphere":
        rs = grids.get("r", np.linspace(0.05, 0.95, 19))
        for r in rs:
            state = families.tangent_sphere_state(r)
            ell = steering_ellipsoid(state)
            row = {"r": r}
            row.update(_sweep_row(state, ell, np.array([0.0, 0.0, 1.0]), state.b, planes, False))
            rows.append(row)
        header = ["r", "steerable", "p_p", "p_min", "p_max", "margin"]
    elif args.family == "spheroid":
        ms = grids.get("m", np.linspace(0.2, 0.8, 7))
        ns = grids.get("n", np.linspace(0.2, 0.8, 7))
        for m in ms:
            for n in ns:
                if n * n > m:
                    continue
                state = families.tangent_spheroid_state(m, n)
                ell = steering_ellipsoid(state)
                row = {"m": m, "n": n}
                row.update(_sweep_row(state, ell, np.array([0.0, 0.0, 1.0]), state.b, planes, False))
                rows.append(row)
        header = ["m", "n", "steerable", "p_p", "p_min", "p_max", "margin"]
    elif args.family == "xstate":
        as_ = grids.get("a", np.linspace(0.0, 0.6, 4))
        bs = grids.get("b", np.linspace(0.2, 0.8, 4))
        ts = grids.get("t", np.linspace(0.1, 0.9, 5))
        thetas = np.linspace(0.0, np.pi / 2, 19)
        for a in as_:
            for b in bs:
                if b <= a:
                    continue
                for t in ts:
                    if t * t > (1.0 + a) * (1.0 - b):
                        continue
                    state = families.tangent_x_state(a, b, t, -t)
                    ell = steering_ellipsoid(state)
                    row = {"a": a, "b": b, "t": t}
                    row.update(
                        _sweep_row(state, ell, np.array([0.0, 0.0, 1.0]), state.b, planes, True)
                    )
                    agree = True
                    for theta in thetas:
                        try:
                            families.x_state_steerable(a, b, t, -t, theta)
                        except AssertionError:
                            agree = False
                            break
                    row["forms_agree"] = agree
                    rows.append(row)
        header = ["a", "b", "t", "steerable", "p_p", "p_min", "p_max", "margin", "forms_agree"]
    else:
        raise _CliError(EXIT_USAGE, f"unknown family {args.family!r}")

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row[key]) for key in header])
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _csv_cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return value


def cmd_oracle_compare(args):
    rng = np.random.default_rng(args.seed)
    band = args.band
    n_band = 0
    n_agree = 0
    n_compared = 0
    n_unsteerable = 0
    n_models_missing = 0
    max_residual = 0.0
    for _ in range(args.n):
        state, ell, report = sampling.random_tangent_state(rng)
        asm = None
        for _ in range(50):
            axis1 = sampling.random_unit_vector(rng)
            try:
                cand = oracle.assemblage_from_state(state, axis1, ell=ell, report=report)
            except SteerellError:
                continue
            if not (0.02 < cand.probs1[0] < 0.98):
                continue
            if np.linalg.norm(cand.s_plus1 - cand.s_minus1) < 0.05:
                continue
            asm = cand
            break
        if asm is None:
            continue
        verdict = criteria.steerable_in_plane(asm.section, asm.b_local)
        if abs(verdict.margin) < band:
            n_band += 1
            continue
        try:
            oracle_verdict = oracle.triangle_criterion(asm)
        except SteerellError:
            n_band += 1
            continue
        n_compared += 1
        if verdict.steerable == oracle_verdict.steerable:
            n_agree += 1
        if not oracle_verdict.steerable:
            n_unsteerable += 1
            model = oracle.triangle_search(asm, grid=args.grid)
            if model is None:
                n_models_missing += 1
            else:
                max_residual = max(max_residual, model.max_residual)
    payload = {
        "n": args.n,
        "seed": args.seed,
        "band": band,
        "grid": args.grid,
        "n_within_band": n_band,
        "n_compared": n_compared,
        "n_agree": n_agree,
        "agreement": (n_agree / n_compared) if n_compared else None,
        "n_unsteerable": n_unsteerable,
        "n_models_missing": n_models_missing,
        "max_reconstruction_residual": max_residual,
    }
    _emit(payload, args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="steerell",
        description="steering-ellipsoid analysis of two-qubit states in the "
        "two-measurement, one-pure-steered-state scenario",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, state=True):
        if state:
            sp.add_argument("--state", required=True, help="JSON state file")
        sp.add_argument("--tol", type=float, default=1e-9, help="positivity tolerance")
        sp.add_argument("--out", default=None, help="write output to this path instead of stdout")

    sp = sub.add_parser("analyze", help="full steerability report for one state")
    add_common(sp)
    sp.add_argument("--planes", type=int, default=180, help="pencil resolution")
    sp.add_argument("--band", type=float, default=BOUNDARY_BAND, help="indeterminate margin band")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("tangency", help="sphere-contact classification")
    add_common(sp)
    sp.set_defaults(func=cmd_tangency)

    sp = sub.add_parser("section", help="plane-section parameters for a normal")
    add_common(sp)
    sp.add_argument("--normal", required=True, help="plane normal as x,y,z")
    sp.set_defaults(func=cmd_section)

    sp = sub.add_parser("family-sweep", help="CSV sweep over a closed-form family")
    sp.add_argument("--family", required=True, choices=["obese", "sphere", "spheroid", "xstate"])
    sp.add_argument("--param", action="append", help="grid override name=start:stop:count")
    sp.add_argument("--planes", type=int, default=90, help="pencil resolution per row")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_family_sweep)

    sp = sub.add_parser("oracle-compare", help="randomized margin-vs-triangle cross-check")
    sp.add_argument("--n", type=int, default=1000, help="number of sampled tangent states")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--grid", type=int, default=2000, help="triangle sweep resolution")
    sp.add_argument("--band", type=float, default=1e-8, help="margin exclusion band")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_oracle_compare)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except NonPhysical as exc:
        sys.stderr.write(f"error: unphysical state: {exc}\n")
        return EXIT_NONPHYSICAL
    except NoTangency as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NO_TANGENCY
    except SteerellError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
