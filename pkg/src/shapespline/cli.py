"""Command-line front end: JSON in, JSON/CSV out.

Subcommands
-----------
check       build the spline and run every applicable criterion; exit 0 when
            all applicable criteria pass, 1 when any fails, 2 on input error
measures    chords, turn binormals, span twists and classifications
sample      CSV export of positions / curvature / torsion numerator
inflection  inflection counts of the data polygon and of each built segment

``--verify`` (check / inflection) re-derives every passing verdict with the
sampling oracles and fails on any disagreement.  ``SHAPESPLINE_SEED`` pins
the randomized mixed-normal probes used there.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import oracle
from .criteria import Criterion, Tolerances
from .geometry import norm, sine_angle
from .polygon import DataPolygon, classify_vertex, spatial_arc_inflection_count
from .spline import (
    Parameterization,
    SplineConfig,
    TangentMode,
    analyze,
    build_spline,
    sample_spline,
)

_CONFIG_KEYS = (
    "eps0",
    "eps1",
    "eps_zero",
    "tension",
    "parameterization",
    "samples",
    "directions",
    "eta_fraction",
)


class InputError(ValueError):
    pass


def load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input document: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    if doc.get("version", 1) != 1:
        raise InputError(f"unsupported document version {doc.get('version')!r}")
    pts = doc.get("points")
    if not isinstance(pts, list) or len(pts) < 2:
        raise InputError("'points' must list at least 2 points")
    for p in pts:
        if not (isinstance(p, list) and len(p) == 3):
            raise InputError("each point must be an [x, y, z] triple")
    for key in ("tangents", "knots"):
        if key in doc and doc[key] is not None:
            if not isinstance(doc[key], list):
                raise InputError(f"'{key}' must be a list")
            want = len(pts)
            if len(doc[key]) != want:
                raise InputError(f"'{key}' must have {want} entries")
    cfg = doc.get("config", {})
    if cfg and not isinstance(cfg, dict):
        raise InputError("'config' must be an object")
    for key in cfg:
        if key not in _CONFIG_KEYS:
            raise InputError(f"unknown config key {key!r}")
    return doc


def _resolve_settings(args, doc: dict) -> dict:
    """Defaults, overridden by the document's config, overridden by flags."""
    settings = {
        "eps0": 0.05,
        "eps1": 0.05,
        "eps_zero": 1e-9,
        "tension": 0.5,
        "parameterization": "chord",
        "samples": 512,
        "directions": 2048,
        "eta_fraction": 1.0,
        "tangents": "catmull-rom",
    }
    file_cfg = doc.get("config", {}) or {}
    settings.update({k: file_cfg[k] for k in _CONFIG_KEYS if k in file_cfg})
    flag_map = {
        "eps0": args.eps_collinear,
        "eps1": args.eps_coplanar,
        "eps_zero": args.eps_zero,
        "tension": args.tension,
        "parameterization": args.param,
        "samples": args.samples,
        "directions": args.directions,
        "eta_fraction": args.eta,
        "tangents": args.tangents,
    }
    settings.update({k: v for k, v in flag_map.items() if v is not None})
    return settings


def _build(doc: dict, settings: dict):
    tol = Tolerances(
        eps_collinear=float(settings["eps0"]),
        eps_coplanar=float(settings["eps1"]),
        eps_zero=float(settings["eps_zero"]),
        eta_fraction=float(settings["eta_fraction"]),
    )
    param = {
        "uniform": Parameterization.UNIFORM,
        "chord": Parameterization.CHORD_LENGTH,
    }.get(settings["parameterization"])
    if param is None:
        raise InputError(f"unknown parameterization {settings['parameterization']!r}")
    mode = {
        "catmull-rom": TangentMode.CATMULL_ROM,
        "provided": TangentMode.PROVIDED,
    }.get(settings["tangents"])
    if mode is None:
        raise InputError(f"unknown tangent mode {settings['tangents']!r}")
    cfg = SplineConfig(
        tangent_mode=mode,
        tension=float(settings["tension"]),
        parameterization=param,
        tolerances=tol,
    )
    try:
        polygon = DataPolygon(doc["points"], eps_zero=tol.eps_zero)
        spline = build_spline(
            polygon,
            cfg,
            provided_tangents=doc.get("tangents"),
            knots=doc.get("knots"),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return polygon, spline, cfg


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=1)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _config_echo(settings: dict) -> dict:
    return {k: settings[k] for k in sorted(settings)}


# ---------------------------------------------------------------------------
# oracle cross-checks for --verify


def _verify_report(spline, report, cfg: SplineConfig, settings: dict) -> list:
    """Re-derive every passing segment verdict by sampling; return a list
    of human-readable disagreement strings (empty = clean)."""
    seed = int(os.environ.get("SHAPESPLINE_SEED", "0"))
    rng = np.random.default_rng(seed)
    tol = cfg.tolerances
    n_samples = int(settings["samples"])
    poly = spline.polygon
    problems = []

    for seg_rep in report.segments:
        i = seg_rep.index
        seg = spline.segments[i - 1]
        ctrl = seg.bezier_points
        us = np.linspace(0.0, 1.0, n_samples)
        omegas, _ = oracle.curvature_samples(ctrl, n_samples, seg.h)
        tangents = np.array(
            [oracle.decasteljau_derivatives(ctrl, u, seg.h)[0] for u in us]
        )
        positions = np.array([oracle.decasteljau(ctrl, u) for u in us])
        sampled = oracle.SampledCurve(us, positions)
        normals = (
            (poly.binormal(i - 1), poly.binormal(i)) if 2 <= i <= poly.n_segments - 1 else None
        )

        for verdict in seg_rep.verdicts:
            if not (verdict.applicable and verdict.passed):
                continue
            crit = verdict.criterion
            if crit is Criterion.CONVEXITY and normals is not None:
                for tag, nv in zip(("prev", "cur"), normals):
                    if not oracle.sampled_global_convexity(sampled, nv, tol.eps_zero):
                        problems.append(
                            f"segment {i}: convexity passed but sampled projection "
                            f"along the {tag} binormal is not convex"
                        )
            elif crit is Criterion.INFLECTION and normals is not None:
                b_prev, b_cur = normals
                probes = [b_prev, b_cur]
                for _ in range(8):
                    lam = rng.uniform(0.1, 1.0)
                    mu = -rng.uniform(0.1, 1.0)
                    probes.append(lam * b_prev + mu * b_cur)
                for k, nv in enumerate(probes):
                    vals = omegas @ nv
                    band = tol.eps_zero * max(float(np.abs(vals).max()), 1e-300)
                    vals = np.where(np.abs(vals) <= band, 0.0, vals)
                    changes = oracle.sign_changes(vals)
                    if changes != 1:
                        problems.append(
                            f"segment {i}: inflection passed but sampled bending "
                            f"flips {changes} times along probe {k}"
                        )
            elif crit is Criterion.TORSION:
                tau = seg.torsion_numerator()
                for u in (0.0, 0.37, 0.5, 1.0):
                    d1, d2, d3 = oracle.decasteljau_derivatives(ctrl, u, seg.h)
                    det = float(np.dot(np.cross(d1, d2), d3))
                    if abs(det - tau) > 1e-9 * max(abs(tau), abs(det), 1e-300):
                        problems.append(
                            f"segment {i}: torsion numerator {tau} disagrees with "
                            f"sampled determinant {det} at u={u}"
                        )
            elif crit is Criterion.COPLANARITY and normals is not None:
                for tag, nv in zip(("prev", "cur"), normals):
                    scale = float(np.linalg.norm(omegas, axis=1).max())
                    for w in omegas:
                        wn = norm(w)
                        if wn <= tol.eps_zero * max(scale, 1e-300):
                            continue
                        if sine_angle(w, nv) >= tol.eps_coplanar:
                            problems.append(
                                f"segment {i}: coplanarity passed but a sampled "
                                f"binormal tilts past eps1 from the {tag} normal"
                            )
                            break
            elif crit is Criterion.COLLINEARITY:
                j = int(verdict.diagnostics.get("vertex", 0))
                chords = [poly.chord(j), poly.chord(j + 1)] if j else [seg.chord]
                for d1 in tangents:
                    if norm(d1) == 0.0:
                        continue
                    if any(sine_angle(d1, l) >= tol.eps_collinear for l in chords):
                        problems.append(
                            f"segment {i}: collinearity passed but a sampled tangent "
                            f"tilts past eps0 from the chords"
                        )
                        break
    return problems


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    doc = load_document(args.input)
    settings = _resolve_settings(args, doc)
    polygon, spline, cfg = _build(doc, settings)
    report = analyze(spline, cfg)
    payload = {"version": 1, "config": _config_echo(settings), **report.to_dict()}
    failures = [
        v for v in report.all_verdicts() if v.applicable and not v.passed
    ]
    exit_code = 1 if failures else 0
    if args.verify:
        problems = _verify_report(spline, report, cfg, settings)
        payload["verify"] = {"disagreements": problems}
        if problems:
            exit_code = 1
    _emit(payload, args.out)
    return exit_code


def cmd_measures(args) -> int:
    doc = load_document(args.input)
    settings = _resolve_settings(args, doc)
    polygon = DataPolygon(doc["points"], eps_zero=float(settings["eps_zero"]))
    n = polygon.n_segments
    payload = {
        "version": 1,
        "config": _config_echo(settings),
        "chords": [[float(x) for x in c] for c in polygon.chords],
        "binormals": [
            {"vertex": j, "v": [float(x) for x in polygon.binormal(j)]}
            for j in range(1, n)
        ],
        "deltas": [
            {"span": i, "value": float(polygon.span_torsion(i))} for i in range(2, n)
        ],
        "spans": [
            {"index": i, "flags": sorted(f.value for f in classify_vertex(polygon, i))}
            for i in range(1, n + 1)
        ],
        "collinear_vertices": [
            j for j in range(1, n) if polygon.vertex_is_collinear(j)
        ],
    }
    _emit(payload, args.out)
    return 0


def cmd_sample(args) -> int:
    doc = load_document(args.input)
    settings = _resolve_settings(args, doc)
    polygon, spline, cfg = _build(doc, settings)
    rows = sample_spline(spline, args.per_segment)
    lines = ["segment_index,t,x,y,z,wx,wy,wz,tau_num"]
    for i, t, pos, omega, tau in rows:
        nums = [t, *pos, *omega, tau]
        lines.append(str(i) + "," + ",".join(f"{v:.17g}" for v in nums))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_inflection(args) -> int:
    doc = load_document(args.input)
    settings = _resolve_settings(args, doc)
    polygon, spline, cfg = _build(doc, settings)
    directions = int(settings["directions"])
    arc_count = spatial_arc_inflection_count(polygon, directions)
    seg_counts = [
        oracle.projected_inflection_count(
            seg, directions, int(settings["samples"]), cfg.tolerances.eps_zero
        )
        for seg in spline.segments
    ]
    payload = {
        "version": 1,
        "config": _config_echo(settings),
        "arc_count": arc_count,
        "per_segment_curve_counts": seg_counts,
    }
    exit_code = 0
    if args.verify:
        problems = []
        dense = spatial_arc_inflection_count(polygon, 2 * directions)
        if dense > arc_count:
            problems.append(
                f"arc count {arc_count} undercounts: {dense} at double density"
            )
        for k, seg in enumerate(spline.segments):
            dense = oracle.projected_inflection_count(
                seg, 2 * directions, int(settings["samples"]), cfg.tolerances.eps_zero
            )
            if dense > seg_counts[k]:
                problems.append(
                    f"segment {k + 1} count {seg_counts[k]} undercounts: {dense} "
                    f"at double density"
                )
        payload["verify"] = {"disagreements": problems}
        if problems:
            exit_code = 1
    _emit(payload, args.out)
    return exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shapespline",
        description="Shape-preservation diagnostics for cubic spline interpolation",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="path to a JSON input document")
        p.add_argument("--eps-collinear", type=float, default=None, help="sine bound for collinearity (default 0.05)")
        p.add_argument("--eps-coplanar", type=float, default=None, help="sine bound for coplanarity (default 0.05)")
        p.add_argument("--eps-zero", type=float, default=None, help="zero-classification threshold (default 1e-9)")
        p.add_argument("--tension", type=float, default=None, help="tangent magnitude scale (default 0.5)")
        p.add_argument("--param", choices=["uniform", "chord"], default=None, help="knot parameterization (default chord)")
        p.add_argument("--samples", type=int, default=None, help="parameter samples for oracles (default 512)")
        p.add_argument("--directions", type=int, default=None, help="view directions for inflection search (default 2048)")
        p.add_argument("--eta", type=float, default=None, dest="eta", help="collinearity window fraction (default 1.0)")
        p.add_argument("--tangents", choices=["catmull-rom", "provided"], default=None, help="tangent source (default catmull-rom)")
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")

    p_check = sub.add_parser("check", help="run the criteria battery")
    common(p_check)
    p_check.add_argument("--verify", action="store_true", help="cross-check passing verdicts with sampling oracles")
    p_check.set_defaults(func=cmd_check)

    p_meas = sub.add_parser("measures", help="discrete measures of the data polygon")
    common(p_meas)
    p_meas.set_defaults(func=cmd_measures)

    p_samp = sub.add_parser("sample", help="CSV samples of the built spline")
    common(p_samp)
    p_samp.add_argument("--per-segment", type=int, default=33, help="samples per segment (default 33)")
    p_samp.set_defaults(func=cmd_sample)

    p_infl = sub.add_parser("inflection", help="inflection counts of polygon and segments")
    common(p_infl)
    p_infl.add_argument("--verify", action="store_true", help="cross-check counts at double direction density")
    p_infl.set_defaults(func=cmd_inflection)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
