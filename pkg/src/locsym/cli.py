"""Command line front end.

Every subcommand reads one JSON config (see config.py for the schema) and
writes its results into an output directory. Outputs are deterministic:
the same config and package version produce byte-identical files.

Subcommands
-----------
solve      transmission/reflection per energy + field profile CSVs
invariants symmetry-set invariants q, q_tilde per transform/energy + CSVs
detect     structural and field-based symmetry domain detection
decompose  greedy tiling of the scatterer into symmetric pieces
mapcheck   residuals of the invariant amplitude mapping across each domain
band       cell transfer matrix trace and Bloch phase per energy
scan       per-component invariants swept over energy, CSV per component

Exit codes: 0 success, 2 config/schema error (also bad usage), 3 violated
physics precondition, 4 zero-current state where a mapping was requested.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, override_tolerances, parse_config
from .detector import candidate_transforms, cls_constraint_check, cls_decompose, detect, field_based_detect
from .errors import ConfigError, PhysicsError, ZeroCurrentError
from .invariants import invariant_pair, map_field, sum_rule_residual
from .output import write_csv, write_json
from .potential import Domain, bounding_box, eval_u, symmetry_set
from .solver import bloch_state, solve_scattering, unit_cell_transfer_matrix

__all__ = ["main"]

DEFAULT_GRID_POINTS = 512

FIELD_COLUMNS = ["x", "re_a", "im_a", "abs2_a", "u"]
QFIELD_COLUMNS = FIELD_COLUMNS + ["re_q", "im_q", "re_qt", "im_qt"]
SCAN_COLUMNS = ["energy", "re_q", "im_q", "re_qt", "im_qt", "j", "sum_rule_residual"]


def _grid(profile, tols) -> np.ndarray:
    lo, hi = bounding_box(profile, tols.pad)
    step = tols.grid_step
    if step is None:
        step = (hi - lo) / DEFAULT_GRID_POINTS
    if step <= 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    n = int(np.floor((hi - lo) / step)) + 1
    return lo + step * np.arange(max(n, 2))


def _c2(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _iv(interval) -> list:
    return [float(interval[0]), float(interval[1])]


def _transform_json(t) -> dict:
    return {"sigma": t.sigma, "rho": t.rho}


def _finding_json(finding) -> dict:
    return {
        "sigma": finding.transform.sigma,
        "rho": finding.transform.rho,
        "max_width": finding.max_width,
        "components": [
            {"interval": _iv(c.interval), "image": _iv(c.image), "kind": c.kind}
            for c in finding.components
        ],
    }


def _pair_json(pair) -> dict:
    return {
        "q": _c2(pair.q),
        "q_tilde": _c2(pair.q_tilde),
        "current": pair.j,
        "scale": pair.scale,
        "constancy_residual": pair.constancy_residual,
        "constant": pair.constant,
        "sum_rule_residual": sum_rule_residual(pair),
    }


def run_solve(cfg: RunConfig, out: Path) -> int:
    profile = cfg.profile_spec.build()
    xs = _grid(profile, cfg.tolerances)
    u = eval_u(profile, xs)
    results = []
    for i, e in enumerate(cfg.energies):
        st = solve_scattering(profile, e, cfg.incidence)
        flux_resid = abs(st.k_out * abs(st.t) ** 2 + st.k_in * abs(st.r) ** 2 - st.k_in) / st.k_in
        results.append(
            {
                "energy": float(e),
                "t": _c2(st.t),
                "r": _c2(st.r),
                "transmittance": float(st.k_out * abs(st.t) ** 2 / st.k_in),
                "reflectance": float(abs(st.r) ** 2),
                "current": st.j,
                "flux_residual": float(flux_resid),
            }
        )
        a, _ = st.field_many(xs)
        write_csv(
            out / f"field_{i:03d}.csv",
            FIELD_COLUMNS,
            zip(xs, a.real, a.imag, np.abs(a) ** 2, u),
        )
    write_json(
        out / "solve.json",
        {"command": "solve", "version": __version__, "incidence": cfg.incidence, "results": results},
    )
    return 0


def run_invariants(cfg: RunConfig, out: Path) -> int:
    if not cfg.transforms:
        raise ConfigError("invariants needs at least one entry in config.transforms")
    profile = cfg.profile_spec.build()
    tols = cfg.tolerances
    xs = _grid(profile, tols)
    u = eval_u(profile, xs)
    states = [(float(e), solve_scattering(profile, e, cfg.incidence)) for e in cfg.energies]
    blocks = []
    for ti, f in enumerate(cfg.transforms):
        dom = symmetry_set(profile, f, tols.tol_u, tols.pad)
        results = []
        for ei, (e, st) in enumerate(states):
            comps = []
            for iv in dom.intervals:
                pair = invariant_pair(st, f, Domain((iv,)), tols.n_samples, tols.constancy_tol)
                comps.append({"interval": _iv(iv), **_pair_json(pair)})
            results.append({"energy": e, "components": comps})
            a, da = st.field_many(xs)
            xb = f.apply(xs)
            ab, dab = st.field_many(xb)
            q = (f.sigma * a * dab - ab * da) / 2j
            qt = (f.sigma * np.conj(a) * dab - ab * np.conj(da)) / 2j
            write_csv(
                out / f"qfield_t{ti:02d}_e{ei:03d}.csv",
                QFIELD_COLUMNS,
                zip(xs, a.real, a.imag, np.abs(a) ** 2, u, q.real, q.imag, qt.real, qt.imag),
            )
        blocks.append(
            {
                **_transform_json(f),
                "components": [_iv(iv) for iv in dom.intervals],
                "results": results,
            }
        )
    write_json(
        out / "invariants.json",
        {"command": "invariants", "version": __version__, "incidence": cfg.incidence, "transforms": blocks},
    )
    return 0


def run_detect(cfg: RunConfig, out: Path) -> int:
    profile = cfg.profile_spec.build()
    tols = cfg.tolerances
    structural = detect(profile, tols.tol_u, tols.min_width, tols.pad)
    e0 = float(cfg.energies[0])
    st = solve_scattering(profile, e0, cfg.incidence)
    cands = candidate_transforms(profile, tols.tol_u, tols.min_width, tols.pad)
    fb = field_based_detect(st, cands, tols.grid_step, tols.field_tol, tols.pad, tols.min_width)
    write_json(
        out / "detect.json",
        {
            "command": "detect",
            "version": __version__,
            "structural": [_finding_json(f) for f in structural],
            "field_based": {"energy": e0, "findings": [_finding_json(f) for f in fb]},
        },
    )
    return 0


def run_decompose(cfg: RunConfig, out: Path) -> int:
    profile = cfg.profile_spec.build()
    tols = cfg.tolerances
    e0 = float(cfg.energies[0])
    dec = cls_decompose(
        profile,
        tols.tol_u,
        energy_scale=e0,
        incidence=cfg.incidence,
        n_samples=tols.n_samples,
        min_width=tols.min_width,
        pad=tols.pad,
    )
    pieces = [
        {
            "domain": _iv(p.domain),
            "extent": _iv(p.extent),
            **_transform_json(p.transform),
            **_pair_json(p.pair),
        }
        for p in dec.pieces
    ]
    residuals = cls_constraint_check(dec.pieces)
    write_json(
        out / "decompose.json",
        {
            "command": "decompose",
            "version": __version__,
            "energy": e0,
            "scatterer": _iv(dec.scatterer),
            "covered": dec.covered,
            "pieces": pieces,
            "constraint_residuals": [float(r) for r in residuals],
        },
    )
    return 0


def run_mapcheck(cfg: RunConfig, out: Path) -> int:
    if not cfg.transforms:
        raise ConfigError("mapcheck needs at least one entry in config.transforms")
    profile = cfg.profile_spec.build()
    tols = cfg.tolerances
    records = []
    overall = 0.0
    for e in cfg.energies:
        st = solve_scattering(profile, e, cfg.incidence)
        for f in cfg.transforms:
            dom = symmetry_set(profile, f, tols.tol_u, tols.pad)
            for iv in dom.intervals:
                pair = invariant_pair(st, f, Domain((iv,)), tols.n_samples, tols.constancy_tol)
                xs = np.linspace(iv[0], iv[1], tols.n_samples)
                a_ref = 0.0
                worst = 0.0
                for x in xs:
                    s = st.field_at(float(x))
                    predicted = map_field(pair, s)
                    actual = st.field_at(float(f.apply(x))).a
                    worst = max(worst, abs(predicted - actual))
                    a_ref = max(a_ref, abs(actual), abs(s.a))
                resid = worst / a_ref if a_ref > 0 else worst
                overall = max(overall, resid)
                records.append(
                    {
                        **_transform_json(f),
                        "energy": float(e),
                        "interval": _iv(iv),
                        "max_residual": float(resid),
                        "ok": bool(resid <= tols.map_tol),
                    }
                )
    write_json(
        out / "mapcheck.json",
        {
            "command": "mapcheck",
            "version": __version__,
            "map_tol": tols.map_tol,
            "overall_max_residual": float(overall),
            "records": records,
        },
    )
    return 0


def run_band(cfg: RunConfig, out: Path) -> int:
    profile = cfg.profile_spec.build()
    cell = cfg.cell if cfg.cell is not None else profile.scatterer
    results = []
    rows = []
    for e in cfg.energies:
        cm = unit_cell_transfer_matrix(profile, cell, e)
        bs = bloch_state(cm)
        rec = {
            "energy": float(e),
            "half_trace": bs.half_trace,
            "det_residual": float(abs(cm.det - 1.0)),
            "in_band": bs.in_band,
            "theta": bs.theta,
            "growth": bs.growth,
        }
        results.append(rec)
        rows.append(
            (
                float(e),
                bs.half_trace,
                bs.in_band,
                bs.theta if bs.theta is not None else "",
                bs.growth if bs.growth is not None else "",
            )
        )
    write_json(
        out / "band.json",
        {"command": "band", "version": __version__, "cell": _iv(cell), "results": results},
    )
    write_csv(out / "band.csv", ["energy", "half_trace", "in_band", "theta", "growth"], rows)
    return 0


def run_scan(cfg: RunConfig, out: Path) -> int:
    if not cfg.transforms:
        raise ConfigError("scan needs at least one entry in config.transforms")
    profile = cfg.profile_spec.build()
    tols = cfg.tolerances
    doms = [symmetry_set(profile, f, tols.tol_u, tols.pad) for f in cfg.transforms]
    tables: dict[tuple[int, int], list] = {
        (ti, ci): []
        for ti, dom in enumerate(doms)
        for ci in range(len(dom.intervals))
    }
    for e in cfg.energies:
        st = solve_scattering(profile, e, cfg.incidence)
        for ti, (f, dom) in enumerate(zip(cfg.transforms, doms)):
            for ci, iv in enumerate(dom.intervals):
                pair = invariant_pair(st, f, Domain((iv,)), tols.n_samples, tols.constancy_tol)
                tables[(ti, ci)].append(
                    (
                        float(e),
                        pair.q.real,
                        pair.q.imag,
                        pair.q_tilde.real,
                        pair.q_tilde.imag,
                        pair.j,
                        sum_rule_residual(pair),
                    )
                )
    files = []
    for ti, (f, dom) in enumerate(zip(cfg.transforms, doms)):
        for ci, iv in enumerate(dom.intervals):
            name = f"scan_t{ti:02d}_c{ci:02d}.csv"
            write_csv(out / name, SCAN_COLUMNS, tables[(ti, ci)])
            files.append({"file": name, **_transform_json(f), "interval": _iv(iv)})
    write_json(
        out / "scan.json",
        {
            "command": "scan",
            "version": __version__,
            "n_energies": len(cfg.energies),
            "files": files,
        },
    )
    return 0


COMMANDS = {
    "solve": run_solve,
    "invariants": run_invariants,
    "detect": run_detect,
    "decompose": run_decompose,
    "mapcheck": run_mapcheck,
    "band": run_band,
    "scan": run_scan,
}

HELP = {
    "solve": "transmission, reflection, and field profiles per energy",
    "invariants": "invariants q and q_tilde on each symmetry domain",
    "detect": "find local symmetry domains (structural and field-based)",
    "decompose": "tile the scatterer into locally symmetric pieces",
    "mapcheck": "verify the invariant amplitude mapping on each domain",
    "band": "cell transfer matrix half-trace and Bloch phase per energy",
    "scan": "sweep invariants over energy, one CSV per domain component",
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", required=True, help="path to the JSON run config")
    shared.add_argument("--out", required=True, help="output directory (created if missing)")
    g = shared.add_argument_group("tolerance overrides")
    g.add_argument("--tol-u", type=float, default=None, dest="tol_u",
                   help="potential equality tolerance for symmetry sets")
    g.add_argument("--constancy-tol", type=float, default=None, dest="constancy_tol",
                   help="scaled invariant constancy tolerance")
    g.add_argument("--map-tol", type=float, default=None, dest="map_tol",
                   help="scaled amplitude-mapping residual tolerance")
    g.add_argument("--field-tol", type=float, default=None, dest="field_tol",
                   help="scaled spread tolerance for field-based detection")
    g.add_argument("--min-width", type=float, default=None, dest="min_width",
                   help="smallest reported domain width")
    g.add_argument("--grid-step", type=float, default=None, dest="grid_step",
                   help="sampling step for field CSVs and field-based detection")
    g.add_argument("--pad", type=float, default=None,
                   help="analysis box padding beyond the scatterer")
    g.add_argument("--n-samples", type=int, default=None, dest="n_samples",
                   help="sample count per domain component")

    p = argparse.ArgumentParser(
        prog="locsym",
        description="scattering invariants of locally symmetric 1d potentials",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sub.add_parser(name, parents=[shared], help=HELP[name])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed its message; normalize '--version'/'-h' to 0
        return int(e.code or 0)
    try:
        cfg = parse_config(Path(args.config))
        cfg = override_tolerances(
            cfg,
            tol_u=args.tol_u,
            constancy_tol=args.constancy_tol,
            map_tol=args.map_tol,
            field_tol=args.field_tol,
            min_width=args.min_width,
            grid_step=args.grid_step,
            pad=args.pad,
            n_samples=args.n_samples,
        )
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ZeroCurrentError as e:
        print(f"zero-current error: {e}", file=sys.stderr)
        return 4
    except PhysicsError as e:
        print(f"physics error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
