"""Command line front end.

Usage::

    dtqw-ratchet <subcommand> --config FILE [--set key=value ...] --out PATH

Exit codes: 0 success, 2 configuration error, 3 out-of-band request,
4 convergence failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bands, dynamics, magnetization, readout, symmetry
from .config import COMMANDS, RunConfig, expand_sweep, parse_config
from .errors import DTQWError, IoError, MissingRequired
from .io import emit_csv, emit_json
from .walk import canonical_phase_reduction

__all__ = ["main", "run_subcommand", "build_parser"]


def _sibling(out: Path, tag: str, suffix: str | None = None) -> Path:
    return out.with_name(f"{out.stem}_{tag}{suffix or out.suffix}")


def _run_bands(cfg: RunConfig, out: Path) -> list[Path]:
    spec, _ = canonical_phase_reduction(cfg.walk)
    ks = bands.k_grid(cfg.n_k)
    w = bands.omega_plus(spec, ks)
    return [emit_csv(zip(ks.tolist(), (-w).tolist(), w.tolist()), ("k", "omega_minus", "omega_plus"), out)]


def _run_magnetize(cfg: RunConfig, out: Path) -> list[Path]:
    spec, _ = canonical_phase_reduction(cfg.walk)
    ks = bands.k_grid(cfg.n_k)
    w = bands.omega_plus(spec, ks)
    re = bands.re_u11(spec, ks)
    keep = np.sqrt(np.clip(1.0 - re * re, 0.0, None)) >= cfg.edge_eps
    mp = np.full(ks.shape, math.nan)
    if np.any(keep):
        mp[keep] = magnetization.eigenstate_magnetization(spec, ks[keep], +1, cfg.edge_eps)
    return [emit_csv(zip(ks.tolist(), w.tolist(), mp.tolist()), ("k", "omega_plus", "M_plus"), out)]


def _run_spectral(cfg: RunConfig, out: Path) -> list[Path]:
    spec, _ = canonical_phase_reduction(cfg.walk)
    curve = magnetization.spectral_magnetization_curve(
        spec, cfg.n_omega, +1, cfg.n_scan, cfg.refine_tol, cfg.edge_eps
    )
    rows = [(s.omega, s.m_s, s.degeneracy, s.excluded) for s in curve]
    return [emit_csv(rows, ("omega", "M_s", "degeneracy", "excluded"), out)]


def _witness_dict(w: symmetry.SymmetryWitness) -> dict:
    return {
        "condition": w.provenance,
        "K": w.K,
        "G": w.G,
        "residual": w.residual,
        "accepted": w.accepted,
    }


def _run_symmetry(cfg: RunConfig, out: Path) -> list[Path]:
    spec, _ = canonical_phase_reduction(cfg.walk)
    analytic = symmetry.analytic_symmetries(spec, cfg.angle_tol)
    found, best = symmetry.search_symmetry(
        spec, cfg.n_K, cfg.n_G, cfg.n_k_search, cfg.residual_cut
    )
    accepted = [w for w in analytic if w.accepted]
    if found is not None:
        accepted.append(found)
    report = {
        "m": spec.m,
        "satisfied_conditions": sorted({w.provenance for w in analytic if w.accepted}),
        "analytic_witnesses": [_witness_dict(w) for w in analytic],
        "numeric_search": {
            "grid": [cfg.n_K, cfg.n_G],
            "best_residual": best,
            "residual_cut": cfg.residual_cut,
            "witness": None if found is None else _witness_dict(found),
        },
        "symmetric": bool(accepted),
        "antisymmetry_checks": [],
    }
    for w in accepted:
        m_res, w_res = symmetry.magnetization_antisymmetry_check(spec, w, edge_eps=cfg.edge_eps)
        report["antisymmetry_checks"].append(
            {"condition": w.provenance, "magnetization_residual": m_res, "omega_residual": w_res}
        )
    return [emit_json(report, out)]


def _run_evolve(cfg: RunConfig, out: Path) -> list[Path]:
    spec, _ = canonical_phase_reduction(cfg.walk)
    n_sites = dynamics.choose_lattice_size(spec, cfg.N, cfg.edge_eps)
    series = dynamics.correlation(spec, n_sites, cfg.seed, cfg.T_periods, cfg.tau_max_periods)
    first = emit_csv(
        zip(series.tau.tolist(), series.values.real.tolist(), series.values.imag.tolist()),
        ("tau", "re_C", "im_C"),
        out,
    )
    grid = dynamics.grid_spectral_magnetization(spec, n_sites)
    spectrum = dynamics.correlation_spectrum(series, [g[0] for g in grid])
    rows = []
    for (w, m_sum, count), c in zip(grid, spectrum.values()):
        rows.append((w, c.real, 2 * n_sites * c.real, m_sum, count))
    second = emit_csv(
        rows,
        ("omega", "re_C_M", "two_N_re_C_M", "grid_M_s", "degeneracy"),
        _sibling(out, "spectrum"),
    )
    return [first, second]


def _run_spectroscopy(cfg: RunConfig, out: Path) -> list[Path]:
    if cfg.omega0 is None:
        raise MissingRequired("spectroscopy.omega0 is required")
    if cfg.c_m is not None:
        c_m, source = cfg.c_m, "planted"
    else:
        spec, _ = canonical_phase_reduction(cfg.walk)
        n_sites = dynamics.choose_lattice_size(spec, cfg.N, cfg.edge_eps)
        series = dynamics.correlation(spec, n_sites, cfg.seed, cfg.T_periods, cfg.tau_max_periods)
        c_m = dynamics.correlation_spectrum(series, [cfg.omega0])[float(cfg.omega0)].real
        source = "dynamics"
    model = readout.TransmissionModel(cfg.omega0, cfg.alpha_r, cfg.gamma, cfg.chi)
    centre = model.resonance(c_m)
    grid = np.linspace(centre - cfg.span * cfg.gamma, centre + cfg.span * cfg.gamma, cfg.n_points)
    samples = np.array(readout.transmission_curve(model, c_m, grid))
    if cfg.noise > 0:
        rng = np.random.default_rng(cfg.seed)
        samples[:, 1] += cfg.noise * rng.standard_normal(len(samples))
    recovered = readout.extract_correlator_from_dip(samples, cfg.omega0, cfg.chi)
    first = emit_csv(samples.tolist(), ("omega", "D"), out)
    second = emit_json(
        {
            "omega0": cfg.omega0,
            "chi": cfg.chi,
            "alpha_r": cfg.alpha_r,
            "gamma": cfg.gamma,
            "noise": cfg.noise,
            "c_m_source": source,
            "c_m_input": c_m,
            "c_m_recovered": recovered,
            "abs_error": abs(recovered - c_m),
        },
        _sibling(out, "fit", ".json"),
    )
    return [first, second]


_DISPATCH = {
    "bands": _run_bands,
    "magnetize": _run_magnetize,
    "spectral": _run_spectral,
    "symmetry": _run_symmetry,
    "evolve": _run_evolve,
    "spectroscopy": _run_spectroscopy,
}


def _default_suffix(command: str) -> str:
    return ".json" if command == "symmetry" else ".csv"


def run_subcommand(cfg: RunConfig, out=None) -> list[Path]:
    """Run one configuration (expanding a sweep) and return the files written.

    Sweep member ``i`` writes to ``<stem>_<i><suffix>``.
    """
    out = out if out is not None else cfg.out
    if out is None:
        raise MissingRequired("no output path: pass --out or set run.out")
    out = Path(out)
    if not out.suffix:
        out = out.with_suffix(_default_suffix(cfg.command))
    runs = expand_sweep(cfg)
    written: list[Path] = []
    for i, sub in enumerate(runs):
        target = out if len(runs) == 1 and not cfg.sweep_key else _sibling(out, str(i))
        written.extend(_DISPATCH[sub.command](sub, target))
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtqw-ratchet",
        description="Periodic discrete-time quantum walks: bands, magnetization, symmetry, dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="flat key = value configuration file")
        p.add_argument(
            "--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key"
        )
        p.add_argument("--out", help="output path (defaults to run.out)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read config {args.config}: {exc}") from exc
        cfg = parse_config(text, args.set, command=args.command)
        for path in run_subcommand(cfg, args.out):
            print(path)
    except DTQWError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
