"""Command-line interface: ``phmor {gen,reduce,verify,sweep,simulate} CONFIG``.

Exit codes: 0 success, 1 usage/parse error, 2 verification failure,
3 numerical construction failure.
"""

import csv
import json
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import click
import numpy as np

from .config import ConfigError, load_config
from .exceptions import (
    IllConditioned,
    InvalidParameter,
    NotLeftInverse,
    NotLossless,
    NotSymplectic,
    RankDeficient,
    SingularPencil,
    SingularResolvent,
    SingularStepMatrix,
    StructureError,
    WrongInertia,
)
from .generators import gen_msd_chain, gen_random_ph
from .io import BundleError, read_bundle, write_bundle
from .reduction import reduce
from .system import PHSystem, audit_tolerance, energy_audit, simulate
from .verification import frequency_sweep, log_grid, verify

NUMERICAL_ERRORS = (
    WrongInertia,
    SingularResolvent,
    IllConditioned,
    NotSymplectic,
    NotLeftInverse,
    SingularPencil,
    SingularStepMatrix,
    RankDeficient,
)
INPUT_ERRORS = (ConfigError, BundleError, InvalidParameter, StructureError, NotLossless)


class VerificationFailed(Exception):
    pass


def _version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _record(cfg, command, outputs):
    """Merge this command's outputs into ``manifest.json``."""
    out = cfg.output_path
    path = out / "manifest.json"
    manifest = json.loads(path.read_text()) if path.exists() else {}
    if manifest.get("config_hash") != cfg.config_hash():
        manifest = {}
    manifest.update({"tool": "phmor", "version": _version(), "config_hash": cfg.config_hash()})
    manifest.setdefault("runs", {})[command] = {"outputs": sorted(str(Path(o).relative_to(out)) for o in outputs)}
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _load(config_path):
    cfg = load_config(config_path)
    cfg.output_path.mkdir(parents=True, exist_ok=True)
    return cfg


def _full_system(cfg):
    system, _ = read_bundle(cfg.system_path)
    if not isinstance(system, PHSystem):
        raise ConfigError(f"{cfg.system_path} holds a state-space bundle; a pH system is required")
    return system


def _reduce(cfg, system):
    interp = cfg.interpolation_set(system.p)
    kwargs = {"tol_interp": cfg.tol_interp}
    if cfg.method != "baseline":
        kwargs["tol"] = cfg.tol_symp
        if "orthonormalize" in cfg.options:
            kwargs["orthonormalize"] = bool(cfg.options["orthonormalize"])
    if cfg.method == "dissipative":
        kwargs["lossless_resolvent"] = bool(cfg.options.get("lossless_resolvent", False))
        J_small = cfg.options.get("J_small", "canonical")
        kwargs["J_small"] = None if J_small == "canonical" else J_small
    return reduce(system, interp, cfg.method, **kwargs)


def _input_samples(kind, steps, p):
    u = np.zeros((steps + 1, p))
    if kind == "step":
        u[:] = 1.0
    elif kind == "impulse":
        u[0] = 1.0
    return u


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(_version(), prog_name="phmor")
def cli():
    """Structure-preserving interpolatory reduction of port-Hamiltonian systems."""


@cli.command()
@click.argument("config", type=click.Path(dir_okay=False))
def gen(config):
    """Generate the benchmark system described by the config's ``generate`` section."""
    cfg = _load(config)
    recipe = cfg.generate
    if recipe is None:
        raise ConfigError("config has no 'generate' section")
    params = {k: v for k, v in recipe.items() if k not in ("kind", "name")}
    try:
        system = gen_msd_chain(**params) if recipe["kind"] == "msd_chain" else gen_random_ph(**params)
    except TypeError as exc:
        raise ConfigError(f"bad generator parameters: {exc}") from exc
    path = write_bundle(cfg.output_path / "system", system, name=recipe.get("name", recipe["kind"]))
    click.echo(f"wrote {path} (2n={system.dim}, p={system.p})")
    _record(cfg, "gen", [path])


@cli.command("reduce")
@click.argument("config", type=click.Path(dir_okay=False))
def reduce_cmd(config):
    """Reduce the configured system and write the reduced bundle and residuals."""
    cfg = _load(config)
    system = _full_system(cfg)
    result = _reduce(cfg, system)
    out = cfg.output_path
    bundle = write_bundle(out / "reduced", result.reduced, name=f"{result.method}-reduced")
    summary = {
        "method": result.method,
        "order": result.order,
        "points": [[complex(s).real, complex(s).imag] for s in result.interp.points],
        "residuals_abs": result.residuals_abs.tolist(),
        "residuals_rel": result.residuals_rel.tolist(),
        "tol_interp": result.tol_interp,
        "degraded": result.degraded,
        "diagnostics": {k: float(v) if isinstance(v, (int, float, np.floating)) else str(v) for k, v in result.diagnostics.items()},
    }
    res_path = out / "reduction.json"
    res_path.write_text(json.dumps(summary, indent=2) + "\n")
    click.echo(f"{result.method}: order {result.order}, max relative residual {result.max_residual:.3e}")
    _record(cfg, "reduce", [bundle, res_path])


@cli.command("verify")
@click.argument("config", type=click.Path(dir_okay=False))
def verify_cmd(config):
    """Reduce, audit structure / interpolation / positive realness / energy, and write the report."""
    cfg = _load(config)
    system = _full_system(cfg)
    result = _reduce(cfg, system)
    sim = cfg.simulate
    report = verify(
        system,
        result,
        omegas=log_grid(cfg.sweep["min"], cfg.sweep["max"], cfg.sweep["points_per_decade"]),
        dt=sim["dt"],
        steps=sim["steps"],
        tol_struct=cfg.tol_struct,
        tol_interp=cfg.tol_interp,
    )
    path = cfg.output_path / "verification.json"
    report.to_json(path)
    for name, passed in report.verdict.items():
        click.echo(f"{name:14s} {'skipped' if passed is None else 'pass' if passed else 'FAIL'}")
    _record(cfg, "verify", [path])
    if not report.passed:
        failed = [n for n, p in report.verdict.items() if p is False]
        raise VerificationFailed(f"verification failed: {', '.join(failed)}")


@cli.command("sweep")
@click.argument("config", type=click.Path(dir_okay=False))
def sweep_cmd(config):
    """Write the full-vs-reduced frequency response table as CSV."""
    cfg = _load(config)
    system = _full_system(cfg)
    result = _reduce(cfg, system)
    table = frequency_sweep(system, result, log_grid(cfg.sweep["min"], cfg.sweep["max"], cfg.sweep["points_per_decade"]))
    path = cfg.output_path / "sweep.csv"
    table.to_csv(path)
    click.echo(f"wrote {path} ({len(table.omega)} rows), max |G - G_r| = {table.max_error:.3e}")
    _record(cfg, "sweep", [path])


@cli.command("simulate")
@click.argument("config", type=click.Path(dir_okay=False))
def simulate_cmd(config):
    """Implicit-midpoint run of the full or reduced system with an energy audit."""
    cfg = _load(config)
    system = _full_system(cfg)
    sim = cfg.simulate
    target = system if sim["target"] == "full" else _reduce(cfg, system).reduced
    if not isinstance(target, PHSystem):
        raise ConfigError("the baseline reduction has no pH realization to simulate; use target: full")
    u = _input_samples(sim["input"], sim["steps"], target.p)
    traj = simulate(target, u, np.zeros(target.dim), sim["dt"], sim["steps"])
    slack, tau = energy_audit(traj), audit_tolerance(traj, target)
    out = cfg.output_path
    path = out / "trajectory.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        p = target.p
        writer.writerow(["t", "energy"] + [f"u{j + 1}" for j in range(p)]
                        + [f"y{j + 1}_{part}" for j in range(p) for part in ("re", "im")])
        for t, e, uk, yk in zip(traj.times, traj.energies, traj.inputs, traj.outputs):
            row = [t, e, *np.real(uk)] + [v for y in yk for v in (y.real, y.imag)]
            writer.writerow([f"{v:.16e}" for v in row])
    audit = {"target": sim["target"], "slack": slack, "tau_audit": tau, "passed": bool(slack >= -tau)}
    audit_path = out / "energy_audit.json"
    audit_path.write_text(json.dumps(audit, indent=2) + "\n")
    click.echo(f"energy-audit slack={slack:.6e} tau={tau:.3e} {'pass' if audit['passed'] else 'FAIL'}")
    _record(cfg, "simulate", [path, audit_path])


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="phmor", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except INPUT_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except VerificationFailed as exc:
        click.echo(str(exc), err=True)
        return 2
    except NUMERICAL_ERRORS as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
