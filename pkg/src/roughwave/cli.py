"""Command-line entry point: config parsing, study execution, CSV + manifest
persistence, and a self-check of the flux and PRNG contracts.

Config files are line-oriented ``key = value`` text.  Recognized keys:
equation, numflux, hurst, resolutions, reference_exponent, t_final, samples,
base_seed, cfl, boundary, snapshot_times.  Lists are comma separated.  Blank
lines and lines starting with ``#`` are ignored; unknown and duplicate keys
are errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from io import StringIO
from pathlib import Path

from . import __version__
from .diagnostics import default_beta
from .experiments import (
    StudyConfig,
    StudyResult,
    config_to_dict,
    run_samples_parallel,
    with_overrides,
)
from .flux import FluxSpec, NumericalFluxSpec, NumFluxKind, check_monotone
from .initial_data import SplitMix64, fbm_initial_field, sample_seed
from .mesh import make_grid
from .solver import Boundary, SchemeConfig, evolve


class ConfigError(ValueError):
    """Invalid configuration file or command-line override."""


_EQUATIONS = {
    "burgers": FluxSpec.BURGERS,
    "cubic": FluxSpec.CUBIC,
    "linear": FluxSpec.LINEAR,
}
_NUMFLUXES = {
    "godunov": NumFluxKind.GODUNOV,
    "rusanov": NumFluxKind.RUSANOV,
    "lax_friedrichs": NumFluxKind.LAX_FRIEDRICHS,
    "engquist_osher": NumFluxKind.ENGQUIST_OSHER,
    "upwind": NumFluxKind.UPWIND,
}
_BOUNDARIES = {"outflow": Boundary.OUTFLOW, "periodic": Boundary.PERIODIC}

_REQUIRED_KEYS = (
    "equation",
    "numflux",
    "hurst",
    "resolutions",
    "reference_exponent",
    "samples",
    "base_seed",
)
_OPTIONAL_KEYS = ("t_final", "cfl", "boundary", "snapshot_times")

STUDY_COMMANDS = ("converge", "tvscale", "lipscale", "tvdecay", "sharpness")


def parse_config(path) -> StudyConfig:
    """Parse a key = value config file into a validated StudyConfig."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    entries: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _REQUIRED_KEYS + _OPTIONAL_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        if key in entries:
            first = entries[key][0]
            raise ConfigError(
                f"{path}:{lineno}: duplicate key '{key}' (first set on line {first})"
            )
        entries[key] = (lineno, value)

    missing = [k for k in _REQUIRED_KEYS if k not in entries]
    if missing:
        raise ConfigError(f"{path}: missing required keys: {', '.join(missing)}")

    def get(key, parser, default=None):
        if key not in entries:
            return default
        lineno, value = entries[key]
        try:
            return parser(value)
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {exc}") from exc

    def choice(table, what):
        def parse(value):
            v = value.lower()
            if v not in table:
                raise ValueError(f"expected one of {sorted(table)}, got '{value}'")
            return table[v]

        return parse

    equation = get("equation", choice(_EQUATIONS, "equation"))
    numflux_kind = get("numflux", choice(_NUMFLUXES, "numflux"))
    cfg_kwargs = dict(
        equation=equation,
        numflux=NumericalFluxSpec(numflux_kind),
        hurst_list=get("hurst", lambda v: tuple(float(x) for x in v.split(","))),
        resolutions=get("resolutions", lambda v: tuple(int(x) for x in v.split(","))),
        reference_exponent=get("reference_exponent", int),
        n_samples=get("samples", int),
        base_seed=get("base_seed", int),
        t_final=get("t_final", float, default=1.0),
        cfl=get("cfl", float, default=0.5),
        boundary=get("boundary", choice(_BOUNDARIES, "boundary"), default=Boundary.OUTFLOW),
        snapshot_times=get(
            "snapshot_times",
            lambda v: tuple(float(x) for x in v.split(",")) if v.strip() else (),
            default=(),
        ),
    )
    if numflux_kind is NumFluxKind.UPWIND and equation is not FluxSpec.LINEAR:
        lineno = entries["numflux"][0]
        raise ConfigError(
            f"{path}:{lineno}: numflux 'upwind' is only valid with equation 'linear'"
        )
    try:
        return StudyConfig(**cfg_kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_csv(result: StudyResult, path) -> None:
    """Write the result table as CSV (LF newlines, shortest round-trip floats).

    The file is written to a temporary sibling and renamed into place, so an
    interrupted run never leaves a partial file.
    """
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_format_cell(v) for v in row])
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(buf.getvalue().encode("utf-8"))
    os.replace(tmp, path)


def _write_manifest(path, payload) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes((json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8"))
    os.replace(tmp, path)


def _solve_result(cfg: StudyConfig) -> StudyResult:
    """Single trajectory (first hurst, coarsest resolution, sample 0)."""
    hurst = cfg.hurst_list[0]
    k = cfg.resolutions[0]
    seed = sample_seed(cfg.base_seed, 0)
    grid = make_grid(0.0, 1.0, 1 << k)
    u0 = fbm_initial_field(hurst, grid, seed)
    scheme = SchemeConfig(
        flux=cfg.equation,
        numflux=cfg.numflux,
        t_final=cfg.t_final,
        cfl=cfg.cfl,
        boundary=cfg.boundary,
    )
    traj = evolve(u0, scheme, snapshot_times=cfg.snapshot_times)
    mids = grid.cell_midpoints()
    rows = []
    emitted = set()
    for t, field in [(0.0, u0), *[(s.time, s.field) for s in traj.snapshots],
                     (float(traj.times[-1]), traj.final)]:
        if t in emitted:
            continue
        emitted.add(t)
        for x, u in zip(mids, field.values):
            rows.append(("solve", hurst, 0, k, float(t), float(x), float(u)))
    metadata = {
        "study": "solve",
        "version": __version__,
        "config": config_to_dict(cfg),
        "sample_seeds": [seed],
    }
    return StudyResult(
        study="solve",
        columns=("study", "hurst", "sample", "k", "time", "x", "u"),
        rows=tuple(rows),
        metadata=metadata,
    )


def _fbm_result(cfg: StudyConfig) -> StudyResult:
    """Initial-data fields for every (hurst, sample, resolution)."""
    rows = []
    for hurst in cfg.hurst_list:
        for sample in range(cfg.n_samples):
            seed = sample_seed(cfg.base_seed, sample)
            for k in cfg.resolutions:
                grid = make_grid(0.0, 1.0, 1 << k)
                field = fbm_initial_field(hurst, grid, seed)
                for x, u in zip(grid.cell_midpoints(), field.values):
                    rows.append(("fbm", hurst, sample, k, float(x), float(u)))
    metadata = {
        "study": "fbm",
        "version": __version__,
        "config": config_to_dict(cfg),
        "sample_seeds": [sample_seed(cfg.base_seed, i) for i in range(cfg.n_samples)],
    }
    return StudyResult(
        study="fbm",
        columns=("study", "hurst", "sample", "k", "x", "u"),
        rows=tuple(rows),
        metadata=metadata,
    )


def _selfcheck(out) -> int:
    """PRNG known-answer tests and monotonicity probes for all fluxes."""
    failures = 0

    rng = SplitMix64(0)
    got = [rng.next_u64(), rng.next_u64()]
    expected = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4]
    for i, (g, e) in enumerate(zip(got, expected)):
        ok = g == e
        failures += not ok
        print(f"[{'ok' if ok else 'FAIL'}] splitmix64 seed=0 output {i}: "
              f"0x{g:016X} (expected 0x{e:016X})", file=out)

    probes = []
    for kind in (NumFluxKind.GODUNOV, NumFluxKind.RUSANOV, NumFluxKind.ENGQUIST_OSHER):
        for eq in (FluxSpec.BURGERS, FluxSpec.CUBIC, FluxSpec.LINEAR):
            probes.append((NumericalFluxSpec(kind), eq))
    for eq in (FluxSpec.BURGERS, FluxSpec.CUBIC, FluxSpec.LINEAR):
        probes.append((NumericalFluxSpec(NumFluxKind.LAX_FRIEDRICHS, lam=1.0), eq))
    probes.append((NumericalFluxSpec(NumFluxKind.UPWIND), FluxSpec.LINEAR))
    for numflux, eq in probes:
        report = check_monotone(numflux, eq, box=(-1.0, 1.0), samples_per_axis=64)
        failures += not report.passed
        label = numflux.kind.value + ("" if numflux.lam is None else f"(lam={numflux.lam})")
        print(f"[{'ok' if report.passed else 'FAIL'}] monotone {label} + {eq.value}: "
              f"worst violation {report.worst_violation:.3e}", file=out)

    print(("selfcheck passed" if failures == 0 else f"selfcheck: {failures} failure(s)"),
          file=out)
    return 0 if failures == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roughwave",
        description="Finite-volume experiments on conservation laws with rough initial data",
    )
    parser.add_argument("--version", action="version", version=f"roughwave {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_io in [
        ("solve", True),
        ("fbm", True),
        ("converge", True),
        ("tvscale", True),
        ("lipscale", True),
        ("tvdecay", True),
        ("sharpness", True),
        ("selfcheck", False),
    ]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=needs_io, help="path to key = value config file")
        p.add_argument("--out", required=needs_io, help="output directory")
        p.add_argument("--samples", type=int, default=None, help="override sample count")
        p.add_argument("--seed", type=int, default=None, help="override base seed")
        p.add_argument("--workers", type=int, default=None,
                       help="parallel workers (default: ROUGHWAVE_WORKERS or 1)")
    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selfcheck":
            return _selfcheck(out)

        cfg = parse_config(args.config)
        try:
            cfg = with_overrides(cfg, n_samples=args.samples, base_seed=args.seed)
        except ValueError as exc:
            raise ConfigError(f"bad override: {exc}") from exc
        if args.command == "sharpness" and cfg.beta is None:
            try:
                default_beta(cfg.equation, cfg.numflux.kind)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        if args.command == "tvdecay" and not cfg.snapshot_times:
            raise ConfigError("tvdecay requires snapshot_times in the config")

        workers = args.workers
        if workers is None:
            workers = int(os.environ.get("ROUGHWAVE_WORKERS", "1"))
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}")

        started = time.monotonic()
        if args.command == "solve":
            result = _solve_result(cfg)
        elif args.command == "fbm":
            result = _fbm_result(cfg)
        else:
            result = run_samples_parallel(args.command, cfg, workers=workers)

        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{args.command}.csv"
        write_csv(result, csv_path)
        manifest = {
            "command": args.command,
            "config_path": str(args.config),
            "config": result.metadata["config"],
            "base_seed": cfg.base_seed,
            "sample_seeds": result.metadata["sample_seeds"],
            "version": __version__,
            "workers": workers,
            "outputs": [csv_path.name],
            "duration_seconds": round(time.monotonic() - started, 6),
        }
        _write_manifest(out_dir / f"{args.command}_manifest.json", manifest)
        print(f"wrote {csv_path}", file=out)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - report and exit nonzero
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
