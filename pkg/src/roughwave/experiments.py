"""Seeded ensemble studies: convergence rates, initial-data scaling of TV and
the one-sided Lipschitz seminorm, TV decay in time, and bound sharpness.

Every study draws the initial data once per sample at the reference
resolution and restricts it to the coarse grids, so all resolutions see the
same realization.  Rows are assembled in a fixed (hurst, sample, k) order
and per-sample seeds are derived deterministically, which makes results
bit-identical regardless of the worker count.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from . import __version__
from .diagnostics import (
    BoundInputs,
    default_beta,
    fit_rate,
    l1_distance,
    lip_bound_rhs,
    lip_plus,
    total_variation,
    tv_time_integral,
)
from .flux import FluxSpec, NumericalFluxSpec, NumFluxKind
from .initial_data import fbm_initial_field, sample_seed
from .mesh import CellField, make_grid, restrict
from .solver import Boundary, SchemeConfig, evolve


@dataclass(frozen=True)
class StudyConfig:
    equation: FluxSpec
    numflux: NumericalFluxSpec
    hurst_list: Tuple[float, ...]
    resolutions: Tuple[int, ...]
    reference_exponent: int
    n_samples: int
    base_seed: int
    t_final: float = 1.0
    cfl: float = 0.5
    boundary: Boundary = Boundary.OUTFLOW
    snapshot_times: Tuple[float, ...] = ()
    beta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "hurst_list", tuple(float(h) for h in self.hurst_list))
        object.__setattr__(self, "resolutions", tuple(int(k) for k in self.resolutions))
        object.__setattr__(self, "snapshot_times", tuple(float(t) for t in self.snapshot_times))
        if not self.hurst_list:
            raise ValueError("hurst_list must not be empty")
        if any(not 0.0 < h < 1.0 for h in self.hurst_list):
            raise ValueError(f"Hurst exponents must lie in (0, 1), got {self.hurst_list}")
        if not self.resolutions:
            raise ValueError("resolutions must not be empty")
        if any(k < 1 for k in self.resolutions):
            raise ValueError(f"resolution exponents must be >= 1, got {self.resolutions}")
        if list(self.resolutions) != sorted(set(self.resolutions)):
            raise ValueError("resolutions must be strictly increasing")
        if self.reference_exponent <= max(self.resolutions):
            raise ValueError(
                f"reference_exponent={self.reference_exponent} must exceed "
                f"every resolution in {self.resolutions}"
            )
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.beta is not None and self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        # fail fast on scheme-level problems (cfl range, t_final sign)
        _scheme(self)


@dataclass(frozen=True)
class StudyResult:
    study: str
    columns: Tuple[str, ...]
    rows: Tuple[tuple, ...]
    metadata: dict


STUDY_COLUMNS = {
    "converge": ("study", "hurst", "sample", "k", "dx", "l1_error", "rate_pairwise", "rate_regression"),
    "tvscale": ("study", "hurst", "sample", "k", "dx", "tv", "slope"),
    "lipscale": ("study", "hurst", "sample", "k", "dx", "lip_plus", "slope"),
    "tvdecay": ("study", "hurst", "sample", "k", "time", "tv", "inv_tv"),
    "sharpness": ("study", "hurst", "sample", "k", "dx", "lip_plus_0", "tv_time_integral", "bound_rhs", "ratio", "slope"),
}


def config_to_dict(cfg: StudyConfig) -> dict:
    """JSON-ready view of a study configuration."""
    return {
        "equation": cfg.equation.value,
        "numflux": cfg.numflux.kind.value,
        "numflux_lambda": cfg.numflux.lam,
        "hurst": list(cfg.hurst_list),
        "resolutions": list(cfg.resolutions),
        "reference_exponent": cfg.reference_exponent,
        "t_final": cfg.t_final,
        "samples": cfg.n_samples,
        "base_seed": cfg.base_seed,
        "cfl": cfg.cfl,
        "boundary": cfg.boundary.value,
        "snapshot_times": list(cfg.snapshot_times),
        "beta": cfg.beta,
    }


def config_from_dict(data: dict) -> StudyConfig:
    """Rebuild a StudyConfig from its ``config_to_dict`` form (manifests)."""
    return StudyConfig(
        equation=FluxSpec(data["equation"]),
        numflux=NumericalFluxSpec(NumFluxKind(data["numflux"]), data.get("numflux_lambda")),
        hurst_list=tuple(data["hurst"]),
        resolutions=tuple(data["resolutions"]),
        reference_exponent=data["reference_exponent"],
        n_samples=data["samples"],
        base_seed=data["base_seed"],
        t_final=data.get("t_final", 1.0),
        cfl=data.get("cfl", 0.5),
        boundary=Boundary(data.get("boundary", "outflow")),
        snapshot_times=tuple(data.get("snapshot_times", ())),
        beta=data.get("beta"),
    )


def _scheme(cfg: StudyConfig) -> SchemeConfig:
    return SchemeConfig(
        flux=cfg.equation,
        numflux=cfg.numflux,
        t_final=cfg.t_final,
        cfl=cfg.cfl,
        boundary=cfg.boundary,
    )


def _reference_field(cfg: StudyConfig, hurst: float, sample: int) -> CellField:
    grid = make_grid(0.0, 1.0, 1 << cfg.reference_exponent)
    return fbm_initial_field(hurst, grid, sample_seed(cfg.base_seed, sample))


def _coarse(cfg: StudyConfig, u0_ref: CellField, k: int) -> CellField:
    return restrict(u0_ref, 1 << (cfg.reference_exponent - k))


def _slope_or_none(points) -> Optional[float]:
    usable = [(h, e) for h, e in points if h > 0 and e > 0]
    if len(usable) < 2:
        return None
    return fit_rate(usable)[0]


def _converge_sample(cfg, hurst, sample):
    scheme = _scheme(cfg)
    u0_ref = _reference_field(cfg, hurst, sample)
    ref_final = evolve(u0_ref, scheme).final
    data = []
    for k in cfg.resolutions:
        u0_k = _coarse(cfg, u0_ref, k)
        final_k = evolve(u0_k, scheme).final
        data.append((k, u0_k.grid.dx, l1_distance(final_k, ref_final)))

    rows = []
    pairwise = {}
    prev = None
    for k, dx, err in data:
        rate = None
        if prev is not None and err > 0 and prev[1] > 0:
            rate = math.log(prev[1] / err) / math.log(prev[0] / dx)
        pairwise[k] = rate
        rows.append(("converge", hurst, sample, k, float(dx), float(err),
                     None if rate is None else float(rate), None))
        prev = (dx, err)
    regression = _slope_or_none([(dx, err) for _, dx, err in data])
    rows.append(("converge", hurst, sample, "RATE", None, None, None,
                 None if regression is None else float(regression)))
    summary = {
        "rate": regression,
        "errors": {k: err for k, _, err in data},
        "pairwise": pairwise,
        "dx": {k: dx for k, dx, _ in data},
    }
    return rows, summary


def _scaling_sample(cfg, hurst, sample, study):
    u0_ref = _reference_field(cfg, hurst, sample)
    measure = total_variation if study == "tvscale" else lip_plus
    rows = []
    points = []
    for k in cfg.resolutions:
        u0_k = _coarse(cfg, u0_ref, k)
        val = float(measure(u0_k))
        rows.append((study, hurst, sample, k, float(u0_k.grid.dx), val, None))
        points.append((u0_k.grid.dx, val))
    slope = _slope_or_none(points)
    rows.append((study, hurst, sample, "SLOPE", None, None,
                 None if slope is None else float(slope)))
    return rows, {"slope": slope}


def _tvdecay_sample(cfg, hurst, sample):
    scheme = _scheme(cfg)
    u0_ref = _reference_field(cfg, hurst, sample)
    periodic = cfg.boundary is Boundary.PERIODIC
    rows = []
    for k in cfg.resolutions:
        u0_k = _coarse(cfg, u0_ref, k)
        traj = evolve(u0_k, scheme, snapshot_times=cfg.snapshot_times)
        for snap in traj.snapshots:
            tv = float(total_variation(snap.field, periodic=periodic))
            inv = None if tv == 0.0 else 1.0 / tv
            rows.append(("tvdecay", hurst, sample, k, float(snap.time), tv, inv))
    return rows, {}


def _sharpness_sample(cfg, hurst, sample):
    beta = cfg.beta if cfg.beta is not None else default_beta(cfg.equation, cfg.numflux.kind)
    scheme = _scheme(cfg)
    u0_ref = _reference_field(cfg, hurst, sample)
    rows = []
    points = []
    for k in cfg.resolutions:
        u0_k = _coarse(cfg, u0_ref, k)
        traj = evolve(u0_k, scheme)
        bound = BoundInputs(
            beta=beta,
            lip_plus_0=lip_plus(u0_k),
            dt=traj.dt_used,
            t_n=float(traj.times[-1]),
            m_support=0.5,
        )
        rhs = lip_bound_rhs(bound)
        denom = tv_time_integral(traj)
        if denom <= 0:
            raise ValueError(f"zero time-integrated TV at k={k}")
        ratio = rhs / denom
        rows.append(("sharpness", hurst, sample, k, float(u0_k.grid.dx),
                     float(bound.lip_plus_0), float(denom), float(rhs), float(ratio), None))
        points.append((u0_k.grid.dx, ratio))
    slope = _slope_or_none(points)
    rows.append(("sharpness", hurst, sample, "SLOPE", None, None, None, None, None,
                 None if slope is None else float(slope)))
    return rows, {"slope": slope}


def _run_one(study: str, cfg: StudyConfig, task: Tuple[float, int]):
    hurst, sample = task
    try:
        if study == "converge":
            return _converge_sample(cfg, hurst, sample)
        if study in ("tvscale", "lipscale"):
            return _scaling_sample(cfg, hurst, sample, study)
        if study == "tvdecay":
            return _tvdecay_sample(cfg, hurst, sample)
        if study == "sharpness":
            return _sharpness_sample(cfg, hurst, sample)
        raise ValueError(f"unknown study {study!r}")
    except Exception as exc:
        seed = sample_seed(cfg.base_seed, sample)
        raise RuntimeError(
            f"{study} sample {sample} (hurst={hurst}, seed={seed}) failed: {exc}"
        ) from exc


def _mean_std(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    mean = float(np.mean(vals))
    std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
    return mean, std


def _ensemble_rows(study, cfg, hurst, summaries):
    rows = []
    if study == "converge":
        for k in cfg.resolutions:
            errs = [s["errors"][k] for s in summaries]
            pws = [s["pairwise"][k] for s in summaries]
            dx = summaries[0]["dx"][k]
            mean_pw, _ = _mean_std(pws)
            rows.append(("converge", hurst, "MEAN", k, float(dx),
                         float(np.mean(errs)), mean_pw, None))
        mean, std = _mean_std([s["rate"] for s in summaries])
        rows.append(("converge", hurst, "MEAN", "RATE", None, None, None, mean))
        rows.append(("converge", hurst, "STD", "RATE", None, None, None, std))
    elif study in ("tvscale", "lipscale"):
        mean, std = _mean_std([s["slope"] for s in summaries])
        rows.append((study, hurst, "MEAN", "SLOPE", None, None, mean))
        rows.append((study, hurst, "STD", "SLOPE", None, None, std))
    elif study == "sharpness":
        mean, std = _mean_std([s["slope"] for s in summaries])
        rows.append(("sharpness", hurst, "MEAN", "SLOPE", None, None, None, None, None, mean))
        rows.append(("sharpness", hurst, "STD", "SLOPE", None, None, None, None, None, std))
    return rows


def run_samples_parallel(study: str, cfg: StudyConfig, workers: int = 1) -> StudyResult:
    """Run one study over the (hurst, sample) ensemble.

    Rows come out in a fixed order and are bit-identical for any worker
    count; failures carry the sample identity.
    """
    if study not in STUDY_COLUMNS:
        raise ValueError(f"unknown study {study!r}; expected one of {sorted(STUDY_COLUMNS)}")
    if study == "tvdecay" and not cfg.snapshot_times:
        raise ValueError("tvdecay requires nonempty snapshot_times")
    if study == "sharpness" and cfg.beta is None:
        default_beta(cfg.equation, cfg.numflux.kind)  # raises for unsupported pairs

    tasks = [(h, s) for h in cfg.hurst_list for s in range(cfg.n_samples)]
    runner = functools.partial(_run_one, study, cfg)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(runner, tasks))
    else:
        outs = [runner(t) for t in tasks]
    by_task = dict(zip(tasks, outs))

    rows = []
    for hurst in cfg.hurst_list:
        per_sample = [by_task[(hurst, s)] for s in range(cfg.n_samples)]
        for sample_rows, _ in per_sample:
            rows.extend(sample_rows)
        rows.extend(_ensemble_rows(study, cfg, hurst, [summ for _, summ in per_sample]))

    metadata = {
        "study": study,
        "version": __version__,
        "config": config_to_dict(cfg),
        "sample_seeds": [sample_seed(cfg.base_seed, i) for i in range(cfg.n_samples)],
    }
    return StudyResult(study=study, columns=STUDY_COLUMNS[study], rows=tuple(rows), metadata=metadata)


def convergence_study(cfg: StudyConfig, workers: int = 1) -> StudyResult:
    """L1 errors against the fine reference run and per-sample rates."""
    return run_samples_parallel("converge", cfg, workers)


def tv_scaling_study(cfg: StudyConfig, workers: int = 1) -> StudyResult:
    """Total variation of the initial data as a function of mesh width."""
    return run_samples_parallel("tvscale", cfg, workers)


def lip_scaling_study(cfg: StudyConfig, workers: int = 1) -> StudyResult:
    """Initial one-sided Lipschitz seminorm as a function of mesh width."""
    return run_samples_parallel("lipscale", cfg, workers)


def tv_decay_study(cfg: StudyConfig, workers: int = 1) -> StudyResult:
    """Total variation (and its inverse) at the requested snapshot times."""
    return run_samples_parallel("tvdecay", cfg, workers)


def bound_sharpness_study(cfg: StudyConfig, workers: int = 1) -> StudyResult:
    """Ratio of the TV-integral bound to the measured integral, per mesh width."""
    return run_samples_parallel("sharpness", cfg, workers)


def with_overrides(cfg: StudyConfig, n_samples: Optional[int] = None,
                   base_seed: Optional[int] = None) -> StudyConfig:
    """Copy of the config with sample count and/or seed replaced."""
    kwargs = {}
    if n_samples is not None:
        kwargs["n_samples"] = n_samples
    if base_seed is not None:
        kwargs["base_seed"] = base_seed
    return replace(cfg, **kwargs) if kwargs else cfg
