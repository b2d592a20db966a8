"""Parameter sweeps, tabular output and the dual-route verifier.

A sweep varies one axis (driving time in microseconds, hot-reservoir
population, field ratio, or disorder strength) over a grid and
evaluates the requested outputs at every point.  Rows echo all inputs
and provenance so that a file is self-describing; failed grid points
carry an error tag instead of aborting the sweep.  Column names carry
their unit (``tau_us``, ``nu_cold_khz``); everything else is
dimensionless.

Files are deterministic: floats are written with 17 significant
digits, so ``read_csv(emit_csv(records))`` reproduces the records
exactly and reruns are byte-for-byte identical.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

from . import __version__
from .coherence import stroke_coherence
from .cycle import efficiency_closed_form, run_cycle_trace
from .disorder import DisorderSpec, quenched_efficiency
from .errors import EngineError, ParameterError
from .evolution import (DEFAULT_STEPS, analytic_propagator_g1,
                        propagator_lab, propagator_rotating,
                        transition_matrix_elements, transition_probability)
from .model import KHZ, MICROSECOND, EngineParams

__all__ = [
    "AXES",
    "OUTPUTS",
    "SweepSpec",
    "RunRecord",
    "run_sweep",
    "emit_csv",
    "emit_json",
    "read_csv",
    "read_json",
    "verify_dual_route",
]

AXES = ("tau", "p_plus_hot", "g", "sigma")
OUTPUTS = ("xi", "eta", "delta_eta_vs_g0", "coherence", "quenched_eta")

# Flattened column order for the value fields of a record.
_VALUE_COLUMNS = (
    "xi", "eta", "eta_g0", "delta_eta_vs_g0",
    "coherence_exp", "coherence_comp",
    "quenched_eta_mean", "quenched_eta_std_error",
    "quenched_n_effective", "quenched_rejected",
)
_INPUT_COLUMNS = (
    "index", "axis", "axis_value", "nu_cold_khz", "nu_hot_khz", "tau_us",
    "g", "p_plus_cold", "p_plus_hot", "n_steps", "seed", "version", "error",
)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: base engine, axis, grid and requested outputs.

    ``grid`` values are in microseconds for the ``tau`` axis and
    dimensionless otherwise, and must be strictly increasing.
    ``disorder`` is required by the ``quenched_eta`` output and by the
    ``sigma`` axis (which overrides its strength per point).
    """

    base: EngineParams
    axis: str
    grid: tuple[float, ...]
    outputs: tuple[str, ...]
    disorder: DisorderSpec | None = None
    resolution: int = DEFAULT_STEPS
    workers: int = 1

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ParameterError(f"unknown sweep axis {self.axis!r}")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ParameterError("empty sweep grid")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ParameterError("sweep grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        outputs = tuple(self.outputs)
        for o in outputs:
            if o not in OUTPUTS:
                raise ParameterError(f"unknown output {o!r}")
        if not outputs:
            raise ParameterError("no outputs requested")
        object.__setattr__(self, "outputs", outputs)
        if ("quenched_eta" in outputs or self.axis == "sigma") \
                and self.disorder is None:
            raise ParameterError("this sweep needs a disorder spec")


@dataclass(frozen=True)
class RunRecord:
    """One grid point: inputs echoed, outputs, provenance."""

    index: int
    axis: str
    axis_value: float
    nu_cold_khz: float
    nu_hot_khz: float
    tau_us: float
    g: float
    p_plus_cold: float
    p_plus_hot: float
    n_steps: int
    seed: int | None
    version: str
    error: str = ""
    values: dict[str, float] = field(default_factory=dict)


def run_sweep(spec: SweepSpec) -> list[RunRecord]:
    """Evaluate the sweep; rows come back in grid order regardless of
    how the work was scheduled."""
    indices = range(len(spec.grid))
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            return list(pool.map(partial(_sweep_point, spec), indices))
    cache: dict = {}
    return [_sweep_point(spec, i, cache) for i in indices]


def _sweep_point(spec: SweepSpec, index: int,
                 cache: dict | None = None) -> RunRecord:
    value = spec.grid[index]
    params, disorder = _apply_axis(spec, value)
    record = RunRecord(
        index=index, axis=spec.axis, axis_value=value,
        nu_cold_khz=params.nu_cold / KHZ, nu_hot_khz=params.nu_hot / KHZ,
        tau_us=params.tau / MICROSECOND, g=params.g,
        p_plus_cold=params.p_plus_cold, p_plus_hot=params.p_plus_hot,
        n_steps=spec.resolution,
        seed=disorder.seed if disorder is not None else None,
        version=__version__)
    values: dict[str, float] = {}
    try:
        if "xi" in spec.outputs or "eta" in spec.outputs \
                or "delta_eta_vs_g0" in spec.outputs:
            xi = _cached_xi(params, spec.resolution, cache)
            if "xi" in spec.outputs:
                values["xi"] = xi
            if "eta" in spec.outputs or "delta_eta_vs_g0" in spec.outputs:
                values["eta"] = efficiency_closed_form(params, xi)
            if "delta_eta_vs_g0" in spec.outputs:
                twin = replace(params, g=0.0)
                xi0 = _cached_xi(twin, spec.resolution, cache)
                values["eta_g0"] = efficiency_closed_form(twin, xi0)
                values["delta_eta_vs_g0"] = values["eta"] - values["eta_g0"]
        if "coherence" in spec.outputs:
            report = stroke_coherence(params, spec.resolution)
            values["coherence_exp"] = report.c_exp
            values["coherence_comp"] = report.c_comp
        if "quenched_eta" in spec.outputs:
            q = quenched_efficiency(params, disorder, spec.resolution)
            values["quenched_eta_mean"] = q.mean_eta
            values["quenched_eta_std_error"] = q.std_error
            values["quenched_n_effective"] = float(q.n_effective)
            values["quenched_rejected"] = float(q.rejected)
    except EngineError as exc:
        return replace(record, error=f"{type(exc).__name__}: {exc}")
    return replace(record, values=values)


def _apply_axis(spec: SweepSpec, value: float,
                ) -> tuple[EngineParams, DisorderSpec | None]:
    params, disorder = spec.base, spec.disorder
    if spec.axis == "tau":
        params = replace(params, tau=value * MICROSECOND)
    elif spec.axis == "p_plus_hot":
        params = replace(params, p_plus_hot=value)
    elif spec.axis == "g":
        params = replace(params, g=value)
    else:  # sigma
        disorder = replace(disorder, sigma=value)
    return params, disorder


def _cached_xi(params: EngineParams, n_steps: int, cache: dict | None,
               ) -> float:
    key = (params.nu_cold, params.nu_hot, params.tau, params.g, n_steps)
    if cache is not None and key in cache:
        return cache[key]
    xi = transition_probability(params, propagator_lab(params, n_steps).u)
    if cache is not None:
        cache[key] = xi
    return xi


# ---------------------------------------------------------------------------
# Serialisation

def _fmt(x: float) -> str:
    return f"{x:.17g}"


class _open_out:
    """Open a path for writing, or pass a file object through."""

    def __init__(self, path):
        self.path = path
        self.fh = None

    def __enter__(self):
        if hasattr(self.path, "write"):
            return self.path
        self.fh = open(self.path, "w", newline="")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()
        return False


def emit_csv(records: list[RunRecord], path) -> None:
    """Write records as CSV; header always present, 17 significant
    digits, deterministic column order.  ``path`` may be a file
    object."""
    value_cols = _value_columns(records)
    with _open_out(path) as fh:
        writer = csv.writer(fh)
        writer.writerow(_INPUT_COLUMNS + value_cols)
        for r in records:
            row = [str(r.index), r.axis, _fmt(r.axis_value),
                   _fmt(r.nu_cold_khz), _fmt(r.nu_hot_khz), _fmt(r.tau_us),
                   _fmt(r.g), _fmt(r.p_plus_cold), _fmt(r.p_plus_hot),
                   str(r.n_steps), "" if r.seed is None else str(r.seed),
                   r.version, r.error]
            row += ["" if c not in r.values else _fmt(r.values[c])
                    for c in value_cols]
            writer.writerow(row)


def read_csv(path) -> list[RunRecord]:
    """Inverse of ``emit_csv``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParameterError(f"{path}: empty sweep file")
    header = rows[0]
    value_cols = header[len(_INPUT_COLUMNS):]
    records = []
    for row in rows[1:]:
        fixed = dict(zip(_INPUT_COLUMNS, row))
        values = {c: float(v)
                  for c, v in zip(value_cols, row[len(_INPUT_COLUMNS):])
                  if v != ""}
        records.append(RunRecord(
            index=int(fixed["index"]), axis=fixed["axis"],
            axis_value=float(fixed["axis_value"]),
            nu_cold_khz=float(fixed["nu_cold_khz"]),
            nu_hot_khz=float(fixed["nu_hot_khz"]),
            tau_us=float(fixed["tau_us"]), g=float(fixed["g"]),
            p_plus_cold=float(fixed["p_plus_cold"]),
            p_plus_hot=float(fixed["p_plus_hot"]),
            n_steps=int(fixed["n_steps"]),
            seed=None if fixed["seed"] == "" else int(fixed["seed"]),
            version=fixed["version"], error=fixed["error"], values=values))
    return records


def emit_json(records: list[RunRecord], path) -> None:
    """Write records as a JSON array with the same field layout."""
    payload = []
    for r in records:
        item = {c: getattr(r, c) for c in _INPUT_COLUMNS}
        item["values"] = dict(sorted(r.values.items()))
        payload.append(item)
    with _open_out(path) as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def read_json(path) -> list[RunRecord]:
    """Inverse of ``emit_json``."""
    with open(path) as fh:
        payload = json.load(fh)
    return [RunRecord(**{**item, "values": dict(item["values"])})
            for item in payload]


def _value_columns(records: list[RunRecord]) -> tuple[str, ...]:
    present = set()
    for r in records:
        present.update(r.values)
    unknown = present.difference(_VALUE_COLUMNS)
    if unknown:
        raise ParameterError(f"unknown value columns: {sorted(unknown)}")
    return tuple(c for c in _VALUE_COLUMNS if c in present)


# ---------------------------------------------------------------------------
# Dual-route verification

def verify_dual_route(base: EngineParams,
                      taus_us=(100.0, 175.0, 250.0, 325.0, 400.0),
                      gs=(-0.3, 0.025, 0.35, 0.675, 1.0),
                      n_steps: int = DEFAULT_STEPS,
                      analytic_steps: int = 600_000) -> dict[str, float]:
    """Max deviations between the independent computation routes.

    Over the ``(tau, g)`` grid at matched resolution: lab versus
    rotating-frame propagator, the two transition matrix elements,
    the first law and the efficiency by trace versus closed form.  At
    ``g = 1`` the lab propagator (at ``analytic_steps``) is pinned to
    the closed form.
    """
    dev = {"propagator": 0.0, "matrix_elements": 0.0, "first_law": 0.0,
           "efficiency": 0.0, "analytic_g1": 0.0}
    for tau_us in taus_us:
        for g in gs:
            p = replace(base, tau=tau_us * MICROSECOND, g=g)
            lab = propagator_lab(p, n_steps)
            rot = propagator_rotating(p, n_steps)
            diff = abs(lab.u.matrix - rot.u.matrix).max()
            dev["propagator"] = max(dev["propagator"], diff)
            m1, m2 = transition_matrix_elements(p, lab.u)
            dev["matrix_elements"] = max(dev["matrix_elements"], abs(m1 - m2))
            cyc = run_cycle_trace(p, lab.u)
            dev["first_law"] = max(dev["first_law"],
                                   abs(cyc.work + cyc.q_hot + cyc.q_cold))
            eta_closed = efficiency_closed_form(p, cyc.xi)
            dev["efficiency"] = max(dev["efficiency"],
                                    abs(eta_closed - cyc.eta))
        p1 = replace(base, tau=tau_us * MICROSECOND, g=1.0)
        exact = analytic_propagator_g1(p1).matrix
        for u in (propagator_lab(p1, analytic_steps).u,
                  propagator_rotating(p1, n_steps).u):
            dev["analytic_g1"] = max(dev["analytic_g1"],
                                     abs(u.matrix - exact).max())
    return dev
