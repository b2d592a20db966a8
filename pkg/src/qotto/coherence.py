"""l1-norm coherence of the stroke states.

For a qubit state written in an orthonormal basis the l1 coherence is
``2 |rho_01|``, bounded by ``2 sqrt(rho_00 rho_11) <= 1``.  The work
strokes generate coherence because the drive does not commute with
itself at different times; thermalisation destroys it.

The default report evaluates the end-of-stroke states in the basis
they are about to be measured against: the expanded state in the hot
eigenbasis and the compressed state in the cold eigenbasis.  A
time-resolved series in the instantaneous eigenbasis of the running
Hamiltonian is available on request (``time_points``); mid-stroke
values depend on that basis choice, the end-of-stroke values do not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .evolution import DEFAULT_STEPS, _su2_chain, propagator_lab, su2_normalized
from .mat2 import DensityOp, EigenPair, UnitaryOp, conjugate, dagger, eig_herm2
from .model import EngineParams, h_cold, h_comp, h_exp, h_hot
from .thermal import beta_from_population, gibbs_state

__all__ = ["CoherenceReport", "l1_coherence", "stroke_coherence"]


@dataclass(frozen=True)
class CoherenceReport:
    """End-of-stroke coherences, plus an optional time series.

    ``c_exp``: expanded state in the hot eigenbasis.
    ``c_comp``: compressed state in the cold eigenbasis.
    When a series is requested, ``series_times`` spans one stroke and
    the series give the coherence in the instantaneous eigenbasis of
    the expansion / compression Hamiltonian at each time.
    """

    c_exp: float
    c_comp: float
    series_times: np.ndarray | None = field(default=None, repr=False)
    c_exp_series: np.ndarray | None = field(default=None, repr=False)
    c_comp_series: np.ndarray | None = field(default=None, repr=False)


def l1_coherence(rho: DensityOp, basis: EigenPair) -> float:
    """Sum of off-diagonal magnitudes of ``rho`` in ``basis``
    (``2 |<psi+| rho |psi->|`` for a qubit).

    Invariant under phase changes of the basis vectors; requires the
    basis to be orthonormal.
    """
    _check_orthonormal(basis)
    off = np.vdot(basis.psi_plus, rho.matrix @ basis.psi_minus)
    return 2.0 * abs(off)


def stroke_coherence(params: EngineParams, n_steps: int = DEFAULT_STEPS,
                     time_points: int = 0) -> CoherenceReport:
    """Run the cycle and report the work-stroke coherences.

    ``time_points > 0`` additionally samples that many times across
    each work stroke (endpoints included) in the instantaneous
    eigenbasis.
    """
    u = propagator_lab(params, n_steps).u
    beta_c = beta_from_population(params.p_plus_cold, params.nu_cold,
                                  params.omega_tilde)
    beta_h = beta_from_population(params.p_plus_hot, params.nu_hot,
                                  params.omega_tilde)
    rho_in = gibbs_state(h_cold(params), beta_c)
    rho_th = gibbs_state(h_hot(params), beta_h)
    c_exp = l1_coherence(conjugate(u, rho_in), eig_herm2(h_hot(params)))
    c_comp = l1_coherence(conjugate(dagger(u), rho_th),
                          eig_herm2(h_cold(params)))
    if time_points <= 0:
        return CoherenceReport(c_exp, c_comp)

    times, rhos_exp = _stroke_states(params, rho_in, n_steps, time_points,
                                     compression=False)
    _, rhos_comp = _stroke_states(params, rho_th, n_steps, time_points,
                                  compression=True)
    c_exp_series = np.array([
        l1_coherence(r, eig_herm2(h_exp(params, t)))
        for t, r in zip(times, rhos_exp)])
    c_comp_series = np.array([
        l1_coherence(r, eig_herm2(h_comp(params, t)))
        for t, r in zip(times, rhos_comp)])
    return CoherenceReport(c_exp, c_comp, times, c_exp_series, c_comp_series)


def _stroke_states(params: EngineParams, rho0: DensityOp, n_steps: int,
                   time_points: int, compression: bool,
                   ) -> tuple[np.ndarray, list[DensityOp]]:
    """States along one work stroke at ``time_points`` sample times.

    The stroke is cut into segments at the sample times; each segment
    propagator is a midpoint product at the stroke-wide resolution.
    The compression stroke integrates its own generator (the negated,
    time-reversed drive), which reproduces the adjoint-propagator view
    of the cycle to integrator accuracy.
    """
    if time_points < 2:
        raise ParameterError("a time series needs at least 2 points")
    times = np.linspace(0.0, params.tau, time_points)
    rhos = [rho0]
    rho = rho0
    for t0, t1 in zip(times[:-1], times[1:]):
        seg_steps = max(1, round(n_steps * (t1 - t0) / params.tau))
        u = _segment_propagator(params, t0, t1, seg_steps, compression)
        rho = conjugate(u, rho)
        rhos.append(rho)
    return times, rhos


def _segment_propagator(params: EngineParams, t0: float, t1: float,
                        seg_steps: int, compression: bool) -> UnitaryOp:
    dt = (t1 - t0) / seg_steps
    mids = t0 + (np.arange(seg_steps) + 0.5) * dt
    build = h_comp if compression else h_exp
    u11 = np.empty(seg_steps, dtype=complex)
    u21 = np.empty(seg_steps, dtype=complex)
    for k, t in enumerate(mids):
        h = build(params, t)
        r = h.bloch_norm
        theta = 2.0 * math.pi * r * dt
        c, s = math.cos(theta), math.sin(theta)
        u11[k] = complex(c, -s * h.az / r)
        u21[k] = complex(s * h.ay / r, -s * h.ax / r)
    a, b = _su2_chain(u11, u21)
    a, b, _ = su2_normalized(complex(a), complex(b))
    return UnitaryOp(a, b)


def _check_orthonormal(basis: EigenPair) -> None:
    gram = np.array([
        [np.vdot(basis.psi_plus, basis.psi_plus),
         np.vdot(basis.psi_plus, basis.psi_minus)],
        [np.vdot(basis.psi_minus, basis.psi_plus),
         np.vdot(basis.psi_minus, basis.psi_minus)]])
    if np.max(np.abs(gram - np.eye(2))) > 1e-12:
        raise ParameterError("basis is not orthonormal")
