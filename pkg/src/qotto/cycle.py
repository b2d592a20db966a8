"""Four-stroke cycle: work, heat and efficiency by two routes.

Route one (``run_cycle_trace``) simulates the strokes: prepare the
cold Gibbs state, transport it with the expansion propagator,
replace it by the hot Gibbs state, transport that back with the
adjoint, and read every energy off as a trace.

Route two (the ``*_closed_form`` functions) evaluates the same
quantities from the transition probability ``xi`` alone:

    W      = (Ec - Eh) S + 2 xi (Eh tc + Ec th)
    Q_hot  =        Eh S - 2 xi  Eh tc
    Q_cold =      - Ec S - 2 xi  Ec th

with ``tc = tanh(beta_c Ec) = 1 - 2 p+_cold``, ``th`` likewise for the
hot reservoir (negative under population inversion) and
``S = tc - th``.  Both routes satisfy the cycle first law
``W + Q_hot + Q_cold = 0`` to rounding, and

    eta = -W / Q_hot = 1 - (Ec/Eh) (1 - 2 xi F) / (1 - 2 xi G),
    F = -th / S,   G = tc / S.

Sign conventions: ``W < 0`` means net work extracted, ``Q > 0`` means
heat absorbed by the working medium, so an engine has ``W < 0`` and
``Q_hot > 0``.  At ``xi = 0`` the efficiency reduces to the ideal
adiabatic value ``eta_otto = 1 - Ec/Eh``, and ``eta >= eta_otto``
exactly when ``F >= G``, i.e. when the inverted reservoir satisfies
``|beta_hot| E_hot >= beta_cold E_cold`` (``otto_threshold``).

The ``tanh`` factors are always evaluated as ``1 - 2 p+`` (exact, no
exponentials), so population inversion needs no sign bookkeeping and
extreme populations cannot overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DegeneracyError, ParameterError
from .evolution import DEFAULT_STEPS, propagator_lab, transition_probability
from .mat2 import DensityOp, UnitaryOp, conjugate, dagger, trace_prod
from .model import EngineParams, h_cold, h_hot, level_splitting
from .thermal import SpinTemperature, beta_from_population, gibbs_state

__all__ = [
    "CycleResult",
    "run_cycle_trace",
    "run_cycle",
    "work_closed_form",
    "heat_hot_closed_form",
    "heat_cold_closed_form",
    "efficiency_closed_form",
    "efficiency_advantage",
    "otto_threshold",
    "reservoir_energies",
]


@dataclass(frozen=True)
class CycleResult:
    """Per-cycle thermodynamic ledger (energies in h*Hz).

    ``rho_after`` holds the state at the end of each stroke in cycle
    order: cold thermalisation, expansion, hot thermalisation,
    compression.  ``mode`` tags the operating regime; sweeps cross
    regime boundaries, so a non-engine configuration is data, not an
    error.
    """

    xi: float
    work: float
    q_hot: float
    q_cold: float
    eta: float
    eta_otto: float
    mode: str
    rho_after: tuple[DensityOp, DensityOp, DensityOp, DensityOp]
    e_cold: float
    e_hot: float
    beta_cold: SpinTemperature
    beta_hot: SpinTemperature


def reservoir_energies(params: EngineParams) -> tuple[float, float]:
    """Level splittings ``(E_cold, E_hot)`` in h*Hz."""
    wt = params.omega_tilde
    return (level_splitting(params.nu_cold, wt),
            level_splitting(params.nu_hot, wt))


def _tanh_terms(params: EngineParams) -> tuple[float, float]:
    """Signed ``tanh(beta E) = 1 - 2 p+`` for both reservoirs."""
    return 1.0 - 2.0 * params.p_plus_cold, 1.0 - 2.0 * params.p_plus_hot


def _check_xi(xi: float) -> None:
    if not 0.0 <= xi <= 1.0:
        raise ParameterError(f"transition probability {xi!r} outside [0, 1]")


def work_closed_form(params: EngineParams, xi: float) -> float:
    """Net work of one cycle as a function of ``xi``."""
    _check_xi(xi)
    e_c, e_h = reservoir_energies(params)
    t_c, t_h = _tanh_terms(params)
    s = t_c - t_h
    return (e_c * s - e_h * s) + 2.0 * xi * (e_h * t_c + e_c * t_h)


def heat_hot_closed_form(params: EngineParams, xi: float) -> float:
    """Heat absorbed from the hot (inverted) reservoir."""
    _check_xi(xi)
    _, e_h = reservoir_energies(params)
    t_c, t_h = _tanh_terms(params)
    return e_h * (t_c - t_h) - 2.0 * xi * (e_h * t_c)


def heat_cold_closed_form(params: EngineParams, xi: float) -> float:
    """Heat absorbed from the cold reservoir (negative for an engine)."""
    _check_xi(xi)
    e_c, _ = reservoir_energies(params)
    t_c, t_h = _tanh_terms(params)
    return -(e_c * (t_c - t_h)) - 2.0 * xi * (e_c * t_h)


def efficiency_closed_form(params: EngineParams, xi: float) -> float:
    """``eta = 1 - (Ec/Eh) (1 - 2 xi F) / (1 - 2 xi G)``."""
    _check_xi(xi)
    e_c, e_h = reservoir_energies(params)
    t_c, t_h = _tanh_terms(params)
    s = t_c - t_h
    if s == 0.0:
        raise DegeneracyError(
            "equal reservoir populations: efficiency closed form is 0/0")
    f = -t_h / s
    g = t_c / s
    denom = 1.0 - 2.0 * xi * g
    if denom == 0.0:
        raise DegeneracyError("vanishing hot-heat denominator (Q_hot = 0)")
    return 1.0 - (e_c / e_h) * (1.0 - 2.0 * xi * f) / denom


def otto_threshold(params: EngineParams) -> tuple[bool, float]:
    """Whether the configuration can beat the adiabatic efficiency.

    Requires ``beta_cold > 0`` and ``beta_hot < 0``.  Returns the
    truth of ``|beta_hot| E_hot >= beta_cold E_cold`` together with
    the margin ``|beta_hot| E_hot - beta_cold E_cold`` (equivalently
    ``artanh(2 p+_hot - 1) - artanh(1 - 2 p+_cold)``).
    """
    t_c, t_h = _tanh_terms(params)
    if t_c <= 0.0:
        raise ParameterError("cold reservoir must have beta > 0 (p+ < 1/2)")
    if t_h >= 0.0:
        raise ParameterError("hot reservoir must have beta < 0 (p+ > 1/2)")
    margin = math.atanh(-t_h) - math.atanh(t_c)
    return margin >= 0.0, margin


def run_cycle_trace(params: EngineParams, u: UnitaryOp) -> CycleResult:
    """Simulate the four strokes and account every energy as a trace.

    ``u`` is the expansion propagator; the compression stroke uses its
    exact adjoint.  Thermalisation strokes replace the state by the
    reservoir Gibbs state outright.
    """
    if params.p_plus_cold == 0.5 or params.p_plus_hot == 0.5:
        raise DegeneracyError(
            "population exactly 1/2: spin temperature degenerate")
    hc, hh = h_cold(params), h_hot(params)
    beta_c = beta_from_population(params.p_plus_cold, params.nu_cold,
                                  params.omega_tilde)
    beta_h = beta_from_population(params.p_plus_hot, params.nu_hot,
                                  params.omega_tilde)

    rho_in = gibbs_state(hc, beta_c)
    rho_exp = conjugate(u, rho_in)
    rho_th = gibbs_state(hh, beta_h)
    rho_comp = conjugate(dagger(u), rho_th)

    t_in = trace_prod(rho_in, hc)
    t_exp = trace_prod(rho_exp, hh)
    t_th = trace_prod(rho_th, hh)
    t_comp = trace_prod(rho_comp, hc)

    work = (t_exp - t_th) + (t_comp - t_in)
    q_hot = t_th - t_exp
    q_cold = t_in - t_comp

    e_c, e_h = reservoir_energies(params)
    if abs(q_hot) < 1e-14 * max(1.0, e_h):
        raise DegeneracyError("Q_hot vanishes: efficiency undefined")
    return CycleResult(
        xi=transition_probability(params, u),
        work=work, q_hot=q_hot, q_cold=q_cold,
        eta=-work / q_hot, eta_otto=1.0 - e_c / e_h,
        mode=_operating_mode(work, q_hot, q_cold),
        rho_after=(rho_in, rho_exp, rho_th, rho_comp),
        e_cold=e_c, e_hot=e_h, beta_cold=beta_c, beta_hot=beta_h)


def run_cycle(params: EngineParams, n_steps: int = DEFAULT_STEPS,
              strict: bool = False) -> CycleResult:
    """Propagate the expansion stroke and run the trace-route cycle."""
    return run_cycle_trace(params, propagator_lab(params, n_steps, strict).u)


def efficiency_advantage(params: EngineParams, n_steps: int = DEFAULT_STEPS,
                         ) -> tuple[float, float, float]:
    """``(eta, eta_at_g0, difference)`` against the zero-field twin at
    identical driving time and populations."""
    eta = _closed_form_eta(params, n_steps)
    eta0 = _closed_form_eta(replace(params, g=0.0), n_steps)
    return eta, eta0, eta - eta0


def _closed_form_eta(params: EngineParams, n_steps: int) -> float:
    u = propagator_lab(params, n_steps).u
    return efficiency_closed_form(params, transition_probability(params, u))


def _operating_mode(work: float, q_hot: float, q_cold: float) -> str:
    if work < 0.0 and q_hot > 0.0:
        return "engine"
    if work > 0.0 and q_cold > 0.0:
        return "refrigerator"
    return "dissipative"
