"""Engine configuration and the stroke Hamiltonians.

Unit convention: h = 1 and hbar = 1/(2*pi).  Internally every
frequency is in Hz, every time in seconds and every energy in h*Hz, so
the level splitting ``E = sqrt(4 pi^2 nu^2 + wt^2) / (4 pi)`` keeps its
literal ``4 pi^2`` factors.  The public entry point
``EngineParams.from_lab`` accepts the laboratory units kHz and
microseconds and converts once, at the boundary.

The four Hamiltonians of the cycle:

* ``h_cold``:  ``-(nu_cold/2) sx + (wt/(4 pi)) sz``
* ``h_hot``:   ``-(nu_hot/2)  sy + (wt/(4 pi)) sz``
* ``h_exp(t)``: in-plane field of magnitude ``nu(t)/2`` rotating from
  the x-axis at t=0 to the y-axis at t=tau, plus the constant z term
* ``h_comp(t) = -h_exp(tau - t)``: the time-reversed ramp

with ``nu(t)`` the linear ramp from ``nu_cold`` to ``nu_hot``,
``w = pi/(2 tau)`` the rotation rate and ``wt = g*w`` the z-field
strength.  The boundary identities ``h_exp(0) == h_cold`` and
``h_exp(tau) == h_hot`` hold at coefficient level, exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from .mat2 import HermitianOp

__all__ = [
    "H_PLANCK",
    "HBAR",
    "EngineParams",
    "nu_of_t",
    "h_cold",
    "h_hot",
    "h_exp",
    "h_comp",
    "level_splitting",
]

# Unit-system markers: h = 1 fixes energies to h*Hz for frequencies in
# Hz; hbar follows.
H_PLANCK = 1.0
HBAR = 1.0 / (2.0 * math.pi)

KHZ = 1e3
MICROSECOND = 1e-6


@dataclass(frozen=True)
class EngineParams:
    """Full clean-engine configuration, stored in SI units.

    ``nu_cold``/``nu_hot`` in Hz, ``tau`` in seconds, ``g``
    dimensionless (may be negative), populations in (0, 1).  Use
    ``from_lab`` for kHz / microsecond inputs.
    """

    nu_cold: float
    nu_hot: float
    tau: float
    g: float
    p_plus_cold: float
    p_plus_hot: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(x) for x in
                   (self.nu_cold, self.nu_hot, self.tau, self.g,
                    self.p_plus_cold, self.p_plus_hot)):
            raise ParameterError("non-finite engine parameter")
        if self.nu_cold <= 0.0 or self.nu_hot <= 0.0:
            raise ParameterError("frequencies must be positive")
        if self.tau <= 0.0:
            raise ParameterError("driving time must be positive")
        for name in ("p_plus_cold", "p_plus_hot"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise ParameterError(f"{name} = {p!r} outside (0, 1)")

    @classmethod
    def from_lab(cls, nu_cold_khz: float, nu_hot_khz: float, tau_us: float,
                 g: float, p_plus_cold: float, p_plus_hot: float,
                 ) -> "EngineParams":
        """Build from laboratory units (kHz, microseconds)."""
        return cls(nu_cold=nu_cold_khz * KHZ, nu_hot=nu_hot_khz * KHZ,
                   tau=tau_us * MICROSECOND, g=g,
                   p_plus_cold=p_plus_cold, p_plus_hot=p_plus_hot)

    @property
    def omega(self) -> float:
        """In-plane rotation rate ``pi/(2 tau)`` in rad/s."""
        return math.pi / (2.0 * self.tau)

    @property
    def omega_tilde(self) -> float:
        """z-field strength ``g * omega`` in rad/s."""
        return self.g * self.omega


def nu_of_t(params: EngineParams, t: float) -> float:
    """Linear frequency ramp, ``nu(0) = nu_cold`` and
    ``nu(tau) = nu_hot`` exactly.  ``t`` in seconds."""
    _check_stroke_time(params, t)
    s = t / params.tau
    return params.nu_cold * (1.0 - s) + params.nu_hot * s


def h_cold(params: EngineParams) -> HermitianOp:
    """Hamiltonian of the cold reservoir stroke."""
    return HermitianOp(ax=-0.5 * params.nu_cold,
                       az=params.omega_tilde / (4.0 * math.pi))


def h_hot(params: EngineParams) -> HermitianOp:
    """Hamiltonian at the end of the expansion stroke."""
    return HermitianOp(ay=-0.5 * params.nu_hot,
                       az=params.omega_tilde / (4.0 * math.pi))


def h_exp(params: EngineParams, t: float) -> HermitianOp:
    """Expansion-stroke Hamiltonian at time ``t`` (seconds).

    The endpoints are evaluated with exact trigonometric values so the
    boundary identities with ``h_cold`` / ``h_hot`` are coefficient
    equalities, not approximations.
    """
    _check_stroke_time(params, t)
    if t == 0.0:
        c, s = 1.0, 0.0
    elif t == params.tau:
        c, s = 0.0, 1.0
    else:
        angle = params.omega * t
        c, s = math.cos(angle), math.sin(angle)
    half_nu = 0.5 * nu_of_t(params, t)
    return HermitianOp(ax=-half_nu * c, ay=-half_nu * s,
                       az=params.omega_tilde / (4.0 * math.pi))


def h_comp(params: EngineParams, t: float) -> HermitianOp:
    """Compression-stroke Hamiltonian ``-h_exp(tau - t)``."""
    _check_stroke_time(params, t)
    # tau - t maps the endpoints exactly; interior roundoff is harmless.
    return -h_exp(params, params.tau - t)


def level_splitting(nu: float, omega_tilde: float) -> float:
    """Positive eigenvalue ``sqrt(4 pi^2 nu^2 + wt^2)/(4 pi)`` in h*Hz
    of a reservoir Hamiltonian with in-plane frequency ``nu`` (Hz)."""
    return math.sqrt(4.0 * math.pi**2 * nu**2 + omega_tilde**2) / (4.0 * math.pi)


def _check_stroke_time(params: EngineParams, t: float) -> None:
    if not 0.0 <= t <= params.tau:
        raise ParameterError(
            f"stroke time {t!r} outside [0, {params.tau!r}]")
