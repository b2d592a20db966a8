"""Gibbs states and the population / spin-temperature map.

The inverse temperature is defined through the excited-state
population of the corresponding reservoir Hamiltonian:

    beta = ln((1 - p+) / p+) / (h * sqrt(nu^2 + (wt / 2 pi)^2))

The denominator equals twice the level splitting ``E``, which gives
the exact identity ``tanh(beta * E) = 1 - 2 p+``.  Populations above
one half therefore map to negative beta (population inversion, an
effective negative spin temperature); no separate sign convention is
needed anywhere downstream, the signed ``tanh`` carries it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, ParameterError
from .mat2 import DensityOp, EigenPair, HermitianOp, eig_herm2

__all__ = [
    "SpinTemperature",
    "beta_from_population",
    "population_from_state",
    "gibbs_state",
    "partition_function",
]


@dataclass(frozen=True)
class SpinTemperature:
    """Inverse spin temperature in 1/(h*Hz); sign unrestricted.

    ``beta > 0`` iff the excited-state population is below one half,
    ``beta < 0`` iff it is above (inversion), ``beta == 0`` at exactly
    one half.
    """

    beta: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.beta):
            raise ParameterError("non-finite inverse temperature")


def beta_from_population(p_plus: float, nu: float,
                         omega_tilde: float) -> SpinTemperature:
    """Inverse temperature from the excited-state population.

    ``nu`` in Hz, ``omega_tilde`` in rad/s.  ``p_plus = 0.5`` maps to
    ``beta = 0`` exactly.
    """
    if not 0.0 < p_plus < 1.0:
        raise ParameterError(f"population {p_plus!r} outside (0, 1)")
    denom = math.sqrt(nu**2 + (omega_tilde / (2.0 * math.pi))**2)
    return SpinTemperature(math.log((1.0 - p_plus) / p_plus) / denom)


def population_from_state(rho: DensityOp, h: HermitianOp) -> float:
    """Excited-state population ``<psi+| rho |psi+>`` of ``rho`` in the
    eigenbasis of ``h``."""
    basis = eig_herm2(h)
    if basis.degenerate:
        raise DegeneracyError("population undefined for degenerate levels")
    val = np.vdot(basis.psi_plus, rho.matrix @ basis.psi_plus)
    return float(val.real)


def gibbs_state(h: HermitianOp, beta: SpinTemperature) -> DensityOp:
    """Thermal state ``exp(-beta H)/Z``, normalised analytically.

    Populations are ``p+ = 1/(1 + exp(2 beta r))`` and ``p- = 1 - p+``
    with ``r`` half the level splitting, so the trace is one by
    construction; the identity coefficient of ``h`` cancels.
    """
    basis = eig_herm2(h)
    if basis.degenerate:
        raise DegeneracyError("Gibbs state undefined for degenerate levels")
    r = 0.5 * (basis.e_plus - basis.e_minus)
    p_plus = 1.0 / (1.0 + math.exp(2.0 * beta.beta * r))
    p_minus = 1.0 - p_plus
    m = (p_plus * np.outer(basis.psi_plus, basis.psi_plus.conj())
         + p_minus * np.outer(basis.psi_minus, basis.psi_minus.conj()))
    return DensityOp(m)


def partition_function(h: HermitianOp, beta: SpinTemperature) -> float:
    """``Z = Tr exp(-beta H) = exp(-beta a0) * 2 cosh(beta r)``.

    For the traceless engine Hamiltonians this is ``2 cosh(beta E)``.
    """
    r = h.bloch_norm
    return math.exp(-beta.beta * h.a0) * 2.0 * math.cosh(beta.beta * r)
