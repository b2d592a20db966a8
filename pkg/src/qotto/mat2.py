"""Exact-size complex 2x2 linear algebra for a driven qubit.

Operators come in three flavours with different storage:

* ``HermitianOp`` is stored in Pauli-coefficient form
  ``a0*I + ax*sx + ay*sy + az*sz`` with real coefficients, so
  Hermiticity holds by construction and can never drift.
* ``UnitaryOp`` is stored in the two-parameter form
  ``[[u11, -conj(u21)], [u21, conj(u11)]]`` with
  ``|u11|^2 + |u21|^2 = 1``.  Products and adjoints of matrices in this
  form stay exactly in this form, so a chain of thousands of substep
  factors cannot leak out of the unitary group; only the norm of
  ``(u11, u21)`` can drift, and that drift is what
  ``unitarity_defect`` measures.
* ``DensityOp`` is a full 2x2 complex matrix, validated on
  construction, because states produced by the engine strokes have no
  preferred basis.

Energies are in units of h*Hz (h = 1, hbar = 1/(2*pi)), times in
seconds; ``expm_i_herm2`` folds the 2*pi from hbar into the rotation
angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, NumericsError, ParameterError

__all__ = [
    "HermitianOp",
    "UnitaryOp",
    "DensityOp",
    "EigenPair",
    "eig_herm2",
    "expm_i_herm2",
    "mul",
    "dagger",
    "conjugate",
    "trace_prod",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

# Below this fraction of the coefficient scale the two levels are
# treated as crossed and eigenvectors are no longer meaningful.
DEGENERACY_THRESHOLD = 1e-14


@dataclass(frozen=True)
class HermitianOp:
    """Hermitian operator ``a0*I + ax*sx + ay*sy + az*sz`` (units h*Hz)."""

    a0: float = 0.0
    ax: float = 0.0
    ay: float = 0.0
    az: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a0", "ax", "ay", "az"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"non-finite coefficient {name}")

    @property
    def matrix(self) -> np.ndarray:
        return (self.a0 * IDENTITY + self.ax * SIGMA_X
                + self.ay * SIGMA_Y + self.az * SIGMA_Z)

    @property
    def bloch_norm(self) -> float:
        """Half the level splitting: ``sqrt(ax^2 + ay^2 + az^2)``."""
        return math.sqrt(self.ax**2 + self.ay**2 + self.az**2)

    def __neg__(self) -> "HermitianOp":
        return HermitianOp(-self.a0, -self.ax, -self.ay, -self.az)


@dataclass(frozen=True)
class UnitaryOp:
    """Unitary ``[[u11, -conj(u21)], [u21, conj(u11)]]``, det = 1.

    Traceless generators produce exactly this form; a constant
    ``a0*I`` term in a generator only adds a global phase, which is
    dropped (no expectation value, population or coherence depends on
    it).
    """

    u11: complex
    u21: complex

    def __post_init__(self) -> None:
        n = abs(self.u11) ** 2 + abs(self.u21) ** 2
        if not math.isfinite(n):
            raise ParameterError("non-finite unitary entries")
        if abs(n - 1.0) > 1e-12:
            raise ParameterError(
                f"|u11|^2 + |u21|^2 = {n!r} violates unitary normalisation")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.u11, -np.conj(self.u21)], [self.u21, np.conj(self.u11)]])

    @property
    def norm_defect(self) -> float:
        """``max |U U^dag - I|``; equals ``| |u11|^2 + |u21|^2 - 1 |``."""
        return abs(abs(self.u11) ** 2 + abs(self.u21) ** 2 - 1.0)


@dataclass(frozen=True)
class DensityOp:
    """Validated 2x2 density matrix (unit trace, Hermitian, PSD)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ParameterError("density matrix must be 2x2")
        if not np.all(np.isfinite(m.view(float))):
            raise ParameterError("non-finite density matrix")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise ParameterError(f"trace {np.trace(m)!r} != 1")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ParameterError("density matrix is not Hermitian")
        if np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < -1e-12:
            raise ParameterError("density matrix has a negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def populations(self) -> tuple[float, float]:
        return (self.matrix[0, 0].real, self.matrix[1, 1].real)


@dataclass(frozen=True)
class EigenPair:
    """Eigendecomposition of a 2x2 Hermitian operator.

    ``e_plus >= e_minus``; eigenvectors are orthonormal with the global
    phase fixed so that the first component above the noise floor is
    real and positive.  ``degenerate`` marks a level crossing; callers
    that need a basis must treat it as an error.
    """

    e_plus: float
    e_minus: float
    psi_plus: np.ndarray = field(repr=False)
    psi_minus: np.ndarray = field(repr=False)
    degenerate: bool = False


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible component is
    real and positive."""
    anchor = v[0] if abs(v[0]) > 1e-14 else v[1]
    return v * (np.conj(anchor) / abs(anchor))


def eig_herm2(h: HermitianOp) -> EigenPair:
    """Closed-form eigendecomposition ``e_pm = a0 +- r``.

    ``r = sqrt(ax^2 + ay^2 + az^2)``.  The branch used for the
    eigenvectors is chosen by the sign of ``az`` to avoid cancellation
    near the poles of the Bloch sphere.
    """
    r = h.bloch_norm
    scale = max(abs(h.a0), abs(h.ax), abs(h.ay), abs(h.az))
    if r <= DEGENERACY_THRESHOLD * scale or r == 0.0:
        return EigenPair(h.a0 + r, h.a0 - r,
                         np.array([1.0 + 0j, 0.0j]),
                         np.array([0.0j, 1.0 + 0j]),
                         degenerate=True)
    if h.az >= 0.0:
        plus = np.array([r + h.az, h.ax + 1j * h.ay])
        minus = np.array([-(h.ax - 1j * h.ay), r + h.az])
    else:
        plus = np.array([h.ax - 1j * h.ay, r - h.az])
        minus = np.array([r - h.az, -(h.ax + 1j * h.ay)])
    plus = _fix_phase(plus / np.linalg.norm(plus))
    minus = _fix_phase(minus / np.linalg.norm(minus))
    return EigenPair(h.a0 + r, h.a0 - r, plus, minus)


def expm_i_herm2(h: HermitianOp, dt: float) -> UnitaryOp:
    """Propagator ``exp(-i H dt / hbar)`` for constant ``H``, exactly
    unitary.

    Uses ``cos(theta) I - i sin(theta) (n . sigma)`` with
    ``theta = 2*pi*r*dt`` (the 2*pi is ``1/hbar`` for h = 1).  The
    global phase from ``a0`` is dropped, see ``UnitaryOp``.
    """
    if not math.isfinite(dt):
        raise ParameterError("non-finite time step")
    r = h.bloch_norm
    if r == 0.0:
        return UnitaryOp(1.0 + 0j, 0.0j)
    theta = 2.0 * math.pi * r * dt
    c, s = math.cos(theta), math.sin(theta)
    nx, ny, nz = h.ax / r, h.ay / r, h.az / r
    return UnitaryOp(complex(c, -s * nz), complex(s * ny, -s * nx))


def mul(a: UnitaryOp, b: UnitaryOp) -> UnitaryOp:
    """Matrix product ``a @ b`` (apply ``b`` first)."""
    return UnitaryOp(a.u11 * b.u11 - np.conj(a.u21) * b.u21,
                     a.u21 * b.u11 + np.conj(a.u11) * b.u21)


def dagger(u: UnitaryOp) -> UnitaryOp:
    """Adjoint (= inverse) of a unitary."""
    return UnitaryOp(np.conj(u.u11), -u.u21)


def conjugate(u: UnitaryOp, rho: DensityOp) -> DensityOp:
    """State transport ``U rho U^dag``."""
    m = u.matrix
    return DensityOp(m @ rho.matrix @ m.conj().T)


def trace_prod(rho: DensityOp, h: HermitianOp) -> float:
    """Real expectation value ``Tr[rho H]``.

    A residual imaginary part above 1e-12 (relative to the energy
    scale) means an upstream invariant broke, and is reported as a
    numerical failure rather than silently discarded.
    """
    val = np.trace(rho.matrix @ h.matrix)
    scale = max(1.0, abs(h.a0) + h.bloch_norm)
    if abs(val.imag) > 1e-12 * scale:
        raise NumericsError(
            f"Tr[rho H] has imaginary part {val.imag!r}; operands corrupt")
    return float(val.real)
