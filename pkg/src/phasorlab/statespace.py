"""General linear evolution, characteristic roots, and unitary propagation.

An order-n linear evolution sum(a_k d^k/dt^k) psi = f(t) is represented by
its coefficient sequence; its characteristic polynomial sum(a_k s^k) has
exactly n complex roots (eigenvalues of the companion matrix), which is
why the complex plane suffices to represent every evolution pattern.
Hermitian generators evolve states through the exact one-step propagator
exp(-i H dt / hbar), preserving norm and energy to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

# RK4 stays stable for |root * step| below roughly 2.8 on the imaginary
# axis; reject steps beyond this to fail loudly instead of blowing up.
RK4_STABILITY_LIMIT = 2.5


class DegenerateOrderError(ValueError):
    """Leading coefficient is zero; the stated order is fictitious."""


class StabilityError(RuntimeError):
    """Fixed step too large for the spectral radius of the evolution."""


@dataclass(frozen=True)
class EvolutionSpec:
    """Coefficients a_0..a_n (ascending) plus an optional forcing term."""

    coefficients: tuple[complex, ...]
    forcing: Callable[[float], complex] | None = None

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise ValueError("need at least order 1 (two coefficients)")
        if coeffs[-1] == 0:
            raise DegenerateOrderError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1


def companion_matrix(spec: EvolutionSpec) -> np.ndarray:
    """First-order form of the evolution; eigenvalues = characteristic roots."""
    n = spec.order
    a = np.asarray(spec.coefficients, dtype=complex)
    m = np.zeros((n, n), dtype=complex)
    m[:-1, 1:] = np.eye(n - 1)
    m[-1, :] = -a[:-1] / a[-1]
    return m


def characteristic_roots(spec: EvolutionSpec) -> np.ndarray:
    """All n roots of sum(a_k s^k), with multiplicity."""
    return np.linalg.eigvals(companion_matrix(spec))


def characteristic_value(coefficients, s: complex) -> complex:
    """Evaluate sum(a_k s^k) at s (Horner form)."""
    acc = 0.0 + 0.0j
    for c in reversed(list(coefficients)):
        acc = acc * s + complex(c)
    return acc


@dataclass(frozen=True)
class Trajectory:
    """Sampled companion-state history; column k is the k-th derivative."""

    times: np.ndarray
    states: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return self.states[:, 0]


def evolve_linear(spec: EvolutionSpec, initial: np.ndarray, t_final: float,
                  step: float) -> Trajectory:
    """Integrate the order-n evolution with fixed-step classical RK4.

    ``initial`` holds (psi, psi', ..., psi^(n-1)) at t = 0.  The requested
    step is rounded to the nearest count that divides ``t_final`` evenly,
    so the trajectory lands exactly on the end time.  Roots with negative
    real part decay as transients e^{-alpha t}; a step too large for the
    spectral radius raises :class:`StabilityError` up front.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if t_final <= 0.0:
        raise ValueError("t_final must be positive")
    y = np.asarray(initial, dtype=complex)
    if y.shape != (spec.order,):
        raise ValueError(f"initial data must have length {spec.order}")

    n_steps = max(1, round(t_final / step))
    step = t_final / n_steps

    m = companion_matrix(spec)
    rho = float(np.max(np.abs(np.linalg.eigvals(m)))) if spec.order else 0.0
    if rho * step > RK4_STABILITY_LIMIT:
        raise StabilityError(
            f"step {step:g} exceeds stability bound {RK4_STABILITY_LIMIT:g}/rho"
            f" = {RK4_STABILITY_LIMIT / rho:g}")

    a_n = spec.coefficients[-1]
    forcing = spec.forcing

    def rhs(t, state):
        out = m @ state
        if forcing is not None:
            out[-1] += forcing(t) / a_n
        return out

    times = np.arange(n_steps + 1) * step
    states = np.empty((n_steps + 1, spec.order), dtype=complex)
    states[0] = y
    for i in range(n_steps):
        t = times[i]
        k1 = rhs(t, y)
        k2 = rhs(t + step / 2, y + step / 2 * k1)
        k3 = rhs(t + step / 2, y + step / 2 * k2)
        k4 = rhs(t + step, y + step * k3)
        y = y + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        states[i + 1] = y
    return Trajectory(times, states)


@dataclass(frozen=True)
class HamiltonianOperator:
    """Hermitian generator with its time-scale factor hbar.

    Hermiticity is enforced at construction, so everything downstream may
    assume a real spectrum and a unitary propagator.
    """

    matrix: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        h = np.asarray(self.matrix, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("Hamiltonian must be a square matrix")
        scale = max(1.0, float(np.max(np.abs(h))))
        if np.max(np.abs(h - h.conj().T)) > 1e-12 * scale:
            raise ValueError("Hamiltonian must be Hermitian within 1e-12")
        if self.hbar <= 0.0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "matrix", h)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def schrodinger_propagate(hamiltonian: HamiltonianOperator, psi0: np.ndarray,
                          dt: float, steps: int) -> np.ndarray:
    """Apply the exact one-step propagator exp(-i H dt / hbar) repeatedly.

    The repeated product is evaluated in the eigenbasis of H with the
    step phases accumulated, which is the same operator applied ``steps``
    times but without per-step round-off build-up, so the norm of the
    state is preserved to machine precision regardless of step count.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    psi = np.asarray(psi0, dtype=complex)
    if psi.shape != (hamiltonian.dimension,):
        raise ValueError("state dimension does not match the Hamiltonian")
    if steps == 0:
        return psi
    w, v = np.linalg.eigh(hamiltonian.matrix)
    phases = np.exp(-1j * w * dt * steps / hamiltonian.hbar)
    return v @ (phases * (v.conj().T @ psi))


def energy_expectation(hamiltonian: HamiltonianOperator, psi: np.ndarray) -> float:
    """<psi|H|psi>, real for Hermitian H."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(psi.conj() @ (hamiltonian.matrix @ psi)))


# Pauli matrix whose action rotates the local polarization direction.
SPIN_ROTATOR = np.array([[0.0, -1.0j], [1.0j, 0.0]])


def polarization_direction(vx: np.ndarray, vy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Axis orientation (mod pi) of the polarization ellipse at each point.

    Returns (angle, defined); the direction is undefined for zero fields
    and for circular polarization, where the ellipse has no major axis.
    Those points are flagged False and carry NaN angles.
    """
    vx = np.asarray(vx, dtype=complex)
    vy = np.asarray(vy, dtype=complex)
    num = 2.0 * np.real(np.conj(vx) * vy)
    den = np.abs(vx) ** 2 - np.abs(vy) ** 2
    scale = np.abs(vx) ** 2 + np.abs(vy) ** 2
    defined = np.hypot(num, den) > 1e-12 * np.maximum(scale, 1e-300)
    angle = np.where(defined, 0.5 * np.arctan2(num, den), np.nan)
    return angle, defined


@dataclass(frozen=True)
class VortexField:
    """Local polarization directions before and after the spin rotation."""

    z: np.ndarray
    direction: np.ndarray
    direction_rotated: np.ndarray
    defined: np.ndarray
    defined_rotated: np.ndarray


def spin_vortex_field(z: np.ndarray, wavenumber: float, angular_frequency: float,
                      t: float, jones: tuple[complex, complex] = (1.0, 0.0),
                      applications: int = 1) -> VortexField:
    """Direction field of psi(z) = jones * e^{i(kz - wt)} under the rotator.

    Applying the spin matrix once rotates the local direction by pi/2 at
    every z (a vortex-like pointwise rotation); applying it twice
    restores the original field since the matrix squares to identity.
    """
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        raise ValueError("grid must be nonempty")
    carrier = np.exp(1j * (wavenumber * z - angular_frequency * t))
    field = np.stack([jones[0] * carrier, jones[1] * carrier], axis=0)
    rotated = field
    for _ in range(applications):
        rotated = SPIN_ROTATOR @ rotated
    direction, defined = polarization_direction(field[0], field[1])
    direction_rot, defined_rot = polarization_direction(rotated[0], rotated[1])
    return VortexField(z, direction, direction_rot, defined, defined_rot)
