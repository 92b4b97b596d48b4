"""Coincidence amplitudes of an entangled photon pair from classical phasors.

The parity-tagged pair state is r1.r2 +/- l1.l2 built from circular
polarization phasors; a detection at analyzer angle theta projects each
photon onto the unit linear phasor (cos theta, sin theta).  The joint
amplitude factorizes into per-detector inner products, evaluated either
symbolically (plane-wave orthogonality) or numerically as Cesaro-averaged
integrals of sampled traveling fields.  With unit analyzers the joint
table over x/y outcomes is {0, i E^2, E^2, 0} across the two parities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phasor import (
    TWO_PI,
    PolarizationPhasor,
    SampledField,
    TravelingMode,
    cesaro_inner_product,
)

SQRT_HALF = 1.0 / math.sqrt(2.0)

PARITIES = ("plus", "minus")
HANDEDNESSES = ("right", "left")
CONVENTIONS = ("sum", "difference")


class DetectorUsageError(ValueError):
    """Both outcomes refer to the same detector."""


class DegenerateStateError(RuntimeError):
    """All four joint outcomes carry zero weight; cannot normalize."""


@dataclass(frozen=True)
class CircularKet:
    """Circular polarization state as a classical phasor (x +/- i y)/sqrt(2)."""

    handedness: str

    def __post_init__(self):
        if self.handedness not in HANDEDNESSES:
            raise ValueError(f"handedness must be one of {HANDEDNESSES}")

    @property
    def phasor(self) -> PolarizationPhasor:
        sign = 1.0 if self.handedness == "right" else -1.0
        return PolarizationPhasor(SQRT_HALF, sign * 1j * SQRT_HALF)


@dataclass(frozen=True)
class PhotonPairState:
    """Entangled pair r1.r2 + parity * l1.l2 with per-photon field scale."""

    parity: str
    field_scale: float = 1.0

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        if not (self.field_scale > 0.0):
            raise ValueError("field_scale must be positive")

    @property
    def parity_sign(self) -> float:
        return 1.0 if self.parity == "plus" else -1.0


@dataclass(frozen=True)
class AnalyzerSetting:
    """Linear analyzer at one detector; the angle is axis-valued (mod pi)."""

    detector_index: int
    angle: float
    position: float = 0.0

    def __post_init__(self):
        if self.detector_index not in (1, 2):
            raise ValueError("detector_index must be 1 or 2")
        object.__setattr__(self, "angle", self.angle % math.pi)


def analyzer_phasor(angle: float) -> PolarizationPhasor:
    """Unit linear-polarization phasor along the analyzer axis."""
    return PolarizationPhasor(math.cos(angle), math.sin(angle))


def detector_amplitude(angle: float, ket: CircularKet, field_scale: float = 1.0,
                       ket_phase: complex = 1.0) -> complex:
    """Single-detector projection <theta|handedness> in symbolic mode.

    Equals (E/sqrt 2) e^{+i theta} for a right ket and (E/sqrt 2) e^{-i theta}
    for a left one; ``ket_phase`` applies an overall unit factor to the ket.
    """
    return analyzer_phasor(angle).dot(ket.phasor) * field_scale * ket_phase


def _numeric_detector_amplitude(angle: float, ket: CircularKet, field_scale: float,
                                ket_phase: complex, position: float, wavenumber: float,
                                window_wavelengths: float,
                                samples_per_wavelength: int) -> complex:
    """Same projection via Cesaro integration of sampled traveling fields."""
    if window_wavelengths <= 0.0:
        raise ValueError("numeric mode needs a positive window")
    lam = TWO_PI / wavenumber
    window = window_wavelengths * lam
    n = max(int(window_wavelengths * samples_per_wavelength), 16)
    z = np.linspace(position, position + window, n + 1)
    bra_mode = TravelingMode(wavenumber, 0.0, analyzer_phasor(angle))
    ket_mode = TravelingMode(wavenumber, 0.0,
                             ket.phasor.scaled(field_scale * ket_phase))
    bra = SampledField(z, bra_mode.sample(z))
    ket_field = SampledField(z, ket_mode.sample(z))
    return cesaro_inner_product(bra, ket_field, window)


def pair_amplitude(outcome1: AnalyzerSetting, outcome2: AnalyzerSetting,
                   pair: PhotonPairState, mode: str = "symbolic", *,
                   wavenumber: float = 1.0, window_wavelengths: float = 1e4,
                   samples_per_wavelength: int = 8,
                   ket_phase: complex = 1.0) -> complex:
    """Joint amplitude <theta1 theta2 | pair> for one analyzer outcome each.

    ``mode`` selects symbolic plane-wave orthogonality or the numeric
    Cesaro-integration path over ``window_wavelengths`` of sampled field;
    the two agree within the windowed-average decay bound.
    """
    if outcome1.detector_index == outcome2.detector_index:
        raise DetectorUsageError("outcomes must come from two distinct detectors")
    if mode not in ("symbolic", "numeric"):
        raise ValueError("mode must be 'symbolic' or 'numeric'")

    total = 0.0 + 0.0j
    for handedness, weight in (("right", 1.0), ("left", pair.parity_sign)):
        ket = CircularKet(handedness)
        if mode == "symbolic":
            a1 = detector_amplitude(outcome1.angle, ket, pair.field_scale, ket_phase)
            a2 = detector_amplitude(outcome2.angle, ket, pair.field_scale, ket_phase)
        else:
            a1 = _numeric_detector_amplitude(
                outcome1.angle, ket, pair.field_scale, ket_phase, outcome1.position,
                wavenumber, window_wavelengths, samples_per_wavelength)
            a2 = _numeric_detector_amplitude(
                outcome2.angle, ket, pair.field_scale, ket_phase, outcome2.position,
                wavenumber, window_wavelengths, samples_per_wavelength)
        total += weight * a1 * a2
    return total


def joint_amplitudes(theta1: float, theta2: float, pair: PhotonPairState,
                     mode: str = "symbolic", convention: str = "sum",
                     **numeric_options) -> np.ndarray:
    """2x2 amplitude table over (along, perpendicular) outcomes per detector.

    Entry [i, j] is the amplitude for detector 1 firing along
    theta1 + i*pi/2 and detector 2 along theta2 + j*pi/2.  The
    ``difference`` convention mirrors detector 2 (theta2 -> -theta2),
    which is the handedness choice left open by the correlation sign.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    t2 = theta2 if convention == "sum" else -theta2
    table = np.empty((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            o1 = AnalyzerSetting(1, theta1 + i * math.pi / 2)
            o2 = AnalyzerSetting(2, t2 + j * math.pi / 2)
            table[i, j] = pair_amplitude(o1, o2, pair, mode, **numeric_options)
    return table


def coincidence_probability(outcome1: AnalyzerSetting, outcome2: AnalyzerSetting,
                            pair: PhotonPairState, mode: str = "symbolic",
                            **numeric_options) -> float:
    """Joint probability, normalized over the four outcomes at these settings."""
    table = joint_amplitudes(outcome1.angle, outcome2.angle, pair, mode,
                             **numeric_options)
    weights = np.abs(table) ** 2
    total = weights.sum()
    if total <= 0.0:
        raise DegenerateStateError("zero total outcome weight at these settings")
    return float(weights[0, 0] / total)


def joint_probabilities(theta1: float, theta2: float, pair: PhotonPairState,
                        mode: str = "symbolic", convention: str = "sum",
                        **numeric_options) -> np.ndarray:
    """Normalized 2x2 probability table matching ``joint_amplitudes``."""
    table = joint_amplitudes(theta1, theta2, pair, mode, convention,
                             **numeric_options)
    weights = np.abs(table) ** 2
    total = weights.sum()
    if total <= 0.0:
        raise DegenerateStateError("zero total outcome weight at these settings")
    return weights / total


def correlation_E(theta1: float, theta2: float, pair: PhotonPairState,
                  convention: str = "sum") -> float:
    """Coincidence correlation P(same outcome) - P(different outcome).

    For the plus-parity pair this equals cos(2(theta1 + theta2)) under the
    sum convention and cos(2(theta1 - theta2)) under the difference one.
    """
    p = joint_probabilities(theta1, theta2, pair, convention=convention)
    return float(p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0])


def detector1_marginal(theta1: float, theta2: float, pair: PhotonPairState,
                       convention: str = "sum") -> float:
    """P(detector 1 fires along its axis), summed over detector-2 outcomes."""
    p = joint_probabilities(theta1, theta2, pair, convention=convention)
    return float(p[0, 0] + p[0, 1])


def chsh_S(a: float, a_prime: float, b: float, b_prime: float,
           pair: PhotonPairState, correlation=None, convention: str = "sum") -> float:
    """CHSH combination E(a,b) - E(a,b') + E(a',b) + E(a',b').

    ``correlation`` may replace :func:`correlation_E` (e.g. for degenerate
    zero-field checks); it is called as correlation(theta1, theta2, pair).
    """
    if correlation is None:
        def correlation(t1, t2, p):
            return correlation_E(t1, t2, p, convention=convention)
    return (correlation(a, b, pair) - correlation(a, b_prime, pair)
            + correlation(a_prime, b, pair) + correlation(a_prime, b_prime, pair))


# Angles maximizing chsh_S for the plus pair under the sum convention,
# derived from the cos(2(theta1 + theta2)) correlation: S = 2*sqrt(2).
CHSH_OPTIMAL_ANGLES = (0.0, math.pi / 4, -math.pi / 8, -3 * math.pi / 8)
