"""1-bit holographic localization by alias-set intersection.

A detection at position z with phase offset alpha fixes one parity bit:
which half-wavelength interval from the source the detector sits in.
Inverting a bit gives a lambda-periodic union of length-lambda/2 intervals
of candidate source positions; intersecting the alias sets of several
frequency channels and detectors shrinks the candidate measure without
ever excluding the true source.

Intervals are half-open [lo, hi); parity flips exactly at interval edges,
so containment queries honor a configurable edge tolerance (default
1e-9 * lambda) to keep boundary tie-breaking deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


from .phasor import TWO_PI

EDGE_TOL_FACTOR = 1e-9


class EmptyDomainError(ValueError):
    """The search domain has no interior."""


class InconsistentBitsError(RuntimeError):
    """No source position reproduces all bits; they lack a common source."""


@dataclass(frozen=True)
class FrequencyChannel:
    """One query frequency: index j, wavenumber k_j, and omega_j = c * k_j."""

    index: int
    wavenumber: float
    speed: float = 1.0

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("channel index must be >= 1")
        if self.wavenumber <= 0.0 or self.speed <= 0.0:
            raise ValueError("wavenumber and speed must be positive")

    @property
    def angular_frequency(self) -> float:
        return self.speed * self.wavenumber

    @property
    def wavelength(self) -> float:
        return TWO_PI / self.wavenumber

    @classmethod
    def harmonic(cls, index: int, base_wavelength: float,
                 speed: float = 1.0) -> "FrequencyChannel":
        """Channel j of the harmonic ladder built on a base wavelength."""
        return cls(index, index * TWO_PI / base_wavelength, speed)


@dataclass(frozen=True)
class DetectionBit:
    """Parity bit measured at one detector on one frequency channel."""

    detector_position: float
    channel_index: int
    parity: int

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 (even) or 1 (odd)")


@dataclass(frozen=True)
class AliasSet:
    """Disjoint sorted half-open intervals of candidate source positions."""

    intervals: tuple[tuple[float, float], ...]
    domain: tuple[float, float]
    edge_tol: float = 0.0
    granularity: float | None = None

    @property
    def measure(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.intervals)

    def contains(self, z: float) -> bool:
        return any(lo - self.edge_tol <= z <= hi + self.edge_tol
                   for lo, hi in self.intervals)

    def intersect(self, other: "AliasSet") -> "AliasSet":
        if self.domain != other.domain:
            raise ValueError("alias sets cover different domains")
        tol = max(self.edge_tol, other.edge_tol)
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if hi - lo > tol:
                out.append((lo, hi))
            if a[i][1] <= b[j][1]:
                i += 1
            else:
                j += 1
        grains = [g for g in (self.granularity, other.granularity) if g is not None]
        return AliasSet(tuple(out), self.domain, tol,
                        min(grains) if grains else None)


def forward_bit(z_source: float, z_detector: float, channel: FrequencyChannel,
                alpha: float = 0.0) -> DetectionBit:
    """Parity of the half-wavelength interval containing the detector.

    p = floor((k * (z_detector - z_source) + alpha) / pi) mod 2, so p = 0
    marks an even interval from the source and p = 1 an odd one; the bit
    is invariant under whole-wavelength shifts of either position.
    """
    u = channel.wavenumber * (z_detector - z_source) + alpha
    return DetectionBit(z_detector, channel.index, int(math.floor(u / math.pi)) % 2)


def alias_intervals(bit: DetectionBit, channel: FrequencyChannel, alpha: float,
                    domain: tuple[float, float]) -> AliasSet:
    """All source positions in the domain consistent with one bit.

    A lambda-periodic union of length-lambda/2 intervals clipped to the
    domain, with the observed parity selecting every other interval.
    """
    lo_d, hi_d = domain
    if not (hi_d > lo_d):
        raise EmptyDomainError("domain must have positive length")
    k = channel.wavenumber
    lam = channel.wavelength
    tol = EDGE_TOL_FACTOR * lam
    z_d = bit.detector_position

    # source z = z_d + (alpha - u)/k with u in [m*pi, (m+1)*pi), m parity-matched
    m_lo = math.floor((alpha - k * (hi_d - z_d)) / math.pi) - 2
    m_hi = math.ceil((alpha - k * (lo_d - z_d)) / math.pi) + 2
    out = []
    for m in range(m_lo, m_hi + 1):
        if m % 2 != bit.parity:
            continue
        lo = z_d + (alpha - (m + 1) * math.pi) / k
        hi = z_d + (alpha - m * math.pi) / k
        lo, hi = max(lo, lo_d), min(hi, hi_d)
        if hi - lo > tol:
            out.append((lo, hi))
    out.sort()
    return AliasSet(tuple(out), domain, tol, lam / 2.0)


def localize(bits: Sequence[DetectionBit], channels: Iterable[FrequencyChannel],
             alpha: float, domain: tuple[float, float]) -> AliasSet:
    """Intersect the alias sets of every bit across channels and detectors.

    The result contains the true source whenever the bits came from one;
    its granularity is half the shortest wavelength involved.  Raises
    :class:`InconsistentBitsError` when the intersection is empty, which
    signals bits that cannot share a source.
    """
    by_index = {c.index: c for c in channels}
    if not bits:
        raise ValueError("need at least one detection bit")
    result = None
    for bit in bits:
        try:
            channel = by_index[bit.channel_index]
        except KeyError:
            raise ValueError(f"no channel with index {bit.channel_index}") from None
        cell = alias_intervals(bit, channel, alpha, domain)
        result = cell if result is None else result.intersect(cell)
    if not result.intervals:
        raise InconsistentBitsError("inconsistent bits: no common source position")
    return result


def alias_density(channels: Sequence[FrequencyChannel], domain: tuple[float, float],
                  alpha: float = 0.0, source_fraction: float = 0.61803398875,
                  detector_position: float | None = None) -> float:
    """Fraction of the domain still aliased after using every channel.

    Bits are generated for a reference source placed ``source_fraction``
    of the way into the domain and a single detector (domain end unless
    given).  One channel leaves exactly half the domain whenever it spans
    whole wavelengths; more channels never increase the density.
    """
    lo_d, hi_d = domain
    if not (hi_d > lo_d):
        raise EmptyDomainError("domain must have positive length")
    if not channels:
        raise ValueError("need at least one channel")
    z_s = lo_d + source_fraction * (hi_d - lo_d)
    z_d = hi_d if detector_position is None else detector_position
    bits = [forward_bit(z_s, z_d, c, alpha) for c in channels]
    result = localize(bits, channels, alpha, domain)
    return result.measure / (hi_d - lo_d)
