"""Thermalization of harmonic mode families under wall jitter.

A mode family is the harmonic ladder {f, 2f, 3f, ...} with exactly one
member energized at a time; wall displacements move the family between
adjacent members (one antinode at a time), so the occupancy performs a
+-1 Metropolis walk with stationary weights e^{-n h f / k_B T}.  The
equilibrium mean energy then reproduces the Planck form
hf / (e^{hf/k_B T} - 1), with the antinodal lobe energy h*f independent
of the wavelength.

``equilibrate`` runs the walk vectorized through the reflected-walk
(Lindley) recursion, which is step-for-step identical to looping
``jitter_step`` over the same pre-drawn randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from .seeding import derive_rng

# e^{-x} underflows past this point; the closed form is reported as 0.
PLANCK_UNDERFLOW_X = 700.0


@dataclass(frozen=True)
class ThermalBath:
    """Equilibrium context: temperature plus the two scale constants."""

    temperature: float
    boltzmann_k: float = 1.0
    planck_h: float = 1.0

    def __post_init__(self):
        if min(self.temperature, self.boltzmann_k, self.planck_h) <= 0.0:
            raise ValueError("temperature, k_B and h must all be positive")

    def beta_hf(self, frequency: float) -> float:
        """Dimensionless lobe energy hf / k_B T."""
        return self.planck_h * frequency / (self.boltzmann_k * self.temperature)


@dataclass(frozen=True)
class ModeFamily:
    """Harmonic family with member ``occupancy`` energized (0 = none)."""

    base_frequency: float
    occupancy: int = 0
    lobe_energy: float | None = None

    def __post_init__(self):
        if self.base_frequency <= 0.0:
            raise ValueError("base frequency must be positive")
        if self.occupancy < 0:
            raise ValueError("occupancy must be non-negative")
        if self.lobe_energy is None:
            object.__setattr__(self, "lobe_energy", self.base_frequency)

    @classmethod
    def in_bath(cls, frequency: float, bath: ThermalBath,
                occupancy: int = 0) -> "ModeFamily":
        return cls(frequency, occupancy, bath.planck_h * frequency)

    @property
    def energy(self) -> float:
        return self.occupancy * self.lobe_energy

    def member_frequency(self, member: int) -> float:
        """Frequency of ladder member m, exactly m * f."""
        return member * self.base_frequency


class PlanckEnergy(NamedTuple):
    energy: float
    underflowed: bool


def planck_expectation(frequency: float, bath: ThermalBath) -> PlanckEnergy:
    """Closed-form equilibrium energy hf / (e^{hf/k_B T} - 1).

    Overflow-safe: past hf/k_B T = 700 the value underflows to 0 and the
    flag is set instead of raising.
    """
    if frequency <= 0.0:
        raise ValueError("frequency must be positive")
    x = bath.beta_hf(frequency)
    hf = bath.planck_h * frequency
    if x > PLANCK_UNDERFLOW_X:
        return PlanckEnergy(0.0, True)
    return PlanckEnergy(hf / math.expm1(x), False)


def acceptance_probability(family: ModeFamily, bath: ThermalBath,
                           delta: int) -> float:
    """Metropolis acceptance min(1, e^{-dE/k_B T}) for occupancy += delta."""
    if delta not in (-1, 1):
        raise ValueError("only single-antinode moves are proposed")
    if delta == -1 and family.occupancy == 0:
        return 0.0
    d_energy = delta * family.lobe_energy
    return min(1.0, math.exp(-d_energy / (bath.boltzmann_k * bath.temperature)))


def jitter_step(family: ModeFamily, bath: ThermalBath,
                rng: np.random.Generator) -> ModeFamily:
    """One wall-jitter move: propose n -> n +- 1, accept per Metropolis.

    Downhill moves always pass; the n -> -1 proposal is rejected
    outright, leaving the family unchanged.
    """
    delta = 1 if rng.integers(0, 2) == 1 else -1
    if delta == -1 and family.occupancy == 0:
        return family
    if rng.random() < acceptance_probability(family, bath, delta):
        return ModeFamily(family.base_frequency, family.occupancy + delta,
                          family.lobe_energy)
    return family


@dataclass
class ChainStatistics:
    """Post-burn-in summary of one occupancy chain."""

    steps: int
    burn_in: int
    occupancy_histogram: np.ndarray
    mean_occupancy: float
    mean_energy: float
    mean_energy_stderr: float
    acceptance_rate: float
    occupancies: np.ndarray


def _run_occupancies(n0: int, q: float, steps: int,
                     rng: np.random.Generator) -> tuple[np.ndarray, float]:
    """Vectorized +-1 Metropolis walk floored at 0.

    Increments: +1 with probability q/2 (uphill accepted), -1 with
    probability 1/2 (downhill proposal), else 0; flooring at zero is the
    reflected-walk recursion n_t = max(n0 + S_t, S_t - min_{j<=t} S_j).
    A move is accepted exactly when the occupancy changes.
    """
    u = rng.random(steps)
    direction = rng.integers(0, 2, size=steps)
    x = np.where(direction == 1, (u < q).astype(np.int64), -1)
    s = np.cumsum(x)
    occ = np.maximum(n0 + s, s - np.minimum.accumulate(s))
    prev = np.concatenate(([n0], occ[:-1]))
    acceptance = float(np.mean(occ != prev))
    return occ, acceptance


def equilibrate(family: ModeFamily, bath: ThermalBath, steps: int,
                burn_in: int, rng: np.random.Generator) -> ChainStatistics:
    """Run the jitter chain and summarize its equilibrium statistics.

    The occupancy histogram converges to the geometric law
    P(n) = (1 - q) q^n with q = e^{-hf/k_B T}; the standard error of the
    mean energy comes from 32 batch means.
    """
    if burn_in < 0 or steps <= burn_in:
        raise ValueError("need steps > burn_in >= 0")
    q = math.exp(-bath.beta_hf(family.base_frequency))
    occ, acceptance = _run_occupancies(family.occupancy, q, steps, rng)
    kept = occ[burn_in:]
    histogram = np.bincount(kept)
    mean_occ = float(kept.mean())
    lobe = family.lobe_energy

    n_batches = min(32, kept.size)
    usable = kept.size - kept.size % n_batches
    batches = kept[:usable].reshape(n_batches, -1).mean(axis=1)
    stderr = float(batches.std(ddof=1) / math.sqrt(n_batches)) if n_batches > 1 else math.inf

    return ChainStatistics(
        steps=steps, burn_in=burn_in, occupancy_histogram=histogram,
        mean_occupancy=mean_occ, mean_energy=mean_occ * lobe,
        mean_energy_stderr=stderr * lobe, acceptance_rate=acceptance,
        occupancies=kept,
    )


class SweepRow(NamedTuple):
    frequency: float
    mc_mean_energy: float
    mc_stderr: float
    closed_form: float
    relative_error: float
    acceptance_rate: float
    steps: int
    replica: int


def spectrum_sweep(frequencies: Sequence[float], bath: ThermalBath, steps: int,
                   burn_in: int, master_seed: int) -> list[SweepRow]:
    """One equilibrated chain per frequency, compared to the closed form.

    Chains are independent: replica i draws from the stream derived from
    (master seed, "cavity", i), so duplicated frequencies give
    independent estimates of the same mean.
    """
    rows = []
    for i, f in enumerate(frequencies):
        if f <= 0.0:
            raise ValueError("frequencies must be positive")
        family = ModeFamily.in_bath(f, bath)
        chain = equilibrate(family, bath, steps, burn_in,
                            derive_rng(master_seed, "cavity", i))
        closed = planck_expectation(f, bath).energy
        rel = abs(chain.mean_energy - closed) / closed if closed > 0.0 else math.inf
        rows.append(SweepRow(f, chain.mean_energy, chain.mean_energy_stderr,
                             closed, rel, chain.acceptance_rate, steps, i))
    return rows


class FlowRatio(NamedTuple):
    level: int
    ratio: float
    log_sigma: float
    up_count: int
    down_count: int


def transition_flow_ratios(occupancies: np.ndarray, min_count: int = 25) -> list[FlowRatio]:
    """Empirical detailed-balance check per adjacent occupancy pair.

    For each level n, the ratio of the measured conditional rates
    P(n -> n+1) / P(n+1 -> n); in equilibrium this is e^{-hf/k_B T}.
    ``log_sigma`` is the delta-method error of log(ratio); levels with
    fewer than ``min_count`` transitions either way are skipped.
    """
    occ = np.asarray(occupancies)
    prev, nxt = occ[:-1], occ[1:]
    out = []
    for n in range(int(occ.max())):
        visits_n = int(np.sum(prev == n))
        visits_n1 = int(np.sum(prev == n + 1))
        ups = int(np.sum((prev == n) & (nxt == n + 1)))
        downs = int(np.sum((prev == n + 1) & (nxt == n)))
        if min(ups, downs) < min_count:
            continue
        p_up = ups / visits_n
        p_down = downs / visits_n1
        sigma = math.sqrt((1.0 - p_up) / ups + (1.0 - p_down) / downs)
        out.append(FlowRatio(n, p_up / p_down, sigma, ups, downs))
    return out


def geometric_chi_square(histogram: np.ndarray, q: float,
                         min_expected: float = 5.0) -> tuple[float, float, int]:
    """Chi-square goodness of fit of occupancy counts vs (1-q) q^n.

    Pearson's statistic presumes independent draws, so counts taken from
    a Metropolis chain must be thinned by a few autocorrelation times
    before binning or the statistic is inflated.  Bins past the point
    where the expected count drops under ``min_expected`` are merged into
    one tail bin.  Returns (statistic, p-value, degrees of freedom); q is
    fixed a priori, so dof = bins - 1.
    """
    counts = np.asarray(histogram, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise ValueError("empty histogram")
    n_max = counts.size - 1
    probs = [(1 - q) * q ** n for n in range(n_max + 1)]
    expected = total * np.array(probs)

    cut = n_max + 1
    while cut > 1 and (expected[cut - 1] < min_expected
                       or total * q ** cut < min_expected):
        cut -= 1
    obs = np.concatenate([counts[:cut], [counts[cut:].sum()]])
    exp = np.concatenate([expected[:cut], [total * q ** cut]])
    if obs.size < 2:
        raise ValueError("too few occupancy levels for a chi-square test")
    statistic = float(np.sum((obs - exp) ** 2 / exp))
    dof = obs.size - 1
    return statistic, float(stats.chi2.sf(statistic, dof)), dof


@dataclass(frozen=True)
class ConjugatePairCheck:
    """Commutator scales of two independent conjugate pairs."""

    k1: complex
    k2: complex
    agreement: float
    pattern_residual: float


def _quadrature_pair(dim: int, hbar: float, rotation: float,
                     scale: float) -> tuple[np.ndarray, np.ndarray]:
    """Truncated ladder-built canonical pair (u, v) = (s*X_phi, P_phi/s)."""
    a = np.diag(np.sqrt(np.arange(1, dim)), k=1)
    x = math.sqrt(hbar / 2.0) * (a * np.exp(-1j * rotation)
                                 + a.conj().T * np.exp(1j * rotation))
    p = math.sqrt(hbar / 2.0) * (-1j * a * np.exp(-1j * rotation)
                                 + 1j * a.conj().T * np.exp(1j * rotation))
    return scale * x, p / scale


def commutator_scale_check(dim: int, hbar: float = 1.0,
                           rotations: tuple[float, float] = (0.0, 0.6),
                           scales: tuple[float, float] = (1.0, 1.0)) -> ConjugatePairCheck:
    """Compare the commutator scale of two independent conjugate pairs.

    Each pair is built from an N-truncated ladder; uv - vu equals
    K * identity on the leading (N-1)-dimensional block (the truncation
    corrupts only the last diagonal entry), and both pairs share the same
    K = i*hbar regardless of rotation or inverse rescaling of (u, v).
    """
    if dim < 3:
        raise ValueError("need dimension >= 3")
    ks, residuals = [], []
    for rotation, scale in zip(rotations, scales):
        u, v = _quadrature_pair(dim, hbar, rotation, scale)
        comm = u @ v - v @ u
        block = comm[:dim - 1, :dim - 1]
        k = np.trace(block) / (dim - 1)
        residuals.append(float(np.max(np.abs(block - k * np.eye(dim - 1)))))
        ks.append(complex(k))
    agreement = abs(ks[0] - ks[1]) / max(abs(ks[0]), abs(ks[1]))
    return ConjugatePairCheck(ks[0], ks[1], agreement, max(residuals))
