import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasorlab import cavity
from phasorlab.cavity import (
    ModeFamily,
    ThermalBath,
    acceptance_probability,
    commutator_scale_check,
    equilibrate,
    geometric_chi_square,
    jitter_step,
    planck_expectation,
    spectrum_sweep,
    transition_flow_ratios,
)
from phasorlab.seeding import derive_rng

BATH = ThermalBath(1.0)  # natural units: hf/k_B T = f


class QueuedRng:
    """Deterministic stand-in feeding scripted draws to jitter_step."""

    def __init__(self, directions, uniforms):
        self._dirs = list(directions)
        self._uni = list(uniforms)

    def integers(self, lo, hi):
        return self._dirs.pop(0)

    def random(self, size=None):
        return self._uni.pop(0)


# --- types -------------------------------------------------------------------

def test_mode_family_harmonic_structure():
    bath = ThermalBath(2.0, boltzmann_k=3.0, planck_h=0.5)
    family = ModeFamily.in_bath(4.0, bath, occupancy=3)
    assert family.lobe_energy == 0.5 * 4.0
    assert family.energy == 3 * 0.5 * 4.0
    for m in range(1, 9):
        assert family.member_frequency(m) == m * 4.0
    # lobe energy per unit frequency recovers h for every family
    for f in (0.5, 1.0, 7.25):
        assert ModeFamily.in_bath(f, bath).lobe_energy / f == pytest.approx(0.5)


def test_mode_family_validation():
    with pytest.raises(ValueError):
        ModeFamily(0.0)
    with pytest.raises(ValueError):
        ModeFamily(1.0, occupancy=-1)
    with pytest.raises(ValueError):
        ThermalBath(-1.0)


# --- single jitter steps -------------------------------------------------------

def test_downhill_always_accepted():
    family = ModeFamily.in_bath(1.0, BATH, occupancy=3)
    stepped = jitter_step(family, BATH, QueuedRng([0], [0.999999]))
    assert stepped.occupancy == 2


def test_floor_proposal_rejected_outright():
    family = ModeFamily.in_bath(1.0, BATH, occupancy=0)
    stepped = jitter_step(family, BATH, QueuedRng([0], [0.0]))
    assert stepped.occupancy == 0
    assert acceptance_probability(family, BATH, -1) == 0.0


def test_uphill_acceptance_probability():
    family = ModeFamily.in_bath(1.0, BATH, occupancy=4)
    assert acceptance_probability(family, BATH, +1) == pytest.approx(math.exp(-1))
    # empirical frequency over scripted uniforms brackets e^{-1}
    accepted = sum(
        jitter_step(family, BATH, QueuedRng([1], [u])).occupancy == 5
        for u in np.linspace(0.0005, 0.9995, 1000))
    assert accepted / 1000 == pytest.approx(math.exp(-1), abs=2e-3)


def test_jitter_preserves_lobe_energy():
    family = ModeFamily.in_bath(2.5, BATH, occupancy=1)
    stepped = jitter_step(family, BATH, QueuedRng([1], [0.0]))
    assert stepped.lobe_energy == family.lobe_energy


# --- vectorized kernel vs direct loop -------------------------------------------

def test_vectorized_chain_matches_stepwise_loop():
    # oracle: replay the same pre-drawn randomness through a plain loop
    q = math.exp(-0.8)
    steps = 5000
    rng = derive_rng(11, "cavity", 0)
    occ_vec, acc_vec = cavity._run_occupancies(2, q, steps, rng)

    rng2 = derive_rng(11, "cavity", 0)
    u = rng2.random(steps)
    direction = rng2.integers(0, 2, size=steps)
    n = 2
    occ_loop = np.empty(steps, dtype=np.int64)
    accepted = 0
    for t in range(steps):
        if direction[t] == 1:
            if u[t] < q:
                n += 1
                accepted += 1
        elif n > 0:
            n -= 1
            accepted += 1
        occ_loop[t] = n
    assert np.array_equal(occ_vec, occ_loop)
    assert acc_vec == pytest.approx(accepted / steps)


# --- equilibrate ------------------------------------------------------------------

def test_equilibrate_frozen_at_low_temperature():
    # hf/k_B T = 50: the chain cannot leave n = 0 (third-law freeze-out)
    family = ModeFamily.in_bath(50.0, BATH)
    chain = equilibrate(family, BATH, 10 ** 6, 10 ** 4, derive_rng(5, "cavity", 0))
    assert chain.mean_occupancy <= 1e-12


def test_equilibrate_matches_planck_at_unit_ratio():
    family = ModeFamily.in_bath(1.0, BATH)
    chain = equilibrate(family, BATH, 10 ** 6, 10 ** 4, derive_rng(1, "cavity", 0))
    closed = planck_expectation(1.0, BATH).energy
    assert closed == pytest.approx(1.0 / (math.e - 1.0))
    assert abs(chain.mean_energy - closed) / closed < 0.02


def test_equilibrate_histogram_mass_and_acceptance():
    family = ModeFamily.in_bath(1.0, BATH)
    chain = equilibrate(family, BATH, 200_000, 5_000, derive_rng(2, "cavity", 0))
    assert chain.occupancy_histogram.sum() == 200_000 - 5_000
    assert 0.0 < chain.acceptance_rate < 1.0
    assert chain.mean_energy_stderr > 0.0


def test_equilibrate_rejects_empty_sampling_window():
    family = ModeFamily.in_bath(1.0, BATH)
    with pytest.raises(ValueError):
        equilibrate(family, BATH, 100, 100, derive_rng(0, "cavity", 0))
    with pytest.raises(ValueError):
        equilibrate(family, BATH, 100, -1, derive_rng(0, "cavity", 0))


def test_classical_limit_of_planck_law():
    # hf/k_B T = 0.01 sits within 0.5% of equipartition k_B T
    assert planck_expectation(0.01, BATH).energy == pytest.approx(1.0, rel=5.1e-3)


def test_classical_limit_chain_ensemble():
    """Equilibrium-started ensemble mean at hf/k_B T = 0.01 recovers k_B T.

    A single chain cannot resolve this regime at desk scale: the +-1 walk
    relaxes on ~1/(1-q)^2 ~ 4e4 steps with sigma/mean ~ 1.  Independent
    chains drawn from the stationary law average it out honestly.
    """
    x = 0.01
    q = math.exp(-x)
    rng = derive_rng(7, "cavity", 123)
    chains = 30_000
    length = 300
    n0 = rng.geometric(1.0 - q, size=chains) - 1
    total = 0.0
    for c in range(chains):
        occ, _ = cavity._run_occupancies(int(n0[c]), q, length, rng)
        total += occ[-1]
    mean_energy = x * total / chains  # lobe energy x per occupancy unit
    assert abs(mean_energy - 1.0) < 0.03


# --- closed form ------------------------------------------------------------------

def test_planck_expectation_reference_values():
    assert planck_expectation(1.0, BATH).energy == pytest.approx(0.5819767068693265, abs=1e-12)
    assert planck_expectation(5.0, BATH).energy == pytest.approx(5.0 / (math.exp(5.0) - 1.0), abs=1e-15)
    assert planck_expectation(5.0, BATH).energy == pytest.approx(5.0 * 6.783654906304231e-3, rel=1e-9)


def test_planck_expectation_overflow_flag():
    value = planck_expectation(701.0, BATH)
    assert value.energy == 0.0
    assert value.underflowed
    assert not planck_expectation(1.0, BATH).underflowed


def test_planck_monotone_in_frequency_and_temperature():
    freqs = np.linspace(0.05, 30.0, 120)
    energies = [planck_expectation(f, BATH).energy for f in freqs]
    assert all(b < a for a, b in zip(energies, energies[1:]))
    temps = np.linspace(0.1, 20.0, 80)
    at_fixed_f = [planck_expectation(2.0, ThermalBath(t)).energy for t in temps]
    assert all(b > a for a, b in zip(at_fixed_f, at_fixed_f[1:]))


# --- sweep -----------------------------------------------------------------------

def test_spectrum_sweep_relative_errors():
    rows = spectrum_sweep([0.5, 1.0, 2.0, 5.0], BATH, 10 ** 6, 10 ** 4, master_seed=1)
    for row in rows:
        assert row.relative_error < 0.02


def test_spectrum_sweep_duplicate_frequency_consistency():
    rows = spectrum_sweep([1.0, 1.0], BATH, 400_000, 10_000, master_seed=3)
    a, b = rows
    sigma = math.hypot(a.mc_stderr, b.mc_stderr)
    assert abs(a.mc_mean_energy - b.mc_mean_energy) < 3.0 * sigma
    assert a.mc_mean_energy != b.mc_mean_energy  # distinct streams


def test_spectrum_sweep_rejects_bad_frequency():
    with pytest.raises(ValueError):
        spectrum_sweep([-1.0], BATH, 1000, 10, master_seed=0)


def test_spectrum_sweep_rejects_empty_sampling_window():
    # burn-in swallowing every step propagates equilibrate's usage error
    with pytest.raises(ValueError):
        spectrum_sweep([1.0], BATH, 500, 500, master_seed=0)


# --- stationary-law checks ----------------------------------------------------------

def test_detailed_balance_flow_ratios():
    family = ModeFamily.in_bath(1.0, BATH)
    chain = equilibrate(family, BATH, 10 ** 6, 10 ** 4, derive_rng(1, "cavity", 0))
    ratios = transition_flow_ratios(chain.occupancies)
    assert len(ratios) >= 3
    q = math.exp(-1.0)
    for level in ratios:
        assert abs(math.log(level.ratio) - math.log(q)) < 3.0 * level.log_sigma


def test_geometric_chi_square_goodness_of_fit():
    # thin by ~3 autocorrelation times; Pearson assumes independent draws
    family = ModeFamily.in_bath(1.0, BATH)
    chain = equilibrate(family, BATH, 10 ** 6, 10 ** 4, derive_rng(4, "cavity", 0))
    hist = np.bincount(chain.occupancies[::16])
    _, p_value, dof = geometric_chi_square(hist, math.exp(-1.0))
    assert dof >= 2
    assert p_value >= 0.01


def test_geometric_chi_square_rejects_wrong_law():
    family = ModeFamily.in_bath(1.0, BATH)
    chain = equilibrate(family, BATH, 200_000, 50_000, derive_rng(4, "cavity", 0))
    hist = np.bincount(chain.occupancies[::16])
    _, p_value, _ = geometric_chi_square(hist, math.exp(-2.0))
    assert p_value < 1e-6


# --- commutator transitivity ----------------------------------------------------------

def test_commutator_scales_agree_at_dim_16():
    check = commutator_scale_check(16, hbar=1.0)
    assert check.agreement < 1e-12
    assert check.pattern_residual < 1e-12
    assert check.k1 == pytest.approx(1j, abs=1e-12)


def test_commutator_scale_carries_hbar():
    check = commutator_scale_check(16, hbar=2.5)
    assert check.k1 == pytest.approx(2.5j, abs=1e-12)
    assert check.k2 == pytest.approx(2.5j, abs=1e-12)


def test_commutator_invariant_under_inverse_rescaling():
    base = commutator_scale_check(12, scales=(1.0, 1.0))
    scaled = commutator_scale_check(12, scales=(2.0, 1.0))
    assert scaled.k1 == pytest.approx(base.k1, abs=1e-12)
    assert scaled.agreement < 1e-12


def test_commutator_minimal_dimension():
    check = commutator_scale_check(3)
    assert check.agreement < 1e-12
    assert check.pattern_residual < 1e-12
    with pytest.raises(ValueError):
        commutator_scale_check(2)


@settings(deadline=None, max_examples=20)
@given(st.integers(3, 24), st.floats(0.1, 5.0, allow_nan=False),
       st.floats(0.0, math.pi, allow_nan=False))
def test_commutator_property_random_builds(dim, hbar, rotation):
    check = commutator_scale_check(dim, hbar=hbar, rotations=(rotation, rotation + 0.3))
    assert check.agreement < 1e-10
    assert abs(check.k1 - 1j * hbar) < 1e-10 * max(1.0, hbar)
