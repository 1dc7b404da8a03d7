import numpy as np
import pytest

from core.errors import GrnTruncationError, ValidationError
from core.measurement import MeasurementPlan, StabilizerEngine, StabilizerSpec, sensor_p, sensor_x
from core.phase_space import ProductState, trace
from states import (BUILDERS, BredGkp, BreedingParams, GrnParams, bred_gkp, breeding_betas,
                    displaced, grn_sensor, lattice_matched_amplitude, sensor_offset, vacuum)


def single_mode_evs(state, stabs):
    engine = StabilizerEngine(state, None, None, MeasurementPlan.none(1))
    return [r.value for r in engine.evaluate(stabs)]


@pytest.mark.parametrize("rounds", [0, 1, 3, 5])
def test_term_count_and_shared_covariance(rounds):
    state = bred_gkp(BreedingParams(rounds=rounds, cat_squeezing=0.3))
    assert state.n_terms == (rounds + 2) ** 2
    assert state.covs.shape[0] == 1
    assert np.allclose(state.covs[0], 0.5 * np.diag([np.exp(-0.6), np.exp(0.6)]))


def test_conjugate_partners_are_adjacent(bred3):
    n = 5
    means, logs = bred3.means, bred3.log_scales
    assert np.allclose(means[:n].imag, 0.0)
    for i in range(n, bred3.n_terms, 2):
        assert np.allclose(means[i], np.conj(means[i + 1]))
        assert logs[i] == pytest.approx(logs[i + 1])


def test_lattice_matched_amplitude_recorded():
    state = bred_gkp(BreedingParams(rounds=2))
    assert state.metadata['cat_amplitude'] == pytest.approx(np.sqrt(4 * np.pi))
    assert state.metadata['lattice_matched']
    assert state.metadata['displaced_sensor']
    assert lattice_matched_amplitude(3) == pytest.approx(np.sqrt(8 * np.pi))


def test_betas_symmetric():
    beta = breeding_betas(3, 4.0)
    assert np.allclose(beta, -beta[::-1])
    assert beta[1] - beta[0] == pytest.approx(4.0 / np.sqrt(8))


def test_sensor_offset_parity():
    assert np.allclose(sensor_offset(3), 0.0)
    assert np.allclose(sensor_offset(2), [np.sqrt(np.pi / 2), 0.0])


@pytest.mark.parametrize("rounds", [2, 3])
def test_position_peaks_follow_round_parity(rounds):
    """x-marginal of the lattice-matched state peaks at the offset and is empty half a period away."""
    state = bred_gkp(BreedingParams(rounds=rounds, cat_squeezing=1.0))
    offset = sensor_offset(rounds)[0]
    step = np.sqrt(np.pi / 2)

    def x_density(x):
        # θ = π/2 reads -x
        plan = MeasurementPlan(((0, np.pi / 2, -x),), 2)
        return StabilizerEngine(ProductState([state, vacuum(1)]), None, None, plan).density()

    on_peak = x_density(offset)
    assert on_peak > 100 * x_density(offset - step)
    assert on_peak == pytest.approx(x_density(-offset), rel=1e-9)


@pytest.mark.parametrize("rbar", [(0.0, 0.0), (1.0, 0.0), (0.3, -2.2), (2 * np.sqrt(np.pi), np.sqrt(np.pi))])
def test_vacuum_displacement_ev(rbar):
    (value,) = single_mode_evs(vacuum(1), [StabilizerSpec(rbar)])
    assert value == pytest.approx(np.exp(-(rbar[0] ** 2 + rbar[1] ** 2) / 4), abs=1e-14)


def test_invalid_breeding_params():
    with pytest.raises(ValidationError):
        BreedingParams(rounds=-1)
    with pytest.raises(ValidationError):
        BreedingParams(rounds=9)
    with pytest.raises(ValidationError):
        BreedingParams(rounds=1, cat_amplitude=-2.0)


@pytest.mark.parametrize("rounds", [1, 2, 3, 4])
def test_sensor_x_ev_approaches_binomial_ratio(rounds):
    """Σ C(n,k)C(n,k+1) / Σ C(n,k)² = (𝓜+1)/(𝓜+2) for narrow peaks."""
    state = bred_gkp(BreedingParams(rounds=rounds, cat_squeezing=1.5))
    (sx,) = single_mode_evs(state, [sensor_x()])
    assert abs(sx) == pytest.approx((rounds + 1) / (rounds + 2), abs=1e-8)


def test_sensor_p_ev_is_envelope_width():
    xi = 1.5
    state = bred_gkp(BreedingParams(rounds=3, cat_squeezing=xi))
    (sp,) = single_mode_evs(state, [sensor_p()])
    assert sp.real == pytest.approx(np.exp(-np.pi * np.exp(-2 * xi) / 2), abs=1e-8)


def test_sensor_x_grows_with_rounds():
    values = [abs(single_mode_evs(bred_gkp(BreedingParams(rounds=m, cat_squeezing=1.0)), [sensor_x()])[0])
              for m in (1, 2, 3, 4)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_sensor_p_grows_with_squeezing():
    values = [abs(single_mode_evs(bred_gkp(BreedingParams(rounds=3, cat_squeezing=xi)), [sensor_p()])[0])
              for xi in (0.2, 0.5, 0.8, 1.1)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_grn_sensor_single_mode_evs():
    sigma = 0.05
    state = grn_sensor(GrnParams(sigma_x=sigma, sigma_p=sigma))
    sx, sp = single_mode_evs(state, [sensor_x(), sensor_p()])
    assert abs(sp - np.exp(-np.pi * sigma)) < 1e-8
    assert abs(sx - np.exp(-np.pi * sigma)) < 1e-8


def test_grn_sensor_noiseless_limit():
    state = grn_sensor(GrnParams(sigma_x=0.0, sigma_p=0.0, base_peak_variance=1e-6))
    for value in single_mode_evs(state, [sensor_x(), sensor_p()]):
        assert abs(value - 1.0) < 1e-4


def test_grn_sensor_truncation_error():
    with pytest.raises(GrnTruncationError):
        grn_sensor(GrnParams(sigma_x=0.05, sigma_p=0.05, lattice_halfwidth=2))


def test_builders_describe():
    builder = BUILDERS['bred_gkp']({'rounds': 2, 'cat_squeezing': 0.4})
    assert isinstance(builder, BredGkp)
    info = builder.describe()
    assert info['builder'] == 'bred_gkp'
    assert info['n_terms'] == 16
    assert info['cat_squeezing'] == 0.4


def test_displaced_shifts_means(bred3):
    shifted = displaced(bred3, [1.0, -0.5])
    assert np.allclose(shifted.means - bred3.means, [1.0, -0.5])
    assert shifted.metadata['displacement'] == [1.0, -0.5]
    assert trace(shifted) == pytest.approx(trace(bred3))
