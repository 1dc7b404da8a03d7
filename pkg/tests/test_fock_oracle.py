import numpy as np
import pytest

from core.circuits import dumbbell_cz
from core.errors import OracleLimitError
from core.fock_oracle import (FockState, displacement_matrix, fock_beamsplitter, fock_bred_gkp,
                              fock_displacement_ev, fock_dumbbell, fock_homodyne_project, fock_loss, fock_squeezed_cat,
                              fock_wigner, mean_photon, squeezed_vacuum_amplitudes)
from core.measurement import MeasurementPlan, StabilizerEngine, qubit_x2, qubit_z2
from core.phase_space import ProductState, evaluate_wigner
from states import BreedingParams, bred_gkp, squeezed_cat

ALPHA = 4.0


def fock_number(n: int, cutoff: int = 6) -> FockState:
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return FockState(cutoff, 1, amplitudes=amps)


def test_squeezed_vacuum_norm_and_photons():
    xi = 0.5
    state = FockState(60, 1, amplitudes=squeezed_vacuum_amplitudes(xi, 60))
    assert state.norm == pytest.approx(1.0, abs=1e-10)
    assert mean_photon(state) == pytest.approx(np.sinh(xi) ** 2, abs=1e-8)


def test_cat_leakage_shrinks_with_cutoff():
    small = fock_squeezed_cat(ALPHA, 0.5, 10)
    large = fock_squeezed_cat(ALPHA, 0.5, 80)
    assert large.leakage < 1e-10
    assert small.leakage > large.leakage


def test_vacuum_homodyne_density():
    _, density = fock_homodyne_project(fock_number(0), 0, 0.0, 0.0)
    assert density == pytest.approx(1 / np.sqrt(np.pi))


def test_beamsplitter_moves_photon():
    amps = np.zeros((3, 3), dtype=complex)
    amps[1, 0] = 1.0
    out = fock_beamsplitter(FockState(3, 2, amplitudes=amps), 0, 1, 0.3)
    assert out.amplitudes[1, 0] == pytest.approx(np.cos(0.3))
    assert out.amplitudes[0, 1] == pytest.approx(np.sin(0.3))


def test_number_state_wigner_at_origin():
    assert fock_wigner(fock_number(0), 0.0, 0.0) == pytest.approx(1 / np.pi)
    assert fock_wigner(fock_number(1), 0.0, 0.0) == pytest.approx(-1 / np.pi)


def test_cat_wigner_matches_phase_space():
    fock = fock_squeezed_cat(ALPHA, 0.5, 80)
    state = squeezed_cat(ALPHA, 0.5)
    points = np.array([[0.0, 0.0], [0.4, -0.3], [-0.8, 0.6]])
    w_fock = fock_wigner(fock, points[:, 0], points[:, 1])
    w_gauss = np.real(evaluate_wigner(state, points))
    assert np.allclose(w_fock, w_gauss, atol=1e-6)


@pytest.mark.slow
def test_bred_wigner_grid_matches_phase_space():
    fock = fock_bred_gkp(1, ALPHA, 0.5, 80)
    state = bred_gkp(BreedingParams(rounds=1, cat_amplitude=ALPHA, cat_squeezing=0.5))
    x, p = np.meshgrid(np.linspace(-2.5, 2.5, 11), np.linspace(-2.0, 2.0, 9))
    w_fock = fock_wigner(fock, x.ravel(), p.ravel())
    w_gauss = np.real(evaluate_wigner(state, np.stack([x.ravel(), p.ravel()], axis=1)))
    assert np.allclose(w_fock, w_gauss, atol=1e-6)


def test_loss_of_single_photon():
    tau = 0.8
    lossy = fock_loss(fock_number(1), tau)
    assert not lossy.is_pure
    assert mean_photon(lossy) == pytest.approx(tau ** 2)
    assert lossy.norm == pytest.approx(1.0)


def test_oracle_limits():
    with pytest.raises(OracleLimitError):
        fock_squeezed_cat(ALPHA, 0.5, 101)
    with pytest.raises(OracleLimitError):
        fock_bred_gkp(3, ALPHA, 0.5, 40)
    with pytest.raises(OracleLimitError):
        FockState(2, 3, amplitudes=np.zeros((2, 2, 2)))


@pytest.mark.slow
@pytest.mark.parametrize("rounds", [0, 1, 2])
@pytest.mark.parametrize("xi", [0.2, 0.5])
def test_engine_matches_fock_breeding(rounds, xi):
    state = bred_gkp(BreedingParams(rounds=rounds, cat_amplitude=ALPHA, cat_squeezing=xi))
    fock = fock_bred_gkp(rounds, ALPHA, xi, 80)
    engine = StabilizerEngine(state, None, None, MeasurementPlan.none(1))
    for stab, result in zip((qubit_x2(), qubit_z2()), engine.evaluate([qubit_x2(), qubit_z2()])):
        assert abs(fock_displacement_ev(fock, stab.vector) - result.value) < 1e-5


@pytest.mark.slow
def test_truncation_error_grows_at_low_cutoff():
    state = bred_gkp(BreedingParams(rounds=1, cat_amplitude=ALPHA, cat_squeezing=0.5))
    (exact,) = StabilizerEngine(state, None, None, MeasurementPlan.none(1)).evaluate([qubit_z2()])
    errors = [abs(fock_displacement_ev(fock_bred_gkp(1, ALPHA, 0.5, c), qubit_z2().vector) - exact.value)
              for c in (10, 80)]
    assert errors[0] > errors[1]


def test_bred_truncation_loss_survives_normalization():
    cat = fock_squeezed_cat(ALPHA, 0.5, 20)
    small = fock_bred_gkp(1, ALPHA, 0.5, 20)
    large = fock_bred_gkp(1, ALPHA, 0.5, 60)
    assert small.norm == pytest.approx(1.0)
    assert small.total_leakage > cat.leakage > 0
    assert small.total_leakage > large.total_leakage
    assert small.normalized().total_leakage == pytest.approx(small.total_leakage)


def test_quadrature_at_quarter_turn_reads_minus_x():
    # coherent state with x = 1, p = 0
    cutoff = 30
    ket = displacement_matrix(1 / np.sqrt(2), cutoff)[:, 0]
    state = FockState(cutoff, 1, amplitudes=ket)
    _, at_minus = fock_homodyne_project(state, 0, np.pi / 2, -1.0)
    _, at_plus = fock_homodyne_project(state, 0, np.pi / 2, 1.0)
    assert at_minus == pytest.approx(1 / np.sqrt(np.pi), rel=1e-8)
    assert at_plus == pytest.approx(np.exp(-4) / np.sqrt(np.pi), rel=1e-6)


def _bell_errors(rounds: int, cutoff: int, xi: float = 0.5):
    state = bred_gkp(BreedingParams(rounds=rounds, cat_amplitude=ALPHA, cat_squeezing=xi))
    single = fock_bred_gkp(rounds, ALPHA, xi, cutoff)
    joint = fock_dumbbell(FockState(cutoff, 2, amplitudes=np.outer(single.amplitudes, single.amplitudes)))
    engine = StabilizerEngine(ProductState([state, state]), dumbbell_cz(), None, MeasurementPlan.p_homodyne(1, 0.0, 2))
    errors = []
    for eta in (0.0, np.sqrt(np.pi) / 4, np.sqrt(np.pi) / 2):
        remaining, _ = fock_homodyne_project(joint, 1, 0.0, eta)
        results = engine.evaluate([qubit_x2(), qubit_z2()], outcomes=[eta])
        for stab, result in zip((qubit_x2(), qubit_z2()), results):
            errors.append(abs(fock_displacement_ev(remaining, stab.vector) - result.value))
    return max(errors)


@pytest.mark.slow
@pytest.mark.parametrize("rounds", [0, 1, 2])
def test_bell_homodyne_matches_fock(rounds):
    assert _bell_errors(rounds, 80) < 1e-5


@pytest.mark.slow
def test_bell_homodyne_error_shrinks_with_cutoff():
    assert _bell_errors(2, 20) > _bell_errors(2, 80)
