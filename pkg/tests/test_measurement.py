import numpy as np
import pytest
from scipy.integrate import simpson

from core.circuits import dumbbell_cz, linear3_circuit
from core.errors import (CoverageError, DimensionError, SingularMeasurementError, ValidationError,
                         ZeroProbabilityError)
from core.measurement import (MeasurementPlan, StabilizerEngine, StabilizerSpec, average_stabilizer_ev,
                              homodyne_density, linear3_bar_witness_stabilizers, linear3_plan,
                              linear3_witness_stabilizers, multimode, pauli_x, pauli_z, qubit_x2, qubit_z2,
                              single_mode, stabilizer_ev, witness_ev, witness_from_results)
from core.phase_space import LossSpec, ProductState, tensor, trace
from states import BreedingParams, GrnParams, bred_gkp, displaced, grn_sensor, vacuum


@pytest.fixture
def bell_pair(bred3):
    return ProductState([bred3, bred3])


def test_identity_stabilizer_is_exactly_one(bred3):
    plan = MeasurementPlan.p_homodyne(1, 0.4, 2)
    result = stabilizer_ev(ProductState([bred3, bred3]), dumbbell_cz(), None, plan, StabilizerSpec((0.0, 0.0)))
    assert result.value == 1.0


def test_vacuum_homodyne_density():
    plan = MeasurementPlan.p_homodyne(1, 0.0, 2)
    assert homodyne_density(vacuum(2), None, None, plan) == pytest.approx(1 / np.sqrt(np.pi))


def test_vacuum_displacement_ev(vac):
    result = stabilizer_ev(vac, None, None, MeasurementPlan.none(1), pauli_z())
    assert result.value == pytest.approx(np.exp(-np.pi / 4))
    assert result.magnitude <= 1.0


def test_product_state_matches_materialized(cat, vac):
    plan = MeasurementPlan.p_homodyne(1, 0.3, 2)
    stabs = [qubit_x2(), qubit_z2()]
    lazy = StabilizerEngine(ProductState([cat, vac]), dumbbell_cz(), None, plan).evaluate(stabs)
    full = StabilizerEngine(tensor(cat, vac), dumbbell_cz(), None, plan).evaluate(stabs)
    for a, b in zip(lazy, full):
        assert abs(a.value - b.value) < 1e-10
        assert a.outcome_density == pytest.approx(b.outcome_density, rel=1e-10)


def test_deterministic_reduction_ignores_thread_count(bell_pair):
    plan = MeasurementPlan.p_homodyne(1, 0.2, 2)
    stabs = [qubit_x2(), qubit_z2()]
    values = []
    for threads in (1, 4, 8):
        engine = StabilizerEngine(bell_pair, dumbbell_cz(), None, plan, threads=threads,
                                  reduction='deterministic', chunk_size=64)
        values.append([r.value for r in engine.evaluate(stabs)])
    assert values[0] == values[1] == values[2]


def test_fast_and_deterministic_agree(bell_pair):
    plan = MeasurementPlan.p_homodyne(1, 0.2, 2)
    fast = StabilizerEngine(bell_pair, dumbbell_cz(), None, plan, chunk_size=100).evaluate([qubit_z2()])
    exact = StabilizerEngine(bell_pair, dumbbell_cz(), None, plan, reduction='deterministic').evaluate([qubit_z2()])
    assert abs(fast[0].value - exact[0].value) < 1e-12


def test_singular_measurement():
    sharp = grn_sensor(GrnParams(sigma_x=0.05, sigma_p=0.0, base_peak_variance=1e-14))
    with pytest.raises(SingularMeasurementError):
        StabilizerEngine(ProductState([sharp, vacuum(1)]), None, None, MeasurementPlan.p_homodyne(0, 0.0, 2))


def test_zero_probability_outcome():
    engine = StabilizerEngine(vacuum(2), None, None, MeasurementPlan.p_homodyne(1, 60.0, 2))
    with pytest.raises(ZeroProbabilityError):
        engine.evaluate([pauli_z()])


def test_plan_validation():
    with pytest.raises(ValidationError):
        MeasurementPlan(((0, 0.0, 0.0), (0, 0.0, 0.0)), 3)
    with pytest.raises(ValidationError):
        MeasurementPlan(((0, 0.0, 0.0),), 1)
    with pytest.raises(DimensionError):
        MeasurementPlan(((4, 0.0, 0.0),), 2)
    with pytest.raises(DimensionError):
        MeasurementPlan.p_homodyne(1, 0.0, 2).with_outcomes([0.0, 1.0])


def test_window_not_implemented():
    plan = MeasurementPlan(((1, 0.0, 0.0),), 2, window=0.1)
    with pytest.raises(NotImplementedError):
        StabilizerEngine(vacuum(2), None, None, plan)


def test_stabilizer_length_checked():
    engine = StabilizerEngine(vacuum(2), None, None, MeasurementPlan.p_homodyne(1, 0.0, 2))
    with pytest.raises(DimensionError):
        engine.evaluate([multimode(2, {0: (1.0, 0.0)})])


def test_average_of_vacuum():
    plan = MeasurementPlan.p_homodyne(1, 0.0, 2)
    grid = np.linspace(-8, 8, 801)
    value = average_stabilizer_ev(vacuum(2), None, None, plan, pauli_z(), grid)
    assert value == pytest.approx(np.exp(-np.pi / 4), abs=1e-12)


def test_average_coverage_error():
    plan = MeasurementPlan.p_homodyne(1, 0.0, 2)
    with pytest.raises(CoverageError):
        average_stabilizer_ev(vacuum(2), None, None, plan, pauli_z(), np.linspace(-1, 1, 21))


def test_witness_of_vacuum(vac):
    w = witness_ev(vac, None, None, MeasurementPlan.none(1), [pauli_z(), pauli_x()])
    assert w == pytest.approx(2 - 2 * np.exp(-np.pi / 4))


def test_linear3_stabilizers_live_on_three_modes():
    circuit = linear3_circuit()
    stabs = linear3_witness_stabilizers(circuit) + linear3_bar_witness_stabilizers(circuit)
    assert len(stabs) == 6
    assert all(s.n_modes == 3 for s in stabs)


@pytest.mark.slow
def test_linear3_witness_at_zero_outcome():
    state = bred_gkp(BreedingParams(rounds=3, cat_squeezing=1.0))
    circuit = linear3_circuit()
    plan = linear3_plan(0.0)
    engine = StabilizerEngine(ProductState([state] * 4), circuit, None, plan, threads=4)
    assert engine.n_terms == 390625
    results = engine.evaluate(linear3_witness_stabilizers(circuit, plan) + linear3_bar_witness_stabilizers(circuit, plan))
    for r in results:
        assert r.magnitude <= 1 + 1e-9
        # the conditional state is parity symmetric at η = 0
        assert abs(r.value.imag) < 1e-8
    w = witness_from_results(results[:3])
    assert w == pytest.approx(2 - sum(r.value.real for r in results[:3]))


def test_quarter_turn_measures_minus_x():
    state = displaced(vacuum(2), [0.0, 0.0, 1.0, 0.0])
    densities = {eta: homodyne_density(state, None, None, MeasurementPlan(((1, np.pi / 2, eta),), 2))
                 for eta in (-1.0, 1.0)}
    assert densities[-1.0] == pytest.approx(1 / np.sqrt(np.pi), rel=1e-10)
    assert densities[1.0] == pytest.approx(np.exp(-4) / np.sqrt(np.pi), rel=1e-10)


def test_conjugation_identity(bell_pair):
    np.random.seed(42)
    engine = StabilizerEngine(bell_pair, dumbbell_cz(), None, MeasurementPlan.p_homodyne(1, 0.3, 2))
    stabs = [qubit_x2(), qubit_z2(), single_mode(tuple(np.random.randn(2)), 'r')]
    results = engine.evaluate(stabs + [s.inverse() for s in stabs])
    for forward, backward in zip(results[:3], results[3:]):
        assert abs(backward.value - np.conj(forward.value)) < 1e-10


def test_unit_transmission_equals_no_loss(bell_pair):
    plan = MeasurementPlan.p_homodyne(1, 0.5, 2)
    stabs = [qubit_x2(), qubit_z2()]
    lossless = StabilizerEngine(bell_pair, dumbbell_cz(), None, plan).evaluate(stabs)
    unit = StabilizerEngine(bell_pair, dumbbell_cz(), LossSpec.amplitude_transmission(1.0, 2), plan).evaluate(stabs)
    for a, b in zip(lossless, unit):
        assert abs(a.value - b.value) < 1e-12
        assert a.outcome_density == pytest.approx(b.outcome_density, rel=1e-12)


@pytest.mark.parametrize("loss", [None, LossSpec.amplitude_transmission(0.8, 2, thermal_occupancy=0.1)])
def test_homodyne_density_integrates_to_trace(cat, vac, loss):
    source = ProductState([cat, vac])
    engine = StabilizerEngine(source, dumbbell_cz(), loss, MeasurementPlan.p_homodyne(1, 0.0, 2))
    grid = np.linspace(-6 * np.sqrt(np.pi), 6 * np.sqrt(np.pi), 2001)
    density = np.array([engine.density([eta]) for eta in grid])
    assert simpson(density, x=grid) == pytest.approx(np.real(trace(source)), abs=1e-6)


@pytest.mark.parametrize("eta", [0.0, 0.37])
def test_hermitian_pairs_match_full_sum(bell_pair, eta):
    plan = MeasurementPlan.p_homodyne(1, eta, 2)
    stabs = [qubit_x2(), qubit_z2(), pauli_x(), StabilizerSpec((0.0, 0.0))]
    full = StabilizerEngine(bell_pair, dumbbell_cz(), None, plan).evaluate(stabs)
    paired = StabilizerEngine(bell_pair, dumbbell_cz(), None, plan, hermitian_pairs=True,
                              chunk_size=100, threads=3).evaluate(stabs)
    for a, b in zip(full, paired):
        assert abs(a.value - b.value) < 1e-12
        assert a.outcome_density == pytest.approx(b.outcome_density, rel=1e-12)


def test_hermitian_pairs_single_mode(bred3):
    stabs = [qubit_x2(), qubit_z2(), single_mode((0.4, -1.3), 'r')]
    full = StabilizerEngine(bred3, None, None, MeasurementPlan.none(1)).evaluate(stabs)
    paired = StabilizerEngine(bred3, None, None, MeasurementPlan.none(1), hermitian_pairs=True).evaluate(stabs)
    for a, b in zip(full, paired):
        assert abs(a.value - b.value) < 1e-12


def test_hermitian_pairs_need_a_layout(bred3):
    flat = tensor(bred3, bred3)
    with pytest.raises(ValidationError):
        StabilizerEngine(flat, None, None, MeasurementPlan.none(2), hermitian_pairs=True)
    real = StabilizerEngine(vacuum(2), None, None, MeasurementPlan.p_homodyne(1, 0.2, 2), hermitian_pairs=True)
    assert real.evaluate([pauli_z()])[0].value == pytest.approx(np.exp(-np.pi / 4))
