import numpy as np
import pytest

from core.circuits import (DUMBBELL_MATRIX, SymplecticCircuit, beamsplitter, compensate_displacement,
                           compose, dumbbell_cz, dumbbell_decomposition, embed, from_json, identity,
                           linear3_circuit, rotation, sequence, squeezer)
from core.errors import DimensionError, SymplecticError
from core.measurement import MeasurementPlan, StabilizerEngine, StabilizerSpec
from core.phase_space import ProductState, omega, symplectic_residual
from states import BreedingParams, bred_gkp


def test_elements_are_symplectic_with_unit_determinant():
    for circuit in (beamsplitter(0, 2, 0.4, 3), rotation(1, 1.1, 3), squeezer(2, -0.7, 3), linear3_circuit()):
        assert symplectic_residual(circuit.matrix) < 1e-10
        assert np.linalg.det(circuit.matrix) == pytest.approx(1.0)


def test_rotation_quarter_turn():
    assert np.allclose(rotation(0, np.pi / 2).matrix @ [1.0, 0.0], [0.0, 1.0])


def test_dumbbell_decomposition_equals_matrix():
    assert np.allclose(dumbbell_decomposition().matrix, DUMBBELL_MATRIX, atol=1e-12)
    assert np.allclose(dumbbell_cz().matrix, DUMBBELL_MATRIX)


def test_compose_order():
    a, b = rotation(0, 0.3, 2), beamsplitter(0, 1, 0.7)
    assert np.allclose(compose(a, b).matrix, b.matrix @ a.matrix)
    assert np.allclose(sequence([a, b]).matrix, a.then(b).matrix)


def test_inverse():
    c = linear3_circuit()
    assert np.allclose(c.matrix @ c.inverse().matrix, np.eye(8), atol=1e-12)


def test_non_symplectic_rejected():
    with pytest.raises(SymplecticError):
        SymplecticCircuit(1, np.diag([2.0, 1.0]))
    with pytest.raises(DimensionError):
        SymplecticCircuit(2, np.eye(2))


def test_embed_places_block():
    big = embed(dumbbell_cz(), 4, [2, 3])
    assert np.allclose(big.matrix[4:, 4:], DUMBBELL_MATRIX)
    assert np.allclose(big.matrix[:4, :4], np.eye(4))


def test_linear3_zero_parameters_is_identity():
    c = linear3_circuit(inline_squeeze=0.0, phase=0.0, bs_angle=0.0, fusion_angle=0.0, output_phase=0.0)
    assert np.allclose(c.matrix, identity(4).matrix)


def test_json_round_trip_is_exact():
    c = linear3_circuit()
    again = from_json(c.to_json())
    assert np.array_equal(again.matrix, c.matrix)
    assert again.digest() == c.digest()
    nested = embed(dumbbell_decomposition(), 3, [0, 2])
    assert np.array_equal(from_json(nested.to_json()).matrix, nested.matrix)


def test_compensate_displacement():
    c = dumbbell_cz()
    r = np.array([0.3, -0.1, 1.2, 0.5])
    assert np.allclose(compensate_displacement(c, r), DUMBBELL_MATRIX @ r)
    with pytest.raises(DimensionError):
        compensate_displacement(c, r[:2])


def test_compensate_even_round_offsets():
    a = np.sqrt(np.pi / 2)
    shifted = compensate_displacement(dumbbell_cz(), np.array([a, 0.0, a, 0.0]))
    assert np.allclose(shifted, np.sqrt(np.pi) / 2 * np.ones(4))


def test_bell_factorization_through_transposed_displacements():
    """⟨D(r̄)⟩ after A on a product input equals the product of single-mode EVs at AᵀJ."""
    np.random.seed(42)
    a = bred_gkp(BreedingParams(rounds=1, cat_squeezing=0.6))
    b = bred_gkp(BreedingParams(rounds=2, cat_amplitude=3.0, cat_squeezing=0.4))
    circuit = dumbbell_cz()
    joint = StabilizerEngine(ProductState([a, b]), circuit, None, MeasurementPlan.none(2))
    single_a = StabilizerEngine(a, None, None, MeasurementPlan.none(1))
    single_b = StabilizerEngine(b, None, None, MeasurementPlan.none(1))
    om = omega(1)
    for _ in range(20):
        rbar = np.random.randn(4) * 1.5
        stab = StabilizerSpec(tuple(rbar))
        j_in = circuit.matrix.T @ stab.J
        # J = -Ω r̄ inverts to r̄ = Ω J
        ra, rb = om @ j_in[:2], om @ j_in[2:]
        (va,) = single_a.evaluate([StabilizerSpec(tuple(ra))])
        (vb,) = single_b.evaluate([StabilizerSpec(tuple(rb))])
        (vj,) = joint.evaluate([stab])
        assert abs(vj.value - va.value * vb.value) < 1e-10
