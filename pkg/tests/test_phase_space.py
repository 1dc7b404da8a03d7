import numpy as np
import pytest

from core.circuits import beamsplitter, compose, rotation, squeezer
from core.errors import (DimensionError, NotPositiveDefiniteError, SymplecticError,
                         ValidationError)
from core.phase_space import (GaussianSumState, GaussianTerm, LossSpec, PhaseSpaceConventions,
                              ProductState, apply_loss, apply_symplectic, evaluate_wigner,
                              mean_photon, normalize, omega, purity, tensor, trace)
from states import BreedingParams, bred_gkp, squeezed_cat, vacuum


def test_omega():
    """Ω антисиметрична, Ω² = -𝟙."""
    om = omega(3)
    assert np.allclose(om, -om.T)
    assert np.allclose(om @ om, -np.eye(6))


def test_vacuum_peak_and_trace(vac):
    assert evaluate_wigner(vac, np.zeros(2)) == pytest.approx(1 / np.pi)
    assert trace(vac) == pytest.approx(1.0)
    assert np.allclose(vac.covs[0], PhaseSpaceConventions.vacuum_cov(1))


def test_normalized_trace(cat):
    assert cat.normalized
    assert abs(trace(cat) - 1.0) < 1e-9


def test_wigner_is_real(cat, random_points):
    w = evaluate_wigner(cat, random_points)
    assert np.max(np.abs(w.imag)) <= 1e-10 * np.max(np.abs(w))


def test_wigner_dimension_mismatch(vac):
    with pytest.raises(DimensionError):
        evaluate_wigner(vac, np.zeros(4))


def test_tensor_counts_and_trace(cat, vac):
    joint = tensor(cat, vac)
    assert joint.n_terms == cat.n_terms * vac.n_terms
    assert joint.n_modes == 2
    assert trace(joint) == pytest.approx(trace(cat) * trace(vac))


def test_product_state_matches_tensor(cat):
    lazy = ProductState([cat, cat])
    full = tensor(cat, cat)
    assert lazy.n_terms == full.n_terms
    means = np.concatenate([ch.means for ch in lazy.chunks(5)])
    logw = np.concatenate([ch.log_weights() for ch in lazy.chunks(5)])
    assert np.allclose(means, full.means)
    assert np.allclose(logw, full.log_weights())


def test_symplectic_preserves_trace(cat, vac):
    joint = tensor(cat, vac)
    c, s = np.cos(0.3), np.sin(0.3)
    bs = np.kron(np.array([[c, -s], [s, c]]), np.eye(2))
    out = apply_symplectic(joint, bs)
    assert trace(out) == pytest.approx(trace(joint))


def test_non_symplectic_rejected(vac):
    with pytest.raises(SymplecticError):
        apply_symplectic(vac, np.diag([2.0, 2.0]))


def test_pure_loss_keeps_vacuum(vac):
    out = apply_loss(vac, LossSpec.amplitude_transmission(0.7))
    assert np.allclose(out.covs[0], 0.5 * np.eye(2))


def test_thermal_loss_adds_noise(vac):
    tau, nbar = 0.8, 0.3
    out = apply_loss(vac, LossSpec.amplitude_transmission(tau, thermal_occupancy=nbar))
    expected = 0.5 * tau ** 2 + (1 - tau ** 2) * (0.5 + nbar)
    assert np.allclose(out.covs[0], expected * np.eye(2))


def test_loss_validation():
    with pytest.raises(ValidationError):
        LossSpec.amplitude_transmission(1.2)
    with pytest.raises(ValidationError):
        LossSpec.intensity_transmission(-0.1)
    assert LossSpec.intensity_transmission(0.81).transmittance == pytest.approx((0.9,))


def test_not_positive_definite():
    with pytest.raises(NotPositiveDefiniteError):
        GaussianTerm(1.0, np.zeros(2), np.diag([1.0, -1.0]))


def test_purity_of_pure_and_lossy_states(cat):
    assert purity(cat) == pytest.approx(1.0, abs=1e-8)
    lossy = apply_loss(cat, LossSpec.amplitude_transmission(0.9))
    assert 0 < purity(lossy) < 1.0


def test_mean_photon_squeezed_vacuum():
    xi = 0.4
    state = squeezed_cat(0.0, xi)
    assert mean_photon(state) == pytest.approx(np.sinh(xi) ** 2, abs=1e-10)


def test_normalize_restores_unit_trace(cat):
    scaled = cat.replace(log_scales=cat.log_scales + 2.0, normalized=False)
    assert abs(trace(normalize(scaled)) - 1.0) < 1e-12


def test_state_is_immutable(cat):
    with pytest.raises(ValueError):
        cat.coeffs[0] = 0.0


def test_from_terms_shares_covariances():
    cov = 0.5 * np.eye(2)
    terms = [GaussianTerm(0.5, np.array([1.0, 0.0]), cov), GaussianTerm(0.5, np.array([-1.0, 0.0]), cov)]
    state = GaussianSumState.from_terms(1, terms)
    assert state.covs.shape[0] == 1
    assert trace(state) == pytest.approx(1.0)


def test_bred_trace_with_many_terms():
    state = bred_gkp(BreedingParams(rounds=6, cat_squeezing=0.8))
    assert state.n_terms == 64
    assert abs(trace(state) - 1.0) < 1e-9
    assert trace(vacuum(2)) == pytest.approx(1.0)


def test_unit_transmission_changes_nothing(cat):
    out = apply_loss(cat, LossSpec.amplitude_transmission(1.0))
    assert np.allclose(out.means, cat.means)
    assert np.allclose(out.covs, cat.covs)
    assert np.array_equal(out.coeffs, cat.coeffs)


@pytest.mark.parametrize("tau, nbar", [(0.9, 0.0), (0.5, 0.3)])
def test_loss_preserves_trace(bred3, tau, nbar):
    out = apply_loss(bred3, LossSpec.amplitude_transmission(tau, thermal_occupancy=nbar))
    assert abs(trace(out) - trace(bred3)) < 1e-12


def test_symplectic_maps_compose(cat, vac):
    joint = tensor(cat, vac)
    first, second = beamsplitter(0, 1, 0.3, 2), squeezer(1, 0.4, 2).then(rotation(0, 1.1, 2))
    stepwise = apply_symplectic(apply_symplectic(joint, first), second)
    at_once = apply_symplectic(joint, compose(first, second))
    assert np.allclose(stepwise.means, at_once.means, atol=1e-12)
    assert np.allclose(stepwise.covs, at_once.covs, atol=1e-12)


def test_conjugate_partners(bred3):
    partners = bred3.conjugate_partners()
    assert np.array_equal(partners[partners], np.arange(bred3.n_terms))
    assert np.allclose(bred3.means[partners], np.conj(bred3.means))
    assert np.allclose(bred3.log_scales[partners], bred3.log_scales)

    product = ProductState([bred3, bred3])
    flat = product.materialize()
    joint = product.conjugate_partners()
    assert np.allclose(flat.means[joint], np.conj(flat.means))
    assert np.array_equal(product.conjugate_partners(100, 200), joint[100:200])
