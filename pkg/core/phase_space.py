"""
Конвенції фазового простору та стан у вигляді суми комплексних гаусіан.

Конвенції, спільні для всього пакета:

* порядок квадратур r = (x1, p1, ..., xN, pN), коваріація вакууму ½𝟙;
* Ω = ⊕ [[0, 1], [-1, 0]];
* доданок має вигляд c·G(r), де G(r) = exp(-½ (r-μ)ᵀγ⁻¹(r-μ)) / sqrt(det 2πγ),
  c та μ комплексні, γ дійсна;
* D(r̄) = exp(-i r̂ᵀΩr̄) = exp(i Jᵀr̂), де J = -Ω r̄.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import block_diag, cho_factor

from core.errors import (DimensionError, NotPositiveDefiniteError,
                         SymplecticError, ValidationError)
from core.reduction import LogSum, log_complex, logsumexp_complex, tree_reduce

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-12
SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
DEFAULT_CHUNK = 65536


class PhaseSpaceConventions:
    """Зафіксовані конвенції. ``VERSION`` записується в кожен маніфест результатів."""

    VERSION = '1.0'
    VACUUM_VARIANCE = 0.5
    ORDERING = 'x1,p1,...,xN,pN'

    @staticmethod
    def omega(n_modes: int) -> np.ndarray:
        return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))

    @classmethod
    def vacuum_cov(cls, n_modes: int) -> np.ndarray:
        return cls.VACUUM_VARIANCE * np.eye(2 * n_modes)

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        return {
            'version': cls.VERSION,
            'vacuum_variance': cls.VACUUM_VARIANCE,
            'ordering': cls.ORDERING,
            'omega_block': [[0, 1], [-1, 0]],
            'displacement': 'D(rbar) = exp(-i r^T Omega rbar), J = -Omega rbar',
        }


def omega(n_modes: int) -> np.ndarray:
    return PhaseSpaceConventions.omega(n_modes)


def symplectic_residual(matrix: np.ndarray) -> float:
    """max |AᵀΩA - Ω|."""
    matrix = np.asarray(matrix, dtype=float)
    dim = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape != (dim, dim) or dim % 2:
        raise DimensionError(f"symplectic matrix must be 2N x 2N, got {matrix.shape}")
    om = omega(dim // 2)
    return float(np.max(np.abs(matrix.T @ om @ matrix - om)))


def check_symplectic(matrix: np.ndarray, tol: float = SYMPLECTIC_TOL) -> None:
    residual = symplectic_residual(matrix)
    if residual > tol:
        raise SymplecticError(f"matrix is not symplectic: |A^T Ω A - Ω| = {residual:.3e}")


def cholesky_checked(matrix: np.ndarray, tol: float = PIVOT_TOL,
                     error: type = NotPositiveDefiniteError) -> Tuple[np.ndarray, bool]:
    """
    Розклад Холецького з жорсткою перевіркою ведучих елементів.

    Args:
        matrix: Симетрична матриця
        tol: Найменший допустимий квадрат ведучого елемента
        error: Клас винятку, що піднімається при невдачі

    Returns:
        (factor, lower) у форматі scipy.linalg.cho_factor
    """
    try:
        factor, lower = cho_factor(matrix, lower=True, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise error(f"matrix is not positive definite: {e}") from e
    pivots = np.diag(factor) ** 2
    if np.min(pivots) < tol:
        raise error(f"Cholesky pivot {np.min(pivots):.3e} below tolerance {tol:.0e}")
    return factor, lower


def _check_cov(cov: np.ndarray, dim: int) -> None:
    if cov.shape != (dim, dim):
        raise DimensionError(f"covariance must be {dim}x{dim}, got {cov.shape}")
    if np.iscomplexobj(cov):
        raise ValidationError("covariance must be real")
    scale = max(float(np.max(np.abs(cov))), 1e-300)
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
        raise ValidationError("covariance is not symmetric")
    cholesky_checked(cov)


@dataclass(frozen=True)
class GaussianTerm:
    """Одна нормована гаусіана з комплексною вагою coeff·exp(log_scale)."""

    coeff: complex
    mean: np.ndarray
    cov: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=complex)
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2:
            raise DimensionError(f"mean must have even length, got shape {mean.shape}")
        _check_cov(cov, mean.size)
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'cov', cov)
        object.__setattr__(self, 'coeff', complex(self.coeff))

    @property
    def weight(self) -> complex:
        return self.coeff * np.exp(self.log_scale)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class GaussianSumState:
    """
    Багатомодова функція Вігнера W(r) = Σ_m c_m G_m(r).

    Доданки зберігаються по стовпцях: ``coeffs``, ``log_scales``, ``means`` та
    індекс у невелику таблицю різних коваріацій (розмноження, симплектичні
    перетворення та втрати дають лише кілька різних). Екземпляри незмінні,
    кожна операція повертає новий стан.
    """

    def __init__(self, n_modes: int, coeffs: np.ndarray, means: np.ndarray,
                 covs: np.ndarray, cov_index: Optional[np.ndarray] = None,
                 log_scales: Optional[np.ndarray] = None, normalized: bool = False,
                 metadata: Optional[Dict[str, Any]] = None, validate: bool = True):
        if n_modes < 1:
            raise ValidationError(f"n_modes must be positive, got {n_modes}")
        dim = 2 * n_modes
        coeffs = np.array(coeffs, dtype=complex).ravel()
        means = np.array(means, dtype=complex).reshape(-1, dim) if np.size(means) else np.zeros((0, dim), complex)
        covs = np.array(covs, dtype=float)
        if covs.ndim == 2:
            covs = covs[None]
        if cov_index is None:
            if covs.shape[0] not in (1, coeffs.size):
                raise DimensionError("cov_index is required when covariances are shared")
            cov_index = np.zeros(coeffs.size, int) if covs.shape[0] == 1 else np.arange(coeffs.size)
        cov_index = np.array(cov_index, dtype=np.int64).ravel()
        log_scales = np.zeros(coeffs.size) if log_scales is None else np.array(log_scales, dtype=float).ravel()

        if not (means.shape[0] == coeffs.size == cov_index.size == log_scales.size):
            raise DimensionError("coeffs, means, cov_index and log_scales must have equal length")
        if covs.shape[1:] != (dim, dim):
            raise DimensionError(f"covariances must be {dim}x{dim}, got {covs.shape[1:]}")
        if validate:
            for cov in covs:
                _check_cov(cov, dim)
            if coeffs.size and (cov_index.min() < 0 or cov_index.max() >= covs.shape[0]):
                raise DimensionError("cov_index out of range")

        self.n_modes = n_modes
        self.coeffs = _readonly(coeffs)
        self.means = _readonly(means)
        self.covs = _readonly(covs)
        self.cov_index = _readonly(cov_index)
        self.log_scales = _readonly(log_scales)
        self.normalized = normalized
        self.metadata = dict(metadata or {})

    @classmethod
    def from_terms(cls, n_modes: int, terms: Sequence[GaussianTerm],
                   normalized: bool = False, metadata: Optional[Dict[str, Any]] = None) -> 'GaussianSumState':
        dim = 2 * n_modes
        covs: List[np.ndarray] = []
        cov_index = []
        for term in terms:
            if term.mean.size != dim:
                raise DimensionError(f"term mean has length {term.mean.size}, expected {dim}")
            for i, cov in enumerate(covs):
                if np.array_equal(cov, term.cov):
                    cov_index.append(i)
                    break
            else:
                covs.append(term.cov)
                cov_index.append(len(covs) - 1)
        return cls(
            n_modes,
            coeffs=[t.coeff for t in terms],
            means=np.array([t.mean for t in terms]).reshape(-1, dim),
            covs=np.array(covs) if covs else np.eye(dim)[None],
            cov_index=cov_index,
            log_scales=[t.log_scale for t in terms],
            normalized=normalized,
            metadata=metadata,
        )

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    @property
    def n_terms(self) -> int:
        return self.coeffs.size

    def __len__(self) -> int:
        return self.n_terms

    @property
    def terms(self) -> List[GaussianTerm]:
        return [
            GaussianTerm(self.coeffs[k], self.means[k], self.covs[self.cov_index[k]], float(self.log_scales[k]))
            for k in range(self.n_terms)
        ]

    def log_weights(self) -> np.ndarray:
        """Комплексні логарифми c_m·exp(log_scale_m)."""
        return log_complex(self.coeffs) + self.log_scales

    def replace(self, **changes) -> 'GaussianSumState':
        kwargs = dict(
            n_modes=self.n_modes, coeffs=self.coeffs, means=self.means, covs=self.covs,
            cov_index=self.cov_index, log_scales=self.log_scales, normalized=self.normalized,
            metadata=self.metadata,
        )
        kwargs.update(changes)
        validate = kwargs.pop('validate', 'covs' in changes)
        return GaussianSumState(validate=validate, **kwargs)

    def slice(self, start: int, stop: int) -> 'GaussianSumState':
        return GaussianSumState(
            self.n_modes, self.coeffs[start:stop], self.means[start:stop], self.covs,
            self.cov_index[start:stop], self.log_scales[start:stop], self.normalized,
            self.metadata, validate=False,
        )

    def chunks(self, chunk_size: int = DEFAULT_CHUNK) -> Iterator['GaussianSumState']:
        for start in range(0, max(self.n_terms, 1), chunk_size):
            yield self.slice(start, min(start + chunk_size, self.n_terms))

    def take(self, indices: np.ndarray) -> 'GaussianSumState':
        """Підмножина доданків; метадані відкидаються, бо порядок доданків змінюється."""
        return GaussianSumState(
            self.n_modes, self.coeffs[indices], self.means[indices], self.covs,
            self.cov_index[indices], self.log_scales[indices], self.normalized, validate=False,
        )

    def conjugate_partners(self, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        """
        Індекс комплексно спряженого партнера (c*, μ*, та сама γ) кожного доданка з [start, stop).

        Будівники, що видають спряжені пари, записують у метадані
        ``self_conjugate`` = n: перші n доданків є власними партнерами, решта
        йде сусідніми парами (k, k'), (k', k). Без цього запису підходять лише
        стани з дійсними вагами та середніми, де кожен доданок сам собі партнер.

        Raises:
            ValidationError: Порядок невідомий, а деякий доданок комплексний
        """
        stop = self.n_terms if stop is None else stop
        index = np.arange(start, stop, dtype=np.int64)
        n = self.metadata.get('self_conjugate')
        if n is None:
            if np.any(self.coeffs.imag) or np.any(self.means.imag):
                raise ValidationError("state does not record its conjugate-pair layout")
            return index
        return np.where(index < n, index, n + ((index - n) ^ 1))

    def __repr__(self) -> str:
        return (f"GaussianSumState(n_modes={self.n_modes}, n_terms={self.n_terms}, "
                f"n_covs={self.covs.shape[0]}, normalized={self.normalized})")


class ProductState:
    """
    Лінивий тензорний добуток незалежних вхідних станів.

    Доданки добутку адресуються плоским індексом у тому ж порядку, що дає
    ``tensor`` (перший множник змінюється найповільніше), і будуються
    порціями, тож (𝓜+2)^(2n) доданків ніколи не лежать у пам'яті одночасно.
    """

    def __init__(self, factors: Sequence[GaussianSumState]):
        if not factors:
            raise ValidationError("ProductState needs at least one factor")
        self.factors = list(factors)
        self.n_modes = sum(f.n_modes for f in self.factors)
        self.shape = tuple(f.n_terms for f in self.factors)
        self.n_terms = int(np.prod(self.shape, dtype=np.int64))
        self.normalized = all(f.normalized for f in self.factors)
        cov_shape = tuple(f.covs.shape[0] for f in self.factors)
        self._cov_shape = cov_shape
        self.covs = np.array([
            block_diag(*[f.covs[i] for f, i in zip(self.factors, combo)])
            for combo in product(*[range(c) for c in cov_shape])
        ])

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    def __len__(self) -> int:
        return self.n_terms

    def slice(self, start: int, stop: int) -> GaussianSumState:
        flat = np.arange(start, stop, dtype=np.int64)
        idx = np.unravel_index(flat, self.shape)
        coeffs = np.ones(flat.size, dtype=complex)
        log_scales = np.zeros(flat.size)
        means = []
        cov_parts = []
        for f, k in zip(self.factors, idx):
            coeffs = coeffs * f.coeffs[k]
            log_scales = log_scales + f.log_scales[k]
            means.append(f.means[k])
            cov_parts.append(f.cov_index[k])
        cov_index = np.ravel_multi_index(cov_parts, self._cov_shape) if flat.size else np.zeros(0, int)
        return GaussianSumState(
            self.n_modes, coeffs, np.concatenate(means, axis=1), self.covs, cov_index,
            log_scales, self.normalized, validate=False,
        )

    def chunks(self, chunk_size: int = DEFAULT_CHUNK) -> Iterator[GaussianSumState]:
        for start in range(0, max(self.n_terms, 1), chunk_size):
            yield self.slice(start, min(start + chunk_size, self.n_terms))

    def conjugate_partners(self, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        """Партнер доданка добутку є добутком партнерів множників."""
        stop = self.n_terms if stop is None else stop
        idx = np.unravel_index(np.arange(start, stop, dtype=np.int64), self.shape)
        partners = [f.conjugate_partners()[k] for f, k in zip(self.factors, idx)]
        return np.ravel_multi_index(partners, self.shape)

    def materialize(self) -> GaussianSumState:
        state = self.factors[0]
        for f in self.factors[1:]:
            state = tensor(state, f)
        return state

    def trace(self) -> complex:
        return complex(np.prod([trace(f) for f in self.factors]))


StateLike = Union[GaussianSumState, ProductState]


@dataclass(frozen=True)
class LossSpec:
    """
    Канал чистих або теплових втрат для кожної моди.

    ``transmittance`` це амплітудне пропускання τ = cos θ: середні множаться
    на τ, а пропускання за інтенсивністю дорівнює τ². Два конструктори явно
    вказують, яке з них мається на увазі.
    """

    transmittance: Tuple[float, ...]
    thermal_occupancy: Tuple[float, ...] = ()

    def __post_init__(self):
        tau = tuple(float(t) for t in np.atleast_1d(self.transmittance))
        nbar = tuple(float(n) for n in np.atleast_1d(self.thermal_occupancy))
        if not nbar:
            nbar = (0.0,) * len(tau)
        if len(nbar) != len(tau):
            raise DimensionError("transmittance and thermal_occupancy must have equal length")
        if any(not 0.0 <= t <= 1.0 for t in tau):
            raise ValidationError(f"transmittance must lie in [0, 1], got {tau}")
        if any(n < 0 for n in nbar):
            raise ValidationError(f"thermal occupancy must be non-negative, got {nbar}")
        object.__setattr__(self, 'transmittance', tau)
        object.__setattr__(self, 'thermal_occupancy', nbar)

    @classmethod
    def amplitude_transmission(cls, tau: Union[float, Sequence[float]], n_modes: int = 1,
                               thermal_occupancy: Union[float, Sequence[float]] = 0.0) -> 'LossSpec':
        tau = np.broadcast_to(np.asarray(tau, float), (n_modes,)) if np.ndim(tau) == 0 else np.asarray(tau, float)
        nbar = np.broadcast_to(np.asarray(thermal_occupancy, float), tau.shape)
        return cls(tuple(tau), tuple(nbar))

    @classmethod
    def intensity_transmission(cls, eta: Union[float, Sequence[float]], n_modes: int = 1,
                               thermal_occupancy: Union[float, Sequence[float]] = 0.0) -> 'LossSpec':
        eta = np.asarray(eta, float)
        if np.any(eta < 0) or np.any(eta > 1):
            raise ValidationError(f"intensity transmission must lie in [0, 1], got {eta}")
        return cls.amplitude_transmission(np.sqrt(eta), n_modes, thermal_occupancy)

    @classmethod
    def lossless(cls, n_modes: int) -> 'LossSpec':
        return cls((1.0,) * n_modes, (0.0,) * n_modes)

    @property
    def n_modes(self) -> int:
        return len(self.transmittance)

    def transmission_matrix(self) -> np.ndarray:
        return np.diag(np.repeat(self.transmittance, 2))

    def reflection_matrix(self) -> np.ndarray:
        tau = np.asarray(self.transmittance)
        return np.diag(np.repeat(np.sqrt(1.0 - tau ** 2), 2))

    def added_noise(self) -> np.ndarray:
        """R·diag(½ + n̄)·Rᵀ."""
        r = self.reflection_matrix()
        return r @ np.diag(np.repeat(0.5 + np.asarray(self.thermal_occupancy), 2)) @ r.T

    def is_identity(self) -> bool:
        return all(t == 1.0 for t in self.transmittance)


def _check_dim(state: StateLike, vector: np.ndarray, what: str) -> np.ndarray:
    vector = np.asarray(vector)
    if vector.shape[-1] != state.dim:
        raise DimensionError(f"{what} has length {vector.shape[-1]}, state needs {state.dim}")
    return vector


def evaluate_wigner(state: GaussianSumState, r: np.ndarray, chunk_size: int = 4096) -> Union[complex, np.ndarray]:
    """
    Обчислює Σ_m c_m G_m(r).

    Args:
        state: Стан-суміш
        r: Точка довжини 2N або масив точок форми (P, 2N)

    Returns:
        Комплексне значення або комплексний масив форми (P,)
    """
    r = _check_dim(state, r, 'point')
    single = r.ndim == 1
    points = np.atleast_2d(r).astype(float)
    out = np.zeros(points.shape[0], dtype=complex)
    for c, cov in enumerate(state.covs):
        mask = state.cov_index == c
        if not np.any(mask):
            continue
        inv = np.linalg.inv(cov)
        _, logdet = np.linalg.slogdet(2 * np.pi * cov)
        logw = state.log_weights()[mask]
        means = state.means[mask]
        for start in range(0, means.shape[0], chunk_size):
            diff = points[None, :, :] - means[start:start + chunk_size, None, :]
            quad = np.einsum('kpi,ij,kpj->kp', diff, inv, diff)
            z = logw[start:start + chunk_size, None] - 0.5 * quad - 0.5 * logdet
            out += np.exp(z).sum(axis=0)
    return complex(out[0]) if single else out


def trace(state: StateLike) -> complex:
    """Σ_m c_m; інтеграл кожної нормованої гаусіани дорівнює одиниці, навіть з комплексним середнім."""
    if isinstance(state, ProductState):
        return state.trace()
    return logsumexp_complex(state.log_weights()).value()


def log_trace(state: GaussianSumState) -> complex:
    return logsumexp_complex(state.log_weights()).log()


def normalize(state: GaussianSumState) -> GaussianSumState:
    log_tr = log_trace(state)
    if not np.isfinite(log_tr.real):
        raise ValidationError("cannot normalize a state with zero trace")
    return state.replace(
        coeffs=state.coeffs * np.exp(-1j * log_tr.imag),
        log_scales=state.log_scales - log_tr.real,
        normalized=True,
    )


def tensor(a: GaussianSumState, b: GaussianSumState) -> GaussianSumState:
    """Прямий добуток: блочно-діагональні коваріації, об'єднані середні, добутки ваг."""
    na, nb = a.n_terms, b.n_terms
    covs = np.array([block_diag(ca, cb) for ca in a.covs for cb in b.covs])
    cov_index = (a.cov_index[:, None] * b.covs.shape[0] + b.cov_index[None, :]).ravel()
    means = np.concatenate([
        np.repeat(a.means, nb, axis=0),
        np.tile(b.means, (na, 1)),
    ], axis=1)
    return GaussianSumState(
        a.n_modes + b.n_modes,
        coeffs=np.outer(a.coeffs, b.coeffs).ravel(),
        means=means,
        covs=covs,
        cov_index=cov_index,
        log_scales=np.add.outer(a.log_scales, b.log_scales).ravel(),
        normalized=a.normalized and b.normalized,
        validate=False,
    )


def tensor_all(states: Sequence[GaussianSumState]) -> GaussianSumState:
    return ProductState(states).materialize()


def _matrix_of(circuit: Any) -> np.ndarray:
    return np.asarray(getattr(circuit, 'matrix', circuit), dtype=float)


def apply_symplectic(state: GaussianSumState, circuit: Any) -> GaussianSumState:
    """
    μ → Aμ, γ → AγAᵀ для кожного доданка; коефіцієнти не змінюються.

    Args:
        state: Вхідний стан
        circuit: SymplecticCircuit або звичайна матриця 2N x 2N
    """
    matrix = _matrix_of(circuit)
    if matrix.shape != (state.dim, state.dim):
        raise DimensionError(f"circuit acts on {matrix.shape[0]} quadratures, state has {state.dim}")
    check_symplectic(matrix)
    covs = np.einsum('ij,cjk,lk->cil', matrix, state.covs, matrix)
    covs = 0.5 * (covs + np.transpose(covs, (0, 2, 1)))
    return state.replace(means=state.means @ matrix.T, covs=covs)


def apply_loss(state: GaussianSumState, loss: LossSpec) -> GaussianSumState:
    """μ → Tμ, γ → TγTᵀ + R diag(½+n̄) Rᵀ."""
    if loss.n_modes != state.n_modes:
        raise DimensionError(f"loss is defined for {loss.n_modes} modes, state has {state.n_modes}")
    t = loss.transmission_matrix()
    covs = np.einsum('ij,cjk,lk->cil', t, state.covs, t) + loss.added_noise()[None]
    return state.replace(means=state.means @ t.T, covs=covs)


def displace(state: GaussianSumState, rbar: np.ndarray) -> GaussianSumState:
    """Зсуває кожне середнє на r̄."""
    rbar = _check_dim(state, rbar, 'displacement')
    return state.replace(means=state.means + np.asarray(rbar, dtype=float)[None, :], validate=False)


def purity(state: GaussianSumState, chunk_size: int = 2048) -> float:
    """
    (2π)^N ∫ W(r)² dr через попарні перекриття гаусіан.

    ∫ G₁ G₂* = exp(-½ dᵀ(γ₁+γ₂)⁻¹d) / sqrt(det 2π(γ₁+γ₂)), де d = μ₁ - μ₂*.
    """
    logw = state.log_weights()
    parts: List[LogSum] = []
    for c1, c2 in product(range(state.covs.shape[0]), repeat=2):
        m1 = np.flatnonzero(state.cov_index == c1)
        m2 = np.flatnonzero(state.cov_index == c2)
        if m1.size == 0 or m2.size == 0:
            continue
        total = state.covs[c1] + state.covs[c2]
        inv = np.linalg.inv(total)
        _, logdet = np.linalg.slogdet(2 * np.pi * total)
        for start in range(0, m1.size, chunk_size):
            i = m1[start:start + chunk_size]
            d = state.means[i][:, None, :] - np.conj(state.means[m2])[None, :, :]
            quad = np.einsum('abi,ij,abj->ab', d, inv, d)
            z = logw[i][:, None] + np.conj(logw[m2])[None, :] - 0.5 * quad - 0.5 * logdet
            parts.append(logsumexp_complex(z))
    total = tree_reduce(parts)
    value = total.value() * (2 * np.pi) ** state.n_modes
    tr = trace(state)
    return float(np.real(value / (tr * np.conj(tr))))


def mean_photon(state: GaussianSumState) -> float:
    """⟨n̂⟩, сумарне по модах: Σ c (tr γ + μᵀμ)/2 / Σ c - N/2."""
    logw = state.log_weights()
    moments = np.trace(state.covs, axis1=1, axis2=2)[state.cov_index] + np.sum(state.means ** 2, axis=1)
    num = logsumexp_complex(logw + log_complex(moments))
    den = logsumexp_complex(logw)
    second = np.exp(num.log() - den.log())
    return float(np.real(second) / 2 - state.n_modes / 2)
