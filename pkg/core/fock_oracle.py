"""
Обрізаний оракул у базисі Фока для перехресної перевірки рушія фазового простору.

Кети (або одномодові матриці густини) в обрізаному базисі, оператори через
матричні експоненти, гомодинна проєкція на функції Ерміта. Не більше двох мод
і cutoff 100.

Конвенції збігаються з фазовим простором: D(γ) = exp(γa† - γ*a) зсуває x на
√2·Re γ, S(ξ) стискає x при ξ > 0, світлоподільник exp(θ(a₁a₂† - a₁†a₂))
та поворот e^{iθn̂} мають симплектичні матриці з ``core.circuits``.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from core.errors import DimensionError, OracleLimitError, ValidationError

logger = logging.getLogger(__name__)

MAX_CUTOFF = 100
MAX_MODES = 2
MARGIN = 2


@dataclass(frozen=True)
class FockState:
    """
    Обрізаний стан: ``amplitudes`` (кет форми (cutoff,)*n_modes) або
    ``density`` (одна мода, форма (cutoff, cutoff)). Після обрізання не
    перенормовується; ``leakage`` = 1 - norm служить діагностикою обрізання.
    ``truncation_loss`` зберігає вагу, відкинуту до попереднього
    перенормування, тож ``total_leakage`` переживає ``normalized()``.
    """

    cutoff: int
    n_modes: int
    amplitudes: Optional[np.ndarray] = None
    density: Optional[np.ndarray] = None
    truncation_loss: float = 0.0

    def __post_init__(self):
        if self.cutoff > MAX_CUTOFF:
            raise OracleLimitError(f"cutoff {self.cutoff} exceeds {MAX_CUTOFF}")
        if not 1 <= self.n_modes <= MAX_MODES:
            raise OracleLimitError(f"oracle handles 1 or 2 modes, got {self.n_modes}")
        if (self.amplitudes is None) == (self.density is None):
            raise ValidationError("give exactly one of amplitudes or density")
        if self.amplitudes is not None and self.amplitudes.shape != (self.cutoff,) * self.n_modes:
            raise DimensionError(f"amplitudes have shape {self.amplitudes.shape}")
        if self.density is not None and (self.n_modes != 1 or self.density.shape != (self.cutoff, self.cutoff)):
            raise DimensionError("density matrices are single-mode (cutoff x cutoff)")

    @property
    def is_pure(self) -> bool:
        return self.amplitudes is not None

    @property
    def norm(self) -> float:
        if self.is_pure:
            return float(np.sum(np.abs(self.amplitudes) ** 2))
        return float(np.real(np.trace(self.density)))

    @property
    def leakage(self) -> float:
        return 1.0 - self.norm

    @property
    def total_leakage(self) -> float:
        return 1.0 - (1.0 - self.truncation_loss) * self.norm

    def to_density(self) -> np.ndarray:
        if self.is_pure:
            if self.n_modes != 1:
                raise OracleLimitError("density matrices are only formed for one mode")
            return np.outer(self.amplitudes, np.conj(self.amplitudes))
        return self.density

    def normalized(self) -> 'FockState':
        if self.is_pure:
            return FockState(self.cutoff, self.n_modes, amplitudes=self.amplitudes / np.sqrt(self.norm),
                             truncation_loss=self.total_leakage)
        return FockState(self.cutoff, self.n_modes, density=self.density / self.norm,
                         truncation_loss=self.total_leakage)


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), k=1)


def displacement_matrix(gamma: complex, cutoff: int) -> np.ndarray:
    """D(γ) truncated to ``cutoff`` after exponentiating at MARGIN·cutoff."""
    a = annihilation(MARGIN * cutoff)
    return expm(gamma * a.conj().T - np.conj(gamma) * a)[:cutoff, :cutoff]


def squeezed_vacuum_amplitudes(xi: float, dim: int) -> np.ndarray:
    """c_{2n} = (-tanh ξ)^n √((2n)!) / (2^n n!) / √(cosh ξ)."""
    amps = np.zeros(dim, dtype=complex)
    n = np.arange((dim + 1) // 2)
    log_mag = 0.5 * gammaln(2 * n + 1) - n * np.log(2.0) - gammaln(n + 1) - 0.5 * np.log(np.cosh(xi))
    t = np.tanh(xi)
    if t == 0:
        amps[0] = 1.0
        return amps
    log_mag = log_mag + n * np.log(abs(t))
    amps[2 * n] = np.exp(log_mag) * np.sign(-t) ** n
    return amps


def _pad(vec: np.ndarray, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    out[:vec.size] = vec
    return out


def fock_squeezed_cat(alpha: float, xi: float, cutoff: int) -> FockState:
    """Нормований (D(-α/2) + D(α/2))·S(ξ)|0⟩; нормування до обрізання."""
    if cutoff > MAX_CUTOFF:
        raise OracleLimitError(f"cutoff {cutoff} exceeds {MAX_CUTOFF}")
    big = MARGIN * cutoff
    a = annihilation(2 * big)
    sv = _pad(squeezed_vacuum_amplitudes(xi, big), 2 * big)
    plus = expm((alpha / 2) * (a.T - a))
    cat = (plus @ sv + plus.T @ sv)[:big]
    cat = cat / np.linalg.norm(cat)
    return FockState(cutoff, 1, amplitudes=cat[:cutoff])


def _beamsplitter_blocks(cutoff: int, theta: float):
    """Для кожного повного числа фотонів N повний унітарний блок розміру N+1 для exp(θ(a₁a₂† - a₁†a₂))."""
    for total in range(2 * cutoff - 1):
        n1 = np.arange(total + 1)
        n2 = total - n1
        gen = np.zeros((total + 1, total + 1))
        # a1 a2†: |n1, n2⟩ → √n1 √(n2+1) |n1-1, n2+1⟩
        gen[n1[1:] - 1, n1[1:]] += np.sqrt(n1[1:]) * np.sqrt(n2[1:] + 1)
        # -a1† a2: |n1, n2⟩ → -√(n1+1) √n2 |n1+1, n2-1⟩
        gen[n1[:-1] + 1, n1[:-1]] -= np.sqrt(n1[:-1] + 1) * np.sqrt(n2[:-1])
        yield total, n1, expm(theta * gen)


def fock_beamsplitter(state: FockState, i: int, j: int, theta: float) -> FockState:
    """
    Світлоподільник на двомодовому кеті; кожен блок з фіксованим числом фотонів
    експоненціюється повністю, а виходи за межею cutoff відкидаються (видно як leakage).
    """
    if state.n_modes != 2 or not state.is_pure:
        raise OracleLimitError("beamsplitter acts on two-mode kets")
    if sorted((i, j)) != [0, 1]:
        raise DimensionError(f"modes must be 0 and 1, got ({i}, {j})")
    psi = state.amplitudes if i == 0 else state.amplitudes.T
    c = state.cutoff
    out = np.zeros_like(psi, dtype=complex)
    for total, n1, block in _beamsplitter_blocks(c, theta):
        keep = (n1 < c) & (total - n1 < c)
        vec = np.zeros(total + 1, dtype=complex)
        vec[keep] = psi[n1[keep], total - n1[keep]]
        if not np.any(vec):
            continue
        res = block @ vec
        out[n1[keep], total - n1[keep]] = res[keep]
    if i != 0:
        out = out.T
    return FockState(c, 2, amplitudes=out)


def fock_rotation(state: FockState, mode: int, theta: float) -> FockState:
    """e^{iθn̂} на одній моді."""
    phases = np.exp(1j * theta * np.arange(state.cutoff))
    if state.is_pure:
        shape = [1] * state.n_modes
        shape[mode] = state.cutoff
        return FockState(state.cutoff, state.n_modes, amplitudes=state.amplitudes * phases.reshape(shape))
    return FockState(state.cutoff, 1, density=phases[:, None] * state.density * np.conj(phases)[None, :])


def fock_dumbbell(state: FockState) -> FockState:
    """R₂(-π/2), B₁₂(π/4), R₂(π/2) на двомодовому кеті."""
    state = fock_rotation(state, 1, -np.pi / 2)
    state = fock_beamsplitter(state, 0, 1, np.pi / 4)
    return fock_rotation(state, 1, np.pi / 2)


def hermite_functions(n_max: int, x: float) -> np.ndarray:
    """ψ₀..ψ_{n_max-1} at x with ψ₀ = π^{-1/4} e^{-x²/2}."""
    psi = np.zeros(n_max)
    psi[0] = np.pi ** -0.25 * np.exp(-x ** 2 / 2)
    if n_max > 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(1, n_max - 1):
        psi[n + 1] = np.sqrt(2.0 / (n + 1)) * x * psi[n] - np.sqrt(n / (n + 1)) * psi[n - 1]
    return psi


def quadrature_eigenfunction(cutoff: int, theta: float, eta: float) -> np.ndarray:
    """⟨η_θ|n⟩ = e^{-i(θ + π/2)n} ψ_n(η) for η_θ = p cos θ − x sin θ."""
    n = np.arange(cutoff)
    return np.exp(-1j * (theta + np.pi / 2) * n) * hermite_functions(cutoff, eta)


def fock_homodyne_project(state: FockState, mode: int, theta: float, eta: float) -> Tuple[Optional[FockState], float]:
    """
    Ідеальна проєкція ``mode`` на η_θ = η.

    Returns:
        (ненормований стан решти мод або None для одномодового входу,
         густина результату відносно норми входу)
    """
    bra = quadrature_eigenfunction(state.cutoff, theta, eta)
    if state.n_modes == 1:
        if state.is_pure:
            density = abs(bra @ state.amplitudes) ** 2
        else:
            density = float(np.real(bra @ state.density @ np.conj(bra)))
        return None, float(density / state.norm)
    if not state.is_pure:
        raise OracleLimitError("two-mode projection needs a ket")
    psi = np.moveaxis(state.amplitudes, mode, 0)
    rest = np.tensordot(bra, psi, axes=(0, 0))
    projected = FockState(state.cutoff, 1, amplitudes=rest)
    return projected, projected.norm / state.norm


def fock_loss(state: FockState, transmittance: float) -> FockState:
    """Амплітудне пропускання τ: світлоподільник з вакуумною допоміжною модою при θ = arccos τ, по якій потім береться частковий слід."""
    if state.n_modes != 1 or not state.is_pure:
        raise OracleLimitError("loss is applied to single-mode kets")
    if not 0.0 <= transmittance <= 1.0:
        raise ValidationError(f"transmittance must lie in [0, 1], got {transmittance}")
    joint = np.zeros((state.cutoff, state.cutoff), dtype=complex)
    joint[:, 0] = state.amplitudes
    mixed = fock_beamsplitter(FockState(state.cutoff, 2, amplitudes=joint), 0, 1, np.arccos(transmittance))
    psi = mixed.amplitudes
    return FockState(state.cutoff, 1, density=psi @ psi.conj().T, truncation_loss=state.truncation_loss)


def fock_displacement_ev(state: FockState, rbar: np.ndarray) -> complex:
    """
    ⟨D̂(r̄)⟩ with D̂(r̄) = exp(-i r̂ᵀΩr̄); на кожній моді це D(γ) з γ = -(a + ib)/√2.
    Ділиться на норму стану.
    """
    rbar = np.asarray(rbar, dtype=float)
    if rbar.size != 2 * state.n_modes:
        raise DimensionError(f"displacement has length {rbar.size}, state needs {2 * state.n_modes}")
    ops = [displacement_matrix(-(rbar[2 * m] + 1j * rbar[2 * m + 1]) / np.sqrt(2), state.cutoff)
           for m in range(state.n_modes)]
    if state.is_pure:
        psi = state.amplitudes
        if state.n_modes == 1:
            value = np.conj(psi) @ ops[0] @ psi
        else:
            value = np.einsum('ab,ai,bj,ij->', np.conj(psi), ops[0], ops[1], psi)
    else:
        value = np.trace(state.density @ ops[0])
    return complex(value / state.norm)


def mean_photon(state: FockState) -> float:
    n = np.arange(state.cutoff)
    if state.is_pure:
        probs = np.abs(state.amplitudes) ** 2
        total = sum(np.sum(np.moveaxis(probs, m, -1) * n) for m in range(state.n_modes))
    else:
        total = np.sum(n * np.real(np.diag(state.density)))
    return float(total / state.norm)


def fock_wigner(state: FockState, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """
    Одномодова функція Вігнера в точках (x, p) через рекурсію без поліномів Лаґерра
    по β = (x + ip)/√2; у пам'яті лише один рядок W_{mn}.
    """
    if state.n_modes != 1:
        raise OracleLimitError("Wigner function is evaluated for one mode")
    rho = state.to_density() / state.norm
    beta = (np.asarray(x, dtype=float) + 1j * np.asarray(p, dtype=float)) / np.sqrt(2)
    shape = beta.shape
    beta = beta.ravel()
    c = state.cutoff
    prev = np.zeros((c, beta.size), dtype=complex)
    row = np.zeros((c, beta.size), dtype=complex)
    row[0] = np.exp(-2 * np.abs(beta) ** 2) / np.pi
    for n in range(1, c):
        row[n] = 2 * beta * row[n - 1] / np.sqrt(n)
    w = np.real(rho[0, 0] * row[0]) + 2 * np.real(np.sum(rho[0, 1:, None] * row[1:], axis=0))
    for m in range(1, c):
        prev, row = row, np.zeros_like(row)
        row[m] = (2 * np.conj(beta) * prev[m] - np.sqrt(m) * prev[m - 1]) / np.sqrt(m)
        for n in range(m + 1, c):
            row[n] = (2 * beta * row[n - 1] - np.sqrt(m) * prev[n - 1]) / np.sqrt(n)
        w += np.real(rho[m, m] * row[m])
        if m + 1 < c:
            w += 2 * np.real(np.sum(rho[m, m + 1:, None] * row[m + 1:], axis=0))
    return w.reshape(shape)


def fock_bred_gkp(rounds: int, alpha: float, xi: float, cutoff: int) -> FockState:
    """
    Розмноження в базисі Фока: кіт з амплітудою α, далі кожен раунд новий кіт
    з амплітудою α/√2^(r-1), збалансований світлоподільник і p = 0 на моді 2.
    Нормується після кожної проєкції; вага, відкинута обрізанням до цього
    моменту, зберігається в ``truncation_loss``.
    """
    if rounds > 2:
        raise OracleLimitError("Fock breeding is limited to two rounds")
    state = fock_squeezed_cat(alpha, xi, cutoff)
    for r in range(1, rounds + 1):
        fresh = fock_squeezed_cat(alpha / np.sqrt(2.0) ** (r - 1), xi, cutoff)
        joint = FockState(cutoff, 2, amplitudes=np.outer(state.amplitudes, fresh.amplitudes))
        joint = fock_beamsplitter(joint, 0, 1, np.pi / 4)
        lost = 1.0 - (1.0 - state.truncation_loss) * joint.norm
        projected, density = fock_homodyne_project(joint, 1, 0.0, 0.0)
        logger.debug(f"breeding round {r}: density {density:.3e}, truncation loss {lost:.2e}")
        state = FockState(cutoff, 1, amplitudes=projected.amplitudes / np.sqrt(projected.norm),
                          truncation_loss=lost)
    return state
