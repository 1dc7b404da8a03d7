import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.special import gammaln

from core.errors import ValidationError
from core.phase_space import GaussianSumState, normalize
from .base import StateBuilder

logger = logging.getLogger(__name__)

DEFAULT_MAX_ROUNDS = 8


def lattice_matched_amplitude(rounds: int) -> float:
    """Амплітуда кота, при якій піки після розмноження стоять через √(2π): α = √(π·2^𝓜)."""
    return float(np.sqrt(np.pi * 2.0 ** rounds))


@dataclass(frozen=True)
class BreedingParams:
    """
    Параметри протоколу розмноження.

    Attributes:
        rounds: Кількість раундів 𝓜 (0 дає стиснутого кота)
        cat_amplitude: α вхідних котів; None вибирає значення, узгоджене з решіткою
        cat_squeezing: ξ вхідних котів
        max_rounds: Верхня межа для ``rounds``
    """

    rounds: int
    cat_amplitude: Optional[float] = None
    cat_squeezing: float = 0.0
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self):
        if int(self.rounds) != self.rounds or self.rounds < 0:
            raise ValidationError(f"rounds must be a non-negative integer, got {self.rounds}")
        if self.rounds > self.max_rounds:
            raise ValidationError(f"rounds={self.rounds} exceeds max_rounds={self.max_rounds}")
        if self.cat_amplitude is not None and not (np.isfinite(self.cat_amplitude) and self.cat_amplitude >= 0):
            raise ValidationError(f"cat_amplitude must be finite and non-negative, got {self.cat_amplitude}")
        if not np.isfinite(self.cat_squeezing):
            raise ValidationError(f"cat_squeezing must be finite, got {self.cat_squeezing}")

    @property
    def alpha(self) -> float:
        if self.cat_amplitude is None:
            return lattice_matched_amplitude(self.rounds)
        return float(self.cat_amplitude)

    @property
    def n_peaks(self) -> int:
        return self.rounds + 2


def breeding_betas(rounds: int, alpha: float) -> np.ndarray:
    """β_k = (2k - (𝓜+1))·α / (2·√(2^𝓜)), k = 0..𝓜+1."""
    k = np.arange(rounds + 2)
    return (2 * k - (rounds + 1)) * alpha / (2.0 * np.sqrt(2.0 ** rounds))


def _pair_order(n: int):
    """Спершу діагональні пари, потім кожна позадіагональна пара разом зі своєю перестановкою."""
    pairs = [(k, k) for k in range(n)]
    for k in range(n):
        for kp in range(k + 1, n):
            pairs.append((k, kp))
            pairs.append((kp, k))
    return np.array(pairs)


def bred_gkp(params: BreedingParams) -> GaussianSumState:
    """
    Функція Вігнера стану після 𝓜 раундів розмноження котів.

    Доданки k, k' ∈ {0..𝓜+1} з вагою C(𝓜+1,k)·C(𝓜+1,k')·exp(-½e^{2ξ}(β_k-β_k')²),
    середнім √½(β_k+β_k', i·e^{2ξ}(β_k'-β_k)) та спільною коваріацією
    ½·diag(e^{-2ξ}, e^{2ξ}). Ваги зберігаються як логарифми модулів.

    Args:
        params: Параметри розмноження

    Returns:
        Нормований одномодовий стан з (𝓜+2)² доданків
    """
    m = params.rounds
    xi = params.cat_squeezing
    alpha = params.alpha
    beta = breeding_betas(m, alpha)
    pairs = _pair_order(m + 2)
    k, kp = pairs[:, 0], pairs[:, 1]

    log_binom = gammaln(m + 2) - gammaln(np.arange(m + 2) + 1) - gammaln(m + 2 - np.arange(m + 2))
    e2xi = np.exp(2 * xi)
    log_scales = log_binom[k] + log_binom[kp] - 0.5 * e2xi * (beta[k] - beta[kp]) ** 2
    means = np.sqrt(0.5) * np.stack([beta[k] + beta[kp], 1j * e2xi * (beta[kp] - beta[k])], axis=1)
    cov = 0.5 * np.diag([np.exp(-2 * xi), e2xi])

    state = GaussianSumState(
        1,
        coeffs=np.ones(len(pairs), dtype=complex),
        means=means,
        covs=cov,
        log_scales=log_scales,
        metadata={
            'builder': 'bred_gkp' if m else 'squeezed_cat',
            'rounds': m,
            'cat_amplitude': alpha,
            'cat_squeezing': xi,
            'lattice_matched': params.cat_amplitude is None,
            'displaced_sensor': m % 2 == 0,
            'self_conjugate': m + 2,
        },
    )
    logger.debug(f"bred_gkp: rounds={m} alpha={alpha:.4f} xi={xi:.3f} terms={state.n_terms}")
    return normalize(state)


def squeezed_cat(alpha: float, xi: float) -> GaussianSumState:
    """(D(-α/2) + D(α/2))·S(ξ)|0⟩ у вигляді чотирьох гаусіан."""
    return bred_gkp(BreedingParams(rounds=0, cat_amplitude=alpha, cat_squeezing=xi))


def sensor_offset(rounds: int) -> np.ndarray:
    """Зміщення по x узгодженого з решіткою стану: 0 для непарних 𝓜, (√(π/2), 0) для парних."""
    if rounds % 2:
        return np.zeros(2)
    return np.array([np.sqrt(np.pi / 2), 0.0])


class BredGkp(StateBuilder):
    """Сенсорний GKP-стан після розмноження; параметри: rounds, cat_amplitude, cat_squeezing."""

    name = 'bred_gkp'

    def __init__(self, params: Dict[str, Any] = None):
        super().__init__(params)
        self.breeding = BreedingParams(
            rounds=self.params.get('rounds', 1),
            cat_amplitude=self.params.get('cat_amplitude'),
            cat_squeezing=self.params.get('cat_squeezing', 0.5),
            max_rounds=self.params.get('max_rounds', DEFAULT_MAX_ROUNDS),
        )

    def build(self) -> GaussianSumState:
        self.state = bred_gkp(self.breeding)
        return self.state


class SqueezedCat(StateBuilder):
    name = 'squeezed_cat'

    def __init__(self, params: Dict[str, Any] = None):
        super().__init__(params)
        self.alpha = self.params.get('cat_amplitude', 4.0)
        self.xi = self.params.get('cat_squeezing', 0.5)

    def build(self) -> GaussianSumState:
        self.state = squeezed_cat(self.alpha, self.xi)
        return self.state
