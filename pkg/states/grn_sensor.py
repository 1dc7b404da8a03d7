import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from core.errors import GrnTruncationError, ValidationError
from core.phase_space import GaussianSumState, normalize
from .base import StateBuilder

logger = logging.getLogger(__name__)

# peak spacing of the ideal sensor Wigner function in both quadratures
SENSOR_PEAK_SPACING = np.sqrt(np.pi / 2)
BOUNDARY_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class GrnParams:
    """
    Ідеальний сенсорний стан під гаусовим випадковим шумом зсувів.

    Attributes:
        sigma_x: Дисперсія x-шуму Σ₀
        sigma_p: Дисперсія p-шуму Σ₁
        lattice_halfwidth: x-піки s ∈ [-n_max, n_max)
        base_peak_variance: Регуляризуюча дисперсія піка ε
        p_halfwidth: p-піки t ∈ [-n_p, n_p); за замовчуванням max(1, n_max // 4)
        window: Напівширина вікна результатів, яке має покривати обрізання
    """

    sigma_x: float
    sigma_p: float
    lattice_halfwidth: int = 12
    base_peak_variance: float = 1e-12
    p_halfwidth: Optional[int] = None
    window: float = float(np.sqrt(np.pi))

    def __post_init__(self):
        if self.sigma_x < 0 or self.sigma_p < 0:
            raise ValidationError(f"noise variances must be non-negative, got ({self.sigma_x}, {self.sigma_p})")
        if self.lattice_halfwidth < 1:
            raise ValidationError(f"lattice_halfwidth must be >= 1, got {self.lattice_halfwidth}")
        if self.base_peak_variance < 0:
            raise ValidationError("base_peak_variance must be non-negative")
        if self.sigma_x + self.base_peak_variance <= 0 or self.sigma_p + self.base_peak_variance <= 0:
            raise ValidationError("peak variance Σ + ε must be positive")
        if self.p_halfwidth is not None and self.p_halfwidth < 1:
            raise ValidationError(f"p_halfwidth must be >= 1, got {self.p_halfwidth}")

    @property
    def n_p(self) -> int:
        if self.p_halfwidth is not None:
            return self.p_halfwidth
        return max(1, self.lattice_halfwidth // 4)


def boundary_weight(params: GrnParams) -> float:
    """
    Гаусова вага, яку крайні збережені x-піки залишають усередині вікна.

    Діапазон x має перевищувати діапазон p настільки, щоб кожна
    постселектована решіткова сума бачила однакову кількість партнерських піків.
    """
    a = SENSOR_PEAK_SPACING
    edge = (params.lattice_halfwidth - params.n_p - 1) * a
    if edge <= params.window:
        return 1.0
    spread = 2 * (params.sigma_x + params.sigma_p + 2 * params.base_peak_variance)
    return float(np.exp(-(edge - params.window) ** 2 / spread))


def grn_sensor(params: GrnParams) -> GaussianSumState:
    """
    Обрізана сума Σ_{s,t} (-1)^{st}·G((sa, ta), diag(Σ₀+ε, Σ₁+ε)), де a = √(π/2).

    Обидва діапазони індексів напіввідкриті та парної довжини, тож візерунок
    знаків покриває цілі періоди.

    Raises:
        GrnTruncationError: Збережена решітка замала для вікна
    """
    weight = boundary_weight(params)
    if weight > BOUNDARY_WEIGHT_TOL:
        raise GrnTruncationError(
            f"lattice_halfwidth={params.lattice_halfwidth} with p_halfwidth={params.n_p} leaves boundary "
            f"weight {weight:.2e} > {BOUNDARY_WEIGHT_TOL:.0e}; increase lattice_halfwidth"
        )
    a = SENSOR_PEAK_SPACING
    s = np.arange(-params.lattice_halfwidth, params.lattice_halfwidth)
    t = np.arange(-params.n_p, params.n_p)
    ss, tt = np.meshgrid(s, t, indexing='ij')
    ss, tt = ss.ravel(), tt.ravel()
    signs = np.where((ss * tt) % 2 == 0, 1.0, -1.0)
    eps = params.base_peak_variance
    state = GaussianSumState(
        1,
        coeffs=signs.astype(complex),
        means=np.stack([ss * a, tt * a], axis=1),
        covs=np.diag([params.sigma_x + eps, params.sigma_p + eps]),
        metadata={
            'builder': 'grn_sensor',
            'sigma_x': params.sigma_x,
            'sigma_p': params.sigma_p,
            'lattice_halfwidth': params.lattice_halfwidth,
            'p_halfwidth': params.n_p,
            'base_peak_variance': eps,
        },
    )
    logger.debug(f"grn_sensor: {state.n_terms} peaks, boundary weight {weight:.1e}")
    return normalize(state)


class GrnSensor(StateBuilder):
    name = 'grn_sensor'

    def __init__(self, params: Dict[str, Any] = None):
        super().__init__(params)
        self.grn = GrnParams(
            sigma_x=self.params.get('sigma_x', 0.05),
            sigma_p=self.params.get('sigma_p', 0.05),
            lattice_halfwidth=self.params.get('lattice_halfwidth', 12),
            base_peak_variance=self.params.get('base_peak_variance', 1e-12),
            p_halfwidth=self.params.get('p_halfwidth'),
        )

    def build(self) -> GaussianSumState:
        self.state = grn_sensor(self.grn)
        return self.state
