from typing import Any, Dict

import numpy as np

from core.errors import ValidationError
from core.phase_space import GaussianSumState, PhaseSpaceConventions
from .base import StateBuilder


def vacuum(n: int = 1) -> GaussianSumState:
    """Один доданок: нульове середнє, коваріація ½𝟙, коефіцієнт 1."""
    if n < 1:
        raise ValidationError(f"vacuum needs at least one mode, got {n}")
    return GaussianSumState(
        n,
        coeffs=[1.0],
        means=np.zeros((1, 2 * n)),
        covs=PhaseSpaceConventions.vacuum_cov(n),
        normalized=True,
        metadata={'builder': 'vacuum', 'n_modes': n},
    )


class Vacuum(StateBuilder):
    name = 'vacuum'

    def __init__(self, params: Dict[str, Any] = None):
        super().__init__(params)
        self.n_modes = self.params.get('n_modes', 1)

    def build(self) -> GaussianSumState:
        self.state = vacuum(self.n_modes)
        return self.state
