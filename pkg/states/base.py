from abc import ABC, abstractmethod
from typing import Any, Dict

from core.phase_space import GaussianSumState, displace


class StateBuilder(ABC):
    """
    Абстрактний базовий клас для побудови вхідних станів.
    Усі будівники станів мають наслідувати цей клас.
    """

    name = 'state'

    def __init__(self, params: Dict[str, Any] = None):
        """
        Ініціалізація будівника.

        Args:
            params: Словник з параметрами стану
        """
        self.params = params or {}
        self.state = None

    @abstractmethod
    def build(self) -> GaussianSumState:
        """
        Будує стан як суму гаусіан.

        Returns:
            Нормований GaussianSumState
        """
        pass

    def describe(self) -> Dict[str, Any]:
        """
        Метадані стану для маніфесту результатів.

        Returns:
            Словник з назвою будівника та фактичними параметрами
        """
        if self.state is None:
            self.state = self.build()
        info = {'builder': self.name, 'n_terms': self.state.n_terms}
        info.update(self.state.metadata)
        return info


def displaced(state: GaussianSumState, rbar) -> GaussianSumState:
    """Стан, зсунутий на r̄; зсув записується в метадані."""
    shifted = displace(state, rbar)
    metadata = dict(shifted.metadata, displacement=[float(v) for v in rbar])
    return shifted.replace(metadata=metadata, validate=False)
