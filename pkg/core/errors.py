class SimulationError(Exception):
    """Базовий клас для всіх помилок симулятора."""


class ValidationError(SimulationError, ValueError):
    """Некоректне значення параметра."""


class DimensionError(ValidationError):
    """Форма вектора чи матриці не відповідає кількості мод."""


class SymplecticError(ValidationError):
    """Матриця не проходить перевірку AᵀΩA = Ω."""


class NotPositiveDefiniteError(SimulationError):
    """Блок коваріації має ведучий елемент Холецького нижче допуску."""


class SingularMeasurementError(NotPositiveDefiniteError):
    """Виміряний блок γ_HH деякого доданка вироджений."""


class ZeroProbabilityError(SimulationError):
    """Постселектований результат має (чисельно) нульову густину ймовірності."""


class CoverageError(SimulationError):
    """Сітка результатів не покриває носій гомодинної густини."""


class DomainError(SimulationError, ValueError):
    """Аргумент поза областю визначення аналітичної функції."""


class GrnTruncationError(SimulationError):
    """Обрізана решітка GRN замала для запитаного вікна."""


class OracleLimitError(SimulationError):
    """Оракул Фока отримав задачу, більшу за його межі."""


class ConfigError(SimulationError):
    """Некоректна конфігурація експерименту; повідомлення починається зі шляху до поля."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class NumericalError(SimulationError):
    """Підпрограма numpy чи scipy впала (вироджена матриця, переповнення) всередині одного обчислення."""
