"""
Чисельно стійке згортання великих сум гаусіан з комплексними вагами.

Кожен доданок зберігається як комплексний логарифм ``z = log|w| + i·arg w``;
суми рахуються як ``shift + log Σ exp(z - shift)``, де shift дорівнює
найбільшій дійсній частині, тож показники на сотні натів не переповнюються.
"""
from typing import List, NamedTuple, Sequence

import numpy as np


class LogSum(NamedTuple):
    """Часткова сума Σ exp(z), що зберігається як ``exp(shift) * total``."""

    shift: float
    total: complex
    count: int = 0

    def log(self) -> complex:
        if self.total == 0:
            return complex(-np.inf, 0.0)
        return self.shift + np.log(self.total)

    def value(self) -> complex:
        return np.exp(self.shift) * self.total


EMPTY = LogSum(-np.inf, 0j, 0)


def log_complex(values: np.ndarray) -> np.ndarray:
    """Комплексний логарифм, що переводить точні нулі в -inf без попереджень."""
    values = np.asarray(values, dtype=complex)
    with np.errstate(divide='ignore'):
        return np.log(values)


def logsumexp_complex(z: np.ndarray) -> LogSum:
    """
    Log-sum-exp комплексних логарифмів зі зсувом на максимум.

    Args:
        z: Одновимірний масив комплексних логарифмів доданків

    Returns:
        LogSum з shift = max Re z
    """
    z = np.asarray(z, dtype=complex).ravel()
    if z.size == 0:
        return EMPTY
    shift = float(np.max(z.real))
    if not np.isfinite(shift):
        return LogSum(-np.inf, 0j, z.size)
    total = complex(np.sum(np.exp(z - shift)))
    return LogSum(shift, total, z.size)


def combine(a: LogSum, b: LogSum) -> LogSum:
    """Додає дві часткові суми."""
    if not np.isfinite(a.shift):
        return LogSum(b.shift, b.total, a.count + b.count)
    if not np.isfinite(b.shift):
        return LogSum(a.shift, a.total, a.count + b.count)
    shift = max(a.shift, b.shift)
    total = a.total * np.exp(a.shift - shift) + b.total * np.exp(b.shift - shift)
    return LogSum(shift, complex(total), a.count + b.count)


def tree_reduce(parts: Sequence[LogSum]) -> LogSum:
    """
    Попарне деревоподібне згортання часткових сум.

    Пари залежать лише від позиції кожної частини, тож при фіксованому
    розбитті результат побітово однаковий незалежно від того, як частини отримано.
    """
    level: List[LogSum] = list(parts)
    if not level:
        return EMPTY
    while len(level) > 1:
        nxt = [combine(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def sequential_reduce(parts: Sequence[LogSum]) -> LogSum:
    result = EMPTY
    for part in parts:
        result = combine(result, part)
    return result


def conjugate(a: LogSum) -> LogSum:
    return LogSum(a.shift, complex(np.conj(a.total)), a.count)


def hermitian_part(a: LogSum) -> LogSum:
    """a + conj(a)."""
    return LogSum(a.shift, complex(2 * a.total.real), 2 * a.count)


def ratio(numerator: LogSum, denominator: LogSum) -> complex:
    """exp(log N - log D), єдине місце, де зустрічаються дві суми."""
    return complex(np.exp(numerator.log() - denominator.log()))
