"""
Симплектичні матриці пасивної оптики, одномодових стискачів та схем
зшивання, побудованих з них.

Схема діє на квадратури як r̂' = A r̂; стани перетворюються як μ → Aμ,
γ → AγAᵀ. ``compose(a, b)`` спочатку застосовує ``a``.
"""
import hashlib
import json
import logging
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from core.errors import DimensionError, ValidationError
from core.phase_space import check_symplectic, omega

logger = logging.getLogger(__name__)

DUMBBELL_MATRIX = np.array([
    [1, 0, 0, -1],
    [0, 1, 1, 0],
    [0, -1, 1, 0],
    [1, 0, 0, 1],
]) / np.sqrt(2)

# squeezing that restores the √π lattice after the fusion beamsplitter
LINEAR3_INLINE_SQUEEZE = -0.5 * np.log(2.0)


class SymplecticCircuit:
    """
    Дійсна симплектична матриця 2N x 2N разом зі списком елементів, з яких її зібрано.

    Args:
        n_modes: Кількість мод N
        matrix: Матриця A розміру 2N x 2N
        elements: Впорядковані описи елементів {"element", "modes", "parameter"}
    """

    def __init__(self, n_modes: int, matrix: np.ndarray, elements: Optional[Sequence[Dict[str, Any]]] = None):
        matrix = np.array(matrix, dtype=float)
        if matrix.shape != (2 * n_modes, 2 * n_modes):
            raise DimensionError(f"matrix must be {2 * n_modes}x{2 * n_modes}, got {matrix.shape}")
        check_symplectic(matrix)
        matrix.setflags(write=False)
        self.n_modes = n_modes
        self.matrix = matrix
        self.elements: List[Dict[str, Any]] = [dict(e) for e in (elements or [])]

    def then(self, other: 'SymplecticCircuit') -> 'SymplecticCircuit':
        return compose(self, other)

    def inverse(self) -> 'SymplecticCircuit':
        """A⁻¹ = -Ω Aᵀ Ω."""
        om = omega(self.n_modes)
        return SymplecticCircuit(self.n_modes, -om @ self.matrix.T @ om,
                                 [{'element': 'matrix', 'modes': list(range(self.n_modes)),
                                   'parameter': (-om @ self.matrix.T @ om).tolist()}])

    def to_dict(self) -> Dict[str, Any]:
        return {'n_modes': self.n_modes, 'elements': self.elements}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def digest(self) -> str:
        """Короткий хеш матриці для маніфесту результатів."""
        return hashlib.sha1(np.ascontiguousarray(self.matrix).tobytes()).hexdigest()[:10]

    def __repr__(self) -> str:
        names = ', '.join(e['element'] for e in self.elements)
        return f"SymplecticCircuit(n_modes={self.n_modes}, elements=[{names}])"


def _check_mode(mode: int, n_modes: int) -> None:
    if not 0 <= mode < n_modes:
        raise DimensionError(f"mode {mode} out of range for {n_modes} modes")


def identity(n_modes: int) -> SymplecticCircuit:
    return SymplecticCircuit(n_modes, np.eye(2 * n_modes), [])


def _embed_block(n_modes: int, modes: Sequence[int], block: np.ndarray) -> np.ndarray:
    matrix = np.eye(2 * n_modes)
    rows = np.array([[2 * m, 2 * m + 1] for m in modes]).ravel()
    matrix[np.ix_(rows, rows)] = block
    return matrix


def beamsplitter(i: int, j: int, theta: float, n_modes: Optional[int] = None) -> SymplecticCircuit:
    """
    B_ij = [[cos θ 𝟙, -sin θ 𝟙], [sin θ 𝟙, cos θ 𝟙]] на модах (i, j); θ = π/4 дає збалансований світлоподільник.
    """
    n_modes = max(i, j) + 1 if n_modes is None else n_modes
    _check_mode(i, n_modes)
    _check_mode(j, n_modes)
    if i == j:
        raise ValidationError("beamsplitter needs two different modes")
    c, s = np.cos(theta), np.sin(theta)
    block = np.kron(np.array([[c, -s], [s, c]]), np.eye(2))
    return SymplecticCircuit(n_modes, _embed_block(n_modes, [i, j], block),
                             [{'element': 'beamsplitter', 'modes': [i, j], 'parameter': float(theta)}])


def rotation(i: int, theta: float, n_modes: Optional[int] = None) -> SymplecticCircuit:
    """Поворот у фазовому просторі [[cos θ, -sin θ], [sin θ, cos θ]]; θ = π/2 переводить (x, p) → (-p, x)."""
    n_modes = i + 1 if n_modes is None else n_modes
    _check_mode(i, n_modes)
    c, s = np.cos(theta), np.sin(theta)
    return SymplecticCircuit(n_modes, _embed_block(n_modes, [i], np.array([[c, -s], [s, c]])),
                             [{'element': 'rotation', 'modes': [i], 'parameter': float(theta)}])


def squeezer(i: int, xi: float, n_modes: Optional[int] = None) -> SymplecticCircuit:
    """diag(e^{-ξ}, e^{ξ}); вакуум переходить у ½·diag(e^{-2ξ}, e^{2ξ})."""
    n_modes = i + 1 if n_modes is None else n_modes
    _check_mode(i, n_modes)
    return SymplecticCircuit(n_modes, _embed_block(n_modes, [i], np.diag([np.exp(-xi), np.exp(xi)])),
                             [{'element': 'squeezer', 'modes': [i], 'parameter': float(xi)}])


def compose(a: SymplecticCircuit, b: SymplecticCircuit) -> SymplecticCircuit:
    """Схема, що застосовує ``a``, а потім ``b``: матриця b·a."""
    if a.n_modes != b.n_modes:
        raise DimensionError(f"cannot compose circuits on {a.n_modes} and {b.n_modes} modes")
    return SymplecticCircuit(a.n_modes, b.matrix @ a.matrix, a.elements + b.elements)


def sequence(circuits: Sequence[SymplecticCircuit]) -> SymplecticCircuit:
    """Згортка ``compose`` по схемах у порядку застосування."""
    if not circuits:
        raise ValidationError("empty circuit sequence")
    return reduce(compose, circuits)


def dumbbell_cz() -> SymplecticCircuit:
    """
    Двомодова схема зшивання, що діє як GKP CZ на сенсорних входах:
    (1/√2)[[1,0,0,-1],[0,1,1,0],[0,-1,1,0],[1,0,0,1]].
    """
    return SymplecticCircuit(2, DUMBBELL_MATRIX, [{'element': 'dumbbell_cz', 'modes': [0, 1], 'parameter': None}])


def dumbbell_decomposition(i: int = 0, j: int = 1, n_modes: Optional[int] = None,
                           phase: float = np.pi / 2, bs_angle: float = np.pi / 4) -> SymplecticCircuit:
    """
    Гантель як оптичні елементи: R_j(-φ), B_ij(θ), R_j(φ).

    За замовчуванням φ = π/2, θ = π/4 збігається з ``dumbbell_cz`` на модах (i, j).
    """
    n_modes = max(i, j) + 1 if n_modes is None else n_modes
    return sequence(_dumbbell_elements(i, j, n_modes, phase, bs_angle))


def _dumbbell_elements(i: int, j: int, n_modes: int, phase: float, bs_angle: float) -> List[SymplecticCircuit]:
    return [
        rotation(j, -phase, n_modes),
        beamsplitter(i, j, bs_angle, n_modes),
        rotation(j, phase, n_modes),
    ]


def embed(circuit: SymplecticCircuit, n_total: int, modes: Sequence[int]) -> SymplecticCircuit:
    """Розміщує k-модову схему на вказаних модах регістра з n_total мод."""
    if len(modes) != circuit.n_modes or len(set(modes)) != len(modes):
        raise DimensionError(f"need {circuit.n_modes} distinct modes, got {list(modes)}")
    for m in modes:
        _check_mode(m, n_total)
    elements = [{'element': 'embed', 'modes': list(modes), 'parameter': circuit.to_dict()}]
    return SymplecticCircuit(n_total, _embed_block(n_total, modes, circuit.matrix), elements)


def linear3_circuit(inline_squeeze: float = LINEAR3_INLINE_SQUEEZE, phase: float = np.pi / 2,
                    bs_angle: float = np.pi / 4, fusion_angle: float = np.pi / 4,
                    output_phase: float = np.pi / 2) -> SymplecticCircuit:
    """
    Чотири сенсорні входи перетворюються на трьохмодовий лінійний кластер.

    Моди (0, 1) та (2, 3) зшиваються гантелями в пари Белла, моди 1 та 2
    зливаються на світлоподільнику, мода 2 вимірюється гомодинно (p).
    Стискач на моді 1 відновлює масштаб решітки, а вихідні повороти
    зводять стабілізатори до X/Z форми лінійного кластера на модах (0, 1, 3).
    Нульові параметри дають тотожну схему.
    """
    n = 4
    fusion = [
        beamsplitter(1, 2, fusion_angle, n),
        squeezer(1, inline_squeeze, n),
        rotation(0, output_phase, n),
        rotation(1, output_phase, n),
        rotation(3, output_phase, n),
    ]
    return sequence(_dumbbell_elements(0, 1, n, phase, bs_angle) + _dumbbell_elements(2, 3, n, phase, bs_angle) + fusion)


def compensate_displacement(circuit: Any, rbar: np.ndarray) -> np.ndarray:
    """A·r̄: куди потрапляє зсув входів після схеми."""
    matrix = np.asarray(getattr(circuit, 'matrix', circuit), dtype=float)
    rbar = np.asarray(rbar, dtype=float)
    if rbar.shape != (matrix.shape[0],):
        raise DimensionError(f"displacement has shape {rbar.shape}, circuit needs ({matrix.shape[0]},)")
    return matrix @ rbar


def _element_circuit(element: Dict[str, Any], n_modes: int) -> SymplecticCircuit:
    kind = element.get('element')
    modes = element.get('modes', [])
    param = element.get('parameter')
    if kind == 'beamsplitter':
        return beamsplitter(modes[0], modes[1], param, n_modes)
    if kind == 'rotation':
        return rotation(modes[0], param, n_modes)
    if kind == 'squeezer':
        return squeezer(modes[0], param, n_modes)
    if kind == 'dumbbell_cz':
        return embed(dumbbell_cz(), n_modes, modes) if n_modes != 2 or list(modes) != [0, 1] else dumbbell_cz()
    if kind == 'embed':
        return embed(circuit_from_dict(param), n_modes, modes)
    if kind == 'matrix':
        return SymplecticCircuit(n_modes, np.array(param), [element])
    raise ValidationError(f"unknown circuit element {kind!r}")


def circuit_from_dict(data: Dict[str, Any]) -> SymplecticCircuit:
    n_modes = int(data['n_modes'])
    elements = data.get('elements', [])
    if not elements:
        return identity(n_modes)
    return sequence([_element_circuit(e, n_modes) for e in elements])


def from_json(text: str) -> SymplecticCircuit:
    return circuit_from_dict(json.loads(text))
