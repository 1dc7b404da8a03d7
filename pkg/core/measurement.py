"""
Ідеальна гомодинна постселекція та точні середні стабілізаторів-зсувів.

Для вхідної суміші Σ c_m G_m, схеми A, необов'язкових втрат (T, R) та
постселекції p-квадратур P_H на результатах η середнє D(r̄) на
невиміряних модах P_C дорівнює

    Σ c_m g_m(η; J) exp(iJᵀμ_C - ½ Jᵀγ_CC J) / Σ c_m g_m(η; 0)

де J = -Ω r̄, g_m(η; J) = det(2πγ_HH)^(-1/2) exp(-½ vᵀγ_HH⁻¹v),
v = η - μ_H - iγ_HC J, а (μ, γ) перетворені середнє та коваріація.
Кути вимірювання вбудовуються в A як фінальні повороти, тож P_H завжди
вибирає рядки p.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import cho_solve

from core.circuits import SymplecticCircuit, identity, rotation, sequence
from core.errors import (CoverageError, DimensionError, SimulationError,
                         SingularMeasurementError, ValidationError,
                         ZeroProbabilityError)
from core.phase_space import (DEFAULT_CHUNK, GaussianSumState, LossSpec,
                              StateLike, cholesky_checked, omega)
from core.reduction import (LogSum, combine, conjugate, hermitian_part,
                            logsumexp_complex, ratio, sequential_reduce,
                            tree_reduce)

logger = logging.getLogger(__name__)

SQRT_PI = np.sqrt(np.pi)
DETERMINISTIC_CHUNK = 16384
MIN_DENSITY = 1e-300
MAGNITUDE_SLACK = 1e-9
IMAG_WARN = 1e-9
COVERAGE_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementPlan:
    """
    Гомодинні вимірювання: трійки (мода, θ, η̃) на регістрі з n_total мод.

    θ = 0 вимірює p; загалом η_θ = p·cos θ − x·sin θ. ``window`` залишено для
    скінченних вікон постселекції; реалізовано лише ідеальний випадок (None).
    """

    measured: Tuple[Tuple[int, float, float], ...]
    n_total: int
    window: Optional[float] = None

    def __post_init__(self):
        measured = tuple((int(m), float(th), float(eta)) for m, th, eta in self.measured)
        modes = [m for m, _, _ in measured]
        if len(set(modes)) != len(modes):
            raise ValidationError(f"measured modes must be distinct, got {modes}")
        if len(modes) >= self.n_total:
            raise ValidationError(f"at least one mode must stay unmeasured ({len(modes)} of {self.n_total})")
        for m in modes:
            if not 0 <= m < self.n_total:
                raise DimensionError(f"measured mode {m} out of range for {self.n_total} modes")
        object.__setattr__(self, 'measured', measured)

    @classmethod
    def none(cls, n_total: int) -> 'MeasurementPlan':
        return cls((), n_total)

    @classmethod
    def p_homodyne(cls, mode: int, outcome: float, n_total: int) -> 'MeasurementPlan':
        return cls(((mode, 0.0, outcome),), n_total)

    @property
    def measured_modes(self) -> List[int]:
        return [m for m, _, _ in self.measured]

    @property
    def unmeasured_modes(self) -> List[int]:
        measured = set(self.measured_modes)
        return [m for m in range(self.n_total) if m not in measured]

    @property
    def outcomes(self) -> np.ndarray:
        return np.array([eta for _, _, eta in self.measured], dtype=float)

    @property
    def h_rows(self) -> np.ndarray:
        """P_H: рядки p виміряних мод."""
        return np.array([2 * m + 1 for m in self.measured_modes], dtype=int)

    @property
    def c_rows(self) -> np.ndarray:
        """P_C: обидва рядки кожної невиміряної моди."""
        return np.array([r for m in self.unmeasured_modes for r in (2 * m, 2 * m + 1)], dtype=int)

    def with_outcomes(self, outcomes: Sequence[float]) -> 'MeasurementPlan':
        outcomes = np.atleast_1d(outcomes)
        if outcomes.size != len(self.measured):
            raise DimensionError(f"need {len(self.measured)} outcomes, got {outcomes.size}")
        return MeasurementPlan(
            tuple((m, th, float(eta)) for (m, th, _), eta in zip(self.measured, outcomes)),
            self.n_total, self.window,
        )

    def angles_as_circuit(self) -> SymplecticCircuit:
        rotations = [rotation(m, -th, self.n_total) for m, th, _ in self.measured if th != 0.0]
        return sequence(rotations) if rotations else identity(self.n_total)


@dataclass(frozen=True)
class StabilizerSpec:
    """Зсув r̄ на невиміряних модах (у їхньому порядку) та довільна мітка."""

    displacement: Tuple[float, ...]
    label: str = ''

    def __post_init__(self):
        disp = tuple(float(v) for v in np.atleast_1d(self.displacement))
        if not disp or len(disp) % 2:
            raise DimensionError(f"displacement must have even length, got {len(disp)}")
        if not np.all(np.isfinite(disp)):
            raise ValidationError(f"displacement must be finite, got {disp}")
        object.__setattr__(self, 'displacement', disp)

    @property
    def n_modes(self) -> int:
        return len(self.displacement) // 2

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.displacement)

    @property
    def J(self) -> np.ndarray:
        return -omega(self.n_modes) @ self.vector

    def inverse(self) -> 'StabilizerSpec':
        return StabilizerSpec(tuple(-v for v in self.displacement), f"({self.label})^-1")


@dataclass(frozen=True)
class StabilizerResult:
    value: complex
    outcome_density: float
    n_terms: int
    log_condition: float
    label: str = ''

    @property
    def magnitude(self) -> float:
        return float(abs(self.value))

    def as_dict(self) -> Dict[str, float]:
        return {
            'label': self.label,
            're': float(np.real(self.value)),
            'im': float(np.imag(self.value)),
            'abs': self.magnitude,
            'outcome_density': self.outcome_density,
            'n_terms': self.n_terms,
            'log_condition': self.log_condition,
        }


class _CovBlock:
    """Розкладені блоки однієї перетвореної коваріації."""

    def __init__(self, cov: np.ndarray, h: np.ndarray, c: np.ndarray):
        self.gamma_cc = cov[np.ix_(c, c)]
        if h.size:
            gamma_hh = cov[np.ix_(h, h)]
            self.gamma_hc = cov[np.ix_(h, c)]
            self.factor = cholesky_checked(gamma_hh, error=SingularMeasurementError)
            self.log_norm = -0.5 * (2 * np.sum(np.log(np.diag(self.factor[0]))) + h.size * np.log(2 * np.pi))
        else:
            self.gamma_hc = np.zeros((0, c.size))
            self.factor = None
            self.log_norm = 0.0


class StabilizerEngine:
    """
    Точний рушій середніх для одного набору (вхід, схема, втрати, виміряні моди).

    Блоки коваріацій розкладаються один раз; кожен виклик проходить доданки
    входу порціями та згортає чисельники і спільний знаменник комплексним
    log-sum-exp.

    Args:
        source: Матеріалізований стан або лінивий ProductState
        circuit: SymplecticCircuit (None означає тотожну схему)
        loss: LossSpec після схеми або None
        plan: План вимірювань; його результати є цілями постселекції за замовчуванням
        threads: Кількість потоків по порціях доданків
        reduction: 'fast' або 'deterministic' (фіксовані порції, парне дерево)
        hermitian_pairs: Обчислювати лише один доданок кожної спряженої пари,
            а партнера відновлювати спряженням (див. ``conjugate_partners``)
    """

    def __init__(self, source: StateLike, circuit: Optional[SymplecticCircuit], loss: Optional[LossSpec],
                 plan: MeasurementPlan, threads: int = 1, reduction: str = 'fast',
                 chunk_size: Optional[int] = None, hermitian_pairs: bool = False):
        if plan.window is not None:
            raise NotImplementedError("finite postselection windows are not implemented")
        if plan.n_total != source.n_modes:
            raise DimensionError(f"plan is for {plan.n_total} modes, input has {source.n_modes}")
        if reduction not in ('fast', 'deterministic'):
            raise ValidationError(f"reduction must be 'fast' or 'deterministic', got {reduction!r}")
        circuit = identity(source.n_modes) if circuit is None else circuit
        if circuit.n_modes != source.n_modes:
            raise DimensionError(f"circuit acts on {circuit.n_modes} modes, input has {source.n_modes}")
        if loss is not None and loss.n_modes != source.n_modes:
            raise DimensionError(f"loss is defined for {loss.n_modes} modes, input has {source.n_modes}")

        self.source = source
        self.plan = plan
        self.loss = loss
        self.threads = max(1, int(threads))
        self.reduction = reduction
        self.chunk_size = chunk_size or (DETERMINISTIC_CHUNK if reduction == 'deterministic' else DEFAULT_CHUNK)
        self.hermitian_pairs = hermitian_pairs
        if hermitian_pairs:
            # raises ValidationError for a state without a known pair layout
            source.conjugate_partners(0, 0)

        matrix = plan.angles_as_circuit().matrix @ circuit.matrix
        noise = np.zeros((source.dim, source.dim))
        if loss is not None and not loss.is_identity():
            t = loss.transmission_matrix()
            matrix = t @ matrix
            noise = loss.added_noise()
        self.matrix = matrix
        self.h = plan.h_rows
        self.c = plan.c_rows
        covs = np.einsum('ij,cjk,lk->cil', matrix, source.covs, matrix) + noise[None]
        covs = 0.5 * (covs + np.transpose(covs, (0, 2, 1)))
        self.blocks = [_CovBlock(cov, self.h, self.c) for cov in covs]

    @property
    def n_terms(self) -> int:
        return self.source.n_terms

    def _chunk_sums(self, chunk: GaussianSumState, eta: np.ndarray, Js: np.ndarray) -> Tuple[List[LogSum], LogSum, float, float]:
        means = chunk.means @ self.matrix.T
        mu_h = means[:, self.h]
        mu_c = means[:, self.c]
        logw = chunk.log_weights()
        z_den = np.empty(chunk.n_terms, dtype=complex)
        z_num = np.empty((Js.shape[0], chunk.n_terms), dtype=complex)
        for b, block in enumerate(self.blocks):
            idx = np.flatnonzero(chunk.cov_index == b)
            if idx.size == 0:
                continue
            u = eta[None, :] - mu_h[idx]
            lin = mu_c[idx] @ Js.T
            quad_c = 0.5 * np.einsum('si,ij,sj->s', Js, block.gamma_cc, Js)
            if block.factor is not None:
                log_g0 = block.log_norm - 0.5 * np.sum(u * cho_solve(block.factor, u.T).T, axis=1)
                z_den[idx] = logw[idx] + log_g0
                shift = Js @ block.gamma_hc.T
                for s in range(Js.shape[0]):
                    v = u - 1j * shift[s][None, :]
                    log_g = block.log_norm - 0.5 * np.sum(v * cho_solve(block.factor, v.T).T, axis=1)
                    z_num[s, idx] = logw[idx] + log_g + 1j * lin[:, s] - quad_c[s]
            else:
                z_den[idx] = logw[idx]
                z_num[:, idx] = logw[idx][None, :] + 1j * lin.T - quad_c[:, None]
        finite = z_den.real[np.isfinite(z_den.real)]
        hi = float(finite.max()) if finite.size else -np.inf
        lo = float(finite.min()) if finite.size else np.inf
        return [logsumexp_complex(z) for z in z_num], logsumexp_complex(z_den), hi, lo

    def _pair_chunk_sums(self, start: int, stop: int, eta: np.ndarray, Js: np.ndarray) -> Tuple[List[LogSum], LogSum, float, float]:
        """
        Суми по доданках [start, stop) з одного доданка кожної спряженої пари.

        При дійсних коваріаціях і результатах партнер m̄ доданка m дає
        conj(f_m(-J)) у чисельник при J, тож збережені доданки обчислюються
        при ±J. Самоспряжені доданки входять з половинною вагою.
        """
        index = np.arange(start, stop, dtype=np.int64)
        partners = self.source.conjugate_partners(start, stop)
        keep = np.flatnonzero(partners >= index)
        kept = self.source.slice(start, stop).take(keep)
        half = np.where(partners[keep] == index[keep], np.log(0.5), 0.0)
        kept = kept.replace(log_scales=kept.log_scales + half, validate=False)
        nums, den, hi, lo = self._chunk_sums(kept, eta, np.vstack([Js, -Js]))
        n = Js.shape[0]
        nums = [combine(nums[s], conjugate(nums[n + s])) for s in range(n)]
        return nums, hermitian_part(den), hi, lo

    def sums(self, stabs: Sequence[StabilizerSpec], outcomes: Optional[Sequence[float]] = None) -> Tuple[List[LogSum], LogSum, float]:
        """
        Сирі суми чисельників та знаменника.

        Returns:
            (чисельники по стабілізаторах, знаменник, розкид логарифмів модулів)
        """
        eta = self.plan.outcomes if outcomes is None else np.atleast_1d(np.asarray(outcomes, dtype=float))
        if eta.size != self.h.size:
            raise DimensionError(f"need {self.h.size} outcomes, got {eta.size}")
        n_c = self.c.size
        for stab in stabs:
            if stab.vector.size != n_c:
                raise DimensionError(f"stabilizer {stab.label!r} has length {stab.vector.size}, unmeasured modes need {n_c}")
        Js = np.array([stab.J for stab in stabs]).reshape(len(stabs), n_c)

        if self.hermitian_pairs:
            n = self.n_terms
            bounds = [(s, min(s + self.chunk_size, n)) for s in range(0, max(n, 1), self.chunk_size)]
            work = lambda b: self._pair_chunk_sums(b[0], b[1], eta, Js)
        else:
            bounds = self.source.chunks(self.chunk_size)
            work = lambda ch: self._chunk_sums(ch, eta, Js)
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                parts = list(pool.map(work, bounds))
        else:
            parts = [work(b) for b in bounds]

        reduce_parts = tree_reduce if self.reduction == 'deterministic' else sequential_reduce
        numerators = [reduce_parts([p[0][s] for p in parts]) for s in range(len(stabs))]
        denominator = reduce_parts([p[1] for p in parts])
        hi = max(p[2] for p in parts)
        lo = min(p[3] for p in parts)
        spread = hi - lo if np.isfinite(hi) and np.isfinite(lo) else 0.0
        return numerators, denominator, spread

    def evaluate(self, stabs: Sequence[StabilizerSpec], outcomes: Optional[Sequence[float]] = None,
                 frame_shift: Optional[np.ndarray] = None) -> List[StabilizerResult]:
        numerators, denominator, spread = self.sums(stabs, outcomes)
        if denominator.total == 0 or abs(denominator.total) < MIN_DENSITY or denominator.log().real < np.log(MIN_DENSITY):
            raise ZeroProbabilityError(f"outcome {self.plan.outcomes if outcomes is None else outcomes} has zero density")
        density = float(np.real(denominator.value()))
        results = []
        for stab, num in zip(stabs, numerators):
            value = ratio(num, denominator)
            if not np.any(stab.J):
                # identity operator: both sums coincide term by term
                if abs(value - 1.0) > MAGNITUDE_SLACK:
                    raise SimulationError(f"identity stabilizer evaluated to {value!r}")
                value = 1.0 + 0j
            if frame_shift is not None:
                value *= np.exp(-1j * stab.J @ np.asarray(frame_shift, dtype=float))
            if abs(value) > 1 + MAGNITUDE_SLACK:
                logger.warning(f"|<{stab.label}>| = {abs(value):.12f} exceeds 1")
            results.append(StabilizerResult(complex(value), density, self.n_terms, spread, stab.label))
        return results

    def density(self, outcomes: Optional[Sequence[float]] = None) -> float:
        _, denominator, _ = self.sums([], outcomes)
        return float(np.real(denominator.value()))


def stabilizer_evs(source: StateLike, circuit: Optional[SymplecticCircuit], loss: Optional[LossSpec],
                   plan: MeasurementPlan, stabs: Sequence[StabilizerSpec], frame_shift: Optional[np.ndarray] = None,
                   **engine_kwargs) -> List[StabilizerResult]:
    """Кілька стабілізаторів за один прохід по доданках входу."""
    engine = StabilizerEngine(source, circuit, loss, plan, **engine_kwargs)
    return engine.evaluate(stabs, frame_shift=frame_shift)


def stabilizer_ev(source: StateLike, circuit: Optional[SymplecticCircuit], loss: Optional[LossSpec],
                  plan: MeasurementPlan, stab: StabilizerSpec, frame_shift: Optional[np.ndarray] = None,
                  **engine_kwargs) -> StabilizerResult:
    """
    Точне ⟨D(r̄)⟩ на невиміряних модах після схеми, втрат та постселекції.

    Raises:
        SingularMeasurementError: γ_HH деякого доданка не додатно визначена
        ZeroProbabilityError: Густина постселектованого результату нульова
    """
    return stabilizer_evs(source, circuit, loss, plan, [stab], frame_shift, **engine_kwargs)[0]


def homodyne_density(source: StateLike, circuit: Optional[SymplecticCircuit], loss: Optional[LossSpec],
                     plan: MeasurementPlan, **engine_kwargs) -> float:
    """Σ c_m g_m(η̃; 0): спільна густина постселектованих результатів."""
    return StabilizerEngine(source, circuit, loss, plan, **engine_kwargs).density()


def average_stabilizer_ev(source: StateLike, circuit: Optional[SymplecticCircuit], loss: Optional[LossSpec],
                          plan_template: MeasurementPlan, stab: StabilizerSpec, grid: Sequence[float],
                          check_coverage: bool = True, **engine_kwargs) -> complex:
    """
    Середнє, зважене за результатами, ∫ p(η)⟨S⟩(η) dη / ∫ p(η) dη на одновимірній сітці.

    Відліки чисельника беруться як сирі суми (p·⟨S⟩), тож нулі густини не
    потребують окремої обробки.

    Raises:
        CoverageError: Густина на краях сітки перевищує 1e-12 від максимуму
    """
    if len(plan_template.measured) != 1:
        raise ValidationError("average_stabilizer_ev integrates over exactly one measured quadrature")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ValidationError("outcome grid must be 1-D with at least 3 points")
    engine = StabilizerEngine(source, circuit, loss, plan_template, **engine_kwargs)
    weighted = np.empty(grid.size, dtype=complex)
    density = np.empty(grid.size)
    for i, eta in enumerate(grid):
        (num,), den, _ = engine.sums([stab], [eta])
        weighted[i] = num.value()
        density[i] = np.real(den.value())
    if check_coverage:
        edge = max(abs(density[0]), abs(density[-1]))
        if edge > COVERAGE_TOL * np.max(np.abs(density)):
            raise CoverageError(f"density at grid ends is {edge:.2e} of max {np.max(density):.2e}; widen the grid")
    norm = simpson(density, x=grid)
    return complex(simpson(weighted.real, x=grid) + 1j * simpson(weighted.imag, x=grid)) / norm


def witness_ev(source: StateLike, circuit: Optional[SymplecticCircuit], loss: Optional[LossSpec],
               plan: MeasurementPlan, stabs: Sequence[StabilizerSpec], constant: float = 2.0,
               frame_shift: Optional[np.ndarray] = None, **engine_kwargs) -> float:
    """constant - Σ Re⟨S_i⟩; уявні частини понад 1e-9 потрапляють у лог."""
    results = stabilizer_evs(source, circuit, loss, plan, stabs, frame_shift, **engine_kwargs)
    return witness_from_results(results, constant)


def witness_from_results(results: Sequence[StabilizerResult], constant: float = 2.0) -> float:
    for r in results:
        if abs(np.imag(r.value)) > IMAG_WARN:
            logger.warning(f"witness term {r.label!r} has imaginary part {np.imag(r.value):.3e}; using real part")
    return float(constant - sum(np.real(r.value) for r in results))


# --- stabilizer presets -----------------------------------------------------

def single_mode(rbar: Tuple[float, float], label: str) -> StabilizerSpec:
    return StabilizerSpec(tuple(rbar), label)


def qubit_x2() -> StabilizerSpec:
    """X̂²: position shift by 2√π."""
    return single_mode((2 * SQRT_PI, 0.0), 'X^2')


def qubit_z2() -> StabilizerSpec:
    """Ẑ²: momentum shift by 2√π."""
    return single_mode((0.0, 2 * SQRT_PI), 'Z^2')


def pauli_x() -> StabilizerSpec:
    return single_mode((SQRT_PI, 0.0), 'X')


def pauli_z() -> StabilizerSpec:
    return single_mode((0.0, SQRT_PI), 'Z')


def sensor_x() -> StabilizerSpec:
    """x-стабілізатор сенсорної решітки, зсув √(2π)."""
    return single_mode((np.sqrt(2 * np.pi), 0.0), 'Sx')


def sensor_p() -> StabilizerSpec:
    return single_mode((0.0, np.sqrt(2 * np.pi)), 'Sp')


def sensor_stabilizers() -> List[StabilizerSpec]:
    return [sensor_x(), sensor_p()]


PRESETS = {
    'X2': qubit_x2, 'Z2': qubit_z2, 'X': pauli_x, 'Z': pauli_z, 'Sx': sensor_x, 'Sp': sensor_p,
}


def multimode(n_modes: int, shifts: Dict[int, Tuple[float, float]], label: str = '') -> StabilizerSpec:
    """Добуток зсувів: ``shifts`` зіставляє позиції невиміряної моди її зсув (x, p)."""
    vec = np.zeros(2 * n_modes)
    for mode, (dx, dp) in shifts.items():
        if not 0 <= mode < n_modes:
            raise DimensionError(f"mode {mode} out of range for {n_modes} modes")
        vec[2 * mode], vec[2 * mode + 1] = dx, dp
    return StabilizerSpec(tuple(vec), label)


def propagate_stabilizer(circuit: SymplecticCircuit, plan: MeasurementPlan, input_shift: np.ndarray,
                         label: str = '', tol: float = 1e-9) -> StabilizerSpec:
    """
    Стабілізатор на виході, отриманий зі стабілізатора на вході.

    Вхідний D(v) після схеми стає D(Av); він переживає p-гомодин моди m,
    якщо (Av) не має там p-компоненти, і далі діє як своє обмеження на
    невиміряні моди (з точністю до фази результату, що зникає при η = 0).
    """
    v = plan.angles_as_circuit().matrix @ circuit.matrix @ np.asarray(input_shift, dtype=float)
    if plan.h_rows.size and np.max(np.abs(v[plan.h_rows])) > tol:
        raise ValidationError(f"stabilizer {label!r} does not commute with the measured quadratures")
    return StabilizerSpec(tuple(v[plan.c_rows]), label)


def _input_x_shifts(n_modes: int, weights: Dict[int, int]) -> np.ndarray:
    vec = np.zeros(2 * n_modes)
    for mode, w in weights.items():
        vec[2 * mode] = w * np.sqrt(2 * np.pi)
    return vec


def linear3_plan(outcome: float = 0.0) -> MeasurementPlan:
    """p-гомодин моди 2 чотиримодової схеми лінійного кластера."""
    return MeasurementPlan.p_homodyne(2, outcome, 4)


def linear3_witness_stabilizers(circuit: SymplecticCircuit, plan: Optional[MeasurementPlan] = None) -> List[StabilizerSpec]:
    """
    Стабілізатори кластера на вихідних модах (0, 1, 3) у порядку I Z X, X Z I, Z X Z.

    Кожен проведено крізь схему від стабілізаторів сенсорної решітки чотирьох входів.
    """
    plan = plan or linear3_plan()
    return [
        propagate_stabilizer(circuit, plan, _input_x_shifts(4, {2: 1}), 'I1 Z2 X3'),
        propagate_stabilizer(circuit, plan, _input_x_shifts(4, {1: 1}), 'X1 Z2 I3'),
        propagate_stabilizer(circuit, plan, _input_x_shifts(4, {0: 1, 3: -1}), 'Z1 X2 Z3'),
    ]


def linear3_bar_witness_stabilizers(circuit: SymplecticCircuit, plan: Optional[MeasurementPlan] = None) -> List[StabilizerSpec]:
    """
    Оператори свідка трикутного графа Z Z X, X Z Z, Z X Z, отримані зі
    стабілізаторів лінійного кластера додаванням Z на протилежній крайній моді.
    """
    izx, xzi, zxz = linear3_witness_stabilizers(circuit, plan)
    z_first = np.array([0.0, SQRT_PI, 0.0, 0.0, 0.0, 0.0])
    z_last = np.array([0.0, 0.0, 0.0, 0.0, 0.0, SQRT_PI])
    return [
        StabilizerSpec(tuple(izx.vector + z_first), 'Z1 Z2 X3'),
        StabilizerSpec(tuple(xzi.vector + z_last), 'X1 Z2 Z3'),
        StabilizerSpec(zxz.displacement, 'Z1 X2 Z3'),
    ]
