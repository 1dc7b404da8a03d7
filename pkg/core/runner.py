import copy
import json
import logging
import os
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy
from scipy.integrate import simpson
from tqdm import tqdm

from core.circuits import SymplecticCircuit, circuit_from_dict, dumbbell_cz, linear3_circuit
from core.config import ExperimentConfig, validate_config
from core.errors import NumericalError, SimulationError
from core.fock_oracle import fock_bred_gkp, fock_displacement_ev, fock_loss
from core.grn import (SQRT_PI, grn_bell_p_ev, grn_bell_x_ev, grn_outcome_density,
                      sigma_from_ev)
from core.measurement import (PRESETS as STABILIZER_PRESETS, MeasurementPlan,
                              StabilizerEngine, StabilizerResult, StabilizerSpec,
                              average_stabilizer_ev, linear3_bar_witness_stabilizers,
                              linear3_plan, linear3_witness_stabilizers, qubit_x2,
                              qubit_z2, sensor_p, sensor_x, witness_from_results)
from core.phase_space import (DEFAULT_CHUNK, GaussianSumState, LossSpec, PhaseSpaceConventions,
                              ProductState, StateLike, symplectic_residual)
from states import BUILDERS, BreedingParams, bred_gkp, sensor_offset

logger = logging.getLogger(__name__)

Rows = Dict[str, List[Dict[str, Any]]]
FLOAT_FORMAT = '%.17g'
GRN_PERIOD_POINTS = 257
COVERAGE_POINTS = 41
COVERAGE_TOL = 1e-12
NUMERICAL_ERRORS = (np.linalg.LinAlgError, FloatingPointError, OverflowError, ZeroDivisionError)


@dataclass
class RunResult:
    results_dir: str
    files: List[str] = field(default_factory=list)
    manifest: str = ''
    n_rows: int = 0
    n_failures: int = 0

    @property
    def ok(self) -> bool:
        return self.n_failures == 0


def as_simulation_error(e: Exception) -> SimulationError:
    """Сирі збої numpy/scipy в одній точці сітки стають NumericalError."""
    if isinstance(e, SimulationError):
        return e
    return NumericalError(f"{type(e).__name__}: {e}")


def git_revision() -> Optional[str]:
    try:
        out = subprocess.run(['git', 'rev-parse', 'HEAD'], capture_output=True, text=True, timeout=5,
                             cwd=os.path.dirname(os.path.abspath(__file__)))
    except (OSError, subprocess.SubprocessError):
        return None
    if out.returncode != 0:
        return None
    return out.stdout.strip() or None


def _ev_columns(results: List[StabilizerResult]) -> Dict[str, float]:
    row = {}
    for r in results:
        row[f"{r.label}_re"] = float(np.real(r.value))
        row[f"{r.label}_im"] = float(np.imag(r.value))
    return row


def _stabilizers(cfg: ExperimentConfig, default: List[str]) -> List[StabilizerSpec]:
    return [STABILIZER_PRESETS[name]() for name in (cfg.stabilizers or default)]


def _loss(cfg: ExperimentConfig, n_modes: int) -> Optional[LossSpec]:
    if cfg.transmittance == 1.0:
        return None
    return LossSpec.amplitude_transmission(cfg.transmittance, n_modes, cfg.thermal_occupancy)


def _bred(cfg: ExperimentConfig, rounds: int, xi: float) -> GaussianSumState:
    return bred_gkp(BreedingParams(rounds=rounds, cat_amplitude=cfg.cat_amplitude, cat_squeezing=xi))


def _output_offset(cfg: ExperimentConfig, engine: StabilizerEngine, rounds: int, n_inputs: int) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Куди потрапляє зміщення сенсора для узгоджених з решіткою входів з парним 𝓜:
    зсув цілей постселекції та зсув системи відліку невиміряних мод.
    """
    if cfg.cat_amplitude is not None or rounds % 2:
        return np.zeros(engine.h.size), None
    d = engine.matrix @ np.tile(sensor_offset(rounds), n_inputs)
    return d[engine.h], d[engine.c]


class ExperimentRunner:
    """
    Запускає серії експериментів за конфігурацією та зберігає результати.

    Кожна точка сітки (𝓜, ξ) обчислюється незалежно; помилка в одній точці
    дає рядок з NaN та текстом помилки, а не зупиняє всю серію.
    """

    def __init__(self, results_dir: Optional[str] = None, threads: Optional[int] = None,
                 deterministic: Optional[bool] = None):
        """
        Args:
            results_dir: Директорія для результатів (за замовчуванням ``config.output``)
            threads: Кількість потоків, перекриває ``config.threads``
            deterministic: Примусово детермінована редукція
        """
        self.results_dir = results_dir
        self.threads = threads
        self.deterministic = deterministic

    def _effective(self, cfg: ExperimentConfig) -> ExperimentConfig:
        cfg = copy.deepcopy(cfg)
        if self.threads is not None:
            cfg.threads = int(self.threads)
        if self.deterministic:
            cfg.reduction = 'deterministic'
        if self.results_dir is not None:
            cfg.output = self.results_dir
        return validate_config(cfg)

    # --- grid -------------------------------------------------------------

    def outcome_grid(self, cfg: ExperimentConfig) -> np.ndarray:
        """Задані результати або ``sampled_outcomes`` рівномірних вибірок у їхньому діапазоні."""
        outcomes = np.asarray(cfg.outcomes, dtype=float)
        if cfg.sampled_outcomes == 0:
            return outcomes
        lo, hi = outcomes.min(), outcomes.max()
        if hi == lo:
            hi = lo + SQRT_PI
        rng = np.random.default_rng(cfg.seed)
        return np.sort(rng.uniform(lo, hi, cfg.sampled_outcomes))

    def points(self, cfg: ExperimentConfig) -> List[Dict[str, Any]]:
        if cfg.experiment == 'custom':
            return [{}]
        return [{'rounds': m, 'xi': xi} for m, xi in product(cfg.rounds, cfg.squeezing)]

    def _guarded(self, params: Dict[str, Any], table: str, fn: Callable[[], Rows]) -> Rows:
        start = time.perf_counter()
        try:
            rows = fn()
        except (SimulationError,) + NUMERICAL_ERRORS as e:
            e = as_simulation_error(e)
            logger.error(f"{table} {params}: {type(e).__name__}: {e}")
            return {table: [dict(params, error=f"{type(e).__name__}: {e}")]}
        elapsed = time.perf_counter() - start
        for table_rows in rows.values():
            for row in table_rows:
                row.setdefault('error', '')
                row['wall_time'] = elapsed
        return rows

    # --- experiments --------------------------------------------------------

    def _single_mode(self, cfg: ExperimentConfig, point: Dict[str, Any], threads: int) -> Rows:
        state = _bred(cfg, point['rounds'], point['xi'])
        engine = StabilizerEngine(state, None, _loss(cfg, 1), MeasurementPlan.none(1),
                                  threads=threads, reduction=cfg.reduction, hermitian_pairs=cfg.hermitian_pairs)
        _, frame = _output_offset(cfg, engine, point['rounds'], 1)
        results = engine.evaluate(_stabilizers(cfg, ['Sx', 'Sp']), frame_shift=frame)
        row = dict(point, alpha=state.metadata['cat_amplitude'], transmittance=cfg.transmittance)
        row.update(_ev_columns(results))
        row.update(outcome_density=results[0].outcome_density, n_terms=state.n_terms)
        return {cfg.experiment: [row]}

    def _outcome_rows(self, cfg: ExperimentConfig, point: Dict[str, Any], engine: StabilizerEngine,
                      stabs: List[StabilizerSpec], offset: Tuple[np.ndarray, Optional[np.ndarray]],
                      extra: Callable[[float, List[StabilizerResult]], Dict[str, Any]] = None) -> List[Dict[str, Any]]:
        shift, frame = offset
        rows = []
        for eta in self.outcome_grid(cfg):
            params = dict(point, outcome=float(eta))
            try:
                results = engine.evaluate(stabs, outcomes=np.atleast_1d(eta) + shift, frame_shift=frame)
            except (SimulationError,) + NUMERICAL_ERRORS as e:
                e = as_simulation_error(e)
                logger.error(f"{cfg.experiment} {params}: {type(e).__name__}: {e}")
                rows.append(dict(params, error=f"{type(e).__name__}: {e}"))
                continue
            row = dict(params)
            row.update(_ev_columns(results))
            if extra is not None:
                row.update(extra(float(eta), results))
            row.update(outcome_density=results[0].outcome_density, n_terms=engine.n_terms)
            rows.append(row)
        return rows

    def _bell_engine(self, cfg: ExperimentConfig, state: GaussianSumState, threads: int) -> StabilizerEngine:
        plan = MeasurementPlan.p_homodyne(1, 0.0, 2)
        return StabilizerEngine(ProductState([state, state]), dumbbell_cz(), _loss(cfg, 2), plan,
                                threads=threads, reduction=cfg.reduction, hermitian_pairs=cfg.hermitian_pairs)

    def _bell_homodyne(self, cfg: ExperimentConfig, point: Dict[str, Any], threads: int) -> Rows:
        state = _bred(cfg, point['rounds'], point['xi'])
        engine = self._bell_engine(cfg, state, threads)
        point = dict(point, alpha=state.metadata['cat_amplitude'])
        return {cfg.experiment: self._outcome_rows(cfg, point, engine, _stabilizers(cfg, ['X2', 'Z2']),
                                                   _output_offset(cfg, engine, point['rounds'], 2))}

    def _grn_compare(self, cfg: ExperimentConfig, point: Dict[str, Any], threads: int) -> Rows:
        """
        Пара Белла з розмножених входів проти моделі GRN, підігнаної під
        одномодові середні сенсора того самого входу.
        """
        rounds = point['rounds']
        state = _bred(cfg, rounds, point['xi'])
        single = StabilizerEngine(state, None, None, MeasurementPlan.none(1), reduction=cfg.reduction,
                                  hermitian_pairs=cfg.hermitian_pairs)
        _, frame = _output_offset(cfg, single, rounds, 1)
        sx, sp = single.evaluate([sensor_x(), sensor_p()], frame_shift=frame)
        # x noise shows up in the p-shift stabilizer and vice versa
        sigma_x = sigma_from_ev(min(sp.magnitude, 1.0))
        sigma_p = sigma_from_ev(min(sx.magnitude, 1.0))

        engine = self._bell_engine(cfg, state, threads)
        x2 = qubit_x2()
        z2 = StabilizerSpec(qubit_z2().inverse().displacement, 'Z^-2')
        point = dict(point, alpha=state.metadata['cat_amplitude'], sigma_x=sigma_x, sigma_p=sigma_p)

        def grn_columns(eta: float, _: List[StabilizerResult]) -> Dict[str, Any]:
            z = grn_bell_x_ev(sigma_x, sigma_p, eta)
            return {
                'grn_z_re': float(np.real(z)),
                'grn_z_im': float(np.imag(z)),
                'grn_x': grn_bell_p_ev(sigma_p, sigma_x),
                'grn_density': grn_outcome_density(sigma_x, sigma_p, eta),
            }

        shift, frame = _output_offset(cfg, engine, rounds, 2)
        rows = self._outcome_rows(cfg, point, engine, [x2, z2], (shift, frame), grn_columns)

        grid = np.linspace(-cfg.average_halfwidth, cfg.average_halfwidth, cfg.average_points)
        plan = MeasurementPlan.p_homodyne(1, 0.0, 2)
        average = dict(point)
        for stab in (x2, z2):
            value = average_stabilizer_ev(engine.source, dumbbell_cz(), _loss(cfg, 2), plan, stab, grid + shift[0],
                                          reduction=cfg.reduction, threads=threads,
                                          hermitian_pairs=cfg.hermitian_pairs)
            if frame is not None:
                value *= np.exp(-1j * stab.J @ frame)
            average[f"{stab.label}_avg_re"] = float(np.real(value))
            average[f"{stab.label}_avg_im"] = float(np.imag(value))
        period = np.linspace(0.0, SQRT_PI, GRN_PERIOD_POINTS)
        density = np.array([grn_outcome_density(sigma_x, sigma_p, p) for p in period])
        z_vals = np.array([grn_bell_x_ev(sigma_x, sigma_p, p) for p in period])
        z_avg = (simpson(density * z_vals.real, x=period) + 1j * simpson(density * z_vals.imag, x=period)) / simpson(density, x=period)
        average.update(grn_z_avg_re=float(z_avg.real), grn_z_avg_im=float(z_avg.imag),
                       grn_x_avg=grn_bell_p_ev(sigma_p, sigma_x))
        return {cfg.experiment: rows, f"{cfg.experiment}_average": [average]}

    def _linear3(self, cfg: ExperimentConfig, point: Dict[str, Any], threads: int) -> Rows:
        state = _bred(cfg, point['rounds'], point['xi'])
        circuit = linear3_circuit()
        plan = linear3_plan(0.0)
        engine = StabilizerEngine(ProductState([state] * 4), circuit, _loss(cfg, 4), plan,
                                  threads=threads, reduction=cfg.reduction, hermitian_pairs=cfg.hermitian_pairs)
        stabs = linear3_witness_stabilizers(circuit, plan) + linear3_bar_witness_stabilizers(circuit, plan)

        def witnesses(_: float, results: List[StabilizerResult]) -> Dict[str, Any]:
            return {'W': witness_from_results(results[:3]), 'W_bar': witness_from_results(results[3:])}

        point = dict(point, alpha=state.metadata['cat_amplitude'])
        return {cfg.experiment: self._outcome_rows(cfg, point, engine, stabs,
                                                   _output_offset(cfg, engine, point['rounds'], 4), witnesses)}

    def _fock_convergence(self, cfg: ExperimentConfig, point: Dict[str, Any], threads: int) -> Rows:
        rounds, xi = point['rounds'], point['xi']
        state = _bred(cfg, rounds, xi)
        alpha = state.metadata['cat_amplitude']
        stabs = _stabilizers(cfg, ['X2', 'Z2'])
        exact = StabilizerEngine(state, None, _loss(cfg, 1), MeasurementPlan.none(1),
                                 threads=threads, reduction=cfg.reduction, hermitian_pairs=cfg.hermitian_pairs).evaluate(stabs)
        rows = []
        for cutoff in cfg.cutoffs:
            fock = fock_bred_gkp(rounds, alpha, xi, cutoff)
            if cfg.transmittance < 1.0:
                fock = fock_loss(fock, cfg.transmittance)
            row = dict(point, alpha=alpha, cutoff=cutoff, leakage=fock.total_leakage)
            for stab, res in zip(stabs, exact):
                value = fock_displacement_ev(fock, stab.vector)
                row[f"{stab.label}_re"] = float(np.real(res.value))
                row[f"{stab.label}_im"] = float(np.imag(res.value))
                row[f"{stab.label}_fock_re"] = float(np.real(value))
                row[f"{stab.label}_fock_im"] = float(np.imag(value))
                row[f"{stab.label}_abs_error"] = float(abs(value - res.value))
            rows.append(row)
        return {cfg.experiment: rows}

    def _custom_setup(self, cfg: ExperimentConfig) -> Tuple[StateLike, Optional[SymplecticCircuit], MeasurementPlan]:
        states = [BUILDERS[spec['builder']](spec.get('params', {})).build() for spec in cfg.inputs]
        source = states[0] if len(states) == 1 else ProductState(states)
        circuit = circuit_from_dict(cfg.circuit) if cfg.circuit is not None else None
        plan = MeasurementPlan(tuple((int(m), float(th), 0.0) for m, th in cfg.measured), source.n_modes)
        return source, circuit, plan

    def _custom(self, cfg: ExperimentConfig, point: Dict[str, Any], threads: int) -> Rows:
        source, circuit, plan = self._custom_setup(cfg)
        engine = StabilizerEngine(source, circuit, _loss(cfg, source.n_modes), plan,
                                  threads=threads, reduction=cfg.reduction, hermitian_pairs=cfg.hermitian_pairs)
        stabs = [StabilizerSpec(tuple(d), f"S{i}") for i, d in enumerate(cfg.displacements)]
        if not cfg.measured:
            results = engine.evaluate(stabs)
            row = _ev_columns(results)
            row.update(outcome_density=results[0].outcome_density, n_terms=engine.n_terms)
            return {cfg.experiment: [row]}
        return {cfg.experiment: self._outcome_rows(cfg, point, engine, stabs, (np.zeros(engine.h.size), None))}

    EXPERIMENTS = {
        'single_mode_stabilizers': _single_mode,
        'bell_homodyne': _bell_homodyne,
        'grn_compare': _grn_compare,
        'linear3_witness': _linear3,
        'fock_convergence': _fock_convergence,
        'custom': _custom,
    }

    # --- run ----------------------------------------------------------------

    def run(self, cfg: ExperimentConfig) -> RunResult:
        """
        Виконує всі точки сітки та зберігає CSV і маніфест.

        Args:
            cfg: Конфігурація експерименту

        Returns:
            RunResult з переліком файлів та кількістю невдалих рядків
        """
        cfg = self._effective(cfg)
        points = self.points(cfg)
        # one level of parallelism: grid points or engine chunks
        point_threads, engine_threads = (cfg.threads, 1) if len(points) > 1 else (1, cfg.threads)
        evaluate = self.EXPERIMENTS[cfg.experiment]

        def run_point(point: Dict[str, Any]) -> Rows:
            return self._guarded(point, cfg.experiment, lambda: evaluate(self, cfg, point, engine_threads))

        logger.info(f"Running {cfg.experiment}: {len(points)} points, threads={cfg.threads}, reduction={cfg.reduction}")
        if point_threads > 1:
            with ThreadPoolExecutor(max_workers=point_threads) as pool:
                parts = list(tqdm(pool.map(run_point, points), total=len(points), desc=cfg.experiment))
        else:
            parts = [run_point(p) for p in tqdm(points, desc=cfg.experiment)]

        tables: Dict[str, List[Dict[str, Any]]] = {}
        for part in parts:
            for name, rows in part.items():
                tables.setdefault(name, []).extend(rows)

        os.makedirs(cfg.output, exist_ok=True)
        result = RunResult(cfg.output)
        for name, rows in tables.items():
            df = self._frame(rows, drop_timing=cfg.deterministic)
            path = os.path.join(cfg.output, f"{name}.csv")
            df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
            result.files.append(path)
            result.n_rows += len(df)
            result.n_failures += int((df['error'] != '').sum())
        result.manifest = self._write_manifest(cfg, result)
        if result.n_failures:
            logger.warning(f"{result.n_failures} of {result.n_rows} rows failed")
        logger.info(f"Results saved to {cfg.output}")
        return result

    @staticmethod
    def _frame(rows: List[Dict[str, Any]], drop_timing: bool) -> pd.DataFrame:
        columns = list(dict.fromkeys(k for row in rows for k in row if k not in ('error', 'wall_time')))
        if not drop_timing:
            columns.append('wall_time')
        columns.append('error')
        df = pd.DataFrame(rows).reindex(columns=columns)
        df['error'] = df['error'].fillna('')
        return df

    def _write_manifest(self, cfg: ExperimentConfig, result: RunResult) -> str:
        manifest = {
            'experiment': cfg.experiment,
            'config': cfg.to_dict(),
            'config_hash': cfg.config_hash(),
            'git_revision': git_revision(),
            'conventions': PhaseSpaceConventions.as_dict(),
            'convention_version': PhaseSpaceConventions.VERSION,
            'files': [os.path.basename(f) for f in result.files],
            'n_rows': result.n_rows,
            'n_failures': result.n_failures,
            'versions': {'numpy': np.__version__, 'scipy': scipy.__version__, 'pandas': pd.__version__},
        }
        path = os.path.join(cfg.output, 'manifest.json')
        with open(path, 'w') as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
        return path

    # --- validate -----------------------------------------------------------

    def _term_count(self, cfg: ExperimentConfig, rounds: int) -> Tuple[int, int]:
        """(доданки, моди) входу рушія в одній точці сітки."""
        single = (rounds + 2) ** 2
        inputs = {'single_mode_stabilizers': 1, 'fock_convergence': 1, 'bell_homodyne': 2,
                  'grn_compare': 2, 'linear3_witness': 4}[cfg.experiment]
        return single ** inputs, inputs

    def _coverage_warning(self, cfg: ExperimentConfig) -> Optional[str]:
        rounds, xi = max(cfg.rounds), min(cfg.squeezing)
        engine = self._bell_engine(cfg, _bred(cfg, rounds, xi), 1)
        shift, _ = _output_offset(cfg, engine, rounds, 2)
        grid = np.linspace(-cfg.average_halfwidth, cfg.average_halfwidth, COVERAGE_POINTS) + shift[0]
        density = np.array([engine.density([eta]) for eta in grid])
        edge = max(abs(density[0]), abs(density[-1]))
        if edge > COVERAGE_TOL * np.max(np.abs(density)):
            return (f"average grid ±{cfg.average_halfwidth} leaves edge density {edge:.2e} "
                    f"(max {np.max(density):.2e}) at rounds={rounds}, xi={xi}")
        return None

    def validate(self, cfg: ExperimentConfig) -> Dict[str, Any]:
        """
        Сухий прогін: кількість доданків, оцінка пам'яті, покриття сітки та
        симплектична перевірка. Нічого не обчислює для результатів.
        """
        cfg = self._effective(cfg)
        report: Dict[str, Any] = {
            'experiment': cfg.experiment,
            'config_hash': cfg.config_hash(),
            'n_points': len(self.points(cfg)),
            'n_outcomes': int(self.outcome_grid(cfg).size),
            'warnings': [],
        }
        if cfg.experiment == 'custom':
            try:
                source, circuit, _ = self._custom_setup(cfg)
            except SimulationError as e:
                report['warnings'].append(f"inputs: {type(e).__name__}: {e}")
                return report
            terms, modes = source.n_terms, source.n_modes
            circuits = [circuit] if circuit is not None else []
        else:
            terms, modes = max(self._term_count(cfg, m) for m in cfg.rounds)
            circuits = {'bell_homodyne': [dumbbell_cz()], 'grn_compare': [dumbbell_cz()],
                        'linear3_witness': [linear3_circuit()]}.get(cfg.experiment, [])
        bytes_per_term = 16 + 8 + 8 + 16 * 2 * modes
        report.update(
            max_terms=int(terms),
            memory_chunk_bytes=int(min(terms, DEFAULT_CHUNK) * bytes_per_term),
            memory_materialized_bytes=int(terms * bytes_per_term),
            symplectic_residual=max((symplectic_residual(c.matrix) for c in circuits), default=0.0),
        )
        if cfg.experiment in ('bell_homodyne', 'grn_compare'):
            warning = self._coverage_warning(cfg)
            if warning:
                report['warnings'].append(warning)
        for w in report['warnings']:
            logger.warning(w)
        return report
