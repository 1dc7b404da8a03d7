"""
Конфігурація експериментів: JSON-файли, що розбираються в ``ExperimentConfig``,
та вбудовані пресети. Помилки валідації містять шлях до поля, напр.
``ConfigError("rounds[1]", "must be a non-negative integer")``.
"""
import copy
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional

import numpy as np

from core.circuits import circuit_from_dict
from core.errors import ConfigError, SimulationError
from core.measurement import PRESETS as STABILIZER_PRESETS
from states import BUILDERS

logger = logging.getLogger(__name__)

EXPERIMENTS = (
    'single_mode_stabilizers',
    'bell_homodyne',
    'grn_compare',
    'linear3_witness',
    'fock_convergence',
    'custom',
)
REDUCTIONS = ('fast', 'deterministic')
# fields that do not change the numbers in the result files
UNHASHED = ('output', 'threads')

SQRT_PI = float(np.sqrt(np.pi))


@dataclass
class ExperimentConfig:
    """
    Один прогін: сітка розмноження (раунди x стискання) на сітку результатів.

    Експерименти ``custom`` беруть ``inputs`` (описи будівників), необов'язкову
    ``circuit`` у JSON-форматі схем, ``measured`` як пари [мода, кут] та явні
    ``displacements`` замість назв пресетів стабілізаторів.
    """

    experiment: str
    rounds: List[int] = field(default_factory=lambda: [1])
    squeezing: List[float] = field(default_factory=lambda: [0.5])
    cat_amplitude: Optional[float] = None
    outcomes: List[float] = field(default_factory=lambda: [0.0])
    stabilizers: List[str] = field(default_factory=list)
    transmittance: float = 1.0
    thermal_occupancy: float = 0.0
    cutoffs: List[int] = field(default_factory=lambda: [80])
    average_halfwidth: float = 14.0
    average_points: int = 1401
    grn_lattice_halfwidth: int = 12
    inputs: List[Dict[str, Any]] = field(default_factory=list)
    circuit: Optional[Dict[str, Any]] = None
    measured: List[List[float]] = field(default_factory=list)
    displacements: List[List[float]] = field(default_factory=list)
    sampled_outcomes: int = 0
    output: str = 'results'
    reduction: str = 'fast'
    hermitian_pairs: bool = False
    threads: int = 1
    seed: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def config_hash(self) -> str:
        """Короткий хеш усього, що впливає на числа."""
        data = {k: v for k, v in self.to_dict().items() if k not in UNHASHED}
        return hashlib.sha1(json.dumps(data, sort_keys=True).encode()).hexdigest()[:10]

    @property
    def deterministic(self) -> bool:
        return self.reduction == 'deterministic'


def _int(value: Any, path: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value or value < minimum:
        raise ConfigError(path, f"must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        raise ConfigError(path, f"must be a finite number, got {value!r}")
    return float(value)


def _list(value: Any, path: str, allow_empty: bool = False) -> list:
    if not isinstance(value, list):
        raise ConfigError(path, f"must be a list, got {type(value).__name__}")
    if not value and not allow_empty:
        raise ConfigError(path, "must not be empty")
    return value


def _check_grids(cfg: ExperimentConfig) -> None:
    cfg.rounds = [_int(v, f"rounds[{i}]") for i, v in enumerate(_list(cfg.rounds, 'rounds'))]
    cfg.squeezing = [_float(v, f"squeezing[{i}]") for i, v in enumerate(_list(cfg.squeezing, 'squeezing'))]
    cfg.outcomes = [_float(v, f"outcomes[{i}]") for i, v in enumerate(_list(cfg.outcomes, 'outcomes'))]
    cfg.cutoffs = [_int(v, f"cutoffs[{i}]", 1) for i, v in enumerate(_list(cfg.cutoffs, 'cutoffs'))]
    if cfg.cat_amplitude is not None:
        cfg.cat_amplitude = _float(cfg.cat_amplitude, 'cat_amplitude')
        if cfg.cat_amplitude < 0:
            raise ConfigError('cat_amplitude', "must be non-negative")


def _check_scalars(cfg: ExperimentConfig) -> None:
    cfg.transmittance = _float(cfg.transmittance, 'transmittance')
    if not 0.0 <= cfg.transmittance <= 1.0:
        raise ConfigError('transmittance', f"must lie in [0, 1], got {cfg.transmittance}")
    cfg.thermal_occupancy = _float(cfg.thermal_occupancy, 'thermal_occupancy')
    if cfg.thermal_occupancy < 0:
        raise ConfigError('thermal_occupancy', "must be non-negative")
    cfg.average_halfwidth = _float(cfg.average_halfwidth, 'average_halfwidth')
    if cfg.average_halfwidth <= 0:
        raise ConfigError('average_halfwidth', "must be positive")
    cfg.average_points = _int(cfg.average_points, 'average_points', 3)
    cfg.grn_lattice_halfwidth = _int(cfg.grn_lattice_halfwidth, 'grn_lattice_halfwidth', 1)
    cfg.sampled_outcomes = _int(cfg.sampled_outcomes, 'sampled_outcomes')
    cfg.threads = _int(cfg.threads, 'threads', 1)
    if cfg.seed is not None:
        cfg.seed = _int(cfg.seed, 'seed')
    if cfg.reduction not in REDUCTIONS:
        raise ConfigError('reduction', f"must be one of {REDUCTIONS}, got {cfg.reduction!r}")
    if not isinstance(cfg.hermitian_pairs, bool):
        raise ConfigError('hermitian_pairs', f"must be true or false, got {cfg.hermitian_pairs!r}")
    if not isinstance(cfg.output, str) or not cfg.output:
        raise ConfigError('output', "must be a non-empty path")


def _check_stabilizers(cfg: ExperimentConfig) -> None:
    for i, name in enumerate(_list(cfg.stabilizers, 'stabilizers', allow_empty=True)):
        if name not in STABILIZER_PRESETS:
            raise ConfigError(f"stabilizers[{i}]", f"unknown preset {name!r}; known: {sorted(STABILIZER_PRESETS)}")


def _check_custom(cfg: ExperimentConfig) -> None:
    inputs = _list(cfg.inputs, 'inputs')
    n_modes = 0
    for i, spec in enumerate(inputs):
        if not isinstance(spec, dict) or 'builder' not in spec:
            raise ConfigError(f"inputs[{i}]", "must be an object with a 'builder' key")
        if spec['builder'] not in BUILDERS:
            raise ConfigError(f"inputs[{i}].builder", f"unknown builder {spec['builder']!r}; known: {sorted(BUILDERS)}")
        params = spec.get('params', {})
        if not isinstance(params, dict):
            raise ConfigError(f"inputs[{i}].params", "must be an object")
        n_modes += int(params.get('n_modes', 1)) if spec['builder'] == 'vacuum' else 1
    if cfg.circuit is not None:
        try:
            circuit = circuit_from_dict(cfg.circuit)
        except (SimulationError, KeyError, TypeError, IndexError, ValueError) as e:
            raise ConfigError('circuit', str(e)) from e
        if circuit.n_modes != n_modes:
            raise ConfigError('circuit.n_modes', f"circuit acts on {circuit.n_modes} modes, inputs provide {n_modes}")
    measured_modes = []
    for i, pair in enumerate(_list(cfg.measured, 'measured', allow_empty=True)):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"measured[{i}]", "must be a [mode, angle] pair")
        mode = _int(pair[0], f"measured[{i}][0]")
        if mode >= n_modes:
            raise ConfigError(f"measured[{i}][0]", f"mode {mode} out of range for {n_modes} modes")
        _float(pair[1], f"measured[{i}][1]")
        measured_modes.append(mode)
    if len(set(measured_modes)) != len(measured_modes) or len(measured_modes) >= n_modes:
        raise ConfigError('measured', "modes must be distinct and leave at least one mode unmeasured")
    if len(measured_modes) > 1:
        raise ConfigError('measured', "the outcome grid drives a single measured quadrature")
    n_out = 2 * (n_modes - len(measured_modes))
    for i, disp in enumerate(_list(cfg.displacements, 'displacements')):
        vec = _list(disp, f"displacements[{i}]")
        if len(vec) != n_out:
            raise ConfigError(f"displacements[{i}]", f"needs {n_out} entries for the unmeasured modes, got {len(vec)}")
        for k, v in enumerate(vec):
            _float(v, f"displacements[{i}][{k}]")


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """
    Перевіряє кожне поле на місці та повертає конфігурацію.

    Raises:
        ConfigError: Перше некоректне поле разом зі шляхом
    """
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError('experiment', f"must be one of {EXPERIMENTS}, got {cfg.experiment!r}")
    _check_grids(cfg)
    _check_scalars(cfg)
    _check_stabilizers(cfg)
    if cfg.experiment == 'custom':
        _check_custom(cfg)
    if cfg.experiment == 'fock_convergence':
        for i, m in enumerate(cfg.rounds):
            if m > 2:
                raise ConfigError(f"rounds[{i}]", "the Fock oracle breeds at most 2 rounds")
        for i, c in enumerate(cfg.cutoffs):
            if c > 100:
                raise ConfigError(f"cutoffs[{i}]", "the Fock oracle is capped at cutoff 100")
    return cfg


def config_from_dict(data: Dict[str, Any]) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError('<root>', "config must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown field")
    if 'experiment' not in data:
        raise ConfigError('experiment', "missing")
    return validate_config(ExperimentConfig(**copy.deepcopy(data)))


def load_config(path: str) -> ExperimentConfig:
    """Читає та перевіряє JSON-файл експерименту."""
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(path, f"cannot read config: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(path, f"invalid JSON at line {e.lineno}: {e.msg}") from e
    logger.info(f"Loaded config {path}")
    return config_from_dict(data)


def save_config(cfg: ExperimentConfig, path: str) -> None:
    with open(path, 'w') as f:
        json.dump(cfg.to_dict(), f, indent=2, sort_keys=True)


PRESETS: Dict[str, Dict[str, Any]] = {
    'single_mode_stabilizers': {
        'experiment': 'single_mode_stabilizers',
        'rounds': [1, 2, 3, 4],
        'squeezing': [0.2, 0.4, 0.6, 0.8, 1.0],
        'stabilizers': ['Sx', 'Sp'],
    },
    'bell_homodyne': {
        'experiment': 'bell_homodyne',
        'rounds': [1, 2],
        'squeezing': [0.5],
        'outcomes': [0.0, SQRT_PI / 4, SQRT_PI / 2],
        'stabilizers': ['X2', 'Z2'],
    },
    'grn_compare': {
        'experiment': 'grn_compare',
        'rounds': [3],
        'squeezing': [0.5],
        'outcomes': [float(v) for v in np.linspace(0.0, SQRT_PI, 64, endpoint=False)],
    },
    'linear3_witness': {
        'experiment': 'linear3_witness',
        'rounds': [3],
        'squeezing': [0.5, 1.0],
        'outcomes': [0.0, SQRT_PI / 4, SQRT_PI / 2],
    },
    'fock_convergence': {
        'experiment': 'fock_convergence',
        'rounds': [0, 1, 2],
        'squeezing': [0.2, 0.5],
        'cat_amplitude': 4.0,
        'cutoffs': [20, 40, 60, 80],
        'stabilizers': ['X2', 'Z2'],
    },
    'custom': {
        'experiment': 'custom',
        'inputs': [{'builder': 'vacuum', 'params': {'n_modes': 1}}],
        'displacements': [[0.0, 0.0]],
    },
}


def preset_config(name: str, output: Optional[str] = None) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError('preset', f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    data = copy.deepcopy(PRESETS[name])
    if output is not None:
        data['output'] = output
    return config_from_dict(data)
