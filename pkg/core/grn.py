"""
Аналітична модель гаусового випадкового шуму (GRN).

Ідеальні сенсорні стани під гаусовим шумом зсувів з дисперсіями Σ₀ (x)
та Σ₁ (p). Одномодові середні стабілізаторів дорівнюють exp(-πΣ);
постселектована пара Белла з двох таких станів має замкнені вирази через
тета-функцію Якобі θ₃(z, q) = Σ_n q^{n²} e^{2inz}. Ширина шуму Δ у
картині кубітної решітки пов'язана як Σ = Δ²/2.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from core.errors import DomainError
from core.reduction import logsumexp_complex

logger = logging.getLogger(__name__)

SQRT_PI = np.sqrt(np.pi)
# dropped terms below exp(-TAIL_NATS) of the largest term
TAIL_NATS = 40.0


@dataclass(frozen=True)
class ThetaArg:
    z: complex
    nome: float

    def __post_init__(self):
        if not 0.0 <= self.nome < 1.0:
            raise DomainError(f"theta nome must lie in [0, 1), got {self.nome}")
        object.__setattr__(self, 'z', complex(self.z))


def _theta3_range(log_q: float, y: float) -> np.ndarray:
    # log|term_n| = n² log q - 2 n y peaks at n0 = -y / log q
    # and falls by TAIL_NATS at n0 ± sqrt(TAIL_NATS / -log q)
    n0 = -y / log_q
    half = np.sqrt(TAIL_NATS / -log_q)
    lo = int(np.floor(n0 - half)) - 1
    hi = int(np.ceil(n0 + half)) + 1
    return np.arange(lo, hi + 1)


def theta3(arg: ThetaArg) -> complex:
    """
    Тета-функція Якобі θ₃ через обрізаний ряд, довжина якого залежить від q та Im z.

    Raises:
        DomainError: q поза [0, 1)
    """
    if arg.nome == 0.0:
        return 1.0 + 0j
    log_q = np.log(arg.nome)
    n = _theta3_range(log_q, arg.z.imag)
    z_terms = n ** 2 * log_q + 2j * n * arg.z
    return complex(logsumexp_complex(z_terms).value())


def theta3_value(z: complex, nome: float) -> complex:
    return theta3(ThetaArg(z, nome))


def delta_to_sigma(delta: float) -> float:
    """Σ = Δ²/2, so exp(-πΔ²/2) = exp(-πΣ)."""
    return 0.5 * delta ** 2


def sigma_to_delta(sigma: float) -> float:
    if sigma < 0:
        raise DomainError(f"sigma must be non-negative, got {sigma}")
    return float(np.sqrt(2 * sigma))


def grn_single_ev(sigma: float) -> float:
    """|⟨S⟩| одного зашумленого сенсорного стабілізатора: exp(-πΣ)."""
    if sigma < 0:
        raise DomainError(f"sigma must be non-negative, got {sigma}")
    return float(np.exp(-np.pi * sigma))


def sigma_from_ev(ev_magnitude: float) -> float:
    """Σ = log(1/|⟨S⟩|²) / 2π, обернене до ``grn_single_ev``."""
    if not 0.0 < ev_magnitude <= 1.0:
        raise DomainError(f"EV magnitude must lie in (0, 1], got {ev_magnitude}")
    return float(-np.log(ev_magnitude) / np.pi)


def _nome(sigma01: float, sigma12: float) -> float:
    total = sigma01 + sigma12
    if total <= 0:
        raise DomainError(f"Σ01 + Σ12 must be positive, got {total}")
    return float(np.exp(-np.pi * total))


def grn_bell_x_ev(sigma01: float, sigma12: float, p2: float) -> complex:
    """
    Середнє x-стабілізатора на моді 1 постселектованої пари Белла при результаті p₂:

        exp(-4πΣ01 - 2i√π p₂)·θ₃(√π p₂ - 2iπΣ01, q) / θ₃(√π p₂, q),  q = e^{-π(Σ01+Σ12)}

    Періодичне по p₂ з періодом √π.
    """
    q = _nome(sigma01, sigma12)
    z = SQRT_PI * p2
    num = theta3_value(z - 2j * np.pi * sigma01, q)
    den = theta3_value(z, q)
    return complex(np.exp(-4 * np.pi * sigma01 - 2j * SQRT_PI * p2) * num / den)


def grn_bell_p_ev(sigma11: float, sigma02: float) -> float:
    """exp(-πΣ11)·exp(-πΣ02); не залежить від результату."""
    return grn_single_ev(sigma11) * grn_single_ev(sigma02)


def grn_outcome_density(sigma01: float, sigma12: float, p2: float) -> float:
    """
    Густина гомодинного результату для зашумленої пари Белла, нормована на один період:

        Σ_k exp(-(p₂ - √π k)² / S) / √(πS) = θ₃(√π p₂, e^{-πS}) / √π,  S = Σ01 + Σ12
    """
    q = _nome(sigma01, sigma12)
    return float(np.real(theta3_value(SQRT_PI * p2, q)) / SQRT_PI)


def _lattice_sum(u: float, sigma: float, n: np.ndarray) -> float:
    return float(np.sum(np.exp(-(u - SQRT_PI * n) ** 2 / sigma)))


def grn_bell_x_ev_integral(sigma01: float, sigma12: float, p2: float) -> complex:
    """
    Те саме середнє з інтегральної форми,

        ∫₀^{2√π} dl e^{2i√π l} F(l) / ∫₀^{2√π} dl F(l),
        F(l) = Σ_n e^{-(l/2 + p₂/2 - √π n)²/Σ01} · Σ_m e^{-(l/2 - p₂/2 - √π m)²/Σ12},

    обчислене адаптивною квадратурою по обрізаних решіткових сумах.
    """
    _nome(sigma01, sigma12)
    n_trunc = 3 + int(np.ceil(10 * np.sqrt(max(sigma01, sigma12)) / SQRT_PI))
    p2 = float(np.mod(p2, SQRT_PI))
    n = np.arange(-n_trunc, n_trunc + 3)

    def f(l: float) -> float:
        return _lattice_sum(l / 2 + p2 / 2, sigma01, n) * _lattice_sum(l / 2 - p2 / 2, sigma12, n)

    upper = 2 * SQRT_PI
    opts = dict(limit=400, epsabs=1e-14, epsrel=1e-12)
    norm, _ = quad(f, 0.0, upper, **opts)
    re, _ = quad(lambda l: np.cos(2 * SQRT_PI * l) * f(l), 0.0, upper, **opts)
    im, _ = quad(lambda l: np.sin(2 * SQRT_PI * l) * f(l), 0.0, upper, **opts)
    return complex(re, im) / norm
