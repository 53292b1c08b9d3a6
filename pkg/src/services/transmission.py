"""
Exponential transmission-delay primitives.

The delay of an edge with rate ``alpha`` has density alpha * exp(-alpha * tau),
survival exp(-alpha * tau) and constant hazard alpha.
"""
import math

import numpy as np

from ..models.network_models import TransmissionKind


def _check_rate(rate: float) -> None:
    if not rate > 0 or not math.isfinite(rate):
        raise ValueError(f"rate must be a positive finite number, got {rate}")


def _check_candidate_rate(rate: float) -> None:
    if not rate >= 0 or not math.isfinite(rate):
        raise ValueError(f"rate must be a non-negative finite number, got {rate}")


def _check_tau(tau: float) -> None:
    if not tau >= 0:
        raise ValueError(f"tau must be non-negative, got {tau}")


def exp_density(tau: float, rate: float) -> float:
    """Density of an exponential delay ``tau`` on an edge with rate ``rate``."""
    _check_tau(tau)
    _check_rate(rate)
    return rate * math.exp(-rate * tau)


def exp_survival(tau: float, rate: float) -> float:
    """Probability the delay exceeds ``tau`` (1 - CDF)."""
    _check_tau(tau)
    _check_rate(rate)
    return math.exp(-rate * tau)


def exp_hazard(rate: float) -> float:
    """Hazard density/survival; constant for exponentials."""
    _check_rate(rate)
    return float(rate)


class TransmissionModel:
    """
    Per-edge delay distribution, selected by kind; rates are supplied per edge.

    ``hazard`` and ``log_survival`` accept a zero rate, which stands for a candidate
    edge that never transmits.
    """

    def __init__(self, kind: TransmissionKind = TransmissionKind.EXPONENTIAL):
        if kind is not TransmissionKind.EXPONENTIAL:
            raise ValueError(f"Unsupported transmission model: {kind}")
        self.kind = kind

    def hazard(self, tau: float, rate: float) -> float:
        _check_tau(tau)
        _check_candidate_rate(rate)
        return float(rate)

    def log_survival(self, tau: float, rate: float) -> float:
        _check_tau(tau)
        _check_candidate_rate(rate)
        return -rate * tau

    def sample(self, rates: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Draw one delay per rate.

        Delays are strictly positive: a draw of exactly zero is replaced by the
        smallest positive double.
        """
        rates = np.asarray(rates, dtype=np.float64)
        delays = rng.standard_exponential(rates.shape[0]) / rates
        return np.where(delays > 0, delays, np.finfo(np.float64).tiny)


EXPONENTIAL = TransmissionModel(TransmissionKind.EXPONENTIAL)
