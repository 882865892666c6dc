"""Stochastic hourly wind capacity factors.

A stationary Gaussian AR(1) process z_t (unit variance, lag-1 correlation
``persistence``) is mapped to [0, 1] by cf_t = Phi(a + spread * z_t), where
Phi is the standard normal CDF. Choosing a = Phi^-1(mean_cf) * sqrt(1 + spread^2)
makes E[cf_t] = mean_cf exactly. ``spread = 0`` yields the constant series mean_cf.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtr, ndtri

from ..errors import ValidationError


def latent_ar1(n: int, persistence: float, rng: np.random.Generator) -> np.ndarray:
    e = rng.standard_normal(n)
    if n == 0 or persistence == 0:
        return e
    b = [math.sqrt(1.0 - persistence**2)]
    a = [1.0, -persistence]
    rest, _ = lfilter(b, a, e[1:], zi=[persistence * e[0]])
    return np.concatenate([e[:1], rest])


def synthesize_wind(n_hours: int, seed, persistence: float = 0.97, mean_cf: float = 0.40, spread: float = 1.2) -> np.ndarray:
    if not 0 < mean_cf < 1:
        raise ValidationError("mean_cf must lie strictly between 0 and 1")
    if not 0 <= persistence < 1:
        raise ValidationError("persistence must lie in [0, 1)")
    if spread < 0:
        raise ValidationError("spread must be >= 0")
    if spread == 0:
        return np.full(int(n_hours), float(mean_cf))
    z = latent_ar1(int(n_hours), persistence, np.random.default_rng(seed))
    offset = ndtri(mean_cf) * math.sqrt(1.0 + spread**2)
    return np.clip(ndtr(offset + spread * z), 0.0, 1.0)
