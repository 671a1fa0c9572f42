"""Scalar finite-blocklength primitives.

Gaussian Q-function and its inverse, Shannon capacity, channel dispersion,
and the normal-approximation decoding-error probability with its analytic
partial derivatives.  All functions accept floats or numpy arrays and are
pure (no shared state), so they are safe to call from any number of
threads.

Internally the error-probability argument is evaluated in natural-log
form,

    w = (ln(1 + gamma) - d * ln2 / m) * sqrt(m / V(gamma)),

which is algebraically identical to the usual base-2 expression
sqrt(m/V) * (C - d/m) * ln2 but avoids mixed-base rounding.  Tail values
are computed through the complementary error function (and ``log_ndtr``
for log-domain work) so that arguments beyond |w| ~ 38 do not collapse
to 0/1 prematurely.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erfc, log_ndtr, ndtri

LN2 = float(np.log(2.0))
_SQRT2 = float(np.sqrt(2.0))
_SQRT_2PI = float(np.sqrt(2.0 * np.pi))

# Smallest/largest probabilities representable without leaving (0, 1).
_P_FLOOR = float(np.nextafter(0.0, 1.0))
_P_CEIL = float(np.nextafter(1.0, 0.0))


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericalError(ArithmeticError):
    """A computation produced non-finite intermediate values."""


def _check_finite(name, x):
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite, got {x!r}")


def _check_snr(gamma):
    gamma = np.asarray(gamma, dtype=float)
    _check_finite("snr", gamma)
    if np.any(gamma <= 0.0):
        raise DomainError(
            f"snr must be > 0 (dispersion vanishes at zero), got {gamma!r}")
    return gamma


def _check_code(m, d):
    m = np.asarray(m, dtype=float)
    d = np.asarray(d, dtype=float)
    _check_finite("blocklength", m)
    _check_finite("total bits", d)
    if np.any(m < 1.0):
        raise DomainError(f"blocklength must be >= 1, got {m!r}")
    if np.any(d < 0.0):
        raise DomainError(f"total bits must be >= 0, got {d!r}")
    return m, d


def q_func(x):
    """Upper-tail probability Q(x) of the standard normal distribution.

    Evaluated as 0.5 * erfc(x / sqrt(2)), which stays accurate far into
    the tails where the naive 1 - CDF form would round to 0.

    Parameters
    ----------
    x : float or array
        Argument; must be finite.

    Returns
    -------
    float or array
        Q(x) in (0, 1), strictly decreasing in x.
    """
    x = np.asarray(x, dtype=float)
    _check_finite("x", x)
    out = 0.5 * erfc(x / _SQRT2)
    return float(out) if out.ndim == 0 else out


def q_inv(p):
    """Inverse of ``q_func``: the x with Q(x) = p.

    Parameters
    ----------
    p : float or array
        Probability strictly inside (0, 1).

    Returns
    -------
    float or array
        Standard-normal upper quantile, accurate to ~1e-14 relative even
        for tail probabilities near 1e-300.
    """
    p = np.asarray(p, dtype=float)
    _check_finite("p", p)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise DomainError(f"p must lie strictly in (0, 1), got {p!r}")
    out = -ndtri(p)
    return float(out) if out.ndim == 0 else out


def capacity(gamma):
    """Shannon capacity log2(1 + gamma) in bits per channel use."""
    gamma = _check_snr(gamma)
    out = np.log1p(gamma) / LN2
    return float(out) if out.ndim == 0 else out


def dispersion(gamma):
    """Channel dispersion V(gamma) = 1 - (1 + gamma)^-2.

    Strictly increasing from 0+ towards 1; gamma = 0 is rejected because
    the vanishing dispersion makes the error-probability argument
    singular downstream.
    """
    gamma = _check_snr(gamma)
    out = gamma * (2.0 + gamma) / np.square(1.0 + gamma)
    return float(out) if out.ndim == 0 else out


def rate_margin(gamma, m, d):
    """Standardized rate margin fed to the Q-function.

    w = (ln(1+gamma) - d*ln2/m) * sqrt(m / V(gamma)); positive when the
    coding rate d/m sits below capacity, negative above it.
    """
    gamma = _check_snr(gamma)
    m, d = _check_code(m, d)
    v = gamma * (2.0 + gamma) / np.square(1.0 + gamma)
    out = (np.log1p(gamma) - d * LN2 / m) * np.sqrt(m / v)
    return float(out) if out.ndim == 0 else out


def decode_error_prob(gamma, m, d):
    """Normal-approximation decoding error probability.

    epsilon = Q( sqrt(m / V(gamma)) * (C(gamma) - d/m) * ln 2 )

    Parameters
    ----------
    gamma : float or array
        Link SNR, linear scale, > 0.
    m : float or array
        Blocklength in channel uses, >= 1 (real-valued; integrality is a
        solver concern, not a model concern).
    d : float or array
        Total transmitted bits (message + redundancy), >= 0.

    Returns
    -------
    float or array
        Error probability, clipped to the open interval (0, 1): arguments
        past |w| ~ 38 would otherwise round to exactly 0 or 1 in double
        precision.  Strictly increasing in d, strictly decreasing in m
        away from the clip boundaries.
    """
    w = rate_margin(gamma, m, d)
    out = np.clip(0.5 * erfc(np.asarray(w) / _SQRT2), _P_FLOOR, _P_CEIL)
    return float(out) if out.ndim == 0 else out


def log_decode_error_prob(gamma, m, d):
    """log of the decoding error probability, exact in the deep tail.

    Equals log(Q(w)) = log_ndtr(-w); usable far beyond the point where
    ``decode_error_prob`` saturates at the floating-point floor.
    """
    w = rate_margin(gamma, m, d)
    out = log_ndtr(-np.asarray(w))
    return float(out) if out.ndim == 0 else out


def log_decode_success_prob(gamma, m, d):
    """log of the complement 1 - epsilon, exact when epsilon is near 1."""
    w = rate_margin(gamma, m, d)
    out = log_ndtr(np.asarray(w))
    return float(out) if out.ndim == 0 else out


def error_prob_partials(gamma, m, d):
    """Analytic partial derivatives of ``decode_error_prob``.

    Parameters
    ----------
    gamma, m, d : float or array
        Same domain as ``decode_error_prob``.

    Returns
    -------
    (d_eps_dm, d_eps_dd)
        d_eps_dm = -phi(w) * (ln(1+gamma) + d*ln2/m) / (2*sqrt(m*V)) <= 0
        d_eps_dd =  phi(w) * ln2 / sqrt(m*V)                         >= 0

    where phi is the standard normal density.  The signs hold for every
    valid input: more channel uses always help, more bits always hurt.
    """
    gamma = _check_snr(gamma)
    m, d = _check_code(m, d)
    v = gamma * (2.0 + gamma) / np.square(1.0 + gamma)
    sqrt_mv = np.sqrt(m * v)
    w = (np.log1p(gamma) - d * LN2 / m) * np.sqrt(m / v)
    phi = np.exp(-0.5 * w * w) / _SQRT_2PI
    d_eps_dm = -phi * (np.log1p(gamma) + d * LN2 / m) / (2.0 * sqrt_mv)
    d_eps_dd = phi * LN2 / sqrt_mv
    if np.ndim(d_eps_dm) == 0:
        return float(d_eps_dm), float(d_eps_dd)
    return d_eps_dm, d_eps_dd


def log_hazard_ratio(w):
    """phi(w) / Q(w) computed in the log domain (stable for any w).

    This is the factor that turns d(w)/d(theta) into d(log eps)/d(theta);
    direct division overflows once Q(w) underflows around w ~ 38.
    """
    w = np.asarray(w, dtype=float)
    log_phi = -0.5 * w * w - np.log(_SQRT_2PI)
    out = np.exp(log_phi - log_ndtr(-w))
    return float(out) if out.ndim == 0 else out
