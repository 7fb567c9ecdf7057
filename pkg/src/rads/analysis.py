"""Rabi-frequency extraction and power-law scaling fits.

Frequency convention: for a collective coupling sqrt(N) g the populations go
as sin^2(sqrt(N) g t), so the reported population-oscillation frequency is
f_N = sqrt(N) g / pi in angular units, i.e. 2 sqrt(N) g for g given as an
ordinary frequency.  Times are in ns, frequencies are reported in MHz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

NOISE_FLOOR = 1e-6
MAX_ITER = 200
XTOL = 1e-10
PAD_FACTOR = 16


@dataclass(frozen=True)
class RabiFit:
    """values ~ amplitude * cos(2 pi f t + phase) + offset (times decay if fitted)."""

    frequency: float  # MHz
    amplitude: float
    offset: float
    phase: float  # rad
    residual_rms: float
    decay_time: float | None = None  # ns
    iterations: int = 0

    @property
    def detected(self) -> bool:
        return True

    @property
    def peak_to_peak(self) -> float:
        return 2.0 * abs(self.amplitude)

    @property
    def maximum(self) -> float:
        return self.offset + abs(self.amplitude)

    @property
    def minimum(self) -> float:
        return self.offset - abs(self.amplitude)


@dataclass(frozen=True)
class NoOscillation:
    """Returned by :func:`fit_rabi` when the spectral peak is below the noise floor."""

    peak_amplitude: float
    mean: float

    @property
    def detected(self) -> bool:
        return False

    def __str__(self) -> str:
        return "no oscillation detected"


@dataclass(frozen=True)
class ScalingFit:
    """f = prefactor * N ** exponent from a straight line in log-log space."""

    exponent: float
    prefactor: float  # MHz
    exponent_var: float
    log_prefactor_var: float
    residual_rms: float

    @property
    def covariance_diagonal(self) -> tuple[float, float]:
        return (self.exponent_var, self.log_prefactor_var)


def _spectral_peak(t: np.ndarray, y: np.ndarray):
    """Frequency (1/ns) and amplitude of the strongest non-DC Fourier component."""
    n = len(t)
    dt = (t[-1] - t[0]) / (n - 1)
    centred = y - y.mean()
    nfft = PAD_FACTOR * (1 << (n - 1).bit_length())
    spec = np.abs(np.fft.rfft(centred, nfft))
    freqs = np.fft.rfftfreq(nfft, dt)
    k = int(np.argmax(spec[1:])) + 1
    if 0 < k < len(spec) - 1:
        # parabolic interpolation of the log-magnitude peak
        a, b, c = np.log(spec[k - 1:k + 2] + 1e-300)
        denom = a - 2 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    else:
        shift = 0.0
    f = (k + shift) * (freqs[1] - freqs[0])
    return f, 2.0 * spec[k] / n


def _linear_fit(t, y, f):
    """Given a frequency, solve for a cos + b sin + c by linear least squares."""
    X = np.column_stack([np.cos(2 * np.pi * f * t), np.sin(2 * np.pi * f * t), np.ones_like(t)])
    (a, b, c), *_ = np.linalg.lstsq(X, y, rcond=None)
    return math.hypot(a, b), math.atan2(-b, a), c


def fit_rabi(times: Sequence[float], values: Sequence[float], damped: bool = False):
    """Least-squares cosine fit of an oscillating population.

    The frequency is seeded from the zero-padded discrete spectrum; amplitude,
    phase and offset from a linear solve at that frequency.  A nonlinear
    least-squares refinement then stops when the relative parameter change
    drops below 1e-10 or after 200 iterations.  Returns :class:`NoOscillation`
    if the spectral peak amplitude is below 1e-6.

    With ``damped=True`` an exponential envelope exp(-t/tau) is fitted too,
    intended for measured data; simulated closed-system traces do not decay.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise ValueError("times and values must be 1-D arrays of equal length")
    if len(t) < 8:
        raise ValueError(f"need at least 8 samples, got {len(t)}")
    if np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")
    steps = np.diff(t)
    if np.max(np.abs(steps - steps.mean())) > 1e-6 * steps.mean():
        raise ValueError("times must be uniformly spaced")

    f0, peak = _spectral_peak(t, y)
    if peak < NOISE_FLOOR:
        return NoOscillation(float(peak), float(y.mean()))

    # work relative to the window centre so phase and frequency decorrelate
    tc = t.mean()
    s = t - tc
    amp0, ph0, c0 = _linear_fit(s, y, f0)

    def model(p):
        a, f, ph, c = p[:4]
        env = np.exp(-s / p[4]) if damped else 1.0
        return a * env * np.cos(2 * np.pi * f * s + ph) + c

    def resid(p):
        return model(p) - y

    def jac(p):
        a, f, ph, c = p[:4]
        arg = 2 * np.pi * f * s + ph
        env = np.exp(-s / p[4]) if damped else np.ones_like(s)
        cols = [
            env * np.cos(arg),
            -a * env * np.sin(arg) * 2 * np.pi * s,
            -a * env * np.sin(arg),
            np.ones_like(s),
        ]
        if damped:
            cols.append(a * env * np.cos(arg) * s / p[4] ** 2)
        return np.column_stack(cols)

    p0 = [amp0, f0, ph0, c0]
    if damped:
        p0.append(10.0 * (t[-1] - t[0]))
    sol = least_squares(
        resid, p0, jac=jac, method="lm", xtol=XTOL, ftol=1e-15, gtol=1e-15,
        max_nfev=MAX_ITER * (len(p0) + 1),
    )
    a, f, ph, c = sol.x[:4]
    if a < 0:
        a, ph = -a, ph + np.pi
    if f < 0:
        f, ph = -f, -ph
    # back to the original time origin; for the damped model the amplitude
    # refers to the window centre
    ph = (ph - 2 * np.pi * f * tc) % (2 * np.pi)
    rms = float(np.sqrt(np.mean(sol.fun**2)))
    return RabiFit(
        frequency=float(f * 1e3),
        amplitude=float(a),
        offset=float(c),
        phase=float(ph),
        residual_rms=rms,
        decay_time=float(sol.x[4]) if damped else None,
        iterations=int(sol.nfev),
    )


def fit_scaling(ns: Sequence[int], freqs: Sequence[float]) -> ScalingFit:
    """Fit log f = exponent * log N + log prefactor by ordinary least squares."""
    n = np.asarray(ns, dtype=float)
    f = np.asarray(freqs, dtype=float)
    if n.shape != f.shape or n.ndim != 1:
        raise ValueError("Ns and frequencies must be 1-D sequences of equal length")
    if len(np.unique(n)) < 3:
        raise ValueError(f"need >= 3 points with distinct N, got {len(np.unique(n))}")
    if np.any(n <= 0):
        raise ValueError("N values must be positive")
    if np.any(~np.isfinite(f)) or np.any(f <= 0):
        raise ValueError("frequencies must be positive and finite")
    X = np.column_stack([np.log(n), np.ones_like(n)])
    yl = np.log(f)
    coef, *_ = np.linalg.lstsq(X, yl, rcond=None)
    res = yl - X @ coef
    dof = len(n) - 2
    s2 = float(res @ res) / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    return ScalingFit(
        exponent=float(coef[0]),
        prefactor=float(np.exp(coef[1])),
        exponent_var=float(cov[0, 0]),
        log_prefactor_var=float(cov[1, 1]),
        residual_rms=float(np.sqrt(np.mean(res**2))),
    )


def expected_frequency(n_eff: float, g_mhz: float) -> float:
    """Population-oscillation frequency 2 sqrt(n_eff) g (MHz) for collective coupling sqrt(n_eff) g."""
    return 2.0 * math.sqrt(n_eff) * g_mhz


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    """Columns of a trajectory CSV written by the command-line tool."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.atleast_1d(data[name]) for name in data.dtype.names}
