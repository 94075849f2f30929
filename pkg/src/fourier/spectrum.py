#!/usr/bin/env python3
"""
Ray Spectra
Bulk evaluation of transforms on uniform frequency grids: one zero-padded real FFT
of the densely sampled profile, corrected to the exact transform of its
piecewise-linear interpolant
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.fourier.profile import PROFILE_NODES, ProfileFunction
from src.fourier.transforms import closed_form_ft, has_closed_form
from src.geometry.body import ConvexBody
from src.geometry.direction import Direction

logger = logging.getLogger(__name__)

SAMPLES_PER_PERIOD = 64
_SERIES_CUTOFF = 0.05


@dataclass(frozen=True, eq=False)
class RaySpectrum:
    """chi_hat(rho Theta) on the grid rho_k = k * step"""

    direction: Direction
    rho_values: np.ndarray
    ft_values: np.ndarray
    method: str

    @property
    def step(self) -> float:
        return float(self.rho_values[1] - self.rho_values[0])

    @property
    def rho_max(self) -> float:
        return float(self.rho_values[-1])

    def power(self) -> np.ndarray:
        return np.abs(self.ft_values) ** 2


def _next_power_of_two(value: float) -> int:
    return 1 << max(0, int(np.ceil(np.log2(max(value, 1.0)))))


def _linear_weights(theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """W(theta) and the endpoint correction alpha_0(theta) for linear interpolation"""
    small = np.abs(theta) < _SERIES_CUTOFF
    th = np.where(small, 1.0, theta)
    one_minus_cos = 1.0 - np.cos(th)
    weight = 2.0 * one_minus_cos / th ** 2
    alpha = -one_minus_cos / th ** 2 + 1j * (th - np.sin(th)) / th ** 2

    t2 = theta * theta
    weight_s = 1.0 - t2 / 12.0 + t2 ** 2 / 360.0 - t2 ** 3 / 20160.0
    alpha_s = (-0.5 + t2 / 24.0 - t2 ** 2 / 720.0
               + 1j * theta * (1.0 / 6.0 - t2 / 120.0 + t2 ** 2 / 5040.0))
    return np.where(small, weight_s, weight), np.where(small, alpha_s, alpha)


def interpolated_spectrum(samples: np.ndarray, start: float, step: float,
                          count: int, oversample: int) -> Tuple[np.ndarray, np.ndarray]:
    """Transform of the linear interpolant of samples g_0..g_n taken at start + j*step.

    Frequencies are k / (oversample * n * step) for k = 0..count.
    """
    samples = np.asarray(samples, dtype=float)
    n = len(samples) - 1
    size = oversample * n
    if count >= size // 2:
        raise ValueError(f"{count} frequencies need more than {n} samples at oversample {oversample}")
    padded = np.zeros(size)
    padded[:n + 1] = samples
    dft = np.fft.rfft(padded)[:count + 1]

    freqs = np.arange(count + 1) / (size * step)
    theta = -2.0 * np.pi * freqs * step
    weight, alpha = _linear_weights(theta)
    span = n * step
    values = step * np.exp(-2j * np.pi * freqs * start) * (
        weight * dft
        + alpha * samples[0]
        + np.exp(-2j * np.pi * freqs * span) * np.conj(alpha) * samples[-1]
    )
    return freqs, values


def ray_spectrum(body: ConvexBody, direction: Direction, rho_max: float, oversample: int = 8,
                 samples: Optional[int] = None, method: Optional[str] = None) -> RaySpectrum:
    """chi_hat(rho Theta) for rho = k / (oversample (B - A)), k up to rho_max / step"""
    if rho_max <= 0.0:
        raise ValueError("rho_max must be positive")
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    lower, upper = body.support_interval(direction)
    width = upper - lower
    count = int(np.ceil(rho_max * oversample * width))
    if method is None:
        method = "closed_form" if has_closed_form(body) else "fft_of_profile"

    if method == "closed_form":
        rho = np.arange(count + 1) / (oversample * width)
        values = np.empty(count + 1, dtype=complex)
        values[1:] = closed_form_ft(body, np.outer(rho[1:], direction.vector))
    elif method == "fft_of_profile":
        n = samples or max(PROFILE_NODES, _next_power_of_two(SAMPLES_PER_PERIOD * rho_max * width))
        t = lower + width * np.arange(n + 1) / n
        rho, values = interpolated_spectrum(body.profile(direction, t), lower, width / n, count, oversample)
    else:
        raise ValueError(f"unknown spectrum method {method!r}")
    values[0] = body.area
    logger.debug(f"ray_spectrum {body.spec.label()} theta={direction.theta:.6g}: "
                 f"{count + 1} radii up to {rho[-1]:.6g} ({method})")
    return RaySpectrum(direction, rho, values, method)


def profile_spectrum(f: ProfileFunction, s_max: float, oversample: int = 8,
                     samples_per_period: int = SAMPLES_PER_PERIOD) -> Tuple[np.ndarray, np.ndarray]:
    """f_hat on s_k = k / (2 oversample) for s_k <= s_max (plus one step)"""
    count = int(np.ceil(s_max * oversample * 2.0))
    n = max(f.nodes, _next_power_of_two(samples_per_period * s_max * 2.0))
    values = f.samples if n == f.nodes else f(np.linspace(-1.0, 1.0, n + 1))
    return interpolated_spectrum(values, -1.0, 2.0 / n, count, oversample)
