"""Closed-form squeeze-film gas forces on a rectangular plate.

The trapped gas film under a plate oscillating normal to a nearby surface
produces a dissipative (damping) force and a reactive (spring) force, both
frequency dependent through the squeeze number. This module evaluates the
per-displacement coefficients b(w) [N*s/m] and k_d(w) [N/m] from the series
solution of the linearized Reynolds equation, and synthesizes sampled
coefficient tables as a drop-in substitute for FEA exports.

Conventions: the squeeze number uses the plate width (shorter side) as the
characteristic length; coefficients are amplitude-independent, normalized
per unit displacement about the nominal gap.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .damping_data import DampingSpectrum
from .kernels import series_sums

_PI6 = math.pi**6
_PI8 = math.pi**8


@dataclass(frozen=True)
class PlateGeometry:
    """Rectangular movable plate over a gas film of nominal thickness gap_m."""

    length_m: float
    width_m: float
    gap_m: float

    def __post_init__(self):
        if self.length_m <= 0 or self.width_m <= 0 or self.gap_m <= 0:
            raise ValueError("plate dimensions must be positive")
        if self.width_m > self.length_m:
            raise ValueError("width_m must not exceed length_m (beta = L/W >= 1)")

    @property
    def beta(self) -> float:
        """Aspect ratio L/W, always >= 1."""
        return self.length_m / self.width_m

    @property
    def area_m2(self) -> float:
        return self.length_m * self.width_m


@dataclass(frozen=True)
class GasProperties:
    """Ambient gas state of the film."""

    pressure_pa: float
    viscosity_pa_s: float
    temperature_k: float

    def __post_init__(self):
        if self.pressure_pa <= 0 or self.viscosity_pa_s <= 0 or self.temperature_k <= 0:
            raise ValueError("gas properties must be positive")


@dataclass(frozen=True)
class SeriesTruncation:
    """Upper odd index of the double series; 49 exceeds 0.1% convergence."""

    max_index: int = 49

    def __post_init__(self):
        if self.max_index < 1 or self.max_index % 2 == 0:
            raise ValueError("max_index must be an odd integer >= 1")


DEFAULT_TRUNCATION = SeriesTruncation()


def squeeze_number(geom: PlateGeometry, gas: GasProperties, omega: float) -> float:
    """Dimensionless squeeze number sigma = 12*mu*w*W^2 / (P*g0^2)."""
    if omega < 0:
        raise ValueError("omega must be non-negative")
    return 12.0 * gas.viscosity_pa_s * omega * geom.width_m**2 / (
        gas.pressure_pa * geom.gap_m**2
    )


def damping_series_sum(sigma, beta: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION):
    """Damping series S_d(sigma, beta); accepts scalar or array sigma."""
    _check_series_args(sigma, beta)
    return series_sums(sigma, beta, trunc.max_index)[0]


def elastic_series_sum(sigma, beta: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION):
    """Elastic series S_s(sigma, beta); accepts scalar or array sigma."""
    _check_series_args(sigma, beta)
    return series_sums(sigma, beta, trunc.max_index)[1]


def _check_series_args(sigma, beta):
    if np.any(np.asarray(sigma) < 0):
        raise ValueError("sigma must be non-negative")
    if beta < 1:
        raise ValueError("beta must be >= 1")


def damping_coefficient(
    geom: PlateGeometry,
    gas: GasProperties,
    omega: float,
    trunc: SeriesTruncation = DEFAULT_TRUNCATION,
) -> float:
    """Damping coefficient b(w) in N*s/m.

    Equals (64*sigma*P*A / (pi^6*w*g0)) * S_d(sigma, beta). Since sigma is
    linear in w, the prefactor is evaluated in the cancelled form
    768*mu*W^2*A / (pi^6*g0^3) * S_d, which is exact at w = 0 as well
    (no sigma/w division ever happens).
    """
    sigma = squeeze_number(geom, gas, omega)
    s_d = damping_series_sum(sigma, geom.beta, trunc)
    return (
        768.0
        * gas.viscosity_pa_s
        * geom.width_m**2
        * geom.area_m2
        / (_PI6 * geom.gap_m**3)
        * s_d
    )


def spring_coefficient(
    geom: PlateGeometry,
    gas: GasProperties,
    omega: float,
    trunc: SeriesTruncation = DEFAULT_TRUNCATION,
) -> float:
    """Gas spring constant k_d(w) = (64*sigma^2*P*A / (pi^8*g0)) * S_s in N/m.

    Zero at DC; tends to the trapped-gas stiffness P*A/g0 at high frequency.
    """
    sigma = squeeze_number(geom, gas, omega)
    s_s = elastic_series_sum(sigma, geom.beta, trunc)
    return 64.0 * sigma**2 * gas.pressure_pa * geom.area_m2 / (_PI8 * geom.gap_m) * s_s


def synth_spectrum(
    geom: PlateGeometry,
    gas: GasProperties,
    grid_hz,
    trunc: SeriesTruncation = DEFAULT_TRUNCATION,
) -> DampingSpectrum:
    """Sample b and k_d on a frequency grid, as an FEA-export substitute."""
    grid = np.asarray(grid_hz, dtype=float)
    if grid.size == 0:
        raise ValueError("frequency grid is empty")
    if np.any(grid <= 0):
        raise ValueError("all grid frequencies must be positive")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("frequency grid must be strictly increasing")

    omega = 2.0 * math.pi * grid
    sigma = 12.0 * gas.viscosity_pa_s * omega * geom.width_m**2 / (
        gas.pressure_pa * geom.gap_m**2
    )
    s_d, s_s = series_sums(sigma, geom.beta, trunc.max_index)
    b = (
        768.0
        * gas.viscosity_pa_s
        * geom.width_m**2
        * geom.area_m2
        / (_PI6 * geom.gap_m**3)
        * s_d
    )
    kd = 64.0 * sigma**2 * gas.pressure_pa * geom.area_m2 / (_PI8 * geom.gap_m) * s_s
    return DampingSpectrum(freq_hz=grid, b_ns_per_m=b, kd_n_per_m=kd, source_tag="synthetic")
