"""Mechano-thermal noise spectra, SNR, and white-baseline comparisons.

The fluctuating force on a damped mechanical element in thermal equilibrium
has one-sided PSD 4*k_B*T*b(f); the relation holds for frequency-dependent
b as well. Everything here follows from it plus the mechanical transfer
denominator D(jw) = k_s + k_d(w) + jw*b(w) - w^2*m.
"""

import io
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import trapezoid

from .damping_data import DampingInterpolant, DampingSpectrum, build_interpolant
from .errors import DomainError, SingularResponse, UnphysicalInput

K_BOLTZMANN = 1.380649e-23  # J/K, exact SI

NOISE_CSV_HEADER = (
    "freq_hz,f_noise_n_rthz,a_noise_ms2_rthz,z_noise_m_rthz,"
    "z_noise_white_m_rthz,a_noise_white_ms2_rthz"
)


@dataclass(frozen=True)
class ResonatorParams:
    """Lumped one-axis resonator: proof mass, mechanical spring, temperature."""

    mass_kg: float
    k_spring_n_per_m: float
    temperature_k: float

    def __post_init__(self):
        if self.mass_kg <= 0 or self.k_spring_n_per_m <= 0 or self.temperature_k <= 0:
            raise ValueError("mass, spring constant and temperature must be positive")


@dataclass(frozen=True)
class NoiseSpectra:
    """Per-frequency noise densities plus the white-baseline twins."""

    freq_hz: np.ndarray
    force_noise: np.ndarray  # N/sqrt(Hz)
    accel_noise: np.ndarray  # (m/s^2)/sqrt(Hz)
    disp_noise: np.ndarray  # m/sqrt(Hz)
    disp_noise_white: np.ndarray
    accel_noise_white: np.ndarray
    snr: Optional[np.ndarray] = None  # per-sqrt(Hz) ratio, present with a signal


def force_noise_density(b: float, temperature_k: float) -> float:
    """Nyquist force noise density sqrt(4*k_B*T*b) in N/sqrt(Hz)."""
    if b < 0 or temperature_k < 0:
        raise ValueError("b and T must be non-negative")
    return math.sqrt(4.0 * K_BOLTZMANN * temperature_k * b)


def input_accel_noise(interp: DampingInterpolant, params: ResonatorParams, freq_hz):
    """Equivalent input acceleration noise sqrt(4*k_B*T*b(f))/m."""
    b = interp.b(freq_hz)
    return np.sqrt(4.0 * K_BOLTZMANN * params.temperature_k * b) / params.mass_kg


def snr_input(a_ext, interp: DampingInterpolant, params: ResonatorParams, freq_hz):
    """Per-bandwidth SNR m*|A_ext(f)| / sqrt(4*k_B*T*b(f))."""
    noise = input_accel_noise(interp, params, freq_hz)
    if np.any(noise == 0):
        raise UnphysicalInput("zero noise density: b or T is zero")
    return np.abs(_eval_signal(a_ext, freq_hz)) / noise


def mechanical_tf(interp: DampingInterpolant, params: ResonatorParams, freq_hz):
    """Transfer denominator D(jw) = k_s + k_d(w) + jw*b(w) - w^2*m."""
    omega = 2.0 * math.pi * np.asarray(freq_hz, dtype=float)
    b = interp.b(freq_hz)
    kd = interp.kd(freq_hz)
    return (
        params.k_spring_n_per_m
        + kd
        - omega**2 * params.mass_kg
        + 1j * omega * b
    )


def displacement_noise(interp: DampingInterpolant, params: ResonatorParams, freq_hz):
    """Output displacement noise density sqrt(4*k_B*T*b(f)) / |D(jw)|."""
    d = np.abs(mechanical_tf(interp, params, freq_hz))
    if np.any(d == 0):
        raise SingularResponse("transfer denominator vanished")
    b = interp.b(freq_hz)
    return np.sqrt(4.0 * K_BOLTZMANN * params.temperature_k * b) / d


def displacement_signal(a_ext, interp: DampingInterpolant, params: ResonatorParams, freq_hz):
    """Signal displacement density m*|A_ext(f)| / |D(jw)|."""
    d = np.abs(mechanical_tf(interp, params, freq_hz))
    if np.any(d == 0):
        raise SingularResponse("transfer denominator vanished")
    return params.mass_kg * np.abs(_eval_signal(a_ext, freq_hz)) / d


def _eval_signal(a_ext, freq_hz):
    if callable(a_ext):
        return np.asarray(a_ext(np.asarray(freq_hz, dtype=float)), dtype=float)
    return np.full_like(np.asarray(freq_hz, dtype=float), float(a_ext))


def white_baseline(spec: DampingSpectrum, anchor_hz: Optional[float] = None) -> DampingSpectrum:
    """Frequency-independent twin table: b frozen at the anchor, k_d = 0.

    With anchor_hz=None the lowest-frequency row is used (the conventional
    white-noise model extends the low-frequency damping over the whole range).
    A numeric anchor must be one of the table frequencies or, for tables with
    at least 4 rows, anywhere inside the table span (interpolated).
    """
    if anchor_hz is None:
        b_anchor = float(spec.b_ns_per_m[0])
    else:
        if anchor_hz < spec.f_min or anchor_hz > spec.f_max:
            raise DomainError(f"anchor {anchor_hz} Hz outside table span")
        hits = np.nonzero(spec.freq_hz == anchor_hz)[0]
        if hits.size:
            b_anchor = float(spec.b_ns_per_m[hits[0]])
        else:
            b_anchor = float(build_interpolant(spec).b(anchor_hz))
    return DampingSpectrum(
        freq_hz=spec.freq_hz.copy(),
        b_ns_per_m=np.full(len(spec), b_anchor),
        kd_n_per_m=np.zeros(len(spec)),
        source_tag="white-baseline",
    )


def force_ratios(interp: DampingInterpolant, params: ResonatorParams, freq_hz):
    """Air forces normalized by the mechanical spring force.

    Returns (damping_ratio, elastic_ratio) = (w*b(w)/k_s, k_d(w)/k_s).
    """
    omega = 2.0 * math.pi * np.asarray(freq_hz, dtype=float)
    return (
        omega * interp.b(freq_hz) / params.k_spring_n_per_m,
        interp.kd(freq_hz) / params.k_spring_n_per_m,
    )


def band_integrated_snr(
    a_ext,
    interp: DampingInterpolant,
    params: ResonatorParams,
    f_lo: float,
    f_hi: float,
    points: int = 201,
) -> float:
    """Trapezoidal integral of the SNR density over [f_lo, f_hi] on a log grid."""
    if not (f_lo < f_hi):
        raise ValueError("f_lo must be below f_hi")
    grid = np.geomspace(f_lo, f_hi, points)
    return float(trapezoid(snr_input(a_ext, interp, params, grid), grid))


def compute_spectra(
    spec: DampingSpectrum,
    params: ResonatorParams,
    freq_hz=None,
    a_ext=None,
    anchor_hz: Optional[float] = None,
) -> NoiseSpectra:
    """Full noise-spectra table plus white-baseline twins on one grid."""
    grid = spec.freq_hz if freq_hz is None else np.asarray(freq_hz, dtype=float)
    interp = build_interpolant(spec)
    white = build_interpolant(white_baseline(spec, anchor_hz))

    b = interp.b(grid)
    force = np.sqrt(4.0 * K_BOLTZMANN * params.temperature_k * b)
    return NoiseSpectra(
        freq_hz=grid,
        force_noise=force,
        accel_noise=force / params.mass_kg,
        disp_noise=displacement_noise(interp, params, grid),
        disp_noise_white=displacement_noise(white, params, grid),
        accel_noise_white=input_accel_noise(white, params, grid),
        snr=None if a_ext is None else snr_input(a_ext, interp, params, grid),
    )


def export_noise_csv(spectra: NoiseSpectra) -> bytes:
    """Serialize NoiseSpectra with the same lexical rules as the damping CSV."""
    buf = io.StringIO()
    header = NOISE_CSV_HEADER + (",snr" if spectra.snr is not None else "")
    buf.write(header + "\n")
    cols = [
        spectra.freq_hz,
        spectra.force_noise,
        spectra.accel_noise,
        spectra.disp_noise,
        spectra.disp_noise_white,
        spectra.accel_noise_white,
    ]
    if spectra.snr is not None:
        cols.append(spectra.snr)
    for row in zip(*cols):
        buf.write(",".join(f"{v:.16e}" for v in row) + "\n")
    return buf.getvalue().encode("utf-8")
