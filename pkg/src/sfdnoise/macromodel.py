"""Lumped RL macromodel of the air elasto-damping interaction.

In the mobility analogy (force as through variable, velocity as across
variable) the gas film presents the admittance Y(jw) = b(w) - j*k_d(w)/w.
Its series R-L equivalent is frequency dependent; this module fits a
frequency-independent network of N parallel-RL stages in series, verifies
it with a built-in AC evaluator, and emits a SPICE subcircuit in which the
resistors are the only noise-bearing elements.
"""

import io
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from .damping_data import DampingInterpolant
from .errors import DegenerateAdmittance, FitError
from .noise import K_BOLTZMANN, ResonatorParams

MODEL_FORMAT = "rlmodel/1"


@dataclass(frozen=True)
class AirAdmittancePoint:
    """One sample of Y(jw) = b - j*k_d/w, stored as (omega, Re, Im)."""

    omega: float
    y_real: float  # b(w), N*s/m
    y_imag: float  # -k_d(w)/w, N*s/m

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.y_real <= 0:
            raise ValueError("y_real (damping) must be positive")


@dataclass(frozen=True)
class SeriesRLPoint:
    """Frequency-local series equivalent Z = r_air + jw*l_air."""

    omega: float
    r_air: float  # (m/s)/N
    l_air: float  # m/N


@dataclass(frozen=True)
class LumpedRLModel:
    """Series chain of parallel-RL branches with frequency-independent values.

    Branches are canonically ordered by increasing corner frequency r/l;
    strict positivity of every element guarantees passivity.
    """

    branches: tuple  # ((r1, l1), (r2, l2), ...)
    fit_band_hz: tuple  # (f_lo, f_hi)
    fit_residual: float  # relative RMS over the fit points

    def __post_init__(self):
        branches = tuple((float(r), float(l)) for r, l in self.branches)
        if not branches:
            raise ValueError("model needs at least one branch")
        for r, l in branches:
            if r <= 0 or l <= 0:
                raise ValueError("all branch elements must be strictly positive")
        corners = [r / l for r, l in branches]
        if any(c2 <= c1 for c1, c2 in zip(corners, corners[1:])):
            raise ValueError("branch corner frequencies must be strictly increasing")
        object.__setattr__(self, "branches", branches)
        object.__setattr__(self, "fit_band_hz", tuple(float(f) for f in self.fit_band_hz))


def air_admittance(interp: DampingInterpolant, freq_hz: float) -> AirAdmittancePoint:
    """Sample the air admittance from interpolated b and k_d."""
    if freq_hz <= 0:
        raise ValueError("frequency must be positive")
    b, kd = interp.evaluate(freq_hz)
    omega = 2.0 * math.pi * freq_hz
    return AirAdmittancePoint(omega=omega, y_real=b, y_imag=-kd / omega)


def series_rl(point: AirAdmittancePoint) -> SeriesRLPoint:
    """Invert Y to the series form: R = w^2*b/(w^2*b^2 + k_d^2), L = k_d/(...)."""
    b = point.y_real
    kd = -point.y_imag * point.omega
    denom = b * b * point.omega**2 + kd * kd
    if denom == 0:
        raise DegenerateAdmittance("b and k_d both zero")
    return SeriesRLPoint(
        omega=point.omega,
        r_air=point.omega**2 * b / denom,
        l_air=kd / denom,
    )


def series_rl_from_bkd(omega: float, b: float, kd: float) -> SeriesRLPoint:
    """Series R-L directly from raw coefficients (b in N*s/m, kd in N/m)."""
    denom = b * b * omega**2 + kd * kd
    if denom == 0:
        raise DegenerateAdmittance("b and k_d both zero")
    return SeriesRLPoint(omega=omega, r_air=omega**2 * b / denom, l_air=kd / denom)


def bkd_from_series_rl(point: SeriesRLPoint):
    """Inverse map back to (b, k_d): Y = 1/(R + jwL)."""
    r, l, omega = point.r_air, point.l_air, point.omega
    mag2 = r * r + (omega * l) ** 2
    if mag2 == 0:
        raise DegenerateAdmittance("zero impedance point")
    return r / mag2, omega**2 * l / mag2


def model_impedance(model: LumpedRLModel, omega):
    """AC impedance Z(jw) = sum_k jw*l_k*r_k / (r_k + jw*l_k)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega must be positive")
    z = np.zeros(np.shape(w), dtype=complex)
    for r, l in model.branches:
        jwl = 1j * w * l
        z = z + jwl * r / (r + jwl)
    return z


def model_admittance(model: LumpedRLModel, omega):
    return 1.0 / model_impedance(model, omega)


def model_noise_psd(model: LumpedRLModel, temperature_k: float, omega):
    """Port force-noise PSD 4*k_B*T*Re{Y(jw)} in N^2/Hz."""
    return 4.0 * K_BOLTZMANN * temperature_k * np.real(model_admittance(model, omega))


def per_resistor_noise_psd(model: LumpedRLModel, temperature_k: float, omega):
    """Short-circuit port contribution of each resistor's Nyquist source.

    Resistor k injects 4*k_B*T/r_k through the divider |Z_k/Z_total|^2;
    the contributions sum to the port formula (thermodynamic consistency).
    """
    w = np.asarray(omega, dtype=float)
    z_tot = model_impedance(model, w)
    out = []
    for r, l in model.branches:
        jwl = 1j * w * l
        z_k = jwl * r / (r + jwl)
        out.append(4.0 * K_BOLTZMANN * temperature_k / r * np.abs(z_k / z_tot) ** 2)
    return out


def fit_branches(
    points: Sequence[SeriesRLPoint],
    n_branches: int = 3,
    n_starts: int = 8,
    seed: int = 0,
) -> LumpedRLModel:
    """Fit a frequency-independent parallel-RL chain to sampled impedance data.

    Minimizes the relative complex residual sum |Z_model - Z_data|^2 / |Z_data|^2.
    Positivity is enforced by optimizing log-parameters; initial corner
    frequencies are spread log-uniformly over the data band with the total
    resistance matched to the high-frequency |Z|, then jittered across
    deterministic multi-starts.
    """
    if n_branches < 1:
        raise ValueError("n_branches must be >= 1")
    if len(points) < 2 * n_branches:
        raise ValueError("need at least 2 frequency points per branch")
    omega = np.array([p.omega for p in points], dtype=float)
    if omega[-1] / omega[0] < 10.0 - 1e-9:
        raise ValueError("fit points must span at least one decade")
    z_data = np.array([p.r_air + 1j * p.omega * p.l_air for p in points])
    z_abs = np.abs(z_data)
    if np.any(z_abs == 0):
        raise ValueError("zero-impedance data point")

    def residuals(log_params):
        with np.errstate(over="ignore", invalid="ignore"):
            r = np.exp(log_params[:n_branches])
            l = np.exp(log_params[n_branches:])
            jwl = 1j * omega[:, None] * l[None, :]
            z_model = np.sum(jwl * r[None, :] / (r[None, :] + jwl), axis=1)
            rel = (z_model - z_data) / z_abs
        out = np.concatenate([rel.real, rel.imag])
        return np.where(np.isfinite(out), out, 1e6)

    # Base start: corners log-uniform across the band, total R from |Z| at the top.
    corners = np.geomspace(omega[0], omega[-1], n_branches + 2)[1:-1]
    r0 = np.full(n_branches, z_abs[-1] / n_branches)
    l0 = r0 / corners
    base = np.log(np.concatenate([r0, l0]))

    rng = np.random.default_rng(seed)
    best = None
    best_cost = np.inf
    for start in range(n_starts):
        x0 = base if start == 0 else base + rng.normal(0.0, 0.7, base.size)
        try:
            sol = least_squares(residuals, x0, method="lm", xtol=1e-15, ftol=1e-15)
        except Exception:
            continue
        if np.isfinite(sol.cost) and sol.cost < best_cost:
            best_cost = sol.cost
            best = sol.x

    if best is None:
        raise FitError("all fit starts failed", best_model=None, best_residual=None)

    r_fit = np.exp(best[:n_branches])
    l_fit = np.exp(best[n_branches:])
    order = np.argsort(r_fit / l_fit)
    branches = tuple((float(r_fit[i]), float(l_fit[i])) for i in order)
    rel = residuals(best)
    per_point = np.hypot(rel[: len(points)], rel[len(points):])
    residual = float(np.sqrt(np.mean(per_point**2)))
    try:
        model = LumpedRLModel(
            branches=branches,
            fit_band_hz=(omega[0] / (2 * math.pi), omega[-1] / (2 * math.pi)),
            fit_residual=residual,
        )
    except ValueError as exc:
        # Coincident corners: the optimizer collapsed two branches.
        raise FitError(f"degenerate fit: {exc}", best_model=None, best_residual=residual)
    return model


def fit_from_interpolant(
    interp: DampingInterpolant,
    f_lo: float,
    f_hi: float,
    n_points: int = 40,
    n_branches: int = 3,
    n_starts: int = 8,
    seed: int = 0,
) -> LumpedRLModel:
    """Sample air impedance on a log grid over [f_lo, f_hi] and fit branches."""
    grid = np.geomspace(f_lo, f_hi, n_points)
    points = [series_rl(air_admittance(interp, f)) for f in grid]
    return fit_branches(points, n_branches=n_branches, n_starts=n_starts, seed=seed)


def model_to_json(model: LumpedRLModel) -> str:
    doc = {
        "format": MODEL_FORMAT,
        "branches": [{"r": r, "l": l} for r, l in model.branches],
        "fit_band_hz": list(model.fit_band_hz),
        "residual": model.fit_residual,
        "units": {"r": "(m/s)/N", "l": "m/N", "fit_band": "Hz"},
    }
    return json.dumps(doc, indent=2) + "\n"


def model_from_json(text: str) -> LumpedRLModel:
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"unsupported model format: {doc.get('format')!r}")
    return LumpedRLModel(
        branches=tuple((br["r"], br["l"]) for br in doc["branches"]),
        fit_band_hz=tuple(doc["fit_band_hz"]),
        fit_residual=float(doc["residual"]),
    )


def export_spice(model: LumpedRLModel, params: ResonatorParams) -> str:
    """Emit a SPICE subcircuit of the full mechanical one-port.

    Mobility analogy: force is current, velocity is voltage. The proof mass
    maps to a capacitor C = m from the port to ground, the mechanical spring
    to an inductor L = 1/k_s, and each air branch to a parallel R-L stage;
    the stages run in series from the port to ground through internal nodes.
    Output is deterministic, suitable for golden-file comparison.
    """
    n = len(model.branches)
    buf = io.StringIO()
    buf.write("* squeeze-film air damping macromodel (mobility analogy)\n")
    buf.write("* force = current, velocity = voltage; resistors carry Nyquist noise\n")
    buf.write(
        f"* fit band: {model.fit_band_hz[0]:.6e} Hz .. {model.fit_band_hz[1]:.6e} Hz, "
        f"relative RMS residual: {model.fit_residual:.6e}\n"
    )
    buf.write(
        f"* mass: {params.mass_kg:.6e} kg, spring: {params.k_spring_n_per_m:.6e} N/m, "
        f"branches: {n}\n"
    )
    buf.write(".SUBCKT SQFILM n1 0\n")
    buf.write(f"C1 n1 0 {params.mass_kg:.11e}\n")
    buf.write(f"L{n + 1} n1 0 {1.0 / params.k_spring_n_per_m:.11e}\n")
    for k, (r, l) in enumerate(model.branches, start=1):
        top = f"n{k}"
        bot = f"n{k + 1}" if k < n else "0"
        buf.write(f"R{k} {top} {bot} {r:.11e}\n")
        buf.write(f"L{k} {top} {bot} {l:.11e}\n")
    buf.write(".ENDS SQFILM\n")
    return buf.getvalue()
