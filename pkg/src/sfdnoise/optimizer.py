"""Spring-constant optimization against SNR, sensitivity and bandwidth criteria.

The gas spring k_d(w) shifts the resonance upward, so the resonance
condition w^2*m = k_s + k_d(w) is solved self-consistently. The objective
combines band-integrated SNR, peak displacement sensitivity and a bandwidth
target as a weighted sum of log terms minus a relative bandwidth deviation.
"""

import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .damping_data import DampingInterpolant
from .errors import NoResonanceInBand
from .noise import K_BOLTZMANN, ResonatorParams, band_integrated_snr, mechanical_tf

# Objective assigned when the resonance leaves the interpolant domain; large
# enough to lose against any feasible candidate, finite so sweeps never NaN.
OUT_OF_DOMAIN_PENALTY = -1.0e6

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ObjectiveConfig:
    """Weights, operating band, bandwidth target and spring search range.

    Weights are normalized to sum to 1 at construction; the argmax is
    invariant under positive rescaling either way.
    """

    weight_snr: float
    weight_sensitivity: float
    weight_bandwidth: float
    band_hz: tuple  # (f1, f2)
    target_bandwidth_hz: float
    k_range: tuple  # (k_min, k_max)
    electrical_noise_floor: Optional[float] = None  # m/sqrt(Hz), comparison only

    def __post_init__(self):
        w = (self.weight_snr, self.weight_sensitivity, self.weight_bandwidth)
        if any(x < 0 for x in w) or sum(w) == 0:
            raise ValueError("weights must be non-negative with at least one positive")
        total = sum(w)
        object.__setattr__(self, "weight_snr", self.weight_snr / total)
        object.__setattr__(self, "weight_sensitivity", self.weight_sensitivity / total)
        object.__setattr__(self, "weight_bandwidth", self.weight_bandwidth / total)
        f1, f2 = self.band_hz
        if not (0 < f1 < f2):
            raise ValueError("operating band must satisfy 0 < f1 < f2")
        k_min, k_max = self.k_range
        if not (0 < k_min < k_max):
            raise ValueError("spring range must satisfy 0 < k_min < k_max")
        if self.target_bandwidth_hz <= 0:
            raise ValueError("target bandwidth must be positive")
        object.__setattr__(self, "band_hz", (float(f1), float(f2)))
        object.__setattr__(self, "k_range", (float(k_min), float(k_max)))


def objective_config_from_toml(source) -> ObjectiveConfig:
    """Load an ObjectiveConfig from a TOML file path or bytes."""
    if isinstance(source, bytes):
        doc = tomllib.loads(source.decode("utf-8"))
    else:
        with open(source, "rb") as fh:
            doc = tomllib.load(fh)
    weights = doc["weights"]
    band = doc["band"]
    return ObjectiveConfig(
        weight_snr=float(weights.get("snr", 0.0)),
        weight_sensitivity=float(weights.get("sensitivity", 0.0)),
        weight_bandwidth=float(weights.get("bandwidth", 0.0)),
        band_hz=(float(band["f_lo_hz"]), float(band["f_hi_hz"])),
        target_bandwidth_hz=float(doc["bandwidth"]["target_hz"]),
        k_range=(float(doc["spring"]["k_min"]), float(doc["spring"]["k_max"])),
        electrical_noise_floor=doc.get("comparison", {}).get(
            "electrical_noise_floor_m_rthz"
        ),
    )


@dataclass(frozen=True)
class DesignResult:
    """Optimizer output: chosen spring, self-consistent resonance, breakdown."""

    k_s_opt: float
    resonance_hz: float
    objective_value: float
    breakdown: dict
    on_boundary: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "k_s_opt_n_per_m": self.k_s_opt,
                "resonance_hz": self.resonance_hz,
                "objective_value": self.objective_value,
                "breakdown": self.breakdown,
                "on_boundary": self.on_boundary,
            },
            indent=2,
        ) + "\n"

    def summary(self) -> str:
        lines = [
            "design optimization result",
            f"  spring constant : {self.k_s_opt:.6e} N/m"
            + ("  (search boundary)" if self.on_boundary else ""),
            f"  resonance       : {self.resonance_hz:.6e} Hz",
            f"  objective       : {self.objective_value:.6e}",
        ]
        for name, value in self.breakdown.items():
            lines.append(f"    {name:<22}: {value:+.6e}" if isinstance(value, float)
                         else f"    {name:<22}: {value}")
        return "\n".join(lines)


def resonance_frequency(interp: DampingInterpolant, mass_kg: float, k_s: float) -> float:
    """Self-consistent resonance: solves w^2*m = k_s + k_d(w) inside the domain.

    Damped fixed-point iteration on w = sqrt((k_s + k_d(w))/m), falling back
    to bisection on the residual when the iteration stalls.
    """
    f_lo, f_hi = interp.f_min, interp.f_max

    def residual(f):
        return (2 * math.pi * f) ** 2 * mass_kg - k_s - float(interp.kd(f))

    r_lo, r_hi = residual(f_lo), residual(f_hi)
    if r_lo > 0 or r_hi < 0:
        raise NoResonanceInBand(
            f"no resonance for k_s={k_s} within [{f_lo}, {f_hi}] Hz"
        )

    f = min(max(math.sqrt(k_s / mass_kg) / (2 * math.pi), f_lo), f_hi)
    for _ in range(200):
        f_new = math.sqrt((k_s + float(interp.kd(f))) / mass_kg) / (2 * math.pi)
        f_new = min(max(f_new, f_lo), f_hi)
        f_next = 0.5 * (f + f_new)  # damping factor avoids oscillation
        if abs(f_next - f) <= 1e-12 * f:
            return f_next
        f = f_next
    # Fixed point stalled: bisect the bracketed residual.
    lo, hi = f_lo, f_hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * lo:
            break
    return 0.5 * (lo + hi)


def _peak_gain(interp, params, f1, f2, points=800):
    """Peak of |m/D(jw)| over [f1, f2] on a dense log grid with local refinement."""
    grid = np.geomspace(f1, f2, points)
    gain = params.mass_kg / np.abs(mechanical_tf(interp, params, grid))
    i = int(np.argmax(gain))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, points - 1)]
    # Golden-section polish of the bracketed maximum.
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    g = lambda f: params.mass_kg / abs(mechanical_tf(interp, params, f))
    fc, fd = g(c), g(d)
    for _ in range(80):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = g(d)
        if b - a <= 1e-10 * a:
            break
    f_peak = 0.5 * (a + b)
    return float(g(f_peak)), float(f_peak)


def _half_power_bandwidth(interp, params, f_peak, peak_gain):
    """-3 dB bandwidth of |m/D| around f_peak, bisected on each side.

    Sides that never drop below peak/sqrt(2) inside the interpolant domain
    are cut at the domain edge.
    """
    target = peak_gain / math.sqrt(2.0)
    g = lambda f: params.mass_kg / abs(mechanical_tf(interp, params, f))

    def cross(lo, hi, above_at_lo):
        # g crosses target exactly once in (lo, hi)
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if (g(mid) >= target) == above_at_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    f_lo_dom, f_hi_dom = interp.f_min, interp.f_max
    left = (f_lo_dom if g(f_lo_dom) >= target
            else cross(f_lo_dom, f_peak, above_at_lo=False))
    right = (f_hi_dom if g(f_hi_dom) >= target
             else cross(f_peak, f_hi_dom, above_at_lo=True))
    return right - left


def objective_eval(
    cfg: ObjectiveConfig,
    interp: DampingInterpolant,
    mass_kg: float,
    temperature_k: float,
    k_s: float,
):
    """Objective value and per-criterion breakdown at one spring constant.

    objective = w_snr * log(band SNR) + w_sens * log(peak gain)
                - w_bw * |bandwidth - target| / target
    """
    params = ResonatorParams(mass_kg=mass_kg, k_spring_n_per_m=k_s,
                             temperature_k=temperature_k)
    breakdown = {}
    try:
        f_res = resonance_frequency(interp, mass_kg, k_s)
    except NoResonanceInBand:
        breakdown["penalty"] = OUT_OF_DOMAIN_PENALTY
        breakdown["resonance_in_domain"] = False
        return OUT_OF_DOMAIN_PENALTY, breakdown
    breakdown["resonance_in_domain"] = True
    breakdown["resonance_hz"] = f_res

    f1, f2 = cfg.band_hz
    total = 0.0
    if cfg.weight_snr > 0:
        snr = band_integrated_snr(1.0, interp, params, f1, f2)
        term = cfg.weight_snr * math.log(snr)
        breakdown["snr_term"] = term
        total += term
    if cfg.weight_sensitivity > 0:
        peak, f_peak = _peak_gain(interp, params, f1, f2)
        term = cfg.weight_sensitivity * math.log(peak)
        breakdown["sensitivity_term"] = term
        total += term
    if cfg.weight_bandwidth > 0:
        peak, f_peak = _peak_gain(interp, params, f1, f2)
        bw = _half_power_bandwidth(interp, params, f_peak, peak)
        term = -cfg.weight_bandwidth * abs(bw - cfg.target_bandwidth_hz) / cfg.target_bandwidth_hz
        breakdown["bandwidth_hz"] = bw
        breakdown["bandwidth_term"] = term
        total += term
    return total, breakdown


def optimize_spring(
    cfg: ObjectiveConfig,
    interp: DampingInterpolant,
    mass_kg: float,
    temperature_k: float,
    grid_points: int = 200,
) -> DesignResult:
    """Coarse log-grid scan plus golden-section refinement of the best bracket."""
    k_min, k_max = cfg.k_range

    def f_obj(k):
        return objective_eval(cfg, interp, mass_kg, temperature_k, k)[0]

    if k_max / k_min - 1.0 < 1e-9:
        k_best = k_min
        on_boundary = True
    else:
        grid = np.geomspace(k_min, k_max, grid_points)
        values = np.array([f_obj(k) for k in grid])
        i = int(np.argmax(values))
        a = grid[max(i - 1, 0)]
        b = grid[min(i + 1, grid_points - 1)]
        c = b - _INV_GOLDEN * (b - a)
        d = a + _INV_GOLDEN * (b - a)
        fc, fd = f_obj(c), f_obj(d)
        for _ in range(120):
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - _INV_GOLDEN * (b - a)
                fc = f_obj(c)
            else:
                a, c, fc = c, d, fd
                d = a + _INV_GOLDEN * (b - a)
                fd = f_obj(d)
            if b - a <= 1e-7 * a:
                break
        k_best = 0.5 * (a + b)
        # Keep the grid point if refinement did not beat it (flat objective).
        if f_obj(k_best) < values[i]:
            k_best = float(grid[i])
        on_boundary = i == 0 or i == grid_points - 1

    value, breakdown = objective_eval(cfg, interp, mass_kg, temperature_k, k_best)
    resonance = breakdown.get("resonance_hz", float("nan"))
    return DesignResult(
        k_s_opt=float(k_best),
        resonance_hz=float(resonance),
        objective_value=float(value),
        breakdown=breakdown,
        on_boundary=bool(on_boundary),
    )
