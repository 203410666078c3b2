"""Sampled frequency-dependent damping tables: validation, CSV I/O, interpolation.

The DampingSpectrum table (frequency, damping coefficient b, gas spring k_d)
is the exchange format between FEA exports, the analytical synthesizer, the
noise analysis and the macromodel fitter. Interpolation is shape-preserving
piecewise cubic (monotone Hermite): b on (log f, log b) so positivity is
structural, k_d on (log f, value) since k_d may be zero at low frequency.
"""

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, OrderError, SchemaError

CSV_HEADER = "freq_hz,b_ns_per_m,kd_n_per_m"


@dataclass(frozen=True)
class DampingSpectrum:
    """Immutable table of (frequency, b, k_d) rows, strictly increasing in f."""

    freq_hz: np.ndarray
    b_ns_per_m: np.ndarray
    kd_n_per_m: np.ndarray
    source_tag: str = ""

    def __post_init__(self):
        f = np.asarray(self.freq_hz, dtype=float)
        b = np.asarray(self.b_ns_per_m, dtype=float)
        kd = np.asarray(self.kd_n_per_m, dtype=float)
        if not (f.shape == b.shape == kd.shape) or f.ndim != 1 or f.size == 0:
            raise ValueError("freq, b, kd must be equal-length 1-D arrays")
        if np.any(f <= 0):
            raise ValueError("frequencies must be positive")
        if np.any(np.diff(f) <= 0):
            raise OrderError("frequencies must be strictly increasing")
        for i, (bi, kdi) in enumerate(zip(b, kd)):
            if not (bi > 0) or not math.isfinite(bi):
                raise ValueError(f"row {i}: b must be positive and finite, got {bi}")
            if kdi < 0 or not math.isfinite(kdi):
                raise ValueError(f"row {i}: kd must be non-negative and finite, got {kdi}")
        object.__setattr__(self, "freq_hz", f)
        object.__setattr__(self, "b_ns_per_m", b)
        object.__setattr__(self, "kd_n_per_m", kd)

    def __len__(self):
        return self.freq_hz.size

    def __eq__(self, other):
        if not isinstance(other, DampingSpectrum):
            return NotImplemented
        return (
            np.array_equal(self.freq_hz, other.freq_hz)
            and np.array_equal(self.b_ns_per_m, other.b_ns_per_m)
            and np.array_equal(self.kd_n_per_m, other.kd_n_per_m)
        )

    @property
    def f_min(self) -> float:
        return float(self.freq_hz[0])

    @property
    def f_max(self) -> float:
        return float(self.freq_hz[-1])


def parse_csv(source) -> DampingSpectrum:
    """Parse a damping-table CSV from a path, text stream, or bytes.

    Schema: UTF-8, LF line endings, header exactly `freq_hz,b_ns_per_m,kd_n_per_m`,
    then three decimal floats per line; `#`-prefixed comment lines are ignored.
    The row order is validated, never silently re-sorted.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()

    lines = [ln for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise SchemaError("empty input: missing header line")
    if lines[0].strip() != CSV_HEADER:
        raise SchemaError(f"bad header: expected {CSV_HEADER!r}, got {lines[0].strip()!r}")

    freqs, bs, kds = [], [], []
    for i, line in enumerate(lines[1:]):
        parts = line.split(",")
        if len(parts) != 3:
            raise SchemaError(f"row {i}: expected 3 columns, got {len(parts)}")
        try:
            f, b, kd = (float(p) for p in parts)
        except ValueError as exc:
            raise SchemaError(f"row {i}: unparsable number ({exc})") from None
        if freqs and f <= freqs[-1]:
            raise OrderError(f"row {i}: frequency {f} not above previous {freqs[-1]}")
        if b <= 0:
            raise ValueError(f"row {i}: b must be positive, got {b}")
        if kd < 0:
            raise ValueError(f"row {i}: kd must be non-negative, got {kd}")
        freqs.append(f)
        bs.append(b)
        kds.append(kd)
    if not freqs:
        raise SchemaError("no data rows")
    return DampingSpectrum(
        freq_hz=np.array(freqs), b_ns_per_m=np.array(bs), kd_n_per_m=np.array(kds)
    )


def export_csv(spec: DampingSpectrum) -> bytes:
    """Serialize to the CSV schema; 17 significant digits round-trips exactly."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for f, b, kd in zip(spec.freq_hz, spec.b_ns_per_m, spec.kd_n_per_m):
        buf.write(f"{f:.16e},{b:.16e},{kd:.16e}\n")
    return buf.getvalue().encode("utf-8")


class DampingInterpolant:
    """Smooth knot-exact interpolant for b(f) and k_d(f) over the table span.

    Out-of-domain evaluation raises DomainError; there is no extrapolation
    and no silent clamping of the frequency argument.
    """

    def __init__(self, spec: DampingSpectrum):
        if len(spec) < 4:
            raise ValueError("at least 4 rows are required for interpolation")
        self.f_min = spec.f_min
        self.f_max = spec.f_max
        logf = np.log(spec.freq_hz)
        self._logb = PchipInterpolator(logf, np.log(spec.b_ns_per_m))
        self._kd = PchipInterpolator(logf, spec.kd_n_per_m)

    def _check_domain(self, freq_hz):
        f = np.asarray(freq_hz, dtype=float)
        if np.any(f < self.f_min) or np.any(f > self.f_max):
            raise DomainError(
                f"frequency outside interpolant domain [{self.f_min}, {self.f_max}] Hz"
            )
        return f

    def b(self, freq_hz):
        """Damping coefficient b(f) in N*s/m."""
        f = self._check_domain(freq_hz)
        return np.exp(self._logb(np.log(f)))

    def kd(self, freq_hz):
        """Gas spring k_d(f) in N/m; tiny negative wiggles clamp to 0."""
        f = self._check_domain(freq_hz)
        kd = self._kd(np.log(f))
        if np.any(kd < 0):
            warnings.warn("negative interpolated k_d clamped to 0", stacklevel=2)
            kd = np.maximum(kd, 0.0)
        return kd

    def evaluate(self, freq_hz):
        """Both coefficients at one frequency: returns (b, k_d)."""
        return float(self.b(freq_hz)), float(self.kd(freq_hz))


def build_interpolant(spec: DampingSpectrum) -> DampingInterpolant:
    return DampingInterpolant(spec)
