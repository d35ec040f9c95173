"""Grid-sampled signals: construction, norms, Jordan decomposition, warps.

A signal is a sampled real-valued function on a bounded strictly increasing
grid, interpreted as a piecewise-linear density between samples and zero
outside its domain. All quadrature is trapezoidal, consistent with that
interpretation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

# A Jordan part whose mass is below this fraction of (total mass + 1) is
# treated as identically zero by downstream transforms.
ZERO_MASS_RTOL = 1e-12


def _as_readonly_f64(x) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    arr.flags.writeable = False
    return arr


def _check_grid(grid: np.ndarray, name: str = "grid") -> None:
    if grid.ndim != 1 or grid.size < 2:
        raise ValidationError(f"{name} must be 1-D with at least 2 points, got shape {grid.shape}")
    bad = np.flatnonzero(~np.isfinite(grid))
    if bad.size:
        raise ValidationError(f"{name} has non-finite entry at index {bad[0]}")
    steps = np.diff(grid)
    bad = np.flatnonzero(steps <= 0)
    if bad.size:
        raise ValidationError(
            f"{name} must be strictly increasing; violation between indices "
            f"{bad[0]} and {bad[0] + 1} ({grid[bad[0]]!r} -> {grid[bad[0] + 1]!r})")


@dataclass(frozen=True)
class Signal:
    """A sampled signal on a bounded 1-D domain.

    Attributes
    ----------
    grid : ndarray
        Strictly increasing sample times, length >= 2, finite endpoints.
    values : ndarray
        Sample values, same length as ``grid``; piecewise-linear between
        samples and zero outside ``[grid[0], grid[-1]]``.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = _as_readonly_f64(self.grid)
        values = _as_readonly_f64(self.values)
        _check_grid(grid)
        if values.ndim != 1 or values.size != grid.size:
            raise ValidationError(
                f"values length {values.size} does not match grid length {grid.size}")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise ValidationError(f"values has non-finite entry at index {bad[0]}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def __len__(self) -> int:
        return self.grid.size


@dataclass(frozen=True)
class SignalPart:
    """A nonnegative signal together with its L1 mass."""

    signal: Signal
    mass: float

    def __post_init__(self):
        if np.any(self.signal.values < 0):
            raise ValidationError("SignalPart values must be nonnegative")
        norm = float(np.trapezoid(self.signal.values, self.signal.grid))
        if abs(self.mass - norm) > 1e-9 * (norm + 1.0):
            raise ValidationError(
                f"SignalPart mass {self.mass!r} disagrees with its L1 norm {norm!r}")


def make_signal(grid, values) -> Signal:
    """Validate and build a :class:`Signal` from raw sequences."""
    return Signal(np.asarray(grid, dtype=np.float64), np.asarray(values, dtype=np.float64))


def l1_norm(s: Signal) -> float:
    """Trapezoid-rule integral of ``|values|`` over the grid."""
    return float(np.trapezoid(np.abs(s.values), s.grid))


def effectively_zero(mass: float, total_mass: float) -> bool:
    """Zero-part test: mass below ``ZERO_MASS_RTOL * (total_mass + 1)``."""
    return mass < ZERO_MASS_RTOL * (total_mass + 1.0)


def jordan_decompose(s: Signal) -> tuple[SignalPart, SignalPart]:
    """Split a signal into nonnegative positive and negative parts.

    The parts live on the same grid as ``s``; at every grid point
    ``pos - neg == s`` and ``pos * neg == 0`` hold exactly.
    """
    pos = np.maximum(s.values, 0.0)
    neg = np.maximum(-s.values, 0.0)
    p = Signal(s.grid, pos)
    n = Signal(s.grid, neg)
    return SignalPart(p, l1_norm(p)), SignalPart(n, l1_norm(n))


def resample(s: Signal, grid) -> Signal:
    """Piecewise-linear interpolation of ``s`` at new sample times.

    Points outside the original support evaluate to zero.
    """
    grid = np.asarray(grid, dtype=np.float64)
    _check_grid(grid, "target grid")
    vals = np.interp(grid, s.grid, s.values, left=0.0, right=0.0)
    return Signal(grid, vals)


@dataclass(frozen=True)
class Warp:
    """A strictly increasing time deformation ``g`` with optional scaling.

    ``apply_warp`` produces ``scale * g'(t) * s(g(t))`` when ``normalize``
    is true and ``scale * s(g(t))`` otherwise. Supported kinds:

    - ``affine``: g(t) = omega * t + tau, omega > 0
    - ``power``:  g(t) = t ** exponent on t >= 0, exponent > 0
    - ``tabulated``: strictly increasing samples; derivative by central
      differences with one-sided stencils at the endpoints
    """

    kind: str
    omega: float = 1.0
    tau: float = 0.0
    exponent: float = 1.0
    grid: np.ndarray | None = None
    values: np.ndarray | None = None
    scale: float = 1.0
    normalize: bool = True

    def __post_init__(self):
        if self.kind not in ("affine", "power", "tabulated"):
            raise ValidationError(f"unknown warp kind {self.kind!r}")
        if self.scale <= 0:
            raise ValidationError("warp scale must be positive")
        if self.kind == "affine" and self.omega <= 0:
            raise ValidationError("affine warp requires omega > 0")
        if self.kind == "power" and self.exponent <= 0:
            raise ValidationError("power warp requires exponent > 0")
        if self.kind == "tabulated":
            if self.grid is None or self.values is None:
                raise ValidationError("tabulated warp requires grid and values")
            grid = _as_readonly_f64(self.grid)
            values = _as_readonly_f64(self.values)
            _check_grid(grid, "warp grid")
            _check_grid(values, "warp values")
            if grid.size != values.size:
                raise ValidationError("tabulated warp grid/values length mismatch")
            object.__setattr__(self, "grid", grid)
            object.__setattr__(self, "values", values)

    @classmethod
    def affine(cls, omega: float, tau: float, scale: float = 1.0,
               normalize: bool = True) -> "Warp":
        return cls(kind="affine", omega=omega, tau=tau, scale=scale, normalize=normalize)

    @classmethod
    def power(cls, exponent: float, scale: float = 1.0, normalize: bool = True) -> "Warp":
        return cls(kind="power", exponent=exponent, scale=scale, normalize=normalize)

    @classmethod
    def tabulated(cls, grid, values, scale: float = 1.0, normalize: bool = True) -> "Warp":
        return cls(kind="tabulated", grid=np.asarray(grid, dtype=np.float64),
                   values=np.asarray(values, dtype=np.float64), scale=scale,
                   normalize=normalize)

    @classmethod
    def identity(cls) -> "Warp":
        return cls.affine(1.0, 0.0)

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "affine":
            return self.omega * t + self.tau
        if self.kind == "power":
            if np.any(t < 0):
                raise ValidationError("power warp domain is [0, inf)")
            return t**self.exponent
        if np.any(t < self.grid[0]) or np.any(t > self.grid[-1]):
            raise ValidationError("argument outside tabulated warp range")
        return np.interp(t, self.grid, self.values)

    def derivative(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "affine":
            return np.full_like(t, self.omega)
        if self.kind == "power":
            return self.exponent * t ** (self.exponent - 1.0)
        return np.interp(t, self.grid, np.gradient(self.values, self.grid))

    def inverse_values(self, v: np.ndarray) -> np.ndarray:
        """Apply g^{-1} pointwise; errors if v leaves the invertible range."""
        v = np.asarray(v, dtype=np.float64)
        if self.kind == "affine":
            return (v - self.tau) / self.omega
        if self.kind == "power":
            if np.any(v < 0):
                raise ValidationError("power warp inverse requires nonnegative values")
            return v ** (1.0 / self.exponent)
        if np.any(v < self.values[0]) or np.any(v > self.values[-1]):
            raise ValidationError("values outside tabulated warp range")
        return np.interp(v, self.values, self.grid)

    def preimage_interval(self, lo: float, hi: float) -> tuple[float, float]:
        a, b = self.inverse_values(np.array([lo, hi]))
        return float(a), float(b)


def apply_warp(s: Signal, w: Warp) -> Signal:
    """Deform a signal by a strictly increasing warp.

    The output grid is the preimage ``g^{-1}(domain of s)`` sampled uniformly
    at the input resolution; values are ``scale * g'(t) * s(g(t))`` when
    ``w.normalize`` else ``scale * s(g(t))``.
    """
    lo, hi = s.domain
    a, b = w.preimage_interval(lo, hi)
    if not b > a:
        raise ValidationError("warp preimage of the signal domain is degenerate")
    out_grid = np.linspace(a, b, len(s))
    mapped = w(out_grid)
    vals = np.interp(mapped, s.grid, s.values, left=0.0, right=0.0)
    if w.normalize:
        deriv = w.derivative(out_grid)
        if np.any(deriv < 0):
            raise ValidationError("warp derivative is negative on the output grid")
        vals = vals * deriv
    return Signal(out_grid, w.scale * vals)
