"""Cumulative distributions, transport maps, and the signed transform tuple.

The forward transform of a signed signal is the 4-tuple

    (map of s+ / ||s+||,  ||s+||,  map of s- / ||s-||,  ||s-||)

where each map transports a fixed positive reference density onto the
normalized Jordan part, sampled on the reference grid. Zero parts are
encoded as an absent map with mass 0. A tuple flattens to a weighted
Euclidean vector whose norm reproduces the L2(ref) x R product metric,
which makes distances and subspace projections plain linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ReferenceMismatchError, ValidationError
from .signals import Signal, SignalPart, Warp, _check_grid, effectively_zero, jordan_decompose

# Tolerance for declaring a tabulated map nondecreasing.
MONOTONE_TOL = 1e-9

# Default relative bound on the mass shared by the two part pushforwards.
# Sampled piecewise-linear signals leak O(grid cell) mass into each sign
# crossing cell, so the bound must sit well above that leakage while staying
# far below the O(min(a, b)) overlap of a genuinely invalid tuple.
DEFAULT_OVERLAP_RTOL = 0.05

_ATOMIC_SPAN_RTOL = 1e-12


def _trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    w = np.empty_like(grid)
    w[0] = (grid[1] - grid[0]) / 2
    w[-1] = (grid[-1] - grid[-2]) / 2
    w[1:-1] = (grid[2:] - grid[:-2]) / 2
    return w


def _generalized_inverse(grid: np.ndarray, values: np.ndarray, levels) -> np.ndarray:
    """Leftmost inverse of a tabulated nondecreasing function.

    Returns the smallest ``t`` with ``values(t) >= level``, with linear
    interpolation on increasing segments.  Levels at or below the minimum
    resolve to the right end of the leading flat (the support edge), and
    levels above the maximum clamp to the last grid point.
    """
    q = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    idx = np.searchsorted(values, q, side="left")
    idx = np.clip(idx, 0, values.size - 1)
    lo = np.maximum(idx - 1, 0)
    vlo, vhi = values[lo], values[idx]
    span = vhi - vlo
    frac = np.where(span > 0, (q - vlo) / np.where(span > 0, span, 1.0), 1.0)
    out = grid[lo] + np.clip(frac, 0.0, 1.0) * (grid[idx] - grid[lo])
    out = np.where(values[idx] == q, grid[idx], out)
    at_min = q <= values[0]
    if np.any(at_min):
        first = grid[np.searchsorted(values, values[0], side="right") - 1]
        out = np.where(at_min, first, out)
    out = np.where(q > values[-1], grid[-1], out)
    return out


@dataclass(frozen=True)
class Cdf:
    """A normalized cumulative distribution sampled on a grid."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values[0] != 0.0 or abs(self.values[-1] - 1.0) > 1e-12:
            raise ValidationError("CDF must start at 0 and end at 1")
        if np.any(np.diff(self.values) < 0):
            raise ValidationError("CDF values must be nondecreasing")


def cdf(s: Signal) -> Cdf:
    """Cumulative trapezoid integral of a nonnegative signal, normalized."""
    if np.any(s.values < 0):
        raise ValidationError("cdf requires nonnegative values")
    dx = np.diff(s.grid)
    inc = dx * (s.values[1:] + s.values[:-1]) / 2
    cum = np.concatenate([[0.0], np.cumsum(inc)])
    total = cum[-1]
    if total <= 0:
        raise ValidationError("empty distribution: signal has zero mass")
    vals = cum / total
    vals = np.maximum.accumulate(vals)
    # snap the endpoints so flat runs at the extremes are exact
    vals[np.abs(vals) < 1e-15] = 0.0
    vals[np.abs(vals - 1.0) < 1e-15] = 1.0
    vals = np.clip(vals, 0.0, 1.0)
    vals[0], vals[-1] = 0.0, 1.0
    return Cdf(s.grid, vals)


def quantile(F: Cdf, u) -> float | np.ndarray:
    """Generalized inverse of a CDF: ``inf{t : F(t) >= u}``.

    Flat segments resolve to their left endpoint; ``u = 0`` resolves to the
    left edge of the support.
    """
    arr = np.atleast_1d(np.asarray(u, dtype=np.float64))
    if np.any((arr < 0) | (arr > 1)):
        raise ValidationError("quantile levels must lie in [0, 1]")
    out = _generalized_inverse(F.grid, F.values, arr)
    return float(out[0]) if np.isscalar(u) or np.ndim(u) == 0 else out


@dataclass(frozen=True)
class Reference:
    """A strictly positive, L1-normalized density with precomputed CDF.

    The reference grid carries the transform sampling: maps are evaluated at
    its nodes and L2(ref) inner products become a diagonal weighting by
    ``sqrt(density * trapezoid cell width)``.
    """

    signal: Signal
    cdf: Cdf
    label: str
    weights: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if np.any(self.signal.values <= 0):
            raise ValidationError("reference density must be strictly positive")
        mass = np.trapezoid(self.signal.values, self.signal.grid)
        if abs(mass - 1.0) > 1e-9:
            raise ValidationError(f"reference density must have unit mass, got {mass!r}")
        w = np.sqrt(self.signal.values * _trapezoid_weights(self.signal.grid))
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0, n: int = 1000) -> "Reference":
        if not hi > lo:
            raise ValidationError("uniform reference needs hi > lo")
        grid = np.linspace(lo, hi, n)
        density = Signal(grid, np.full(n, 1.0 / (hi - lo)))
        return cls(density, cdf(density), f"uniform[{lo:g},{hi:g}]x{n}")

    @classmethod
    def from_signal(cls, s: Signal, label: str = "custom") -> "Reference":
        mass = np.trapezoid(s.values, s.grid)
        if mass <= 0:
            raise ValidationError("reference signal must have positive mass")
        density = Signal(s.grid, s.values / mass)
        return cls(density, cdf(density), label)

    @property
    def grid(self) -> np.ndarray:
        return self.signal.grid

    @property
    def key(self) -> tuple:
        lo, hi = self.signal.domain
        return (self.label, len(self.signal), lo, hi)

    def require_same(self, other: "Reference") -> None:
        if self.key != other.key or not np.array_equal(self.grid, other.grid):
            raise ReferenceMismatchError(
                f"mismatched references: {self.key} vs {other.key}")


@dataclass(frozen=True)
class TransportMap:
    """A nondecreasing map sampled on the reference grid.

    ``monotone_margin`` is the smallest increment between consecutive
    samples (negative when the map backslides). Strict construction rejects
    margins below ``-MONOTONE_TOL``; raw tuples assembled from embedding
    coordinates use ``strict=False`` and keep the margin for reporting.
    """

    domain_grid: np.ndarray
    values: np.ndarray
    monotone_margin: float = 0.0
    strict: bool = True

    def __post_init__(self):
        if self.values.shape != self.domain_grid.shape:
            raise ValidationError("transport map grid/values length mismatch")
        margin = float(np.min(np.diff(self.values))) if self.values.size > 1 else 0.0
        object.__setattr__(self, "monotone_margin", margin)
        if self.strict and margin < -MONOTONE_TOL:
            raise ValidationError(f"transport map is not nondecreasing (margin {margin:g})")

    @property
    def span(self) -> tuple[float, float]:
        return float(np.min(self.values)), float(np.max(self.values))


def cdt_forward(s: Signal, ref: Reference) -> TransportMap:
    """Optimal transport map from the reference onto the normalized signal.

    Computed as the generalized inverse of the signal CDF composed with the
    reference CDF, sampled at the reference grid nodes. The input is
    normalized internally, so only its shape matters.
    """
    if np.any(s.values < 0):
        raise ValidationError("cdt_forward requires a nonnegative signal")
    F = cdf(s)  # raises on zero mass
    vals = _generalized_inverse(F.grid, F.values, ref.cdf.values)
    return TransportMap(ref.grid, vals)


def pushforward(tmap: TransportMap, ref: Reference,
                out_resolution: int | None = None,
                out_grid: np.ndarray | None = None) -> Signal:
    """Density of the reference mass transported through a nondecreasing map.

    Evaluates ``F_out(y) = F_ref(T_inv(y))`` with the leftmost generalized
    inverse of the tabulated map, then differentiates on a uniform output
    grid. The result integrates to one up to floating-point roundoff.
    """
    lo, hi = tmap.span
    if hi - lo < _ATOMIC_SPAN_RTOL * (1.0 + abs(hi)):
        raise ValidationError("atomic pushforward unsupported: map is constant")
    if out_grid is None:
        n = out_resolution if out_resolution is not None else len(ref.signal)
        out_grid = np.linspace(lo, hi, n)
    dens = _pushforward_density(tmap.values, ref, out_grid)
    return Signal(out_grid, dens)


def _pushforward_density(map_values: np.ndarray, ref: Reference,
                         out_grid: np.ndarray) -> np.ndarray:
    xs = _generalized_inverse(ref.grid, map_values, out_grid)
    F_out = np.interp(xs, ref.grid, ref.cdf.values)
    F_out = np.where(out_grid < map_values.min(), 0.0, F_out)
    F_out = np.where(out_grid > map_values.max(), 1.0, F_out)
    return np.maximum(np.gradient(F_out, out_grid), 0.0)


@dataclass(frozen=True)
class Scdt:
    """Transform tuple ``(f_plus, a, f_minus, b)`` tied to a reference.

    ``f_plus``/``f_minus`` are transport maps of the normalized Jordan
    parts (``None`` for an absent part, paired with mass 0). ``raw``
    construction skips the embedding-membership checks so that arbitrary
    coordinate tuples (projections, midpoints) remain representable;
    their defects are surfaced by :func:`validate_scdt`.
    """

    f_plus: TransportMap | None
    a: float
    f_minus: TransportMap | None
    b: float
    reference: Reference
    strict: bool = True

    def __post_init__(self):
        for m, mass, name in ((self.f_plus, self.a, "plus"), (self.f_minus, self.b, "minus")):
            if m is not None and not np.array_equal(m.domain_grid, self.reference.grid):
                raise ValidationError(f"{name} map is not sampled on the reference grid")
            if self.strict:
                if (m is None) != (mass == 0.0):
                    raise ValidationError(
                        f"zero convention violated for {name} part: map "
                        f"{'absent' if m is None else 'present'} with mass {mass!r}")
                if mass < 0:
                    raise ValidationError(f"{name} mass must be nonnegative, got {mass!r}")

    @classmethod
    def raw(cls, f_plus_values, a: float, f_minus_values, b: float,
            ref: Reference) -> "Scdt":
        """Assemble a tuple from raw coordinate blocks without membership checks."""
        def mk(vals):
            if vals is None:
                return None
            return TransportMap(ref.grid, np.asarray(vals, dtype=np.float64), strict=False)
        return cls(mk(f_plus_values), float(a), mk(f_minus_values), float(b), ref,
                   strict=False)

    @property
    def is_zero(self) -> bool:
        return self.f_plus is None and self.f_minus is None


def scdt_forward(s: Signal, ref: Reference) -> Scdt:
    """Transform a signed signal: per-part maps plus part masses.

    Parts whose mass is negligible against the total follow the zero
    convention (absent map, mass 0); the zero signal maps to (0, 0, 0, 0).
    """
    pos, neg = jordan_decompose(s)
    total = pos.mass + neg.mass
    f_plus = a = f_minus = b = None
    if effectively_zero(pos.mass, total):
        f_plus, a = None, 0.0
    else:
        f_plus, a = cdt_forward(pos.signal, ref), pos.mass
    if effectively_zero(neg.mass, total):
        f_minus, b = None, 0.0
    else:
        f_minus, b = cdt_forward(neg.signal, ref), neg.mass
    return Scdt(f_plus, a, f_minus, b, ref)


def _signed_from_parts(parts, ref: Reference, out_resolution: int,
                       allow_bump: bool) -> Signal:
    """Difference of mass-scaled part pushforwards on a shared uniform grid.

    ``parts`` is a list of ``(map_values, signed_mass)``; entries with
    negligible mass are dropped. Maps whose range is narrower than one
    output cell are represented as a triangular bump of matching mass and
    one-cell width when ``allow_bump`` is set, and rejected otherwise.
    """
    total = sum(abs(m) for _, m in parts)
    live = [(v, m) for v, m in parts if not effectively_zero(abs(m), total)]
    if not live:
        lo, hi = ref.signal.domain
        grid = np.linspace(lo, hi, out_resolution)
        return Signal(grid, np.zeros(out_resolution))
    lo = min(float(v.min()) for v, _ in live)
    hi = max(float(v.max()) for v, _ in live)
    ref_lo, ref_hi = ref.signal.domain
    ref_cell = (ref_hi - ref_lo) / (len(ref.signal) - 1)
    if hi - lo < _ATOMIC_SPAN_RTOL:
        # every live map is constant; open a one-reference-cell window
        if not allow_bump:
            raise ValidationError("atomic pushforward unsupported: map is constant")
        lo, hi = lo - ref_cell, hi + ref_cell
    out_grid = np.linspace(lo, hi, out_resolution)
    out_cell = (hi - lo) / (out_resolution - 1)
    bump_width = max(out_cell, ref_cell)
    vals = np.zeros(out_resolution)
    for v, m in live:
        if float(v.max()) - float(v.min()) < out_cell:
            if not allow_bump:
                raise ValidationError("atomic pushforward unsupported: map is constant")
            center = float(v.mean())
            bump = np.maximum(0.0, 1.0 - np.abs(out_grid - center) / bump_width)
            vals += m * bump / np.trapezoid(bump, out_grid)
        else:
            vals += m * _pushforward_density(v, ref, out_grid)
    return Signal(out_grid, vals)


def scdt_inverse(t: Scdt, ref: Reference | None = None,
                 out_resolution: int | None = None) -> Signal:
    """Reconstruct the signal of a well-formed tuple.

    Returns ``a * push(f_plus) - b * push(f_minus)`` on a uniform grid
    spanning the union of the two map ranges; single-part tuples reduce to
    one scaled pushforward and the zero tuple to the zero signal.
    """
    ref = _resolve_ref(t, ref)
    n = out_resolution if out_resolution is not None else len(ref.signal)
    for m, mass, name in ((t.f_plus, t.a, "plus"), (t.f_minus, t.b, "minus")):
        if (m is None) != (mass == 0.0):
            raise ValidationError(f"zero convention violated for {name} part")
        if m is not None and m.monotone_margin < -MONOTONE_TOL:
            raise ValidationError(f"{name} map is not nondecreasing; "
                                  "use relaxed_inverse for out-of-space tuples")
    parts = []
    if t.f_plus is not None:
        parts.append((t.f_plus.values, t.a))
    if t.f_minus is not None:
        parts.append((t.f_minus.values, -t.b))
    return _signed_from_parts(parts, ref, n, allow_bump=False)


@dataclass(frozen=True)
class RearrangementInfo:
    """How far each raw map was from monotone before sorting."""

    plus_distance: float
    minus_distance: float

    @property
    def total(self) -> float:
        return self.plus_distance + self.minus_distance


def relaxed_inverse(t: Scdt, ref: Reference | None = None,
                    out_resolution: int | None = None) -> tuple[Signal, RearrangementInfo]:
    """Reconstruction that tolerates out-of-space tuples.

    Non-monotone map values are sorted (monotone rearrangement, which
    preserves their value distribution); the L2(ref) distance moved by each
    sort is reported. Near-constant maps fall back to the one-cell bump.
    """
    ref = _resolve_ref(t, ref)
    n = out_resolution if out_resolution is not None else len(ref.signal)
    wts = ref.weights**2
    parts = []
    dists = []
    for m, mass, sign in ((t.f_plus, t.a, 1.0), (t.f_minus, t.b, -1.0)):
        if m is None or mass == 0.0:
            dists.append(0.0)
            continue
        vals = m.values
        if m.monotone_margin < 0:
            srt = np.sort(vals)
            dists.append(float(np.sqrt(np.sum((srt - vals) ** 2 * wts))))
            vals = srt
        else:
            dists.append(0.0)
        parts.append((vals, sign * mass))
    signal = _signed_from_parts(parts, ref, n, allow_bump=True)
    return signal, RearrangementInfo(dists[0], dists[1])


def compose_warp(t: Scdt, w: Warp) -> Scdt:
    """Tuple of the warped signal, computed without leaving transform space.

    Applying ``g`` with unit Jacobian normalization to the signal turns each
    map ``f`` into ``g^{-1} o f``; masses are unchanged and zero parts are
    preserved.
    """
    def invert(m: TransportMap | None) -> TransportMap | None:
        if m is None:
            return None
        return TransportMap(m.domain_grid, w.inverse_values(m.values), strict=m.strict)

    return Scdt(invert(t.f_plus), t.a, invert(t.f_minus), t.b, t.reference,
                strict=t.strict)


@dataclass(frozen=True)
class ValidityReport:
    """Diagnostics for membership of a tuple in the transform space."""

    monotone_margin_plus: float | None
    monotone_margin_minus: float | None
    masses_nonnegative: bool
    pairing_ok: bool
    overlap_mass: float
    overlap_limit: float
    in_embedding_space: bool
    notes: tuple[str, ...] = ()


def validate_scdt(t: Scdt, ref: Reference | None = None,
                  tol: float = DEFAULT_OVERLAP_RTOL) -> ValidityReport:
    """Check monotonicity and mutual singularity of a tuple.

    The overlap mass is the integral of the pointwise minimum of the two
    mass-scaled part pushforwards on a shared grid; membership requires it
    to stay below ``tol * min(a, b)``. Tuples with an absent part skip the
    overlap test. Diagnostic only: never raises on a bad tuple.
    """
    ref = _resolve_ref(t, ref)
    notes = []
    mp = t.f_plus.monotone_margin if t.f_plus is not None else None
    mm = t.f_minus.monotone_margin if t.f_minus is not None else None
    monotone = all(m is None or m >= -MONOTONE_TOL for m in (mp, mm))
    if not monotone:
        notes.append("a map backslides beyond tolerance")
    masses_ok = t.a >= 0 and t.b >= 0
    if not masses_ok:
        notes.append("negative part mass")
    pairing_ok = ((t.f_plus is None) == (t.a == 0.0)) and ((t.f_minus is None) == (t.b == 0.0))
    if not pairing_ok:
        notes.append("zero convention violated (map/mass pairing)")

    overlap = 0.0
    limit = float("inf")
    if t.f_plus is not None and t.f_minus is not None and t.a > 0 and t.b > 0:
        limit = tol * min(t.a, t.b)
        overlap = _overlap_mass(t, ref)
        if overlap > limit:
            notes.append(f"part pushforwards share {overlap:g} mass (limit {limit:g})")
    ok = monotone and masses_ok and pairing_ok and overlap <= limit
    return ValidityReport(mp, mm, masses_ok, pairing_ok, overlap,
                          limit if np.isfinite(limit) else 0.0, ok, tuple(notes))


def _overlap_mass(t: Scdt, ref: Reference) -> float:
    vp, vm = t.f_plus.values, t.f_minus.values
    lo_p, hi_p = float(vp.min()), float(vp.max())
    lo_m, hi_m = float(vm.min()), float(vm.max())
    if hi_p - lo_p < _ATOMIC_SPAN_RTOL or hi_m - lo_m < _ATOMIC_SPAN_RTOL:
        # an atomic part overlaps fully iff the ranges intersect
        return min(t.a, t.b) if (lo_p <= hi_m and lo_m <= hi_p) else 0.0
    lo, hi = min(lo_p, lo_m), max(hi_p, hi_m)
    out = np.linspace(lo, hi, 2 * len(ref.signal))
    dp = t.a * _pushforward_density(vp, ref, out)
    dm = t.b * _pushforward_density(vm, ref, out)
    dp[(out < lo_p) | (out > hi_p)] = 0.0
    dm[(out < lo_m) | (out > hi_m)] = 0.0
    return float(np.trapezoid(np.minimum(dp, dm), out))


@dataclass(frozen=True)
class EmbeddingVector:
    """Flattened tuple coordinates with Euclidean geometry.

    Layout: ``[f_plus * w, a, f_minus * w, b]`` with node weights
    ``w = sqrt(density * cell width)``, so the Euclidean distance between
    two vectors equals the tuple metric up to quadrature.
    """

    coords: np.ndarray
    reference_key: tuple
    grid_length: int

    def __len__(self) -> int:
        return self.coords.size


def flatten(t: Scdt, ref: Reference | None = None) -> EmbeddingVector:
    """Embed a tuple as a weighted coordinate vector (zero blocks for absent parts)."""
    ref = _resolve_ref(t, ref)
    n = len(ref.signal)
    zeros = np.zeros(n)
    fp = t.f_plus.values if t.f_plus is not None else zeros
    fm = t.f_minus.values if t.f_minus is not None else zeros
    coords = np.concatenate([fp * ref.weights, [t.a], fm * ref.weights, [t.b]])
    return EmbeddingVector(coords, ref.key, n)


def unflatten(vec, ref: Reference) -> Scdt:
    """Interpret embedding coordinates as a (possibly out-of-space) tuple.

    Inverse of :func:`flatten` up to the zero-block convention: a block
    whose mass and weighted norm are both negligible is taken as an absent
    part. No membership checks are run; see :func:`validate_scdt`.
    """
    coords = vec.coords if isinstance(vec, EmbeddingVector) else np.asarray(vec, dtype=np.float64)
    n = len(ref.signal)
    if isinstance(vec, EmbeddingVector) and vec.reference_key != ref.key:
        raise ReferenceMismatchError(
            f"vector was embedded against {vec.reference_key}, not {ref.key}")
    if coords.size != 2 * n + 2:
        raise ValidationError(f"expected {2 * n + 2} coordinates, got {coords.size}")
    fp_block, a = coords[:n], float(coords[n])
    fm_block, b = coords[n + 1:2 * n + 1], float(coords[2 * n + 1])

    def block_to_map(block, mass):
        scale = abs(a) + abs(b)
        if effectively_zero(abs(mass), scale) and np.linalg.norm(block) < 1e-12 * (1 + scale):
            return None, 0.0
        return block / ref.weights, mass

    fp, a = block_to_map(fp_block, a)
    fm, b = block_to_map(fm_block, b)
    return Scdt.raw(fp, a, fm, b, ref)


def _resolve_ref(t: Scdt, ref: Reference | None) -> Reference:
    if ref is None:
        return t.reference
    t.reference.require_same(ref)
    return ref
