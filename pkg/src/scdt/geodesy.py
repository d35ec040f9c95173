"""Transport distances between signed signals and interpolation paths.

Distances are computed in embedding coordinates, which stay defined when a
sign part is absent (its block is the zero function). Paths interpolate the
two endpoint tuples componentwise, reconstruct a signal at each step, and
re-transform the reconstructions; a path whose re-transformed step
distances sum to more than the endpoint distance certifies that the
straight tuple line leaves the transform space.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ValidationError
from .signals import Signal
from .transform import (
    DEFAULT_OVERLAP_RTOL,
    Reference,
    Scdt,
    ValidityReport,
    _signed_from_parts,
    cdt_forward,
    flatten,
    scdt_forward,
    unflatten,
    validate_scdt,
)

DEFAULT_ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.0)


def w2(s1: Signal, s2: Signal, ref: Reference) -> float:
    """Wasserstein-2 distance between two nonnegative signals (normalized).

    Equals the L2(ref) norm of the difference of the two transport maps,
    integrated by the trapezoid rule on the reference grid.
    """
    m1 = cdt_forward(s1, ref)
    m2 = cdt_forward(s2, ref)
    diff = m1.values - m2.values
    return float(np.sqrt(np.trapezoid(diff**2 * ref.signal.values, ref.grid)))


def scdt_distance(t1: Scdt, t2: Scdt) -> float:
    """Product-metric distance between two transform tuples."""
    t1.reference.require_same(t2.reference)
    v1 = flatten(t1).coords
    v2 = flatten(t2).coords
    return float(np.linalg.norm(v1 - v2))


def ds_distance(s1: Signal, s2: Signal, ref: Reference) -> float:
    """Generalized Wasserstein-2 distance between two signed signals."""
    return scdt_distance(scdt_forward(s1, ref), scdt_forward(s2, ref))


@dataclass(frozen=True)
class PathPointSet:
    """A sampled interpolation path with its segment accounting.

    ``gap_ratio`` is ``sum(segment_distances) / endpoint_distance`` (1 on a
    geodesic). When the endpoint distance falls below ``noise_floor`` (the
    measured reconstruction error of the two endpoints) the path is flagged
    ``degenerate``: the endpoints are indistinguishable at the working
    resolution and the ratio is reported as 1, or infinity if the interior
    still wanders measurably.
    """

    alphas: tuple[float, ...]
    points: tuple[Signal, ...]
    segment_distances: tuple[float, ...]
    endpoint_distance: float
    gap_ratio: float
    noise_floor: float = 0.0
    degenerate: bool = False

    def __post_init__(self):
        if self.alphas[0] != 0.0 or self.alphas[-1] != 1.0:
            raise ValidationError("path alphas must start at 0 and end at 1")
        if len(self.segment_distances) != len(self.alphas) - 1:
            raise ValidationError("one segment distance per consecutive alpha pair required")

    @property
    def total_length(self) -> float:
        return float(sum(self.segment_distances))


def _check_alphas(alphas) -> np.ndarray:
    arr = np.asarray(alphas, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValidationError("alphas must be a 1-D sequence with at least 2 entries")
    if arr[0] != 0.0 or arr[-1] != 1.0 or np.any(np.diff(arr) <= 0):
        raise ValidationError("alphas must increase strictly from 0 to 1")
    return arr


def _interpolated_parts(t0: Scdt, t1: Scdt, alpha: float) -> list[tuple[np.ndarray, float]]:
    """Componentwise tuple interpolation; absent parts enter as zero blocks."""
    n = len(t0.reference.signal)
    zeros = np.zeros(n)
    parts = []
    for m0, a0, m1, a1, sign in (
        (t0.f_plus, t0.a, t1.f_plus, t1.a, 1.0),
        (t0.f_minus, t0.b, t1.f_minus, t1.b, -1.0),
    ):
        if m0 is None and m1 is None:
            continue
        mass = (1.0 - alpha) * a0 + alpha * a1
        v0 = m0.values if m0 is not None else zeros
        v1 = m1.values if m1 is not None else zeros
        parts.append(((1.0 - alpha) * v0 + alpha * v1, sign * mass))
    return parts


def path_point_from_scdt(t0: Scdt, t1: Scdt, alpha: float, ref: Reference | None = None,
                         out_resolution: int | None = None) -> Signal:
    """Signal at position ``alpha`` on the tuple-interpolation path."""
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha!r}")
    ref = ref if ref is not None else t0.reference
    t0.reference.require_same(ref)
    t1.reference.require_same(ref)
    n = out_resolution if out_resolution is not None else len(ref.signal)
    return _signed_from_parts(_interpolated_parts(t0, t1, alpha), ref, n, allow_bump=True)


def path_point(s: Signal, s_tilde: Signal, alpha: float, ref: Reference,
               out_resolution: int | None = None) -> Signal:
    """Interpolate between two signals: combine per-part masses and maps
    convexly, push forward, and subtract on a common grid.

    Endpoints reconstruct through the same pipeline, so ``alpha = 0``
    returns the first signal up to discretization (not verbatim).
    """
    t0 = scdt_forward(s, ref)
    t1 = scdt_forward(s_tilde, ref)
    return path_point_from_scdt(t0, t1, alpha, ref, out_resolution)


def geodesic_path(s: Signal, s_tilde: Signal, alphas=DEFAULT_ALPHAS,
                  ref: Reference | None = None,
                  out_resolution: int | None = None) -> PathPointSet:
    """Sample the interpolation path and account its segment distances.

    All distances (including the endpoint distance) are measured between
    re-transformed reconstructed path points, so the triangle inequality
    holds exactly and endpoint reconstruction bias cancels.
    """
    if ref is None:
        raise ValidationError("geodesic_path requires a reference")
    arr = _check_alphas(alphas)
    t0 = scdt_forward(s, ref)
    t1 = scdt_forward(s_tilde, ref)
    points = tuple(path_point_from_scdt(t0, t1, a, ref, out_resolution) for a in arr)
    vecs = [flatten(scdt_forward(p, ref)).coords for p in points]
    segs = tuple(float(np.linalg.norm(vecs[i] - vecs[i - 1])) for i in range(1, len(vecs)))
    endpoint = float(np.linalg.norm(vecs[-1] - vecs[0]))
    floor = float(np.linalg.norm(vecs[0] - flatten(t0).coords)
                  + np.linalg.norm(vecs[-1] - flatten(t1).coords))
    total = float(sum(segs))
    degenerate = False
    if endpoint == 0.0:
        ratio = 1.0 if total == 0.0 else float("inf")
        degenerate = total != 0.0
    elif endpoint <= floor:
        # endpoints coincide at the working resolution
        degenerate = True
        ratio = 1.0 if total <= len(segs) * floor else float("inf")
    else:
        ratio = total / endpoint
    return PathPointSet(tuple(float(a) for a in arr), points, segs, endpoint, ratio,
                        noise_floor=floor, degenerate=degenerate)


@dataclass(frozen=True)
class ConstantSpeedReport:
    """Outcome of the constant-speed test over an (alpha, beta) grid."""

    max_relative_deviation: float
    endpoint_distance: float
    exact_zero: bool = False


def constant_speed_check(s: Signal, s_tilde: Signal, ref: Reference,
                         pairs=None, grid_size: int = 5) -> ConstantSpeedReport:
    """Maximum relative deviation from constant-speed interpolation.

    Over all requested ``(alpha, beta)`` pairs, compares the distance
    between the reconstructed path points against ``|alpha - beta|`` times
    the endpoint distance. A zero endpoint distance is reported as the
    exact-zero case instead of a ratio.
    """
    if pairs is None:
        base = np.linspace(0.0, 1.0, grid_size)
        pairs = list(product(base, base))
    alphas = sorted({0.0, 1.0} | {float(a) for ab in pairs for a in ab})
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise ValidationError(f"alpha/beta values must lie in [0, 1], got {a!r}")
    t0 = scdt_forward(s, ref)
    t1 = scdt_forward(s_tilde, ref)
    vec = {a: flatten(scdt_forward(path_point_from_scdt(t0, t1, a, ref), ref)).coords
           for a in alphas}
    dist = float(np.linalg.norm(vec[1.0] - vec[0.0]))
    if dist == 0.0:
        return ConstantSpeedReport(0.0, 0.0, exact_zero=True)
    worst = 0.0
    for a, b in pairs:
        d = float(np.linalg.norm(vec[float(a)] - vec[float(b)]))
        worst = max(worst, abs(d - abs(a - b) * dist) / dist)
    return ConstantSpeedReport(worst, dist)


def geodesic_midpoint_diagnostic(s: Signal, s_tilde: Signal, ref: Reference,
                                 tol: float = DEFAULT_OVERLAP_RTOL) -> ValidityReport:
    """Test the unique geodesic candidate's midpoint for transform-space
    membership.

    The candidate midpoint is the componentwise mean of the two tuples in
    embedding coordinates. A failed check certifies that no geodesic joins
    the two signals; a passed check only reports the candidate as valid.
    """
    v0 = flatten(scdt_forward(s, ref)).coords
    v1 = flatten(scdt_forward(s_tilde, ref)).coords
    midpoint = unflatten((v0 + v1) / 2.0, ref)
    return validate_scdt(midpoint, ref, tol=tol)
