"""Nearest-subspace classifiers in transform embedding coordinates.

Training signals are flattened to embedding vectors; each class is modeled
by the linear span of its vectors (through the origin). The NS method keeps
one orthonormal basis per class; the NLS method defers to query time and
spans only the ``k`` training vectors nearest to the query. Prediction
picks the class whose subspace has the smallest Euclidean residual, which
by the isometry equals the transform-metric distance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geodesy import DEFAULT_ALPHAS, PathPointSet, geodesic_path
from .signals import Signal
from .transform import (
    RearrangementInfo,
    Reference,
    Scdt,
    ValidityReport,
    flatten,
    relaxed_inverse,
    scdt_forward,
    unflatten,
    validate_scdt,
)

# Projection residuals below this fraction of the vector norm mean the
# query already lies in the subspace at working precision; the projected
# signal is then the query itself rather than a reconstruction.
IDENTITY_RTOL = 1e-7

METHODS = ("ns", "nls")


@dataclass(frozen=True)
class RankPolicy:
    """Singular-value cutoff: keep directions above ``rel_tol`` times the largest."""

    rel_tol: float = 1e-8

    def __post_init__(self):
        if not 0.0 <= self.rel_tol < 1.0:
            raise ValidationError("rank cutoff rel_tol must lie in [0, 1)")


@dataclass(frozen=True)
class ClassSubspace:
    """Per-class model: orthonormal basis (NS) or retained vectors (NLS)."""

    label: int
    basis: np.ndarray | None
    train_vectors: np.ndarray | None


@dataclass(frozen=True)
class SubspaceModel:
    """A fitted classifier; immutable and shareable across threads."""

    reference: Reference
    method: str
    nls_k: int
    rank_policy: RankPolicy
    classes: tuple[ClassSubspace, ...]

    @property
    def class_labels(self) -> tuple[int, ...]:
        return tuple(c.label for c in self.classes)


@dataclass(frozen=True)
class Prediction:
    """Predicted label with the per-class distances that produced it."""

    label: int
    class_labels: tuple[int, ...]
    distances: tuple[float, ...]
    path_lengths: tuple[float, ...] | None = None


@dataclass(frozen=True)
class ProjectionResult:
    """A projection onto one class subspace, in both representations.

    ``scdt`` holds the raw projected tuple (possibly out of transform
    space; see ``report``), ``signal`` its relaxed reconstruction. When the
    residual is below working precision the input signal is returned
    unchanged and ``identity`` is set.
    """

    scdt: Scdt
    signal: Signal
    residual: float
    report: ValidityReport
    rearrangement: RearrangementInfo
    identity: bool = False


def _orthonormal_basis(columns: np.ndarray, policy: RankPolicy) -> np.ndarray:
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.ascontiguousarray(u[:, :0])
    # fixed memory layout so persisted models reproduce predictions bit-exactly
    return np.ascontiguousarray(u[:, s > policy.rel_tol * s[0]])


def fit(signals, labels, ref: Reference, method: str = "ns",
        rank_policy: RankPolicy | None = None, nls_k: int = 5) -> SubspaceModel:
    """Fit per-class subspaces from labeled signals.

    Signals may live on arbitrary grids; embedding happens on the reference
    grid. NLS retains the per-class training vectors and requires
    ``nls_k`` at most the smallest class size.
    """
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; expected one of {METHODS}")
    signals = list(signals)
    labels = [int(l) for l in labels]
    if len(signals) != len(labels) or not signals:
        raise ValidationError("signals and labels must be matching nonempty sequences")
    policy = rank_policy if rank_policy is not None else RankPolicy()
    counts = Counter(labels)
    if method == "nls":
        if nls_k < 1:
            raise ValidationError("nls_k must be >= 1")
        smallest = min(counts.values())
        if nls_k > smallest:
            raise ValidationError(
                f"nls_k={nls_k} exceeds the smallest class size {smallest}")
    vectors = np.stack([flatten(scdt_forward(s, ref), ref).coords for s in signals], axis=1)
    classes = []
    for label in sorted(counts):
        cols = vectors[:, [i for i, l in enumerate(labels) if l == label]]
        if method == "ns":
            classes.append(ClassSubspace(label, _orthonormal_basis(cols, policy), None))
        else:
            classes.append(ClassSubspace(label, None, cols))
    return SubspaceModel(ref, method, nls_k, policy, tuple(classes))


def _subspace_residual(model: SubspaceModel, cls: ClassSubspace,
                       vec: np.ndarray) -> tuple[float, np.ndarray]:
    """Distance from ``vec`` to the class subspace and the projected vector."""
    if model.method == "ns":
        basis = cls.basis
    else:
        cols = cls.train_vectors
        d2 = np.sum((cols - vec[:, None]) ** 2, axis=0)
        nearest = np.argsort(d2, kind="stable")[: model.nls_k]
        basis = _orthonormal_basis(cols[:, nearest], model.rank_policy)
    proj = basis @ (basis.T @ vec)
    return float(np.linalg.norm(vec - proj)), proj


def predict(model: SubspaceModel, s: Signal) -> Prediction:
    """Label of the nearest class subspace; ties go to the smallest label."""
    vec = flatten(scdt_forward(s, model.reference), model.reference).coords
    dists = tuple(_subspace_residual(model, c, vec)[0] for c in model.classes)
    return Prediction(model.class_labels[int(np.argmin(dists))],
                      model.class_labels, dists)


def project(model: SubspaceModel, class_label: int, s: Signal,
            out_resolution: int | None = None) -> ProjectionResult:
    """Project a signal onto one class subspace and map it back.

    The projected tuple may leave the transform space (non-monotone maps,
    overlapping parts); that is reported, not rejected, and the relaxed
    inverse (monotone rearrangement, one-cell bump fallback) produces the
    reconstruction.
    """
    matches = [c for c in model.classes if c.label == int(class_label)]
    if not matches:
        raise ValidationError(
            f"unknown class {class_label!r}; model has {model.class_labels}")
    ref = model.reference
    vec = flatten(scdt_forward(s, ref), ref).coords
    residual, proj = _subspace_residual(model, matches[0], vec)
    tup = unflatten(proj, ref)
    report = validate_scdt(tup, ref)
    if residual <= IDENTITY_RTOL * np.linalg.norm(vec):
        return ProjectionResult(tup, s, residual, report,
                                RearrangementInfo(0.0, 0.0), identity=True)
    signal, rearrangement = relaxed_inverse(tup, ref, out_resolution)
    return ProjectionResult(tup, signal, residual, report, rearrangement)


def projection_path_report(s: Signal, s_tilde: Signal, ref: Reference,
                           alphas=DEFAULT_ALPHAS) -> PathPointSet:
    """Interpolation path from a signal to a projection, with gap ratio.

    Reading: an own-class projection path resembles a geodesic (ratio near
    one); a wrong-class path does not.
    """
    return geodesic_path(s, s_tilde, alphas, ref)


def predict_by_path_length(model: SubspaceModel, s: Signal, alphas=DEFAULT_ALPHAS,
                           out_resolution: int | None = None) -> Prediction:
    """Experimental: label by the shortest signal-to-projection path.

    Uses the summed segment distances along the interpolation path to each
    class projection instead of the embedding residual.
    """
    dists = []
    lengths = []
    for cls in model.classes:
        res = project(model, cls.label, s, out_resolution)
        dists.append(res.residual)
        if res.identity:
            lengths.append(0.0)
        else:
            path = geodesic_path(s, res.signal, alphas, model.reference, out_resolution)
            lengths.append(path.total_length)
    label = model.class_labels[int(np.argmin(lengths))]
    return Prediction(label, model.class_labels, tuple(dists), tuple(lengths))
