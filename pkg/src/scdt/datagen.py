"""Synthetic templates, warped-sample datasets, and worked example pairs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps

from .errors import ValidationError
from .signals import Signal, Warp, apply_warp

TEMPLATE_IDS = ("gabor", "sawtooth_apodized", "square_apodized")
FIGURE_IDS = ("fig2_top", "fig2_bottom", "fig3_top", "fig3_bottom")


def template(name: str, grid, frequency: float = 5.0, center: float = 0.5,
             width: float = 0.1) -> Signal:
    """One of the three prototype waveforms on [0, 1].

    ``gabor`` is a cosine under a Gaussian envelope; the other two are
    standard sawtooth/square waves apodized by the same envelope.
    """
    t = np.asarray(grid, dtype=np.float64)
    envelope = np.exp(-((t - center) ** 2) / (2.0 * width**2))
    if name == "gabor":
        vals = np.cos(2 * np.pi * frequency * (t - center)) * envelope
    elif name == "sawtooth_apodized":
        vals = sps.sawtooth(2 * np.pi * frequency * t) * envelope
    elif name == "square_apodized":
        vals = sps.square(2 * np.pi * frequency * t) * envelope
    else:
        raise ValidationError(f"unknown template {name!r}; expected one of {TEMPLATE_IDS}")
    return Signal(t, vals)


@dataclass(frozen=True)
class DatasetSpec:
    """Self-describing recipe for the warped-template dataset."""

    template_ids: tuple[str, ...] = TEMPLATE_IDS
    omega_range: tuple[float, float] = (0.7, 1.4)
    tau_range: tuple[float, float] = (-0.2, 0.2)
    train_per_class: int = 20
    test_per_class: int = 34
    resolution: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.omega_range[0] <= 0 or self.omega_range[1] < self.omega_range[0]:
            raise ValidationError("omega range must be positive and ordered")
        if self.tau_range[1] < self.tau_range[0]:
            raise ValidationError("tau range must be ordered")
        if self.train_per_class < 1 or self.test_per_class < 1:
            raise ValidationError("counts per class must be >= 1")
        if self.resolution < 4:
            raise ValidationError("resolution must be >= 4")
        for name in self.template_ids:
            if name not in TEMPLATE_IDS:
                raise ValidationError(f"unknown template {name!r}")


@dataclass(frozen=True)
class ExperimentData:
    """Labeled train/test splits drawn from the generative model."""

    train: tuple[Signal, ...]
    train_labels: tuple[int, ...]
    test: tuple[Signal, ...]
    test_labels: tuple[int, ...]
    spec: DatasetSpec


def _draw_class(tmpl: Signal, count: int, spec: DatasetSpec,
                rng: np.random.Generator) -> list[Signal]:
    out = []
    for _ in range(count):
        omega = rng.uniform(*spec.omega_range)
        tau = rng.uniform(*spec.tau_range)
        out.append(apply_warp(tmpl, Warp.affine(omega, tau, normalize=True)))
    return out


def make_experiment1(spec: DatasetSpec) -> ExperimentData:
    """Three classes of mass-preserving affine deformations of the templates.

    Each class uses a child seed derived from (spec.seed, class index), so
    per-class generation is order-independent and bit-exact under the seed.
    """
    grid = np.linspace(0.0, 1.0, spec.resolution)
    train, train_labels, test, test_labels = [], [], [], []
    for ci, name in enumerate(spec.template_ids):
        tmpl = template(name, grid)
        rng = np.random.default_rng([spec.seed, ci])
        train.extend(_draw_class(tmpl, spec.train_per_class, spec, rng))
        train_labels.extend([ci] * spec.train_per_class)
        test.extend(_draw_class(tmpl, spec.test_per_class, spec, rng))
        test_labels.extend([ci] * spec.test_per_class)
    return ExperimentData(tuple(train), tuple(train_labels), tuple(test),
                          tuple(test_labels), spec)


def counterexample_pair(resolution: int = 1000) -> tuple[Signal, Signal]:
    """The opposing step pair on [-1, 1] between which no geodesic exists."""
    if resolution < 4:
        raise ValidationError("resolution must be >= 4")
    grid = np.linspace(-1.0, 1.0, resolution)
    first = np.where(grid < 0.0, 1.0, -1.0)
    return Signal(grid, first), Signal(grid, -first)


def figure_signals(which: str, resolution: int = 1000) -> tuple[Signal, Signal]:
    """Endpoint pairs of the worked path examples.

    ``fig2_top``: zero signal and one period of sin (a valid geodesic);
    ``fig2_bottom``: a sine and its Jacobian-normalized square-law warp
    (valid geodesic); ``fig3_top``: opposing half-interval steps;
    ``fig3_bottom``: the same sine warped without the Jacobian factor
    (both non-geodesic pairs).
    """
    if resolution < 100:
        raise ValidationError("resolution must be >= 100")
    grid = np.linspace(0.0, 1.0, resolution)
    if which == "fig2_top":
        return Signal(grid, np.zeros(resolution)), Signal(grid, np.sin(2 * np.pi * grid))
    if which == "fig2_bottom":
        s = Signal(grid, -np.sin(3 * np.pi * grid))
        return s, apply_warp(s, Warp.power(2.0, normalize=True))
    if which == "fig3_top":
        s = Signal(grid, np.where(grid > 0.5, 1.0, -1.0))
        return s, Signal(grid, -s.values)
    if which == "fig3_bottom":
        s = Signal(grid, -np.sin(3 * np.pi * grid))
        return s, apply_warp(s, Warp.power(2.0, normalize=False))
    raise ValidationError(f"unknown figure id {which!r}; expected one of {FIGURE_IDS}")
