"""Maslov dequantization, curve envelopes and their corner locus.

For a closed curve ``gamma`` the functions ``f_s(x) = <x, gamma(s)> -
|gamma(s)|^2 / 2`` play the role of infinitely many sites. Their upper
envelope is smooth away from the points with two or more nearest curve
points, so its corner locus is the medial axis. Everything here is binary64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp, softmax

from .core import as_affine
from .errors import DegenerateError

ARC_SEPARATION = 1e-2
TIE_TOLERANCE = 1e-6


def _check_h(h: float) -> float:
    if not h > 1:
        raise ValueError(f"h must exceed 1, got {h}")
    return math.log(h)


def maslov_limit(values, h: float) -> float:
    """``log_h(sum h^a_i)``; lies in ``[max a, max a + log_h N]``."""
    lnh = _check_h(h)
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        raise ValueError("maslov_limit needs at least one value")
    if a.size == 1:
        return float(a[0])
    return float(logsumexp(a * lnh) / lnh)


@dataclass(frozen=True)
class ShapeCurve:
    """Closed curve ``gamma: [0, 1) -> R^2`` with ``samples`` uniform samples."""

    kind: str
    params: tuple
    samples: int = 1024

    @classmethod
    def ellipse(cls, a: float, b: float, samples: int = 1024, center=(0.0, 0.0)):
        if a <= 0 or b <= 0:
            raise ValueError("semi-axes must be positive")
        return cls("ellipse", (float(a), float(b), float(center[0]), float(center[1])), samples)

    @classmethod
    def circle(cls, r: float = 1.0, samples: int = 1024, center=(0.0, 0.0)):
        return cls.ellipse(r, r, samples, center)

    @classmethod
    def polyline(cls, vertices, samples: int = 1024):
        """Closed polygon through ``vertices``, parametrized by arc length."""
        v = tuple(tuple(map(float, p)) for p in vertices)
        if len(v) < 3:
            raise ValueError("a closed polyline needs at least 3 vertices")
        return cls("polyline", v, samples)

    def _polyline_data(self):
        v = np.array(self.params)
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(edges, axis=1)
        knots = np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()
        return v, edges, knots

    def point(self, s) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=float), 1.0)
        if self.kind == "ellipse":
            a, b, cx, cy = self.params
            t = 2 * np.pi * s
            return np.stack([cx + a * np.cos(t), cy + b * np.sin(t)], axis=-1)
        v, edges, knots = self._polyline_data()
        k = np.clip(np.searchsorted(knots, s, side="right") - 1, 0, len(v) - 1)
        u = (s - knots[k]) / (knots[k + 1] - knots[k])
        return v[k] + u[..., None] * edges[k]

    def tangent(self, s) -> np.ndarray:
        """``d gamma / ds``."""
        s = np.mod(np.asarray(s, dtype=float), 1.0)
        if self.kind == "ellipse":
            a, b, _, _ = self.params
            t = 2 * np.pi * s
            return 2 * np.pi * np.stack([-a * np.sin(t), b * np.cos(t)], axis=-1)
        v, edges, knots = self._polyline_data()
        k = np.clip(np.searchsorted(knots, s, side="right") - 1, 0, len(v) - 1)
        return edges[k] / (knots[k + 1] - knots[k])[..., None]

    @property
    def parameters(self) -> np.ndarray:
        return np.arange(self.samples) / self.samples

    def sample_points(self) -> np.ndarray:
        return self.point(self.parameters)

    @property
    def scale(self) -> float:
        return float(np.max(np.linalg.norm(self.sample_points(), axis=1)))


def shape_function(c: ShapeCurve, s, x) -> float:
    g = c.point(s)
    x = np.asarray(x, dtype=float)
    return float(x @ g - 0.5 * g @ g)


def _sample_values(c: ShapeCurve, X: np.ndarray) -> np.ndarray:
    """``f_s(x)`` for every row of ``X`` and every sample ``s``."""
    G = c.sample_points()
    return X @ G.T - 0.5 * np.sum(G * G, axis=1)


def _local_max_mask(V: np.ndarray) -> np.ndarray:
    left, right = np.roll(V, 1, axis=-1), np.roll(V, -1, axis=-1)
    return (V >= left) & (V >= right)


def sup_envelope(c: ShapeCurve, x, tol: float | None = None) -> tuple[float, list[float]]:
    """Sup of ``f_s(x)`` over the curve and the parameters attaining it.

    Every sampled local maximum is refined by a bounded scalar search on the
    two neighbouring sample intervals; refined maxima within ``tol`` of the
    best (default ``1e-6`` times the value scale) are reported.
    """
    if c.samples < 16:
        raise ValueError("need at least 16 samples")
    x = np.asarray(x, dtype=float)
    v = _sample_values(c, x[None, :])[0]
    M = c.samples
    if tol is None:
        tol = TIE_TOLERANCE * max(1.0, abs(float(v.max())))
    if np.ptp(v) <= tol:
        # constant along the curve: every parameter is a maximizer
        return float(v.max()), list(c.parameters)
    idx = np.flatnonzero(_local_max_mask(v))
    refined = []
    for i in idx:
        res = minimize_scalar(lambda s: -shape_function(c, s, x), method="bounded",
                              bounds=((i - 1) / M, (i + 1) / M),
                              options={"xatol": 1e-12})
        s_best, f_best = (res.x % 1.0, -res.fun) if -res.fun >= v[i] else (i / M, v[i])
        refined.append((f_best, s_best))
    best = max(f for f, _ in refined)
    params = sorted(s for f, s in refined if best - f <= tol)
    return float(best), params


def normal_residual(c: ShapeCurve, s: float, x) -> float:
    """``<x - gamma(s), gamma'(s)>`` scaled by ``|gamma'(s)|``; zero at feet."""
    t = c.tangent(s)
    return float((np.asarray(x, dtype=float) - c.point(s)) @ t / np.linalg.norm(t))


def dequant_envelope(c: ShapeCurve, x, h: float) -> float:
    """``log_h`` of the mean of ``h^{f_s(x)}`` over uniform samples.

    The periodic trapezoid rule on ``[0, 1)`` is the sample mean, so the
    measure normalization ``log_h 1`` vanishes.
    """
    lnh = _check_h(h)
    v = _sample_values(c, np.asarray(x, dtype=float)[None, :])[0]
    return float((logsumexp(v * lnh) - math.log(len(v))) / lnh)


@dataclass
class DequantField:
    xs: np.ndarray
    ys: np.ndarray
    # envelope values on the grid, shape (len(ys), len(xs))
    values: np.ndarray
    corners: np.ndarray
    dequant: np.ndarray | None = None

    @property
    def step(self) -> float:
        return float(max(self.xs[1] - self.xs[0], self.ys[1] - self.ys[0]))

    def corner_points(self) -> np.ndarray:
        yy, xx = np.nonzero(self.corners)
        return np.stack([self.xs[xx], self.ys[yy]], axis=1)


def _grid(window, resolution: int):
    x0, y0, x1, y1 = map(float, window)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("window must be (xmin, ymin, xmax, ymax) with positive extent")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    return np.linspace(x0, x1, resolution + 1), np.linspace(y0, y1, resolution + 1)


def _corner_chunk(c: ShapeCurve, X: np.ndarray, step: float, tau):
    M = c.samples
    G = c.sample_points()
    T = c.tangent(c.parameters) / M  # gamma(s_{i+1}) - gamma(s_i), first order
    V = _sample_values(c, X)
    left, right = np.roll(V, 1, axis=1), np.roll(V, -1, axis=1)
    mask = (V >= left) & (V >= right)
    curv = left - 2 * V + right
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = np.where(curv < 0, 0.5 * (left - right) / curv, 0.0)
    delta = np.clip(delta, -1.0, 1.0)
    R = np.where(mask, V - 0.25 * (left - right) * delta, -np.inf)
    S = (np.arange(M) + delta) / M
    b = np.argmax(R, axis=1)
    rows = np.arange(len(X))
    gap = R[rows, b][:, None] - R
    sep = np.abs(S - S[rows, b][:, None])
    sep = np.minimum(sep, 1.0 - sep)
    hit = mask & (sep > ARC_SEPARATION)
    if tau is None:
        # the jump never exceeds the curve diameter; test the rest exactly
        hit &= gap <= step * np.max(np.linalg.norm(G, axis=1))
        r, m = np.nonzero(hit)
        pm = G[m] + delta[r, m, None] * T[m]
        pb = G[b[r]] + delta[r, b[r], None] * T[b[r]]
        ok = gap[r, m] <= 0.5 * step * np.linalg.norm(pm - pb, axis=1)
        hit[r[~ok], m[~ok]] = False
    else:
        hit &= gap <= tau
    return R[rows, b], hit.any(axis=1)


def dequant_field(c: ShapeCurve, window, resolution: int, tau: float | None = None,
                  h: float | None = None, chunk: int = 1024) -> DequantField:
    """Envelope on a ``(resolution + 1)^2`` node grid with its corner nodes.

    A node is a corner when a second sampled local maximum, more than
    ``1e-2`` of the parameter circle away from the best one, comes within
    the tie tolerance of it. By default the tolerance is half a grid step
    times the distance between the two curve points; the envelope branches
    differ by an affine function with that gradient, so this puts their
    crossing within half a step of the node. A number ``tau`` replaces it by
    a fixed value tolerance.
    """
    xs, ys = _grid(window, resolution)
    step = float(max(xs[1] - xs[0], ys[1] - ys[0]))
    XX, YY = np.meshgrid(xs, ys)
    X = np.stack([XX.ravel(), YY.ravel()], axis=1)
    vals = np.empty(len(X))
    corners = np.zeros(len(X), dtype=bool)
    deq = None if h is None else np.empty(len(X))
    for k in range(0, len(X), chunk):
        part = X[k:k + chunk]
        vals[k:k + chunk], corners[k:k + chunk] = _corner_chunk(c, part, step, tau)
        if h is not None:
            lnh = _check_h(h)
            V = _sample_values(c, part)
            deq[k:k + chunk] = (logsumexp(V * lnh, axis=1) - math.log(c.samples)) / lnh
    shape = XX.shape
    return DequantField(xs, ys, vals.reshape(shape), corners.reshape(shape),
                        None if deq is None else deq.reshape(shape))


def corner_locus(c: ShapeCurve, window, resolution: int = 400,
                 tau: float | None = None) -> np.ndarray:
    """Grid nodes where the envelope has two separated maximizers."""
    return dequant_field(c, window, resolution, tau).corner_points()


def h_map(s, h: float, x) -> np.ndarray:
    """``H_h(x) = sum P_i h^{f_i(x)} / sum h^{f_i(x)}``, inside ``CH(P)``.

    ``x`` may be a stack of points of shape ``(..., n)``.
    """
    lnh = _check_h(h)
    a = as_affine(s)
    P = np.array([[float(v) for v in p] for p in a.gradients])
    if len(P) == 1:
        return P[0].copy()
    if np.linalg.matrix_rank(P[1:] - P[0]) < a.dim:
        raise DegenerateError("the sites span a lower dimensional hull")
    c = np.array([float(v) for v in a.offsets])
    x = np.asarray(x, dtype=float)
    return softmax((x @ P.T + c) * lnh, axis=-1) @ P
