"""
Field-line tracing and Gauss linking numbers.

Lines are integrated in arc length with classical RK4 on the normalised field,
so step size is a length and field nulls do not make the system stiff.
"""

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import CurvesTooClose, EmknotError, NoClosure, OpenCurve, StagnationPoint
from .knotfields import eval_eb


@dataclass(frozen=True)
class TraceConfig:
    step: float = 0.01
    max_steps: int = 40000
    closure_tol: float = 1e-3
    refine: bool = False
    min_arc: float = 0.5
    align_cos: float = 0.99
    stagnation: float = 1e-8

    def __post_init__(self):
        if not (self.step > 0 and self.max_steps > 0 and self.closure_tol > 0):
            raise ValueError("step, max_steps and closure_tol must be positive")


@dataclass(frozen=True, eq=False)
class Curve:
    """Ordered polyline. A closed curve repeats its first point at the end."""

    points: np.ndarray = field(repr=False)
    closed: bool
    arc_length: float
    diagnostic: str = ""

    def __len__(self):
        return len(self.points)

    def reversed(self):
        return Curve(self.points[::-1].copy(), self.closed, self.arc_length, self.diagnostic)

    def resampled(self, max_segments):
        """Every k-th vertex so that at most ``max_segments`` segments remain."""
        nseg = len(self.points) - 1
        if nseg <= max_segments:
            return self
        stride = int(np.ceil(nseg / max_segments))
        idx = np.arange(0, nseg, stride)
        pts = np.vstack([self.points[idx], self.points[-1:]])
        return Curve(pts, self.closed, self.arc_length, self.diagnostic)


def _rk4_step(f, p, h):
    k1 = f(p)
    k2 = f(p + 0.5 * h * k1)
    k3 = f(p + 0.5 * h * k2)
    k4 = f(p + h * k3)
    return p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _trace_once(sampler, seed, cfg, step):
    def direction(p):
        v = np.asarray(sampler(p), dtype=float)
        norm = np.sqrt(v @ v)
        if not norm > cfg.stagnation:
            raise StagnationPoint(f"|field| = {norm:.3g} at {p}")
        return v / norm

    seed = np.asarray(seed, dtype=float)
    t0 = direction(seed)
    pts = [seed]
    p = seed
    arc = 0.0
    for _ in range(cfg.max_steps):
        q = _rk4_step(direction, p, step)
        seg = q - p
        seg_len = np.sqrt(seg @ seg)
        if arc + seg_len > cfg.min_arc:
            # closest approach of this segment to the seed
            u = np.clip(np.dot(seed - p, seg) / (seg_len * seg_len), 0.0, 1.0)
            gap = np.linalg.norm(p + u * seg - seed)
            if gap < cfg.closure_tol and np.dot(seg, t0) / seg_len > cfg.align_cos:
                arc += u * seg_len + gap
                pts.append(seed)
                return Curve(np.array(pts), True, arc)
        arc += seg_len
        pts.append(q)
        p = q
    return Curve(np.array(pts), False, arc, f"no closure within {cfg.max_steps} steps")


def trace_line(sampler, seed, cfg=None, strict=False):
    """Integrate the line of ``sampler`` (point -> 3-vector) through ``seed``.

    Tracing stops when the line comes back within ``closure_tol`` of the seed
    travelling in the seed's direction, after at least ``min_arc`` of length.
    With ``cfg.refine`` the line is traced again at half step and the finer
    curve is returned; its diagnostic records the arc-length change.

    Raises
    ------
    StagnationPoint
        If the field magnitude drops below ``cfg.stagnation`` along the way.
    NoClosure
        Only when ``strict``; otherwise the open curve is returned.
    """
    cfg = cfg or TraceConfig()
    curve = _trace_once(sampler, seed, cfg, cfg.step)
    if cfg.refine:
        fine = _trace_once(sampler, seed, replace(cfg, max_steps=2 * cfg.max_steps), cfg.step / 2)
        note = f"half-step arc-length change {abs(fine.arc_length - curve.arc_length):.3g}"
        if curve.closed != fine.closed:
            note += "; closure differs between step sizes"
        curve = Curve(fine.points, fine.closed, fine.arc_length, (fine.diagnostic + "; " + note).strip("; "))
    if strict and not curve.closed:
        raise NoClosure(curve.diagnostic or "line did not close", curve)
    return curve


class LinkingEstimate(NamedTuple):
    value: float
    integer: int
    conclusive: bool


def gauss_linking(c1, c2, max_segments=2000, min_distance=1e-6, inconclusive_at=0.1):
    """Gauss double line integral (1/4pi) sum (dr1 x dr2).(r1 - r2)/|r1 - r2|^3.

    Evaluated on segment midpoints after resampling each curve to at most
    ``max_segments`` segments.

    Raises
    ------
    OpenCurve
        If either curve is not closed.
    CurvesTooClose
        If two midpoints come closer than ``min_distance``.
    """
    for c in (c1, c2):
        if not c.closed:
            raise OpenCurve("Gauss linking needs closed curves")
    p1 = c1.resampled(max_segments).points
    p2 = c2.resampled(max_segments).points
    d1, m1 = np.diff(p1, axis=0), 0.5 * (p1[1:] + p1[:-1])
    d2, m2 = np.diff(p2, axis=0), 0.5 * (p2[1:] + p2[:-1])
    total = 0.0
    chunk = max(1, 2_000_000 // max(len(m2), 1))
    for i in range(0, len(m1), chunk):
        r = m1[i : i + chunk, None, :] - m2[None, :, :]
        dist = np.sqrt(np.einsum("...i,...i->...", r, r))
        closest = dist.min()
        if closest < min_distance:
            raise CurvesTooClose(f"curves approach within {closest:.3g}")
        cr = np.cross(d1[i : i + chunk, None, :], d2[None, :, :])
        total += np.sum(np.einsum("...i,...i->...", cr, r) / dist**3)
    value = total / (4.0 * np.pi)
    integer = int(np.rint(value))
    return LinkingEstimate(float(value), integer, abs(value - integer) < inconclusive_at)


def default_seeds(count=4):
    """Seeds in the z = 0 plane around radius 0.7, on distinct nested tori.

    Different radii keep the seeds on different lines even for knots that are
    mapped to themselves by a rotation about the symmetry axis.
    """
    radii = np.linspace(0.55, 0.85, count) if count > 1 else np.array([0.7])
    angles = np.pi / 4 + np.arange(count) * np.pi / 2
    return [np.array([r * np.cos(a), r * np.sin(a), 0.0]) for r, a in zip(radii, angles)]


def knot_sampler(params, field="B", T=0.0, sign=1.0):
    """Point -> field vector of the closed-form knot at time ``T``."""
    which = {"E": 0, "B": 1}[field]

    def sample(p):
        return sign * eval_eb(p[0], p[1], p[2], T, params)[which]

    return sample


@dataclass
class LinkingMatrix:
    """Pairwise linking of traced lines; NaN where unset (diagonal) or failed."""

    values: np.ndarray
    rounded: np.ndarray
    curves: list
    errors: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.errors

    def off_diagonal(self):
        mask = ~np.eye(len(self.values), dtype=bool)
        return self.values[mask]

    def to_dict(self):
        def clean(a):
            return [[None if np.isnan(x) else float(x) for x in row] for row in a]

        return {
            "raw": clean(self.values),
            "integer": [[None if np.isnan(x) else int(x) for x in row] for row in self.rounded],
            "closed": [c.closed if c is not None else False for c in self.curves],
            "errors": {f"{i},{j}": msg for (i, j), msg in self.errors.items()},
        }


def linking_matrix(params, field="B", T=0.0, seeds=None, cfg=None):
    """Trace one line per seed and compute every pairwise linking number."""
    seeds = default_seeds() if seeds is None else [np.asarray(s, dtype=float) for s in seeds]
    if len(seeds) < 2:
        raise ValueError("need at least two seeds")
    cfg = cfg or TraceConfig()
    sampler = knot_sampler(params, field, T)
    curves, trace_errors = [], {}
    for i, seed in enumerate(seeds):
        try:
            curves.append(trace_line(sampler, seed, cfg, strict=True))
        except NoClosure as exc:
            curves.append(exc.curve)
            trace_errors[i] = f"NoClosure: {exc}"
        except EmknotError as exc:
            curves.append(None)
            trace_errors[i] = f"{type(exc).__name__}: {exc}"
    n = len(seeds)
    values = np.full((n, n), np.nan)
    rounded = np.full((n, n), np.nan)
    errors = {}
    for i in range(n):
        for j in range(i + 1, n):
            if curves[i] is None or curves[j] is None:
                errors[(i, j)] = "; ".join(trace_errors[x] for x in (i, j) if curves[x] is None)
                continue
            try:
                est = gauss_linking(curves[i], curves[j])
            except EmknotError as exc:
                notes = [f"{type(exc).__name__}: {exc}"] + [trace_errors[x] for x in (i, j) if x in trace_errors]
                errors[(i, j)] = "; ".join(notes)
                continue
            values[i, j] = values[j, i] = est.value
            rounded[i, j] = rounded[j, i] = est.integer
            if not est.conclusive:
                errors[(i, j)] = f"Inconclusive: estimate {est.value:.4f}"
    return LinkingMatrix(values, rounded, curves, errors)
