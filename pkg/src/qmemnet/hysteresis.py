"""Pinched-hysteresis-loop segmentation and form-factor geometry.

A loop is one origin-to-origin segment of the I-V polyline.  Origin crossings
are sign changes of V where the current crosses zero as well (I = Gamma V
vanishes with V identically, so a genuine passage flips both signs; a pinch
tolerance on the interpolated current covers tangential contacts), plus
samples that sit on the origin itself.  Loop endpoints are snapped exactly
onto the origin.

Geometry is computed on per-loop normalized axes (each loop's V and I rescaled
to unit max-absolute-value), which makes area, perimeter and the form factor
F = 4 pi A / P^2 dimensionless and scale free.  Figure-eight polylines are
split into lobes at interior origin passages and the absolute lobe areas are
summed, so a pinched curve has nonzero area.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PINCH_TOL = 1e-3   # |I|/max|I| allowed at an accepted origin crossing
ZERO_TOL = 1e-9    # |V|/max|V| below which a sample counts as on-axis


class ZeroPerimeterError(ValueError):
    """Form factor is undefined for a zero-perimeter loop."""


@dataclass(frozen=True)
class HysteresisLoop:
    points: np.ndarray        # (m, 2) raw (V, I) pairs, first/last at the origin
    t_start: float
    t_end: float
    area: float               # normalized axes (see module docstring)
    perimeter: float
    form_factor: float
    self_intersecting: bool = False

    def __post_init__(self):
        self.points.setflags(write=False)


@dataclass(frozen=True)
class LoopSeries:
    loops: tuple[HysteresisLoop, ...]
    site: int = 0

    def __len__(self) -> int:
        return len(self.loops)

    def form_factors(self) -> np.ndarray:
        return np.array([lp.form_factor for lp in self.loops])

    def end_times(self) -> np.ndarray:
        return np.array([lp.t_end for lp in self.loops])


def _as_points(loop) -> np.ndarray:
    pts = loop.points if isinstance(loop, HysteresisLoop) else np.asarray(loop, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("polyline must be an (m, 2) array of (V, I) pairs")
    return pts


def split_lobes(points: np.ndarray, atol: float | None = None) -> list[np.ndarray]:
    """Split a closed-at-origin polyline into lobes at interior origin passages."""
    scale = np.max(np.abs(points), axis=0)
    if atol is None:
        atol = 1e-9
    tol = atol * np.where(scale > 0, scale, 1.0)
    at_origin = np.all(np.abs(points) <= tol[None, :], axis=1)
    cuts = [i for i in range(1, len(points) - 1) if at_origin[i]]
    bounds = [0, *cuts, len(points) - 1]
    lobes = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        if b - a >= 1:
            lobes.append(points[a:b + 1])
    return lobes


def _shoelace(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    # close the lobe back to its first point
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def loop_area(loop) -> float:
    """Enclosed area with lobes split at the origin and |lobe areas| summed."""
    pts = _as_points(loop)
    return float(sum(abs(_shoelace(lobe)) for lobe in split_lobes(pts)))


def loop_perimeter(loop) -> float:
    """Euclidean arc length of the polyline."""
    pts = _as_points(loop)
    return float(np.sum(np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))))


def form_factor(loop) -> float:
    """F = 4 pi A / P^2: 1 for a circle, 1/2 for two joined circles, 0 for a line."""
    if isinstance(loop, HysteresisLoop):
        return loop.form_factor
    pts = _as_points(loop)
    perim = loop_perimeter(pts)
    if perim == 0.0:
        raise ZeroPerimeterError("zero-perimeter loop has no form factor")
    return 4.0 * np.pi * loop_area(pts) / perim**2


def has_self_intersection(points: np.ndarray) -> bool:
    """Proper crossing of non-adjacent segments away from the origin."""
    pts = _as_points(points)
    p = pts[:-1]
    r = pts[1:] - pts[:-1]
    m = len(p)
    if m < 4:
        return False
    scale = float(np.max(np.abs(pts))) or 1.0
    for i in range(m - 2):
        js = np.arange(i + 2, m)
        if i == 0:
            js = js[js != m - 1]  # first and last segments share the origin
        if len(js) == 0:
            continue
        q, s = p[js], r[js]
        denom = r[i, 0] * s[:, 1] - r[i, 1] * s[:, 0]
        dq = q - p[i]
        t_num = dq[:, 0] * s[:, 1] - dq[:, 1] * s[:, 0]
        u_num = dq[:, 0] * r[i, 1] - dq[:, 1] * r[i, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = t_num / denom
            u = u_num / denom
        eps = 1e-12
        hits = (np.abs(denom) > eps * scale**2) & (t > eps) & (t < 1 - eps) & (u > eps) & (u < 1 - eps)
        if np.any(hits):
            cross = p[i] + np.outer(t[hits], r[i])
            if np.any(np.hypot(cross[:, 0], cross[:, 1]) > 1e-9 * scale):
                return True
    return False


def build_loop(points: np.ndarray, t_start: float, t_end: float,
               normalize: bool = True, check_intersections: bool = False) -> HysteresisLoop:
    """Assemble a HysteresisLoop, computing geometry on (optionally) normalized axes."""
    pts = _as_points(points)
    geo = pts
    if normalize:
        scale = np.max(np.abs(pts), axis=0)
        geo = pts / np.where(scale > 0, scale, 1.0)[None, :]
    area = loop_area(geo)
    perim = loop_perimeter(geo)
    ff = 0.0 if perim == 0.0 else 4.0 * np.pi * area / perim**2
    flag = has_self_intersection(geo) if check_intersections else False
    return HysteresisLoop(points=pts.copy(), t_start=float(t_start), t_end=float(t_end),
                          area=area, perimeter=perim, form_factor=ff, self_intersecting=flag)


def _origin_passages(v: np.ndarray, i: np.ndarray, times: np.ndarray,
                     pinch_tol: float, zero_tol: float) -> list[tuple[float, int, float]]:
    """Sorted (t_cross, left_index, interp_fraction) of accepted origin passages."""
    passages = []
    on_axis = (np.abs(v) <= zero_tol) & (np.abs(i) <= pinch_tol)
    k = 0
    while k < len(v):
        if on_axis[k]:
            passages.append((float(times[k]), k, 0.0))
            while k + 1 < len(v) and on_axis[k + 1]:  # collapse dwells at the origin
                k += 1
        k += 1
    for k in range(len(v) - 1):
        if v[k] * v[k + 1] < 0.0:
            s = v[k] / (v[k] - v[k + 1])
            t_cross = float(times[k] + s * (times[k + 1] - times[k]))
            i_cross = i[k] + s * (i[k + 1] - i[k])
            # at a true origin passage the current crosses zero with the
            # voltage; the floor tolerance only covers tangential contacts
            if i[k] * i[k + 1] < 0.0 or abs(i_cross) <= pinch_tol:
                passages.append((t_cross, k, float(s)))
    passages.sort(key=lambda p: p[0])
    min_sep = 0.5 * float(np.min(np.diff(times))) if len(times) > 1 else 0.0
    out: list[tuple[float, int, float]] = []
    for p in passages:
        if not out or p[0] - out[-1][0] > min_sep:
            out.append(p)
    return out


def segment_loops(voltage: np.ndarray, current: np.ndarray, times: np.ndarray,
                  site: int = 0, pinch_tol: float = PINCH_TOL, zero_tol: float = ZERO_TOL,
                  normalize: bool = True) -> LoopSeries:
    """Cut an I-V time series into origin-to-origin hysteresis loops.

    Fewer than two origin passages (or an all-zero series) yields an empty
    LoopSeries.  Loop endpoints are placed exactly at the origin; samples
    strictly between two consecutive passages form the loop interior.
    """
    v_raw = np.asarray(voltage, dtype=float)
    i_raw = np.asarray(current, dtype=float)
    t = np.asarray(times, dtype=float)
    if not (len(v_raw) == len(i_raw) == len(t)) or len(t) < 3:
        raise ValueError("voltage, current and times must be aligned series of length >= 3")
    vmax = float(np.max(np.abs(v_raw)))
    imax = float(np.max(np.abs(i_raw)))
    if vmax == 0.0 or imax == 0.0:
        return LoopSeries(loops=(), site=site)
    v = v_raw / vmax
    i = i_raw / imax
    passages = _origin_passages(v, i, t, pinch_tol, zero_tol)
    if len(passages) < 2:
        return LoopSeries(loops=(), site=site)
    loops = []
    for (ta, ka, sa), (tb, kb, sb) in zip(passages[:-1], passages[1:]):
        lo = ka + 1                      # first sample strictly after the crossing
        hi = kb if sb > 0.0 else kb - 1  # last sample strictly before
        interior = np.column_stack([v_raw[lo:hi + 1], i_raw[lo:hi + 1]])
        if len(interior) < 1:
            continue
        pts = np.vstack([[0.0, 0.0], interior, [0.0, 0.0]])
        loops.append(build_loop(pts, ta, tb, normalize=normalize))
    return LoopSeries(loops=tuple(loops), site=site)
