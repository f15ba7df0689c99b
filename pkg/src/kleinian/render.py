"""Grayscale renders of limit-set slices as binary portable pixmaps.

The plane being drawn is a real 2-plane inside an affine chart of the
projective plane.  A chart fixes one homogeneous coordinate to 1, leaving
two complex coordinates (w1, w2), i.e. four real parameters
(Re w1, Im w1, Re w2, Im w2).  The slice is offset + u*d1 + v*d2 in those
four parameters; pixels sample (u, v) over the window with endpoints
included, row 0 at the top.  Each pixel's brightness is exp(-d/scale)
where d is the smallest incidence residual |l . p| against the collected
lines, both in unit representatives; no lines means zero brightness.

The output is a P6 pixmap, 8-bit, no comment lines, so the byte layout is
exactly "P6\\n{W} {H}\\n255\\n" followed by W*H RGB triples.  Rows are
rendered in parallel chunks when KLEINIAN_THREADS allows, and reassembled
in row order so output is identical whatever the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .projective import ProjLine

MIN_SIZE = 16
MAX_SIZE = 8192
GRAM_TOL = 1e-9

AXIS_NAMES = {
    "re1": (1.0, 0.0, 0.0, 0.0),
    "im1": (0.0, 1.0, 0.0, 0.0),
    "re2": (0.0, 0.0, 1.0, 0.0),
    "im2": (0.0, 0.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class RenderSpec:
    """Where and how to rasterize: chart, slice plane, window, size, scale."""

    chart: int = 3
    d1: tuple[float, float, float, float] = AXIS_NAMES["re1"]
    d2: tuple[float, float, float, float] = AXIS_NAMES["re2"]
    offset: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    window: tuple[float, float, float, float] = (-2.0, 2.0, -2.0, 2.0)
    width: int = 512
    height: int = 512
    distance_scale: float = 0.05

    def __post_init__(self):
        if self.chart not in (1, 2, 3):
            raise ValueError("chart must be 1, 2 or 3")
        for name in ("d1", "d2", "offset"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (4,) or not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be a finite real 4-vector")
        a = np.asarray(self.d1, dtype=float)
        b = np.asarray(self.d2, dtype=float)
        gram = np.array([[a @ a, a @ b], [a @ b, b @ b]])
        if abs(np.linalg.det(gram)) <= GRAM_TOL:
            raise ValueError("slice directions are not linearly independent")
        umin, umax, vmin, vmax = self.window
        if not (umin < umax and vmin < vmax):
            raise ValueError("window must satisfy umin < umax and vmin < vmax")
        for n in (self.width, self.height):
            if not MIN_SIZE <= n <= MAX_SIZE:
                raise ValueError(
                    f"width and height must lie in [{MIN_SIZE}, {MAX_SIZE}]"
                )
        if not self.distance_scale > 0:
            raise ValueError("distance_scale must be positive")


def _chart_rows(chart: int) -> tuple[int, int, int]:
    # positions of (w1, w2, 1) inside the homogeneous triple
    others = [i for i in range(3) if i != chart - 1]
    return others[0], others[1], chart - 1


def _points_for_rows(spec: RenderSpec, rows: np.ndarray) -> np.ndarray:
    """Unit-norm homogeneous coordinates for every pixel of the given rows."""
    umin, umax, vmin, vmax = spec.window
    cols = np.arange(spec.width, dtype=float)
    u = umin + cols * (umax - umin) / (spec.width - 1)
    v = vmax - rows.astype(float) * (vmax - vmin) / (spec.height - 1)
    uu, vv = np.meshgrid(u, v, indexing="xy")  # shape (nrows, W)
    d1 = np.asarray(spec.d1, dtype=float)
    d2 = np.asarray(spec.d2, dtype=float)
    off = np.asarray(spec.offset, dtype=float)
    params = (
        off[None, None, :]
        + uu[..., None] * d1[None, None, :]
        + vv[..., None] * d2[None, None, :]
    )  # (nrows, W, 4)
    w1 = params[..., 0] + 1j * params[..., 1]
    w2 = params[..., 2] + 1j * params[..., 3]
    i1, i2, ic = _chart_rows(spec.chart)
    pts = np.empty(params.shape[:2] + (3,), dtype=complex)
    pts[..., i1] = w1
    pts[..., i2] = w2
    pts[..., ic] = 1.0
    norms = np.sqrt(np.sum(np.abs(pts) ** 2, axis=-1))
    return pts / norms[..., None]


def _gray_for_rows(
    spec: RenderSpec, duals: np.ndarray | None, rows: np.ndarray
) -> np.ndarray:
    pts = _points_for_rows(spec, rows)
    if duals is None:
        return np.zeros(pts.shape[:2], dtype=np.uint8)
    # residual of pixel p against line l is |sum_k l_k p_k|, no conjugation
    res = np.abs(np.tensordot(pts, duals.T, axes=([2], [0])))  # (nrows, W, L)
    d = res.min(axis=-1)
    return np.rint(255.0 * np.exp(-d / spec.distance_scale)).astype(np.uint8)


def thread_count() -> int:
    env = os.environ.get("KLEINIAN_THREADS", "")
    cpus = os.cpu_count() or 1
    if env.strip():
        try:
            cap = int(env)
        except ValueError:
            raise ValueError("KLEINIAN_THREADS must be an integer")
        return max(1, min(cap, cpus))
    return max(1, min(8, cpus))


def render_gray(lines, spec: RenderSpec) -> np.ndarray:
    """Grayscale image (height x width, uint8) of the line set in the slice."""
    lines = list(lines)
    duals = None
    if lines:
        for l in lines:
            if not isinstance(l, ProjLine):
                raise TypeError("render expects ProjLine inputs")
        duals = np.stack([l.vec for l in lines])
    n = thread_count()
    all_rows = np.arange(spec.height)
    if n == 1 or spec.height < 2 * n:
        return _gray_for_rows(spec, duals, all_rows)
    chunks = np.array_split(all_rows, n)
    with ThreadPoolExecutor(max_workers=n) as pool:
        parts = list(pool.map(lambda r: _gray_for_rows(spec, duals, r), chunks))
    return np.vstack(parts)


def p6_bytes(gray: np.ndarray) -> bytes:
    if gray.ndim != 2 or gray.dtype != np.uint8:
        raise ValueError("expected a 2-d uint8 image")
    h, w = gray.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    rgb = np.repeat(gray[..., None], 3, axis=-1)
    return header + rgb.tobytes()


def write_p6(path: str, gray: np.ndarray) -> None:
    data = p6_bytes(gray)
    with open(path, "wb") as f:
        f.write(data)
