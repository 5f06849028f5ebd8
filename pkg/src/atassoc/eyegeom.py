"""Gauge-fixed geometry on the two-point configuration space and its fibers.

Interior chart: z1 = i is fixed and z2 ranges over the upper half plane
minus i.  The transport path runs from the right corner (s -> 0, both
points escaping to the real axis after rescaling, z1 left of z2) to the
iris approached from the positive-real direction (s -> 1).

The angle of an ordered pair is

    phi(z, w) = (1/2pi) * arg((w - z) / (w - conj(z)))

taken source-first for an edge (source, target).  It vanishes identically
when the source sits on the real axis, which is what kills the
L-augmenting row on the upper eyelid.  Angle values are kept as plain
reals inside all gradients; only :func:`angle` itself reduces mod 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .config import ORIENTATION_SIGN
from .liegraph import (GROUND_A, GROUND_B, AugmentedGraph, LieGraph,
                       validate)

TWO_PI = 2.0 * np.pi


def angle(z: complex, w: complex) -> float:
    """Angle map of the ordered pair (z, w), reduced mod 1."""
    if z == w:
        raise ValueError("coincident points")
    num = w - z
    den = w - np.conj(z)
    if den == 0:
        raise ValueError("degenerate pair (w equals conj(z))")
    val = (np.angle(num) - np.angle(den)) / TWO_PI
    return float(val % 1.0)


def _phi_partials(zx, zy, wx, wy):
    """Partials of phi wrt (Re z, Im z, Re w, Im w); broadcasts over arrays.

    With a = w - z and b = w - conj(z):
      2pi dphi = ( (a x da)/|a|^2 - (b x db)/|b|^2 )  as 1-forms.
    """
    ax = wx - zx
    ay = wy - zy
    r1 = ax * ax + ay * ay
    bx = ax
    by = wy + zy
    r2 = bx * bx + by * by
    d_zx = (ay / r1 - by / r2) / TWO_PI
    d_zy = (-ax / r1 - bx / r2) / TWO_PI
    d_wx = (-ay / r1 + by / r2) / TWO_PI
    d_wy = (ax / r1 - bx / r2) / TWO_PI
    return d_zx, d_zy, d_wx, d_wy


def angle_grad(z: complex, w: complex) -> tuple:
    """(d/dRe z, d/dIm z, d/dRe w, d/dIm w) of the angle map at (z, w)."""
    if z == w:
        raise ValueError("coincident points")
    parts = _phi_partials(z.real, z.imag, w.real, w.imag)
    return tuple(float(p) for p in parts)


# -- transport paths --------------------------------------------------------

@dataclass(frozen=True)
class EyePath:
    """Path s in (0,1) -> z2(s); s->0 escapes to RC, s->1 hits the iris."""

    pid: str
    point: Callable[[float], complex]
    velocity: Callable[[float], complex]


PATHS = {
    "horiz": EyePath(
        pid="horiz",
        point=lambda s: complex((1.0 - s) / s, 1.0),
        velocity=lambda s: complex(-1.0 / (s * s), 0.0),
    ),
    # Same endpoints, different speed; useful as a reparametrization check.
    "horiz-sq": EyePath(
        pid="horiz-sq",
        point=lambda s: complex(((1.0 - s) / s) ** 2, 1.0),
        velocity=lambda s: complex(-2.0 * (1.0 - s) / s**3, 0.0),
    ),
}


def get_path(pid: str) -> EyePath:
    try:
        return PATHS[pid]
    except KeyError:
        raise ValueError(f"unknown path id {pid!r}") from None


def _check_interior(s: float):
    if not 0.0 < s < 1.0:
        raise ValueError("path parameter must satisfy 0 < s < 1")


def path_point(s: float, pid: str = "horiz") -> complex:
    _check_interior(s)
    return get_path(pid).point(s)


def path_velocity(s: float, pid: str = "horiz") -> complex:
    _check_interior(s)
    return get_path(pid).velocity(s)


# -- determinant integrands -------------------------------------------------

def _edge_rows(edges, n, positions, velocity=None):
    """Rows of partials for the given edges.

    ``positions`` maps vertex name -> (x, y) where ground entries are
    scalars and air entries are arrays of shape (batch,).  Columns are
    (s, x1, y1, ..., xn, yn) when ``velocity`` is given (path chart) and
    (x1, y1, ..., xn, yn) otherwise.
    """
    some_air = positions["A1"][0]
    batch = np.shape(some_air)[0] if np.ndim(some_air) else 1
    with_s = velocity is not None
    ncols = (1 if with_s else 0) + 2 * n
    rows = np.zeros((batch, len(edges), ncols))
    off = 1 if with_s else 0
    for r, (src, tgt) in enumerate(edges):
        sx, sy = positions[src]
        tx, ty = positions[tgt]
        d_zx, d_zy, d_wx, d_wy = _phi_partials(sx, sy, tx, ty)
        if with_s:
            vx, vy = velocity
            if src == GROUND_B:
                rows[:, r, 0] = d_zx * vx + d_zy * vy
            elif tgt == GROUND_B:
                rows[:, r, 0] = d_wx * vx + d_wy * vy
        if src not in (GROUND_A, GROUND_B):
            a = int(src[1:]) - 1
            rows[:, r, off + 2 * a] = d_zx
            rows[:, r, off + 2 * a + 1] = d_zy
        if tgt not in (GROUND_A, GROUND_B):
            a = int(tgt[1:]) - 1
            rows[:, r, off + 2 * a] = d_wx
            rows[:, r, off + 2 * a + 1] = d_wy
    return rows


def _air_positions(xs: np.ndarray, ys: np.ndarray, n: int) -> dict:
    return {f"A{a + 1}": (xs[:, a], ys[:, a]) for a in range(n)}


def path_integrand_batch(ag: AugmentedGraph, s: float, xs: np.ndarray,
                         ys: np.ndarray, pid: str = "horiz") -> np.ndarray:
    """det M over a batch of fiber points for an augmented graph on the
    path chart (z1 = i, z2 = z2(s)); rows are (augmenting edge, graph
    edges in lexicographic order), columns (s, x1, y1, ...)."""
    _check_interior(s)
    path = get_path(pid)
    z2 = path.point(s)
    v = path.velocity(s)
    n = ag.graph.n
    positions = {GROUND_A: (0.0, 1.0), GROUND_B: (z2.real, z2.imag)}
    positions.update(_air_positions(xs, ys, n))
    rows = _edge_rows(ag.edges, n, positions, velocity=(v.real, v.imag))
    return ORIENTATION_SIGN * np.linalg.det(rows)


def hat_integrand_batch(g: LieGraph, s: float, xs: np.ndarray,
                        ys: np.ndarray, pid: str = "horiz") -> np.ndarray:
    """det M_R - det M_L in one pass (the graph rows are shared)."""
    _check_interior(s)
    path = get_path(pid)
    z2 = path.point(s)
    v = path.velocity(s)
    n = g.n
    positions = {GROUND_A: (0.0, 1.0), GROUND_B: (z2.real, z2.imag)}
    positions.update(_air_positions(xs, ys, n))
    vel = (v.real, v.imag)
    root = g.root()
    shared = _edge_rows(g.edges, n, positions, velocity=vel)
    row_l = _edge_rows([(GROUND_A, root)], n, positions, velocity=vel)
    row_r = _edge_rows([(GROUND_B, root)], n, positions, velocity=vel)
    m_l = np.concatenate([row_l, shared], axis=1)
    m_r = np.concatenate([row_r, shared], axis=1)
    return ORIENTATION_SIGN * (np.linalg.det(m_r) - np.linalg.det(m_l))


def integrand(ag: AugmentedGraph, s: float, fiber: Sequence[complex],
              pid: str = "horiz") -> float:
    """Single-point augmented integrand; rejects collisions."""
    pts = list(fiber)
    if len(pts) != ag.graph.n:
        raise ValueError("fiber point count does not match air count")
    if any(p.imag <= 0 for p in pts):
        raise ValueError("air points must lie in the upper half plane")
    if len(set(pts)) != len(pts):
        raise ValueError("collision in fiber point")
    xs = np.array([[p.real for p in pts]])
    ys = np.array([[p.imag for p in pts]])
    val = path_integrand_batch(ag, s, xs, ys, pid)[0]
    if not np.isfinite(val):
        raise ValueError("non-finite integrand (degenerate configuration)")
    return float(val)


# -- weight function --------------------------------------------------------

def chart_positions(chart) -> dict:
    """Ground positions for a weight-function chart: 'RC' (both grounds on
    the real axis, z1 left of z2), 'UE' (upper eyelid, z1 on the axis) or
    an interior z2 given as a complex number."""
    if chart == "RC":
        return {GROUND_A: (0.0, 0.0), GROUND_B: (1.0, 0.0)}
    if chart == "UE":
        return {GROUND_A: (0.0, 0.0), GROUND_B: (0.0, 1.0)}
    z2 = complex(chart)
    if z2.imag <= 0 or z2 == 1j:
        raise ValueError("interior chart needs z2 in H minus i")
    return {GROUND_A: (0.0, 1.0), GROUND_B: (z2.real, z2.imag)}


def weight_integrand_batch(g: LieGraph, chart, xs: np.ndarray,
                           ys: np.ndarray) -> np.ndarray:
    """det of the 2n x 2n fiber-column matrix of the graph edges."""
    n = g.n
    positions = dict(chart_positions(chart))
    positions.update(_air_positions(xs, ys, n))
    rows = _edge_rows(g.edges, n, positions)
    return ORIENTATION_SIGN * np.linalg.det(rows)


def weight_function(g: LieGraph, chart, samples: int = 200_000,
                    seed: int = 0, transform=None):
    """Kontsevich weight w_Gamma(chart) as an MC estimate."""
    bad = validate(g)
    if bad:
        raise ValueError(f"invalid Lie graph: {bad}")
    from .quad import Transform, mc_fiber

    transform = transform or Transform()
    centers = [(x, y) for (x, y) in chart_positions(chart).values() if y > 0]

    def f(xs, ys):
        return weight_integrand_batch(g, chart, xs, ys)

    return mc_fiber(f, g.n, transform, samples, seed, centers=centers,
                    key=("weight", g.to_json()["edges"], str(chart)))
