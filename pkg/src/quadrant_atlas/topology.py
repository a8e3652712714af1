"""Warped discs, tubes, boundary loops, and the two numerical certificates.

The discs are graphs over coordinate discs of radius A, warped to height B
by the xi profile; flattening them with zeta turns "the loop crosses the
disc once, straight through" into an interval statement about cylinder
coordinates, which transversality_scan checks on a uniform grid.

gauss_linking computes the classical double-integral linking number of a
boundary loop with a disc boundary circle by the midpoint rule. Its value
for a matched pair certifies, up to sign, that the loop generates the
fundamental group of the circle's complement.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .maps import HALF_PI, Point3
from .parallel import thread_count

# Orientation regression constants: the loop and circle orientations below
# are fixed by their parameterizations, and these are the observed signs of
# the two certified linking numbers. Only the magnitudes are geometrically
# forced; the signs are pinned here so any orientation regression trips tests.
ALPHA1_D1_SIGN = 1
ALPHA2_D2_SIGN = -1

_PROXIMITY_LIMIT = 1e-9
_CHUNK_ROWS = 64


class DegenerateGeometryError(RuntimeError):
    """Raised when the two curves of a linking integral nearly touch."""


@dataclass(frozen=True)
class WarpedDiscSpec:
    """One warped disc: "d1" is a z-graph over the xy-disc of radius a,
    "d2" the x-graph over the yz-disc; b >= a scales the height profile."""

    variant: str
    a: float
    b: float

    def __post_init__(self):
        if self.variant not in ("d1", "d2"):
            raise ValueError(f"unknown disc variant {self.variant!r}")
        if not (self.b >= self.a > 0.0):
            raise ValueError(f"need b >= a > 0, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class TubeSpec:
    """A disc together with its flattened cylinder neighborhood parameters."""

    disc: WarpedDiscSpec
    epsilon: float
    m0: float
    m: float


@dataclass(frozen=True)
class BoundaryLoop:
    """Piecewise loop image under phi: "alpha1" runs up the z-axis first,
    "alpha2" out the x-axis first; m is the long-edge parameter length."""

    variant: str
    m: float

    def __post_init__(self):
        if self.variant not in ("alpha1", "alpha2"):
            raise ValueError(f"unknown loop variant {self.variant!r}")
        if self.m <= 0.0:
            raise ValueError(f"loop length scale must be positive, got {self.m}")

    @property
    def t_max(self) -> float:
        return 2.0 * self.m + HALF_PI


@dataclass(frozen=True)
class LinkingResult:
    value: float
    rounded: int
    loop_segments: int
    circle_segments: int


@dataclass(frozen=True)
class TransversalityReport:
    hit_intervals: tuple[tuple[float, float], ...]
    expected_interval: tuple[float, float]
    max_lateral_deviation: float
    ok: bool


def make_tube(a: float, b: float, variant: str) -> TubeSpec:
    """Tube around one warped disc, with the fixed constant rule

    m0 = 2*sqrt(a^2 + b^2),  m = 4*m0,  epsilon = min(b, m0 - b) / 2.

    m0 strictly dominates the sup norm over both discs, and epsilon sits
    strictly inside the open constraint 0 < epsilon < min(b, m0 - b).
    """
    disc = WarpedDiscSpec(variant, a, b)
    m0 = 2.0 * math.sqrt(a * a + b * b)
    return TubeSpec(disc=disc, epsilon=min(b, m0 - b) / 2.0, m0=m0, m=4.0 * m0)


def disc_boundary(spec: WarpedDiscSpec, s: float) -> Point3:
    """Point of the disc boundary at angle s.

    d1: (a cos s, a sin s, sqrt(b^2 - a^2 sin^2 s)), which lies on both
    quadrics x^2+y^2 = a^2 and y^2+z^2 = b^2; d2 swaps x and z.
    """
    a, b = spec.a, spec.b
    c, sn = math.cos(s), math.sin(s)
    w = math.sqrt(max(b * b - a * a * sn * sn, 0.0))
    if spec.variant == "d1":
        return (a * c, a * sn, w)
    return (w, a * sn, a * c)


# ---------------------------------------------------------------------------
# Vectorized surface parameterization (mirrors maps.eval_phi exactly).


def _trig_arrays(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = np.cos(theta)
    s = np.sin(theta)
    at_zero = theta == 0.0
    at_half = theta == HALF_PI
    c = np.where(at_zero, 1.0, np.where(at_half, 0.0, c))
    s = np.where(at_zero, 0.0, np.where(at_half, 1.0, s))
    return c, s


def _phi_arrays(rho: np.ndarray, theta: np.ndarray) -> np.ndarray:
    c, s = _trig_arrays(theta)
    cs = c * s
    phi1 = cs * (c - s) ** 2 + rho * (2 * c**4 * s + c * s**4 + c**5) + rho**2 * c**5 * s
    phi2 = np.sqrt(np.maximum(cs, 0.0)) * (c + s + rho * cs)
    phi3 = rho * s
    return np.stack([phi1, phi2, phi3], axis=-1)


def _dphi_drho_arrays(rho: np.ndarray, theta: np.ndarray) -> np.ndarray:
    c, s = _trig_arrays(theta)
    cs = c * s
    d1 = 2 * c**4 * s + c * s**4 + c**5 + 2 * rho * c**5 * s
    d2 = np.power(np.maximum(cs, 0.0), 1.5)
    d3 = np.broadcast_to(s, rho.shape).copy()
    return np.stack([d1, d2, d3], axis=-1)


def _dphi_dtheta_arrays(rho: np.ndarray, theta: np.ndarray) -> np.ndarray:
    # only called with theta strictly inside (0, pi/2)
    c, s = np.cos(theta), np.sin(theta)
    cs = c * s
    cc_ss = c * c - s * s
    d1 = (
        cc_ss * (1.0 - 4.0 * cs)
        + rho * (-8 * c**3 * s**2 + 2 * c**5 - s**5 + 4 * c**2 * s**3 - 5 * c**4 * s)
        + rho**2 * (c**6 - 5 * c**4 * s**2)
    )
    w = np.sqrt(cs)
    big_p = c + s + rho * cs
    d2 = cc_ss / (2.0 * w) * big_p + w * ((c - s) + rho * cc_ss)
    d3 = rho * c
    return np.stack([d1, d2, d3], axis=-1)


def _loop_params(loop: BoundaryLoop, t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(rho, theta, segment index 0/1/2) for each parameter value."""
    m = loop.m
    seg = np.where(t <= m, 0, np.where(t <= m + HALF_PI, 1, 2))
    if loop.variant == "alpha1":
        rho = np.where(seg == 0, t, np.where(seg == 1, m, 2.0 * m + HALF_PI - t))
        theta = np.where(seg == 0, HALF_PI, np.where(seg == 1, m + HALF_PI - t, 0.0))
    else:
        rho = np.where(seg == 0, t, np.where(seg == 1, m, 2.0 * m + HALF_PI - t))
        theta = np.where(seg == 0, 0.0, np.where(seg == 1, t - m, HALF_PI))
    return rho, theta, seg


def _loop_points(loop: BoundaryLoop, t: np.ndarray) -> np.ndarray:
    rho, theta, _ = _loop_params(loop, t)
    return _phi_arrays(rho, theta)


def _loop_tangents(loop: BoundaryLoop, t: np.ndarray) -> np.ndarray:
    """dt-derivative of the loop; segment 2 is the only theta-moving piece."""
    rho, theta, seg = _loop_params(loop, t)
    d_rho = _dphi_drho_arrays(rho, theta)
    # clamp theta into the open strip for the theta-derivative formula; the
    # result is only used where seg == 1, where theta is already interior
    safe_theta = np.clip(theta, 1e-300, HALF_PI * (1.0 - 1e-16))
    d_theta = _dphi_dtheta_arrays(rho, safe_theta)
    theta_sign = -1.0 if loop.variant == "alpha1" else 1.0
    out = np.where(
        (seg == 0)[..., None],
        d_rho,
        np.where((seg == 1)[..., None], theta_sign * d_theta, -d_rho),
    )
    return out


def eval_loop(loop: BoundaryLoop, t: float) -> Point3:
    """Scalar loop point; domain is [0, 2m + pi/2]."""
    if not 0.0 <= t <= loop.t_max:
        raise ValueError(f"loop parameter {t} outside [0, {loop.t_max}]")
    p = _loop_points(loop, np.asarray([t], dtype=float))[0]
    return (float(p[0]), float(p[1]), float(p[2]))


# ---------------------------------------------------------------------------
# Tube membership and the transversality certificate.


def _zeta_coords(points: np.ndarray, tube: TubeSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cylinder coordinates (q1, q2, q3) of the variant's flattening map."""
    b = tube.disc.b
    x, y, z = points[..., 0], points[..., 1], points[..., 2]
    xi = np.sqrt(b * b - np.minimum(y * y, b * b))
    if tube.disc.variant == "d1":
        return x, y, z - xi
    return z, y, x - xi


def tube_membership(p: Point3, tube: TubeSpec) -> bool:
    """True iff the flattened point lies in the open cylinder
    {q1^2 + q2^2 < (a + epsilon)^2, |q3| < epsilon}."""
    q1, q2, q3 = _zeta_coords(np.asarray([p], dtype=float), tube)
    a, eps = tube.disc.a, tube.epsilon
    return bool(q1[0] ** 2 + q2[0] ** 2 < (a + eps) ** 2 and abs(q3[0]) < eps)


def transversality_scan(loop: BoundaryLoop, tube: TubeSpec, grid: int) -> TransversalityReport:
    """Sample the loop uniformly and certify "crosses the tube once".

    ok requires: exactly one hit interval, endpoints within one grid step
    of b -/+ epsilon, lateral deviation sqrt(q1^2+q2^2) at most 1e-9 on the
    hits, and q3 matching t - b to 1e-9 there (the straight vertical pass).
    """
    if grid < 1000:
        raise ValueError(f"grid must be at least 1000, got {grid}")
    b, eps = tube.disc.b, tube.epsilon
    t = np.linspace(0.0, loop.t_max, grid)
    step = loop.t_max / (grid - 1)
    q1, q2, q3 = _zeta_coords(_loop_points(loop, t), tube)
    member = (q1 * q1 + q2 * q2 < (tube.disc.a + eps) ** 2) & (np.abs(q3) < eps)

    flags = member.astype(np.int8)
    starts = list(np.flatnonzero(np.diff(flags) == 1) + 1)
    ends = list(np.flatnonzero(np.diff(flags) == -1))
    if member[0]:
        starts.insert(0, 0)
    if member[-1]:
        ends.append(grid - 1)
    intervals = tuple((float(t[i]), float(t[j])) for i, j in zip(starts, ends))

    expected = (b - eps, b + eps)
    if member.any():
        lateral = float(np.max(np.sqrt(q1[member] ** 2 + q2[member] ** 2)))
        affine_err = float(np.max(np.abs(q3[member] - (t[member] - b))))
    else:
        lateral = 0.0
        affine_err = math.inf
    ok = (
        len(intervals) == 1
        and abs(intervals[0][0] - expected[0]) <= step
        and abs(intervals[0][1] - expected[1]) <= step
        and lateral <= 1e-9
        and affine_err <= 1e-9
    )
    return TransversalityReport(
        hit_intervals=intervals,
        expected_interval=expected,
        max_lateral_deviation=lateral,
        ok=ok,
    )


# ---------------------------------------------------------------------------
# Gauss linking number.


def _circle_samples(spec: WarpedDiscSpec, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint samples of the disc boundary and its s-derivative."""
    a, b = spec.a, spec.b
    s = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
    c, sn = np.cos(s), np.sin(s)
    w = np.sqrt(np.maximum(b * b - a * a * sn * sn, 0.0))
    dw = np.where(w > 0.0, -a * a * sn * c / np.where(w > 0.0, w, 1.0), 0.0)
    if spec.variant == "d1":
        pts = np.stack([a * c, a * sn, w], axis=-1)
        tan = np.stack([-a * sn, a * c, dw], axis=-1)
    else:
        pts = np.stack([w, a * sn, a * c], axis=-1)
        tan = np.stack([dw, a * c, -a * sn], axis=-1)
    return pts, tan


def _linking_double_sum(
    pts1: np.ndarray,
    tan1: np.ndarray,
    h1: float,
    pts2: np.ndarray,
    tan2: np.ndarray,
    h2: float,
) -> float:
    """Midpoint-rule Gauss integral over all sample pairs.

    The outer curve is cut into fixed 64-row chunks whose partial sums are
    combined in index order, so the value is independent of thread count.
    """
    n1 = pts1.shape[0]
    chunks = range(0, n1, _CHUNK_ROWS)

    def one_chunk(i0: int) -> tuple[float, float]:
        i1 = min(i0 + _CHUNK_ROWS, n1)
        diff = pts1[i0:i1, None, :] - pts2[None, :, :]
        cross = np.cross(tan1[i0:i1, None, :], np.broadcast_to(tan2[None, :, :], diff.shape))
        numer = np.einsum("ijk,ijk->ij", diff, cross)
        dist2 = np.einsum("ijk,ijk->ij", diff, diff)
        dist = np.sqrt(dist2)
        # a degenerate pair divides by ~0 here; the caller raises before the
        # polluted sum can be used, so silence the transient warning
        with np.errstate(divide="ignore", invalid="ignore"):
            total = float(np.sum(numer / (dist2 * dist)))
        return total, float(np.min(dist))

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_chunk, chunks))
    else:
        results = [one_chunk(i0) for i0 in chunks]

    closest = min(d for _, d in results)
    if closest < _PROXIMITY_LIMIT:
        raise DegenerateGeometryError(
            f"curves pass within {closest:.3e} of each other; linking integrand is unreliable"
        )
    return math.fsum(v for v, _ in results) * h1 * h2 / (4.0 * math.pi)


def gauss_linking(
    loop: BoundaryLoop,
    spec: WarpedDiscSpec,
    loop_segments: int,
    circle_segments: int,
) -> LinkingResult:
    """Linking number of the loop with the disc boundary circle.

    Both curves are sampled at segment midpoints; for the matched pairs
    (alpha1, d1) and (alpha2, d2) the rounded value is +/-1, with signs
    pinned by ALPHA1_D1_SIGN and ALPHA2_D2_SIGN.
    """
    if loop_segments < 256 or circle_segments < 256:
        raise ValueError("segment counts must be at least 256")
    h1 = loop.t_max / loop_segments
    t = (np.arange(loop_segments) + 0.5) * h1
    pts1 = _loop_points(loop, t)
    tan1 = _loop_tangents(loop, t)
    h2 = 2.0 * math.pi / circle_segments
    pts2, tan2 = _circle_samples(spec, circle_segments)
    value = _linking_double_sum(pts1, tan1, h1, pts2, tan2, h2)
    return LinkingResult(
        value=value,
        rounded=int(round(value)),
        loop_segments=loop_segments,
        circle_segments=circle_segments,
    )
