"""Closed-form maps behind the quadrant construction.

Everything here is scalar double-precision arithmetic on plain tuples:

* ``g`` embeds the closed quadrant into 3-space; ``h`` projects back to the
  plane by summing squares of adjacent coordinates, and the composition
  ``h(g(x, y))`` equals the outer polynomial factor.
* ``phi`` parameterizes the image surface over the strip
  ``rho >= 0, 0 <= theta <= pi/2``; ``psi`` carries strip points back into
  the closed quadrant so that ``g(psi(p)) = phi(p)`` away from the edges.
* ``xi1/xi2/zeta1/zeta2`` build and flatten the warped discs used by the
  topological certificates.
* ``objective_F = h . phi`` is the function whose roots the preimage
  solver hunts; its Jacobian is implemented analytically.

Angles are radians; ``pi`` is the platform double.
"""

from __future__ import annotations

import math
from typing import NamedTuple

Point2 = tuple[float, float]
Point3 = tuple[float, float, float]
ParamPoint = tuple[float, float]

HALF_PI = math.pi / 2.0


class Jacobian2(NamedTuple):
    """Partials of objective_F: rows are components, columns (rho, theta)."""

    d1_drho: float
    d1_dtheta: float
    d2_drho: float
    d2_dtheta: float


def eval_g(p: Point2) -> Point3:
    """g(x, y) = (x*y^2 + x^2*y - y - 1, x^(3/2)*y, x^3*y + x*y - x - 1).

    The fractional power needs x >= 0; negative x is a domain error.
    """
    x, y = p
    if x < 0.0:
        raise ValueError(f"eval_g needs a non-negative first coordinate, got {x}")
    return (
        x * y * y + x * x * y - y - 1.0,
        math.sqrt(x) * x * y,
        x * x * x * y + x * y - x - 1.0,
    )


def eval_h(p: Point3) -> Point2:
    """h(x, y, z) = (x^2 + y^2, y^2 + z^2)."""
    x, y, z = p
    return (x * x + y * y, y * y + z * z)


def eval_psi(p: ParamPoint) -> Point2:
    """psi(rho, theta) = (tan theta, (cos t + sin t + rho cos t sin t) cos^2 t / sin t).

    Defined for theta strictly between 0 and pi/2; both components are
    then strictly positive, so psi lands inside the open quadrant.
    """
    rho, theta = p
    if rho < 0.0:
        raise ValueError(f"eval_psi needs rho >= 0, got {rho}")
    if not 0.0 < theta < HALF_PI:
        raise ValueError(f"eval_psi needs theta strictly inside (0, pi/2), got {theta}")
    c, s = math.cos(theta), math.sin(theta)
    return (s / c, (c + s + rho * c * s) * c * c / s)


def _trig(theta: float) -> tuple[float, float]:
    # exact collapse at the strip edges; cos(pi/2) is only ~6e-17 in doubles
    if theta == 0.0:
        return 1.0, 0.0
    if theta == HALF_PI:
        return 0.0, 1.0
    return math.cos(theta), math.sin(theta)


def eval_phi(p: ParamPoint) -> Point3:
    """The surface parameterization on the closed strip:

    phi1 = cs(c - s)^2 + rho(2c^4 s + c s^4 + c^5) + rho^2 c^5 s
    phi2 = sqrt(cs) * (c + s + rho c s)
    phi3 = rho s

    with c = cos theta, s = sin theta. The edge values collapse exactly:
    phi(t, 0) = (t, 0, 0) and phi(t, pi/2) = (0, 0, t).
    """
    rho, theta = p
    if rho < 0.0 or not 0.0 <= theta <= HALF_PI:
        raise ValueError(f"parameter point out of the closed strip: {p}")
    c, s = _trig(theta)
    cs = c * s
    phi1 = cs * (c - s) ** 2 + rho * (
        2.0 * c**4 * s + c * s**4 + c**5
    ) + rho * rho * c**5 * s
    # clamp absorbs -1e-17-scale rounding so the root stays defined edge to edge
    phi2 = math.sqrt(cs if cs > 0.0 else 0.0) * (c + s + rho * cs)
    phi3 = rho * s
    return (phi1, phi2, phi3)


def eval_xi1(x: float, y: float, b: float) -> float:
    """Height of the first warped disc: sqrt(b^2 - min(y^2, b^2))."""
    return math.sqrt(b * b - min(y * y, b * b))


def eval_xi2(y: float, z: float, b: float) -> float:
    """Height of the second warped disc; depends on its first argument y."""
    return math.sqrt(b * b - min(y * y, b * b))


def eval_zeta1(p: Point3, b: float) -> Point3:
    """Flattening homeomorphism for the first disc: subtract the graph height."""
    x, y, z = p
    return (x, y, z - eval_xi1(x, y, b))


def eval_zeta2(p: Point3, b: float) -> Point3:
    """Flattening homeomorphism for the second disc.

    Swaps x and z, then subtracts the height of the x-graph, which is a
    function of the point's y-coordinate; points with x = xi2(y, z) land
    on the flat disc { third coordinate 0 }.
    """
    x, y, z = p
    return (z, y, x - eval_xi2(y, z, b))


def eval_mu(theta: float) -> float:
    """Edge gluing profile (4 theta / pi - 1)^2 on [0, pi/2]."""
    if not 0.0 <= theta <= HALF_PI:
        raise ValueError(f"eval_mu needs theta in [0, pi/2], got {theta}")
    t = 4.0 * theta / math.pi - 1.0
    return t * t


def objective_F(p: ParamPoint) -> Point2:
    """h(phi(p)) = (phi1^2 + phi2^2, phi2^2 + phi3^2), the solver target."""
    return eval_h(eval_phi(p))


def jacobian_F(p: ParamPoint) -> Jacobian2:
    """Analytic Jacobian of objective_F on the open strip.

    Written in terms of the squares, so the sqrt(cos*sin) edge singularity
    of phi2 cancels; the boundary angles are still rejected because the
    solver has no business evaluating derivatives there.
    """
    rho, theta = p
    if rho < 0.0:
        raise ValueError(f"jacobian_F needs rho >= 0, got {rho}")
    if not 0.0 < theta < HALF_PI:
        raise ValueError(f"jacobian_F needs theta strictly inside (0, pi/2), got {theta}")
    c, s = math.cos(theta), math.sin(theta)
    cs = c * s
    cc_ss = c * c - s * s

    phi1 = cs * (c - s) ** 2 + rho * (2 * c**4 * s + c * s**4 + c**5) + rho**2 * c**5 * s
    dphi1_drho = 2 * c**4 * s + c * s**4 + c**5 + 2 * rho * c**5 * s
    dphi1_dtheta = (
        cc_ss * (1.0 - 4.0 * cs)
        + rho * (-8 * c**3 * s**2 + 2 * c**5 - s**5 + 4 * c**2 * s**3 - 5 * c**4 * s)
        + rho * rho * (c**6 - 5 * c**4 * s**2)
    )

    # phi2^2 = cs * P^2 with P = c + s + rho*c*s
    big_p = c + s + rho * cs
    dp_dtheta = (c - s) + rho * cc_ss
    dphi2sq_drho = 2.0 * cs * cs * big_p
    dphi2sq_dtheta = cc_ss * big_p * big_p + 2.0 * cs * big_p * dp_dtheta

    return Jacobian2(
        d1_drho=2.0 * phi1 * dphi1_drho + dphi2sq_drho,
        d1_dtheta=2.0 * phi1 * dphi1_dtheta + dphi2sq_dtheta,
        d2_drho=dphi2sq_drho + 2.0 * rho * s * s,
        d2_dtheta=dphi2sq_dtheta + 2.0 * rho * rho * s * c,
    )
