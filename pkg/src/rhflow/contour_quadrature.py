"""Ray quadrature for the symmetric Cauchy kernel.

Rays through the origin are parametrized as zeta' = e^(s + i phase), which
turns the measure dzeta'/zeta' into ds and places the peak of the
exponential integrands at s = 0.  Off-ray values are plain trapezoid sums;
boundary values on the integration ray use singularity subtraction with the
closed-form principal value of the coth kernel plus the half-residue term
of the chosen side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularKernelError
from .spectrum_rays import EPS_ANGLE, RayDirection, _wrap


@dataclass(frozen=True)
class RayGrid:
    """Uniform trapezoid grid in the log coordinate along one ray."""

    direction: RayDirection
    nodes: np.ndarray      # s values, symmetric about 0
    weights: np.ndarray
    half_width: float
    count: int

    def points(self) -> np.ndarray:
        return np.exp(self.nodes) * self.direction.unit()

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.count - 1)


def build_ray_grid(direction: RayDirection, decay_scale: float, M: int,
                   target_tail: float) -> RayGrid:
    """Grid wide enough that the slowest integrand tail is e^(-target_tail)
    relative to its peak: e^(-decay (cosh L - 1)) = e^(-target_tail)."""
    if decay_scale <= 0:
        raise ValueError(
            f"no exponential decay along the ray (decay scale {decay_scale:g}); "
            "the ray geometry is not acute"
        )
    if M < 16 or M % 2:
        raise ValueError("node count must be even and at least 16")
    if target_tail <= 0:
        raise ValueError("target tail must be positive")
    L = math.acosh(1.0 + target_tail / decay_scale)
    s = np.linspace(-L, L, M)
    w = np.full(M, s[1] - s[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return RayGrid(direction, s, w, L, M)


def cauchy_kernel(zeta: complex, zeta_p: complex) -> complex:
    """(zeta' + zeta) / (zeta' - zeta); the dzeta'/zeta' factor is carried
    by the log parametrization of the grids."""
    if zeta_p == zeta:
        raise SingularKernelError("kernel evaluated at coincident points")
    return (zeta_p + zeta) / (zeta_p - zeta)


def kernel_row(grid: RayGrid, zeta: complex) -> np.ndarray:
    pts = grid.points()
    diff = pts - zeta
    if np.any(diff == 0):
        raise SingularKernelError("evaluation point coincides with a grid node")
    return (pts + zeta) / diff


def on_ray_parameter(grid: RayGrid, zeta: complex) -> float | None:
    """Log radius of zeta if it lies on the grid ray (within the angular
    margin), else None."""
    if zeta == 0:
        return None
    if abs(_wrap(math.atan2(zeta.imag, zeta.real) - grid.direction.phase)) > EPS_ANGLE:
        return None
    return math.log(abs(zeta))


def pv_coth_closed_form(L: float, s: float, step: float) -> float:
    """PV integral of coth((t - s)/2) over [-L, L].

    The pole is clipped half a step inside the grid so endpoint nodes,
    whose densities are at tail level anyway, stay finite.
    """
    sc = min(max(s, -L + 0.5 * step), L - 0.5 * step)
    return 2.0 * (math.log(math.sinh(0.5 * (L - sc))) -
                  math.log(math.sinh(0.5 * (L + sc))))


def _derivative_row(M: int, i: int, step: float) -> np.ndarray:
    """Fourth-order central first-derivative stencil at node i (shifted
    near the edges, where the integrands are at tail level)."""
    row = np.zeros(M)
    j = min(max(i, 2), M - 3)
    for off, c in ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)):
        row[j + off] += c / (12.0 * step)
    return row


def integrate_ray(grid: RayGrid, values: np.ndarray, zeta: complex,
                  side: str = "off") -> complex:
    """Trapezoid integral of K(zeta, .) times the sampled density.

    side="off" requires zeta away from the ray.  side="plus"/"minus"
    evaluates the boundary value on the ray: the principal value via
    subtraction of the density at the (snapped) pole node, plus the
    half-residue +/- 2 pi i times the density there; "plus" is the limit
    from the counterclockwise side of the oriented ray.
    """
    h = np.asarray(values, dtype=complex)
    if h.shape != grid.nodes.shape:
        raise ValueError("density sampled on a different grid")
    s_star = on_ray_parameter(grid, zeta)
    if side == "off":
        if s_star is not None and abs(s_star) <= grid.half_width:
            raise SingularKernelError(
                "evaluation point lies on the covered part of the integration "
                "ray; use side='plus' or side='minus'"
            )
        # on the ray beyond the grid coverage the kernel pole sits where the
        # density is already at tail level; the sum below is regular
        return complex(np.sum(grid.weights * kernel_row(grid, zeta) * h))
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'off', 'plus' or 'minus'")
    if s_star is None:
        raise SingularKernelError("boundary value requested off the ray")
    i = int(round((s_star + grid.half_width) / grid.step))
    if not 0 <= i < grid.count or abs(grid.nodes[i] - s_star) > 0.5 * grid.step + 1e-12:
        raise SingularKernelError("boundary point outside the grid range")
    if abs(grid.nodes[i] - s_star) < 1e-9 * grid.step:
        # pole at a node: subtract the node value, supply the removable
        # limit 2 h'(s) there from a derivative stencil
        si = grid.nodes[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            coth = 1.0 / np.tanh(0.5 * (grid.nodes - si))
        coth[i] = 0.0
        pv = np.sum(grid.weights * coth * (h - h[i]))
        pv += grid.weights[i] * 2.0 * (_derivative_row(grid.count, i, grid.step) @ h)
        pv += h[i] * pv_coth_closed_form(grid.half_width, si, grid.step)
        h_star = h[i]
    else:
        # pole between nodes: subtract the interpolated density, then every
        # summand is regular
        h_star = _interpolate(grid, h, s_star)
        coth = 1.0 / np.tanh(0.5 * (grid.nodes - s_star))
        pv = np.sum(grid.weights * coth * (h - h_star))
        pv += h_star * pv_coth_closed_form(grid.half_width, s_star, grid.step)
    half_jump = 2.0j * math.pi * h_star
    return complex(pv + half_jump) if side == "plus" else complex(pv - half_jump)


def _interpolate(grid: RayGrid, h: np.ndarray, s: float) -> complex:
    """Six-point Lagrange interpolation of a smooth density on the uniform grid."""
    j0 = min(max(int(math.floor((s + grid.half_width) / grid.step)) - 2, 0),
             grid.count - 6)
    idx = np.arange(j0, j0 + 6)
    xs = grid.nodes[idx]
    out = 0j
    for a in range(6):
        num, den = 1.0, 1.0
        for b in range(6):
            if a == b:
                continue
            num *= s - xs[b]
            den *= xs[a] - xs[b]
        out += h[idx[a]] * (num / den)
    return out


def sweep_sign(from_dir: RayDirection, to_dir: RayDirection) -> int:
    """+1 if the sweep from one ray to the other is counterclockwise."""
    delta = _wrap(to_dir.phase - from_dir.phase)
    return 1 if delta > 0 else -1


def in_swept_sector(zeta: complex, from_dir: RayDirection,
                    to_dir: RayDirection) -> bool:
    """True iff zeta lies strictly inside the open sector swept from one
    ray to the other (the short way)."""
    delta = _wrap(to_dir.phase - from_dir.phase)
    rel = _wrap(math.atan2(zeta.imag, zeta.real) - from_dir.phase)
    if delta > 0:
        return EPS_ANGLE < rel < delta - EPS_ANGLE
    return delta + EPS_ANGLE < rel < -EPS_ANGLE


def deform_to_bps_ray(zeta: complex, from_dir: RayDirection, to_grid: RayGrid,
                      h_analytic) -> tuple[complex, bool]:
    """Integral moved from one ray to another across a sector where the
    integrand is analytic.

    Returns the integral along the target grid's ray and whether the kernel
    pole at zeta was crossed, in which case the caller owes the residue
    term sweep_sign * 4 pi i * h(zeta).
    """
    to_dir = to_grid.direction
    if to_dir.angle_to(from_dir) > math.pi - EPS_ANGLE:
        raise ValueError("rays are anti-parallel; the swept sector is ambiguous")
    h = np.array([h_analytic(z) for z in to_grid.points()], dtype=complex)
    integral = integrate_ray(to_grid, h, zeta, side="off")
    return integral, in_swept_sector(zeta, from_dir, to_dir)
