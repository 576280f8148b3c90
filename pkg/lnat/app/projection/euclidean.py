"""Euclidean projection onto the convex hull of a domain."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from ..lattice import LNatDomain, RationalVector
from ..utils.logging import get_logger

logger = get_logger(__name__)

FloatArray = npt.NDArray[np.float64]


class ProjectionConfig(BaseModel):
    """Stopping rule for the iterative projection."""

    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(default=1e-10, gt=0)
    max_sweeps: int = Field(default=100_000, ge=1)


class ProjectionConvergenceError(Exception):
    """Raised when the projection does not settle within ``max_sweeps``."""

    def __init__(self, residual: float, sweeps: int) -> None:
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(f"Projection did not converge after {sweeps} sweeps (residual {residual:.3e})")


def project_box(
    y: npt.ArrayLike, lower: Sequence[int] | npt.ArrayLike, upper: Sequence[int] | npt.ArrayLike
) -> FloatArray:
    """Clamp ``y`` componentwise into ``[lower, upper]``."""
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if np.any(lo > hi):
        raise ValueError("lower must not exceed upper")
    return np.clip(np.asarray(y, dtype=float), lo, hi)


def project(
    domain: LNatDomain, y: npt.ArrayLike, cfg: ProjectionConfig | None = None
) -> FloatArray:
    """Project ``y`` onto the convex hull of ``domain``.

    Dykstra's scheme over the box (one set, closed form) and the half-spaces
    ``x_i - x_j <= gamma_ij`` in lexicographic order, each with its own
    correction term. Stops once a sweep moves neither the iterate nor any
    correction by more than the tolerance and the iterate is feasible within
    the tolerance.

    Raises:
        ProjectionConvergenceError: If ``cfg.max_sweeps`` sweeps do not suffice.
    """
    cfg = cfg or ProjectionConfig()
    point = np.asarray(y, dtype=float)
    if point.shape != (domain.dim,):
        raise ValueError(f"Expected a vector of length {domain.dim}, got shape {point.shape}")

    lower = np.asarray(domain.lower, dtype=float)
    upper = np.asarray(domain.upper, dtype=float)
    arcs = domain.finite_differences
    if not arcs:
        return project_box(point, lower, upper)

    x = point.copy()
    box_correction = np.zeros(domain.dim)
    arc_correction = np.zeros(len(arcs))
    change = float("inf")

    for sweep in range(1, cfg.max_sweeps + 1):
        previous = x.copy()
        previous_box = box_correction.copy()
        previous_arcs = arc_correction.copy()

        shifted = x + box_correction
        x = np.clip(shifted, lower, upper)
        box_correction = shifted - x

        for a, (i, j, gamma) in enumerate(arcs):
            xi = x[i] + arc_correction[a]
            xj = x[j] - arc_correction[a]
            step = max(0.0, (xi - xj - gamma) / 2.0)
            x[i] = xi - step
            x[j] = xj + step
            arc_correction[a] = step

        change = float(
            np.linalg.norm(x - previous)
            + np.linalg.norm(box_correction - previous_box)
            + np.linalg.norm(arc_correction - previous_arcs)
        )
        if change <= cfg.tolerance and domain.max_violation(x) <= cfg.tolerance:
            logger.debug("Projection converged after %d sweeps", sweep)
            return x

    raise ProjectionConvergenceError(residual=change, sweeps=cfg.max_sweeps)


def pull_inside(domain: LNatDomain, x: npt.ArrayLike | Sequence[Fraction]) -> RationalVector:
    """Exact rational point of the convex hull closest along the ray to the interior point.

    Returns ``x`` itself (as fractions) when it already satisfies every
    constraint exactly; otherwise ``(1 - lam) x + lam c`` with ``c`` the
    domain's interior point and the smallest ``lam`` that removes every
    violation.
    """
    xr = tuple(Fraction(v) for v in (x.tolist() if isinstance(x, np.ndarray) else x))
    if len(xr) != domain.dim:
        raise ValueError(f"Expected {domain.dim} coordinates, got {len(xr)}")

    centre = [*domain.interior_point, Fraction(0)]
    values = [*xr, Fraction(0)]
    lam = Fraction(0)
    for arc in domain.arcs:
        violation = values[arc.head] - values[arc.tail] - arc.weight
        if violation <= 0:
            continue
        slack = arc.weight - (centre[arc.head] - centre[arc.tail])
        lam = max(lam, violation / (violation + slack))

    if lam == 0:
        return xr
    return tuple((1 - lam) * v + lam * c for v, c in zip(xr, centre, strict=False))
