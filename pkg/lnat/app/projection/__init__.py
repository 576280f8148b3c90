"""Euclidean projection onto convex hulls of L-natural convex sets."""

from .euclidean import (
    ProjectionConfig,
    ProjectionConvergenceError,
    project,
    project_box,
    pull_inside,
)

__all__ = [
    "ProjectionConfig",
    "ProjectionConvergenceError",
    "project",
    "project_box",
    "pull_inside",
]
