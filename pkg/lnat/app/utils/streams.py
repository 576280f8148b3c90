"""Seeded random streams.

Every experiment derives two independent generators from its integer seed: one
for the cost sequence (signs, demands, random functions) and one for the
learner (thresholds, sampled chain indices, Rademacher signs). The adversary
stream is fully consumed before the learner draws anything.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class ExperimentStreams(NamedTuple):
    """Independent generators for one experiment seed."""

    adversary: np.random.Generator
    learner: np.random.Generator


def experiment_streams(seed: int) -> ExperimentStreams:
    """Split a seed into adversary and learner generators.

    Args:
        seed: Non-negative experiment seed.

    Returns:
        The two generators, spawned from one SeedSequence.
    """
    adversary_seq, learner_seq = np.random.SeedSequence(seed).spawn(2)
    return ExperimentStreams(
        adversary=np.random.default_rng(adversary_seq),
        learner=np.random.default_rng(learner_seq),
    )


def as_generator(source: int | np.random.Generator) -> np.random.Generator:
    """Return the adversary stream for a seed, or pass a generator through."""
    if isinstance(source, np.random.Generator):
        return source
    return experiment_streams(source).adversary
