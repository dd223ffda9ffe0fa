"""
Deterministic random streams.

A run owns one root seed. Each phase of the run draws from its own child
stream, so adding draws in one phase (for example more bootstrap rounds)
never shifts the numbers another phase sees.
"""

from typing import NamedTuple

import numpy as np

Rng = np.random.Generator

STREAM_NAMES = ("init", "start", "walk", "bootstrap")


class RunStreams(NamedTuple):
    """Independent generators for the phases of one nested sampling run."""

    init: Rng
    start: Rng
    walk: Rng
    bootstrap: Rng


def spawn_streams(seed):
    """
    Derive the per-phase streams of a run.

    Args:
        seed (int): Root seed of the run.

    Returns:
        RunStreams: One generator per phase, identical for identical seeds.
    """
    children = np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))
    return RunStreams(*(np.random.default_rng(child) for child in children))
