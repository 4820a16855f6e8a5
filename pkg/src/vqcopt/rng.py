"""Named random streams for one optimization run.

Every run owns four independent generators derived from its seed. Keeping the
streams separate makes the pre-switch portion of a hybrid trace bitwise equal
to a pure run with the same seed: consuming hybrid-choice or axis draws never
perturbs the initialization or shot-noise sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_STREAM_NAMES = ("init", "axis", "shots", "hybrid")


@dataclass
class RunStreams:
    """The four per-run generators: init, axis resampling, shot noise, hybrid choice."""

    seed: int
    init: np.random.Generator = field(init=False)
    axis: np.random.Generator = field(init=False)
    shots: np.random.Generator = field(init=False)
    hybrid: np.random.Generator = field(init=False)

    def __post_init__(self) -> None:
        children = np.random.SeedSequence(self.seed).spawn(len(_STREAM_NAMES))
        for name, child in zip(_STREAM_NAMES, children):
            setattr(self, name, np.random.default_rng(child))
