"""Log-uniform (Zipfian) negative sampling over frequency-ranked indices.

With items indexed by descending frequency rank in [0, D), the sampling
distribution is

    p(index) = (log(index + 2) - log(index + 1)) / log(D + 1)

whose closed-form CDF  F(index) = log(index + 2) / log(D + 1)  telescopes,
so a draw is one uniform variate and one power:

    index = ceil((D + 1) ** r) - 2,   r ~ U(0, 1].
"""

from __future__ import annotations

import logging
import math

import numpy as np

logger = logging.getLogger(__name__)

MAX_COLLISION_ATTEMPTS = 100


def zipf_probability(index: int, d: int) -> float:
    """Probability mass of ``index`` under the rank-D log-uniform distribution."""
    if not 0 <= index < d:
        raise ValueError(f"index {index} out of range [0, {d})")
    return (math.log(index + 2) - math.log(index + 1)) / math.log(d + 1)


def zipf_cdf(index: int, d: int) -> float:
    """P(draw <= index); the telescoped prefix sum of :func:`zipf_probability`."""
    if not 0 <= index < d:
        raise ValueError(f"index {index} out of range [0, {d})")
    return math.log(index + 2) / math.log(d + 1)


def index_from_uniform(r: float, d: int) -> int:
    """Invert the CDF at ``r`` in (0, 1]; clamped against float overshoot."""
    idx = math.ceil((d + 1) ** r) - 2
    return min(max(idx, 0), d - 1)


class ZipfSampler:
    """Seedable sampler over [0, D) with log-uniform rank weighting."""

    def __init__(self, d: int, seed: int | np.random.SeedSequence = 0):
        if d < 1:
            raise ValueError("dictionary size must be >= 1")
        self.d = d
        self._seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self._rng = np.random.default_rng(self._seed_seq)

    def spawn(self) -> "ZipfSampler":
        """Child sampler with an independently derived stream."""
        return ZipfSampler(self.d, self._seed_seq.spawn(1)[0])

    def draw(self) -> int:
        # 1 - u maps the generator's [0, 1) onto the required (0, 1].
        return index_from_uniform(1.0 - self._rng.random(), self.d)

    def draw_many(self, n: int) -> np.ndarray:
        r = 1.0 - self._rng.random(n)
        idx = np.ceil((self.d + 1) ** r).astype(np.int64) - 2
        return np.clip(idx, 0, self.d - 1)

    def draw_negatives(self, s: int, exclude: set[int] | frozenset[int] = frozenset()) -> list[int]:
        """Draw ``s`` indices avoiding ``exclude``.

        A collision triggers a re-draw, at most MAX_COLLISION_ATTEMPTS per
        slot; after that the colliding value is accepted with a warning so
        degenerate tiny-D cases cannot hang.
        """
        out = []
        for _ in range(s):
            idx = self.draw()
            attempts = 0
            while idx in exclude and attempts < MAX_COLLISION_ATTEMPTS:
                idx = self.draw()
                attempts += 1
            if idx in exclude:
                logger.warning(
                    "negative sampling gave up avoiding %d after %d attempts (D=%d)",
                    idx, MAX_COLLISION_ATTEMPTS, self.d,
                )
            out.append(idx)
        return out
