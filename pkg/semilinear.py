"""Eventually periodic sets of naturals and their detection from sampled membership."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

logger = logging.getLogger(__name__)

_MIN_SAMPLES = 9  # counters 0..8
_MIN_PERIODS = 3


@dataclass(frozen=True)
class SemilinearSet:
    threshold: int
    period: int
    base: frozenset[int]
    residues: frozenset[int]

    def __post_init__(self) -> None:
        if self.threshold < 0 or self.period < 1:
            raise ValueError("threshold must be >= 0 and period >= 1")
        if any(not 0 <= b < self.threshold for b in self.base):
            raise ValueError("base elements must lie below the threshold")
        if any(not 0 <= r < self.period for r in self.residues):
            raise ValueError("residues must lie in [0, period)")

    def __contains__(self, k: int) -> bool:
        if k < self.threshold:
            return k in self.base
        return (k - self.threshold) % self.period in self.residues

    def contains(self, k: int) -> bool:
        return k in self

    def rephrase(self, threshold: int, period: int) -> "SemilinearSet":
        """Same set described with a larger threshold and a multiple of the period."""
        if threshold < self.threshold or period % self.period:
            raise ValueError("can only raise the threshold and multiply the period")
        return SemilinearSet(
            threshold=threshold,
            period=period,
            base=frozenset(k for k in range(threshold) if k in self),
            residues=frozenset(r for r in range(period) if threshold + r in self),
        )

    def render(self) -> str:
        base = ",".join(str(b) for b in sorted(self.base))
        residues = ",".join(str(r) for r in sorted(self.residues))
        return f"I={self.threshold} P={self.period} base={{{base}}} residues={{{residues}}}"

    def __str__(self) -> str:
        return self.render()


def detect_semilinear(samples: Sequence[bool | None]) -> SemilinearSet | None:
    """Smallest (threshold, period) explaining the samples, or None.

    samples[k] is membership of k; None marks an unknown entry, which constrains
    nothing. The periodic part must span at least three full periods and each
    residue class needs at least one known entry.
    """
    if len(samples) < _MIN_SAMPLES:
        raise ValueError(f"need at least {_MIN_SAMPLES} samples, got {len(samples)}")
    bound = len(samples) - 1
    for threshold in range(bound + 1):
        period = 1
        while _MIN_PERIODS * period <= bound - threshold:
            residues = _residues(samples, threshold, period)
            if residues is not None:
                found = SemilinearSet(
                    threshold=threshold,
                    period=period,
                    base=frozenset(k for k in range(threshold) if samples[k]),
                    residues=frozenset(residues),
                )
                logger.debug("detect_semilinear: %s", found)
                return found
            period += 1
    return None


def _residues(samples: Sequence[bool | None], threshold: int, period: int) -> set[int] | None:
    residues: set[int] = set()
    for r in range(period):
        values = {samples[k] for k in range(threshold + r, len(samples), period)} - {None}
        if len(values) != 1:
            return None
        if values.pop():
            residues.add(r)
    return residues
