"""Run identifiers, seed derivation, and the deterministic shuffle.

The seed for a run label is the first eight decimal digits found in the
lowercase hex SHA-512 digest of the label followed by a single newline
(the digest a shell pipeline like ``echo R01 | sha512sum`` produces).  The
newline matters: it is the only variant that reproduces both published
reference values, R01 -> 99975818 and R02 -> 56899599, and it is validated
by the test suite against exactly those values.

Shuffling is a descending Fisher-Yates driven by SplitMix64 with unbiased
index draws via rejection sampling.  Both halves are fully specified so any
implementation in any language can reproduce the same permutation.
"""

from __future__ import annotations

import hashlib
import re

RUN_ID_PATTERN = re.compile(r"^R\d{2,}$")

_MASK64 = (1 << 64) - 1


class InvalidRunId(ValueError):
    pass


class DigitsExhausted(RuntimeError):
    """Digest hex contained fewer than eight decimal digits (never observed)."""


def validate_run_id(label: str) -> str:
    if not RUN_ID_PATTERN.match(label):
        raise InvalidRunId(f"run id must look like R01, R02, ...: got {label!r}")
    return label


def default_run_ids(count: int = 10) -> list[str]:
    return [f"R{i:02d}" for i in range(1, count + 1)]


def derive_seed(run_id: str) -> int:
    """Seed in [0, 10^8) for a run label."""
    validate_run_id(run_id)
    digest = hashlib.sha512((run_id + "\n").encode("ascii")).hexdigest()
    digits = [c for c in digest if c.isdigit()]
    if len(digits) < 8:
        raise DigitsExhausted(f"digest of {run_id!r} carries only {len(digits)} decimal digits")
    return int("".join(digits[:8]))


class SplitMix64:
    """SplitMix64 with the standard constants; 64-bit output per step."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_below(self, bound: int) -> int:
        """Unbiased draw in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound


def shuffled(items, seed: int) -> list:
    """Fisher-Yates permutation of ``items``, identical on every platform."""
    out = list(items)
    rng = SplitMix64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = rng.next_below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out
