"""Deterministic unit-interval sequence replayed from a byte file.

Each draw consumes two consecutive bytes (b0, b1) and yields
(b0 + 256*b1) / 65535, so the sequence is reproducible bit-for-bit on any
platform from the same file.  This is a replay device, not a PRNG.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from homoglab.errors import ExhaustedStream

# First ten bytes of the shipped fixture; the five pairs they form are the
# published reference values for the draw formula.
FIXTURE_HEAD = bytes([34, 178, 52, 184, 220, 178, 237, 13, 19, 247])

# Filler for the fixture past the reference head: 64-bit LCG
# state <- (state * A + C) mod 2^64, emitting bits 33..40 of each state.
_LCG_SEED = 0x9E3779B97F4A7C15
_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407


class ByteStreamRng:
    """Sequential two-byte reader producing reals in [0, 1].

    A single consumer owns an instance; independent instances over the same
    content produce identical sequences.
    """

    def __init__(self, data: bytes):
        self._data = data
        self.cursor = 0

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ByteStreamRng":
        return cls(Path(path).read_bytes())

    def __len__(self) -> int:
        return len(self._data)

    @property
    def remaining_draws(self) -> int:
        return (len(self._data) - self.cursor) // 2

    def next_xi(self) -> float:
        """Consume one byte pair and return (b0 + 256*b1) / 65535."""
        if self.cursor + 2 > len(self._data):
            raise ExhaustedStream(
                f"need 2 bytes at cursor {self.cursor}, have {len(self._data)}"
            )
        b0 = self._data[self.cursor]
        b1 = self._data[self.cursor + 1]
        self.cursor += 2
        return (b0 + 256 * b1) / 65535.0

    def take(self, n: int) -> np.ndarray:
        """Draw n values as a float64 array."""
        if self.cursor + 2 * n > len(self._data):
            raise ExhaustedStream(
                f"need {2 * n} bytes at cursor {self.cursor}, have {len(self._data)}"
            )
        raw = np.frombuffer(
            self._data, dtype=np.uint8, count=2 * n, offset=self.cursor
        ).astype(np.float64)
        self.cursor += 2 * n
        return (raw[0::2] + 256.0 * raw[1::2]) / 65535.0


def fixture_bytes(n: int = 262144) -> bytes:
    """Deterministic fixture content: the reference head plus LCG filler."""
    if n <= len(FIXTURE_HEAD):
        return FIXTURE_HEAD[:n]
    out = bytearray(FIXTURE_HEAD)
    state = _LCG_SEED
    for _ in range(n - len(FIXTURE_HEAD)):
        state = (state * _LCG_A + _LCG_C) & 0xFFFFFFFFFFFFFFFF
        out.append((state >> 33) & 0xFF)
    return bytes(out)


def default_byte_path() -> Path:
    """Path of the fixture file shipped with the package."""
    return Path(__file__).parent / "data" / "random_bytes.bin"


def open_stream(path: str | os.PathLike | None = None) -> ByteStreamRng:
    """Open a fresh stream over a byte file (the fixture when path is None)."""
    return ByteStreamRng.from_file(path if path is not None else default_byte_path())


def validate_budget(rng: ByteStreamRng, draws: int) -> None:
    """Fail up front when a planned experiment cannot be fed."""
    if rng.remaining_draws < draws:
        raise ExhaustedStream(
            f"byte file provides {rng.remaining_draws} draws from the cursor, "
            f"experiment needs up to {draws}"
        )
