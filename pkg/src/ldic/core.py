"""Channel primitives: fixed-width GF(2) words and the deterministic channel.

A transmitted word has q = max(n, m) bit levels, indexed from the top: level 0
is the most significant (highest power) level. The channel shifts a word down
by q - n on the direct path and by q - m on the cross path, then adds the two
paths bitwise over GF(2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class BitWord:
    """Immutable word of GF(2) levels, level 0 = top."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        for b in self.bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b!r}")

    @classmethod
    def zeros(cls, width: int) -> BitWord:
        if width < 0:
            raise ValueError("width must be nonnegative")
        return cls((0,) * width)

    @classmethod
    def from01(cls, text: str) -> BitWord:
        """Parse a top-first 0/1 string."""
        return cls(tuple(int(c) for c in text))

    @property
    def width(self) -> int:
        return len(self.bits)

    def to01(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __getitem__(self, level: int) -> int:
        return self.bits[level]

    def is_zero(self) -> bool:
        return not any(self.bits)


def xor(a: BitWord, b: BitWord) -> BitWord:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    return BitWord(tuple(x ^ y for x, y in zip(a.bits, b.bits)))


def shift_down(x: BitWord, t: int) -> BitWord:
    """Shift levels downward by t: output level j carries input level j - t.

    The top t levels of the output are zero; the bottom t input levels fall
    off. t = 0 is the identity.
    """
    if t < 0:
        raise ValueError("shift must be nonnegative")
    if t >= x.width:
        return BitWord.zeros(x.width)
    return BitWord((0,) * t + x.bits[: x.width - t])


@dataclass(frozen=True)
class ChannelConfig:
    """Symmetric channel geometry: direct gain n, cross gain m, feedback r_f.

    All three are bit counts per slot; r_f is the per-slot rate of each
    receiver-to-own-transmitter feedback link.
    """

    n: int
    m: int
    r_f: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if self.r_f < 0:
            raise ValueError("r_f must be nonnegative")

    @property
    def q(self) -> int:
        """Word width: the larger of the two gains."""
        return max(self.n, self.m)

    def alpha(self) -> Fraction:
        return Fraction(self.m, self.n)

    def beta(self) -> Fraction:
        return Fraction(self.r_f, self.n)


def channel_output(cfg: ChannelConfig, x1: BitWord, x2: BitWord) -> tuple[BitWord, BitWord]:
    """One noiseless channel use: each receiver sees direct + cross, XORed."""
    q = cfg.q
    for x in (x1, x2):
        if x.width != q:
            raise ValueError(f"transmit words must have width {q}, got {x.width}")
    y1 = xor(shift_down(x1, q - cfg.n), shift_down(x2, q - cfg.m))
    y2 = xor(shift_down(x2, q - cfg.n), shift_down(x1, q - cfg.m))
    return y1, y2
