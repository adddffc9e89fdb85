"""
Sign-magnitude fixed-point LLR arithmetic.

Hardware LLRs are ``w``-bit sign-magnitude words: one sign bit and ``w-1``
magnitude bits, so the representable range is the symmetric interval
``[-(2**(w-1) - 1), 2**(w-1) - 1]`` and ``-0`` is folded onto ``+0``. That
makes sign-magnitude arithmetic isomorphic to saturating symmetric integer
arithmetic, which is what the vectorised helpers here use; :class:`SMValue`
is the explicit scalar form.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_SCALE = 2.0


@dataclass(frozen=True)
class QScheme:
    """Quantization ``Q(Qi, Qc)``: internal and channel widths, sign included."""

    q_internal: int = 5
    q_channel: int = 5

    def __post_init__(self):
        if not (2 <= self.q_channel <= self.q_internal <= 16):
            raise ValueError(
                f"need 2 <= Qc <= Qi <= 16, got Qi={self.q_internal}, Qc={self.q_channel}"
            )

    @property
    def max_internal(self) -> int:
        return max_magnitude(self.q_internal)

    @property
    def max_channel(self) -> int:
        return max_magnitude(self.q_channel)

    def __str__(self):
        return f"Q({self.q_internal},{self.q_channel})"

    @classmethod
    def parse(cls, text: str) -> "QScheme":
        parts = text.strip().strip("Q()").split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed quantization scheme {text!r}; expected 'Qi,Qc'")
        return cls(int(parts[0]), int(parts[1]))


def max_magnitude(width: int) -> int:
    return (1 << (width - 1)) - 1


@dataclass(frozen=True)
class SMValue:
    """A sign-magnitude word. ``-0`` is normalised to ``+0`` on construction."""

    sign: int
    magnitude: int
    width: int

    def __post_init__(self):
        if self.sign not in (0, 1):
            raise ValueError(f"sign must be 0 or 1, got {self.sign}")
        if not 0 <= self.magnitude <= max_magnitude(self.width):
            raise ValueError(
                f"magnitude {self.magnitude} does not fit {self.width}-bit sign-magnitude"
            )
        if self.magnitude == 0 and self.sign:
            object.__setattr__(self, "sign", 0)

    @property
    def value(self) -> int:
        return -self.magnitude if self.sign else self.magnitude

    def __int__(self):
        return self.value

    @classmethod
    def from_int(cls, v: int, width: int) -> "SMValue":
        v = int(v)
        return cls(int(v < 0), abs(v), width)

    def to_bits(self) -> str:
        """MSB-first bit string, sign bit first."""
        return str(self.sign) + format(self.magnitude, f"0{self.width - 1}b")

    @classmethod
    def from_bits(cls, bits: str) -> "SMValue":
        return cls(int(bits[0]), int(bits[1:], 2), len(bits))


def saturate(v, width: int):
    """Clamp integers (scalar or array) to the ``width``-bit symmetric range."""
    m = max_magnitude(width)
    return np.clip(v, -m, m)


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize_llr(llr: float, scheme: QScheme, scale: float = DEFAULT_SCALE) -> SMValue:
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    q = int(saturate(round_half_away(llr * scale), scheme.q_channel))
    return SMValue.from_int(q, scheme.q_channel)


def quantize_llrs(llrs, scheme: QScheme, scale: float = DEFAULT_SCALE) -> np.ndarray:
    """Array version of :func:`quantize_llr`, returning signed ``int32`` values."""
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    q = saturate(round_half_away(np.asarray(llrs) * scale), scheme.q_channel)
    return q.astype(np.int32)


def sm_add(a: SMValue, b: SMValue, width: int | None = None) -> SMValue:
    """Exact signed sum of two words, saturated to ``width`` bits."""
    width = width or max(a.width, b.width)
    return SMValue.from_int(int(saturate(a.value + b.value, width)), width)


def sm_sub(a: SMValue, b: SMValue, width: int | None = None) -> SMValue:
    width = width or max(a.width, b.width)
    return SMValue.from_int(int(saturate(a.value - b.value, width)), width)


def sm_compare_mag(a: SMValue, b: SMValue) -> bool:
    """``|a| >= |b|``; signs are ignored."""
    return a.magnitude >= b.magnitude
