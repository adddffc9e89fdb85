"""
Kernels, block lengths, generator matrices and encoding for multi-kernel
polar codes built from the binary (2x2) and ternary (3x3) kernels.

A code is described by a :class:`KernelOrder`, the sequence of kernels in
the Kronecker product ``G = T_{n_0} (x) T_{n_1} (x) ... (x) T_{n_s}``. The
head of the sequence is the leftmost factor; it governs the root stage of
the decoder tree, and the last kernel governs the leaf building blocks.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_BLOCK_LENGTH = 4096


class KernelTag(enum.Enum):
    """Kernel identifier. The value is the kernel dimension."""

    B2 = 2
    T3 = 3

    @property
    def dimension(self) -> int:
        return self.value

    @property
    def matrix(self) -> np.ndarray:
        return KERNEL_MATRICES[self].copy()

    @classmethod
    def from_dimension(cls, d: int) -> "KernelTag":
        try:
            return cls(int(d))
        except ValueError:
            raise ValueError(f"unsupported kernel dimension {d!r}; use 2 or 3") from None


# Binary kernel in the orientation decoded by f_b/g_b/combine_b:
# x0 = u0 ^ u1, x1 = u1.
KERNEL_MATRICES = {
    KernelTag.B2: np.array([[1, 0],
                            [1, 1]], dtype=np.uint8),
    KernelTag.T3: np.array([[1, 1, 1],
                            [1, 0, 1],
                            [0, 1, 1]], dtype=np.uint8),
}


@dataclass(frozen=True)
class KernelOrder:
    """Head-first sequence of kernels defining a multi-kernel polar code."""

    kernels: tuple[KernelTag, ...]

    def __post_init__(self):
        kernels = tuple(
            k if isinstance(k, KernelTag) else KernelTag.from_dimension(k)
            for k in self.kernels
        )
        if not kernels:
            raise ValueError("kernel order must contain at least one kernel")
        object.__setattr__(self, "kernels", kernels)
        if self.block_length > MAX_BLOCK_LENGTH:
            raise ValueError(
                f"block length {self.block_length} exceeds supported maximum {MAX_BLOCK_LENGTH}"
            )

    @property
    def block_length(self) -> int:
        return int(np.prod([k.dimension for k in self.kernels]))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(k.dimension for k in self.kernels)

    @property
    def is_binary(self) -> bool:
        return all(k is KernelTag.B2 for k in self.kernels)

    @property
    def is_ternary(self) -> bool:
        return all(k is KernelTag.T3 for k in self.kernels)

    @property
    def is_mixed(self) -> bool:
        return not (self.is_binary or self.is_ternary)

    def tail(self, start: int = 1) -> "KernelOrder":
        return KernelOrder(self.kernels[start:])

    def __len__(self):
        return len(self.kernels)

    def __str__(self):
        return ",".join(str(d) for d in self.dims)

    @classmethod
    def parse(cls, text: str) -> "KernelOrder":
        """Parse ``"3,2,2,2,2"`` (braces and spaces tolerated)."""
        cleaned = text.strip().strip("{}[]()")
        try:
            dims = [int(tok) for tok in cleaned.replace(" ", "").split(",") if tok]
        except ValueError:
            raise ValueError(f"malformed kernel order {text!r}") from None
        return cls(tuple(KernelTag.from_dimension(d) for d in dims))

    @classmethod
    def of(cls, *dims: int) -> "KernelOrder":
        return cls(tuple(KernelTag.from_dimension(d) for d in dims))


def enumerate_block_lengths(max_n: int = MAX_BLOCK_LENGTH) -> list[int]:
    """All block lengths ``2**n * 3**m`` in ``[2, max_n]``, ascending."""
    if max_n < 2:
        raise ValueError(f"max_n must be >= 2, got {max_n}")
    lengths = []
    p2 = 1
    while p2 <= max_n:
        p = p2
        while p <= max_n:
            if p >= 2:
                lengths.append(p)
            p *= 3
        p2 *= 2
    return sorted(lengths)


def factorize(n: int) -> tuple[int, int]:
    """Return ``(a, b)`` with ``n == 2**a * 3**b`` or raise ``ValueError``."""
    if n < 2:
        raise ValueError(f"block length must be >= 2, got {n}")
    a = b = 0
    m = n
    while m % 2 == 0:
        m //= 2
        a += 1
    while m % 3 == 0:
        m //= 3
        b += 1
    if m != 1:
        raise ValueError(f"{n} is not of the form 2^n * 3^m")
    return a, b


def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product over GF(2)."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.size == 0 or b.size == 0:
        raise ValueError("kronecker factors must be non-empty")
    return (np.kron(a, b) & 1).astype(np.uint8)


def generator_matrix(order: KernelOrder) -> np.ndarray:
    """Dense ``N x N`` generator matrix, left fold of :func:`kronecker`."""
    return reduce(kronecker, (k.matrix for k in order.kernels))


def gf2_rank(m: np.ndarray) -> int:
    m = np.array(m, dtype=np.uint8) & 1
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = np.nonzero(m[rank:, c])[0]
        if pivot.size == 0:
            continue
        p = rank + pivot[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        below = np.nonzero(m[:, c])[0]
        below = below[below != rank]
        m[below] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def encode_matrix(u, order: KernelOrder) -> np.ndarray:
    """``x = u G`` by explicit matrix product (reference path)."""
    u = _as_bits(u, order.block_length)
    g = generator_matrix(order).astype(np.int64)
    return ((u.astype(np.int64) @ g) & 1).astype(np.uint8)


def encode(u, order: KernelOrder) -> np.ndarray:
    """Encode ``u`` (shape ``(N,)`` or ``(batch, N)``) stage by stage.

    At a stage of size ``M`` whose top kernel has dimension ``d`` the input
    is split into ``d`` contiguous blocks, each encoded with the remaining
    kernels, and the blocks are mixed with the kernel columns, element ``i``
    combining positions ``i, i + M/d, ..., i + (d-1) M/d``.
    """
    u = _as_bits(u, order.block_length)
    return _encode_rec(u, order.kernels)


def _encode_rec(u: np.ndarray, kernels) -> np.ndarray:
    k = kernels[0]
    d = k.dimension
    m = u.shape[-1] // d
    parts = [u[..., j * m:(j + 1) * m] for j in range(d)]
    if len(kernels) > 1:
        parts = [_encode_rec(p, kernels[1:]) for p in parts]
    if k is KernelTag.B2:
        out = combine_b(parts[0], parts[1])
    else:
        out = combine_t(parts[0], parts[1], parts[2])
    return out


def combine_b(bl, br) -> np.ndarray:
    """Binary hard-decision combine: ``[bl ^ br, br]``."""
    bl = np.asarray(bl, dtype=np.uint8)
    br = np.asarray(br, dtype=np.uint8)
    if bl.shape != br.shape:
        raise ValueError(f"combine_b length mismatch: {bl.shape} vs {br.shape}")
    return np.concatenate([bl ^ br, br], axis=-1)


def combine_t(bl, bc, br) -> np.ndarray:
    """Ternary hard-decision combine: ``[bl^bc, bl^br, bl^bc^br]``."""
    bl = np.asarray(bl, dtype=np.uint8)
    bc = np.asarray(bc, dtype=np.uint8)
    br = np.asarray(br, dtype=np.uint8)
    if not (bl.shape == bc.shape == br.shape):
        raise ValueError(
            f"combine_t length mismatch: {bl.shape}, {bc.shape}, {br.shape}"
        )
    lc = bl ^ bc
    return np.concatenate([lc, bl ^ br, lc ^ br], axis=-1)


def _as_bits(u, n: int) -> np.ndarray:
    u = np.asarray(u)
    if u.shape[-1] != n:
        raise ValueError(f"input length {u.shape[-1]} does not match block length {n}")
    if np.any((u != 0) & (u != 1)):
        raise ValueError("bit vectors must contain only 0/1")
    return u.astype(np.uint8)
