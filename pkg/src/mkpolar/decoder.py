"""
Successive-cancellation decoding of multi-kernel polar codes.

Two decoder variants are provided, both vectorised over a leading batch
axis so that every frame can carry its own frozen indicator vector:

``"reference"``
    Plain depth-first SC. Leaf blocks (size 2 or 3, set by the last kernel)
    are evaluated sequentially with the f/g functions and the hard decision
    ``h``.
``"optimized"``
    The combinational-decoder formulation: the size-2 and size-3 leaf
    blocks are replaced by closed-form decision logic, and a trailing pair
    of binary kernels is decoded by the size-4 pre-computation block, which
    evaluates the right-hand g function for all four left partial-sum
    patterns and selects afterwards.

LLRs are floats (min-sum, no saturation) or signed integers holding
sign-magnitude words; pass ``width`` to saturate g-function sums at that
many bits.

Exact zero LLRs reaching a leaf are where the two formulations can
disagree: ``h(0) == 0``, whereas the decision logic takes the sign of one
operand. ``hardware_ties=True`` (the default) makes the reference decoder
resolve those ties the same way the hardware does.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import saturate
from .kernels import KernelOrder, KernelTag, combine_b, combine_t

REFERENCE = "reference"
OPTIMIZED = "optimized"


@dataclass
class DecodeResult:
    u_hat: np.ndarray
    x_hat: np.ndarray


# --- belief-propagation functions -------------------------------------------


def sign_bit(x) -> np.ndarray:
    """``s(x)``: 1 for negative values, else 0."""
    return (np.asarray(x) < 0).astype(np.uint8)


def _apply_sign(sign, mag):
    return np.where(sign.astype(bool), -mag, mag)


def _sat(v, width):
    return v if width is None else saturate(v, width)


def f_b(a0, a1):
    a0 = np.asarray(a0)
    a1 = np.asarray(a1)
    return _apply_sign(sign_bit(a0) ^ sign_bit(a1), np.minimum(np.abs(a0), np.abs(a1)))


def g_b(a0, a1, beta, width=None):
    a0 = np.asarray(a0)
    return _sat(np.where(np.asarray(beta).astype(bool), -a0, a0) + a1, width)


def f_t(a0, a1, a2):
    a0, a1, a2 = (np.asarray(v) for v in (a0, a1, a2))
    mag = np.minimum(np.minimum(np.abs(a0), np.abs(a1)), np.abs(a2))
    return _apply_sign(sign_bit(a0) ^ sign_bit(a1) ^ sign_bit(a2), mag)


def g1_t(a0, a1, a2, beta_l, width=None):
    a0 = np.asarray(a0)
    return _sat(np.where(np.asarray(beta_l).astype(bool), -a0, a0) + f_b(a1, a2), width)


def g2_t(a0, a1, a2, beta_l, beta_c, width=None):
    """Right-branch LLR of a ternary node; ``a0`` does not take part."""
    bl = np.asarray(beta_l).astype(bool)
    blc = bl ^ np.asarray(beta_c).astype(bool)
    a1 = np.asarray(a1)
    a2 = np.asarray(a2)
    return _sat(np.where(bl, -a1, a1) + np.where(blc, -a2, a2), width)


def decide_leaf(llr, a_bit) -> np.ndarray:
    return sign_bit(llr) & np.asarray(a_bit, dtype=np.uint8)


# --- leaf decision logic ----------------------------------------------------


def decide_block2(a0, a1, frozen):
    """Size-2 decision logic. ``frozen`` has a trailing axis of length 2."""
    frozen = np.asarray(frozen, dtype=np.uint8)
    s0, s1 = sign_bit(a0), sign_bit(a1)
    b0 = (s0 ^ s1) & frozen[..., 0]
    take_right = np.abs(a1) >= np.abs(a0)
    b1 = np.where(take_right, s1, s0 ^ b0).astype(np.uint8) & frozen[..., 1]
    return b0, b1


def decide_block3(a0, a1, a2, frozen):
    """Size-3 decision logic. ``frozen`` has a trailing axis of length 3."""
    frozen = np.asarray(frozen, dtype=np.uint8)
    s0, s1, s2 = sign_bit(a0), sign_bit(a1), sign_bit(a2)
    m0, m1, m2 = np.abs(a0), np.abs(a1), np.abs(a2)
    b0 = (s0 ^ s1 ^ s2) & frozen[..., 0]
    c1 = ((m0 >= m1) & (m2 >= m1)) | ((m0 >= m2) & (m1 >= m2))
    b1 = np.where(c1, s0 ^ b0, s1 ^ s2).astype(np.uint8) & frozen[..., 1]
    b2 = np.where(m1 >= m2, s1 ^ b0, s2 ^ b0 ^ b1).astype(np.uint8) & frozen[..., 2]
    return b0, b1, b2


# --- decoders ---------------------------------------------------------------


def decode(llrs, a, order: KernelOrder, variant: str = OPTIMIZED, width: int | None = None,
           hardware_ties: bool = True) -> DecodeResult:
    """Decode one frame (shape ``(N,)``) or a batch (shape ``(B, N)``).

    ``a`` is the frozen indicator (1 = information bit) and may be a single
    vector shared by the batch or one vector per frame.
    """
    llrs = np.asarray(llrs)
    a = np.asarray(a, dtype=np.uint8)
    n = order.block_length
    if llrs.shape[-1] != n or a.shape[-1] != n:
        raise ValueError(
            f"frame length mismatch: llrs {llrs.shape[-1]}, frozen {a.shape[-1]}, N={n}"
        )
    single = llrs.ndim == 1
    alpha = np.atleast_2d(llrs)
    if width is not None and not np.issubdtype(alpha.dtype, np.integer):
        raise TypeError("fixed-point decoding expects integer LLRs")
    a2 = np.broadcast_to(np.atleast_2d(a), alpha.shape)
    if variant == REFERENCE:
        u, x = _reference(alpha, a2, order.kernels, width, hardware_ties, None)
    elif variant == OPTIMIZED:
        u, x = _optimized(alpha, a2, order.kernels, width)
    else:
        raise ValueError(f"unknown decoder variant {variant!r}")
    if single:
        u, x = u[0], x[0]
    return DecodeResult(u, x)


def leaf_tie_mask(llrs, a, order: KernelOrder, width: int | None = None) -> np.ndarray:
    """Per frame, whether some information leaf sees an exactly zero LLR.

    Evaluated along the plain sequential decode path. Frames without such a
    leaf decode identically under every variant and tie convention.
    """
    alpha = np.atleast_2d(np.asarray(llrs))
    a2 = np.broadcast_to(np.atleast_2d(np.asarray(a, dtype=np.uint8)), alpha.shape)
    ties = np.zeros(alpha.shape[0], dtype=bool)
    _reference(alpha, a2, order.kernels, width, False, ties)
    return ties


def _split(v, d):
    m = v.shape[-1] // d
    return [v[..., j * m:(j + 1) * m] for j in range(d)]


def _sum_sign(sp, mp, sq, mq, prefer_first):
    """Sign of ``p + q`` from operand signs/magnitudes, ties to one operand."""
    tie = sp if prefer_first else sq
    return np.where(mp > mq, sp, np.where(mq > mp, sq, tie)).astype(np.uint8)


def _leaf(llr, a_bit, ties):
    if ties is not None:
        ties |= (llr == 0) & (a_bit == 1)
    return decide_leaf(llr, a_bit)


def _reference(alpha, a, kernels, width, hardware_ties, ties):
    k = kernels[0]
    if len(kernels) == 1:
        if hardware_ties:
            u = _reference_base_hw(alpha, a, k)
        else:
            u = _reference_base(alpha, a, k, width, ties)
        x = combine_b(u[:, :1], u[:, 1:]) if k is KernelTag.B2 else combine_t(u[:, :1], u[:, 1:2], u[:, 2:])
        return u, x
    rest = kernels[1:]
    if k is KernelTag.B2:
        a0, a1 = _split(alpha, 2)
        f0, f1 = _split(a, 2)
        ul, xl = _reference(f_b(a0, a1), f0, rest, width, hardware_ties, ties)
        ur, xr = _reference(g_b(a0, a1, xl, width), f1, rest, width, hardware_ties, ties)
        return np.concatenate([ul, ur], axis=-1), combine_b(xl, xr)
    a0, a1, a2 = _split(alpha, 3)
    f0, f1, f2 = _split(a, 3)
    ul, xl = _reference(f_t(a0, a1, a2), f0, rest, width, hardware_ties, ties)
    uc, xc = _reference(g1_t(a0, a1, a2, xl, width), f1, rest, width, hardware_ties, ties)
    ur, xr = _reference(g2_t(a0, a1, a2, xl, xc, width), f2, rest, width, hardware_ties, ties)
    return np.concatenate([ul, uc, ur], axis=-1), combine_t(xl, xc, xr)


def _reference_base(alpha, a, k, width, ties):
    cols = [alpha[:, j] for j in range(k.dimension)]
    if k is KernelTag.B2:
        b0 = _leaf(f_b(*cols), a[:, 0], ties)
        b1 = _leaf(g_b(cols[0], cols[1], b0, width), a[:, 1], ties)
        return np.stack([b0, b1], axis=-1)
    b0 = _leaf(f_t(*cols), a[:, 0], ties)
    b1 = _leaf(g1_t(*cols, b0, width), a[:, 1], ties)
    b2 = _leaf(g2_t(*cols, b0, b1, width), a[:, 2], ties)
    return np.stack([b0, b1, b2], axis=-1)


def _reference_base_hw(alpha, a, k):
    # Sequential evaluation on (sign, magnitude) pairs so that a negated zero
    # keeps its sign bit, as it does on a sign-magnitude bus before the
    # decision is taken.
    s = [sign_bit(alpha[:, j]) for j in range(k.dimension)]
    m = [np.abs(alpha[:, j]) for j in range(k.dimension)]
    if k is KernelTag.B2:
        b0 = (s[0] ^ s[1]) & a[:, 0]
        # g_b = (1-2 b0) a0 + a1; exact ties resolve to the later operand
        b1 = _sum_sign(s[0] ^ b0, m[0], s[1], m[1], prefer_first=False) & a[:, 1]
        return np.stack([b0, b1], axis=-1)
    b0 = (s[0] ^ s[1] ^ s[2]) & a[:, 0]
    # g1_t = (1-2 b0) a0 + f_b(a1, a2); ties resolve to the first operand
    b1 = _sum_sign(s[0] ^ b0, m[0], s[1] ^ s[2], np.minimum(m[1], m[2]), prefer_first=True) & a[:, 1]
    # g2_t = (1-2 b0) a1 + (1-2 (b0^b1)) a2; ties resolve to the first operand
    b2 = _sum_sign(s[1] ^ b0, m[1], s[2] ^ b0 ^ b1, m[2], prefer_first=True) & a[:, 2]
    return np.stack([b0, b1, b2], axis=-1)


def _optimized(alpha, a, kernels, width):
    k = kernels[0]
    if len(kernels) == 1:
        if k is KernelTag.B2:
            u = np.stack(decide_block2(alpha[:, 0], alpha[:, 1], a), axis=-1)
            return u, combine_b(u[:, :1], u[:, 1:])
        u = np.stack(decide_block3(alpha[:, 0], alpha[:, 1], alpha[:, 2], a), axis=-1)
        return u, combine_t(u[:, :1], u[:, 1:2], u[:, 2:])
    if len(kernels) == 2 and kernels[1] is KernelTag.B2 and k is KernelTag.B2:
        return _precompute4(alpha, a, width)
    rest = kernels[1:]
    if k is KernelTag.B2:
        a0, a1 = _split(alpha, 2)
        f0, f1 = _split(a, 2)
        ul, xl = _optimized(f_b(a0, a1), f0, rest, width)
        ur, xr = _optimized(g_b(a0, a1, xl, width), f1, rest, width)
        return np.concatenate([ul, ur], axis=-1), combine_b(xl, xr)
    a0, a1, a2 = _split(alpha, 3)
    f0, f1, f2 = _split(a, 3)
    ul, xl = _optimized(f_t(a0, a1, a2), f0, rest, width)
    uc, xc = _optimized(g1_t(a0, a1, a2, xl, width), f1, rest, width)
    ur, xr = _optimized(g2_t(a0, a1, a2, xl, xc, width), f2, rest, width)
    return np.concatenate([ul, uc, ur], axis=-1), combine_t(xl, xc, xr)


_PATTERNS = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8)


def _precompute4(alpha, a, width):
    top, bottom = alpha[:, :2], alpha[:, 2:]
    left = f_b(top, bottom)
    b0, b1 = decide_block2(left[:, 0], left[:, 1], a[:, :2])
    v = combine_b(b0[:, None], b1[:, None])
    # all four speculative right-branch inputs, decided before selection
    cand = np.stack([g_b(top, bottom, p, width) for p in _PATTERNS], axis=1)
    r0, r1 = decide_block2(cand[..., 0], cand[..., 1], a[:, None, 2:])
    sel = 2 * v[:, 0] + v[:, 1]
    rows = np.arange(alpha.shape[0])
    b2, b3 = r0[rows, sel], r1[rows, sel]
    u = np.stack([b0, b1, b2, b3], axis=-1)
    w = combine_b(b2[:, None], b3[:, None])
    return u, combine_b(v, w)
