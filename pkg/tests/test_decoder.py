import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mkpolar.decoder import (OPTIMIZED, REFERENCE, decide_block2, decide_block3, decide_leaf, decode,
                             f_b, f_t, g1_t, g2_t, g_b, leaf_tie_mask)
from mkpolar.hdl import default_kernel_order
from mkpolar.kernels import KernelOrder, encode

from oracles import leaf_decisions, sc_decode


def test_f_b_examples():
    assert f_b(0, 9) == 0
    assert f_b(-3, 5) == -3
    assert f_b(2, 7) == 2


def test_g_b_examples():
    assert g_b(0, 4, 1) == 4
    assert g_b(2, 3, 0) == 5
    assert g_b(2, 3, 1) == 1
    assert g_b(12, 9, 0, width=5) == 15


def test_f_t_examples():
    assert f_t(4, 0, -2) == 0
    assert f_t(1, -2, 3) == -1
    assert f_t(-1, -1, -1) == -1


def test_g1_t_examples():
    assert g1_t(0, 5, 5, 0) == 5
    assert g1_t(1, -2, 3, 0) == -1
    assert g1_t(1, -2, 3, 1) == -3


def test_g2_t_examples():
    assert g2_t(99, -2, 3, 0, 0) == 1
    assert g2_t(99, -2, 3, 1, 0) == -1
    assert g2_t(99, -2, 3, 0, 1) == -5


def test_decide_leaf_examples():
    assert decide_leaf(-7, 0) == 0
    assert decide_leaf(-7, 1) == 1
    assert decide_leaf(0, 1) == 0


def test_decide_block2_examples():
    assert decide_block2(np.array(3), np.array(-9), [0, 0]) == (0, 0)
    assert decide_block2(np.array(2), np.array(-2), [1, 1]) == (1, 1)
    assert decide_block2(np.array(5), np.array(1), [1, 1]) == (0, 0)


def test_decide_block3_examples():
    assert decide_block3(np.array(1), np.array(-2), np.array(3), [0, 0, 0]) == (0, 0, 0)
    assert decide_block3(np.array(1), np.array(-2), np.array(3), [1, 1, 1]) == (1, 1, 0)
    assert decide_block3(np.array(5), np.array(1), np.array(1), [1, 1, 1]) == (0, 0, 0)


@pytest.mark.parametrize("d", [2, 3])
def test_leaf_blocks_exhaustive_width4(d):
    vals = range(-7, 8)
    block = decide_block2 if d == 2 else decide_block3
    for alpha in itertools.product(vals, repeat=d):
        cols = [np.array(v) for v in alpha]
        for a in itertools.product((0, 1), repeat=d):
            got = [int(b) for b in block(*cols, list(a))]
            plain, ties = leaf_decisions(alpha, a, tie_rule=False)
            rule, _ = leaf_decisions(alpha, a, tie_rule=True)
            assert got == rule
            if got != plain:
                assert ties, (alpha, a)


ORDERS = [(2,), (3,), (2, 2), (3, 2), (2, 3), (2, 2, 2), (3, 3), (2, 2, 3), (3, 2, 2), (2, 3, 2, 2)]


@pytest.mark.parametrize("dims", ORDERS)
def test_reference_matches_scalar_oracle(dims):
    order = KernelOrder.of(*dims)
    n = order.block_length
    rng = np.random.default_rng(n)
    for _ in range(200):
        alpha = rng.integers(-15, 16, n)
        a = rng.integers(0, 2, n)
        u, x = sc_decode([int(v) for v in alpha], [int(v) for v in a], dims, width=5)
        res = decode(alpha, a, order, REFERENCE, width=5, hardware_ties=False)
        assert list(res.u_hat) == u and list(res.x_hat) == x
        falpha = rng.normal(0, 3, n)
        u, x = sc_decode(list(falpha), [int(v) for v in a], dims)
        res = decode(falpha, a, order, REFERENCE, hardware_ties=False)
        assert list(res.u_hat) == u


@pytest.mark.parametrize("n", [6, 12, 48])
def test_variants_agree_on_tie_free_frames(n):
    order = default_kernel_order(n)
    rng = np.random.default_rng(7 + n)
    frames = 100_000
    llr = rng.integers(-15, 16, (frames, n)).astype(np.int32)
    a = rng.integers(0, 2, (frames, n), dtype=np.uint8)
    keep = ~leaf_tie_mask(llr, a, order, width=5)
    assert keep.sum() > 1000
    llr, a = llr[keep], a[keep]
    ref = decode(llr, a, order, REFERENCE, width=5, hardware_ties=False)
    opt = decode(llr, a, order, OPTIMIZED, width=5)
    assert np.array_equal(ref.u_hat, opt.u_hat)
    assert np.array_equal(ref.x_hat, opt.x_hat)


@pytest.mark.parametrize("n", [6, 12, 16, 27, 48])
def test_hardware_tie_reference_matches_optimized_on_all_frames(n):
    order = default_kernel_order(n)
    rng = np.random.default_rng(n)
    llr = rng.integers(-3, 4, (20000, n)).astype(np.int32)
    a = rng.integers(0, 2, (20000, n), dtype=np.uint8)
    assert leaf_tie_mask(llr, a, order, width=5).any()
    ref = decode(llr, a, order, REFERENCE, width=5)
    opt = decode(llr, a, order, OPTIMIZED, width=5)
    assert np.array_equal(ref.u_hat, opt.u_hat)


orders = st.lists(st.sampled_from([2, 3]), min_size=1, max_size=5).map(lambda d: KernelOrder.of(*d))


@given(orders, st.integers(0, 2**32 - 1), st.sampled_from([REFERENCE, OPTIMIZED]))
def test_reencoding_identity(order, seed, variant):
    rng = np.random.default_rng(seed)
    n = order.block_length
    llr = rng.integers(-15, 16, (8, n)).astype(np.int32)
    a = rng.integers(0, 2, (8, n), dtype=np.uint8)
    res = decode(llr, a, order, variant, width=5)
    assert np.array_equal(res.x_hat, encode(res.u_hat, order))
    assert not (res.u_hat & (1 - a)).any()


@given(orders, st.integers(0, 2**32 - 1))
def test_frozen_dominance(order, seed):
    rng = np.random.default_rng(seed)
    n = order.block_length
    llr = rng.integers(-15, 16, n).astype(np.int32)
    a = rng.integers(0, 2, n, dtype=np.uint8)
    flipped = np.where(a == 0, -llr, llr)
    for v in (llr, flipped):
        assert not decode(v, a, order, width=5).u_hat[a == 0].any()


@pytest.mark.parametrize("dims", [(2, 3), (3, 2), (3, 2, 2, 2, 2), (2, 2, 2, 2, 2, 2, 3, 3)])
def test_noiseless_round_trip(dims):
    order = KernelOrder.of(*dims)
    n = order.block_length
    rng = np.random.default_rng(1)
    a = np.zeros(n, dtype=np.uint8)
    a[rng.choice(n, n // 2, replace=False)] = 1
    u = rng.integers(0, 2, (200, n), dtype=np.uint8) * a
    llr = np.where(encode(u, order) == 1, -15, 15).astype(np.int32)
    for variant in (REFERENCE, OPTIMIZED):
        assert np.array_equal(decode(llr, a, order, variant, width=5).u_hat, u)


def test_all_frozen_gives_zero():
    order = KernelOrder.of(3, 2)
    res = decode(np.arange(-3, 3), np.zeros(6), order)
    assert not res.u_hat.any() and not res.x_hat.any()


def test_decode_errors():
    order = KernelOrder.of(3, 2)
    with pytest.raises(ValueError):
        decode(np.zeros(5, dtype=np.int32), np.zeros(6), order)
    with pytest.raises(ValueError):
        decode(np.zeros(6, dtype=np.int32), np.zeros(6), order, variant="fast")
    with pytest.raises(TypeError):
        decode(np.zeros(6), np.zeros(6), order, width=5)
