import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mkpolar.kernels import (KERNEL_MATRICES, KernelOrder, KernelTag, combine_b, combine_t, encode,
                             encode_matrix, enumerate_block_lengths, factorize, generator_matrix,
                             gf2_rank, kronecker)

T2 = np.array([[1, 0], [1, 1]], dtype=np.uint8)
T3 = np.array([[1, 1, 1], [1, 0, 1], [0, 1, 1]], dtype=np.uint8)


def brute_kron(a, b):
    """Entry-by-entry definition, independent of numpy.kron."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=np.uint8)
    for i, j, k, l in itertools.product(range(ra), range(ca), range(rb), range(cb)):
        out[i * rb + k, j * cb + l] = (a[i, j] * b[k, l]) & 1
    return out


def test_lengths_small():
    assert enumerate_block_lengths(12) == [2, 3, 4, 6, 8, 9, 12]
    assert enumerate_block_lengths(2) == [2]


def test_lengths_full_count_and_brute_force():
    lengths = enumerate_block_lengths(4096)
    assert len(lengths) == 55 and lengths[-1] == 4096

    def smooth(n):
        for p in (2, 3):
            while n % p == 0:
                n //= p
        return n == 1

    assert lengths == [n for n in range(2, 4097) if smooth(n)]


def test_lengths_rejects_tiny():
    with pytest.raises(ValueError):
        enumerate_block_lengths(1)


def test_factorize():
    assert factorize(48) == (4, 1)
    assert factorize(729) == (0, 6)
    with pytest.raises(ValueError):
        factorize(10)


def test_kernel_tags():
    assert KernelTag.B2.dimension == 2 and KernelTag.T3.dimension == 3
    assert np.array_equal(KERNEL_MATRICES[KernelTag.T3], T3)
    with pytest.raises(ValueError):
        KernelTag.from_dimension(5)


def test_order_parse_and_format():
    o = KernelOrder.parse("3,2,2,2,2")
    assert o.block_length == 48 and str(o) == "3,2,2,2,2"
    assert KernelOrder.parse("{3, 2}") == KernelOrder.of(3, 2)
    assert o.is_mixed and KernelOrder.of(2, 2).is_binary and KernelOrder.of(3).is_ternary
    for bad in ("", "3,x", "5"):
        with pytest.raises(ValueError):
            KernelOrder.parse(bad)
    with pytest.raises(ValueError):
        KernelOrder.of(*[2] * 13)


def test_kronecker_identity_and_blocks():
    assert np.array_equal(kronecker(np.eye(1, dtype=np.uint8), T3), T3)
    g = kronecker(T2, T3)
    assert np.array_equal(g, brute_kron(T2, T3))
    # T2 = [[1,0],[1,1]] gives block rows [T3 0; T3 T3]
    assert np.array_equal(g[:3, :3], T3) and not g[:3, 3:].any()
    assert np.array_equal(g[3:, :3], T3) and np.array_equal(g[3:, 3:], T3)
    with pytest.raises(ValueError):
        kronecker(np.zeros((0, 0)), T3)


def test_generator_matrix_order_matters():
    assert np.array_equal(generator_matrix(KernelOrder.of(2)), T2)
    a = generator_matrix(KernelOrder.of(2, 3))
    b = generator_matrix(KernelOrder.of(3, 2))
    assert np.array_equal(a, brute_kron(T2, T3))
    assert np.array_equal(b, brute_kron(T3, T2))
    assert not np.array_equal(a, b)


def test_encode_examples():
    o = KernelOrder.of(2, 3)
    assert not encode(np.zeros(6, dtype=np.uint8), o).any()
    u = np.array([1, 0, 0, 0, 0, 0])
    assert list(encode(u, o)) == list(brute_kron(T2, T3)[0])
    with pytest.raises(ValueError):
        encode(np.zeros(5), o)
    with pytest.raises(ValueError):
        encode(np.full(6, 2), o)


@pytest.mark.parametrize("n", enumerate_block_lengths(96))
def test_generator_full_rank(n):
    a, b = factorize(n)
    assert gf2_rank(generator_matrix(KernelOrder.of(*([3] * b + [2] * a)))) == n


@pytest.mark.parametrize("n", enumerate_block_lengths(4096))
def test_recursive_encode_matches_matrix(n):
    rng = np.random.default_rng(n)
    a, b = factorize(n)
    dims = [2] * a + [3] * b
    rng.shuffle(dims)
    o = KernelOrder.of(*dims)
    frames = 1000 if n <= 256 else 20
    u = rng.integers(0, 2, (frames, n), dtype=np.uint8)
    assert np.array_equal(encode(u, o), encode_matrix(u, o))


orders = st.lists(st.sampled_from([2, 3]), min_size=1, max_size=5).map(lambda d: KernelOrder.of(*d))


@given(orders, st.data())
def test_encode_is_linear(order, data):
    n = order.block_length
    bits = st.lists(st.integers(0, 1), min_size=n, max_size=n)
    u = np.array(data.draw(bits), dtype=np.uint8)
    v = np.array(data.draw(bits), dtype=np.uint8)
    assert np.array_equal(encode(u ^ v, order), encode(u, order) ^ encode(v, order))


def test_combine_examples():
    assert list(combine_b([0], [0])) == [0, 0]
    assert list(combine_b([1], [0])) == [1, 0]
    assert list(combine_b([1, 0], [0, 1])) == [1, 1, 0, 1]
    assert list(combine_t([1], [0], [1])) == [1, 0, 0]
    assert list(combine_t([1], [1], [0])) == [0, 1, 0]
    assert not combine_t([0, 0], [0, 0], [0, 0]).any()
    with pytest.raises(ValueError):
        combine_b([1], [1, 0])
    with pytest.raises(ValueError):
        combine_t([1], [1], [1, 0])
