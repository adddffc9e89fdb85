import numpy as np
import pytest
from hypothesis import given, strategies as st

from mkpolar.construction import (BHATTACHARYYA, ReliabilityRanking, UnsupportedMethodError,
                                  bhattacharyya_reliability, bits_to_hex, genie_leaf_llrs, hex_to_bits,
                                  load_code_spec, monte_carlo_reliability, save_code_spec,
                                  select_frozen_set)
from mkpolar.kernels import KernelOrder


def bhattacharyya_oracle(z, levels):
    """Tree recursion: index bits most-significant first, 0 = f branch."""
    out = []
    for i in range(2 ** levels):
        v = z
        for bit in format(i, f"0{levels}b"):
            v = v * v if bit == "1" else 2 * v - v * v
        out.append(v)
    return out


def test_bhattacharyya_examples():
    r = bhattacharyya_reliability(KernelOrder.of(2), 0.5)
    assert np.allclose(r.scores, [0.75, 0.25]) and list(r.ranking) == [1, 0]
    r4 = bhattacharyya_reliability(KernelOrder.of(2, 2), 0.5)
    spec = select_frozen_set(r4, 2)
    assert list(spec.frozen_indicator) == [0, 0, 1, 1]
    r0 = bhattacharyya_reliability(KernelOrder.of(2, 2, 2), 0.0)
    assert list(r0.ranking) == list(range(8))


@pytest.mark.parametrize("levels", [3, 5, 8])
def test_bhattacharyya_matches_tree_oracle(levels):
    r = bhattacharyya_reliability(KernelOrder.of(*[2] * levels), 0.32)
    assert np.allclose(r.scores, bhattacharyya_oracle(0.32, levels))


def test_bhattacharyya_rejects_ternary_and_bad_z():
    with pytest.raises(UnsupportedMethodError, match="monte_carlo"):
        bhattacharyya_reliability(KernelOrder.of(3, 2), 0.5)
    with pytest.raises(ValueError):
        bhattacharyya_reliability(KernelOrder.of(2), 1.5)


def test_monte_carlo_polarizes_and_is_deterministic():
    o = KernelOrder.of(2)
    r = monte_carlo_reliability(o, 0.0, 100_000, seed=3)
    assert r.scores[1] >= r.scores[0]
    again = monte_carlo_reliability(o, 0.0, 100_000, seed=3)
    assert np.array_equal(r.scores, again.scores)
    with pytest.raises(ValueError):
        monte_carlo_reliability(o, 0.0, 0, seed=1)


def test_monte_carlo_agrees_with_bhattacharyya_on_binary():
    o = KernelOrder.of(*[2] * 6)
    mc = select_frozen_set(monte_carlo_reliability(o, 2.0, 20000, seed=1), 32).frozen_indicator
    bh = select_frozen_set(bhattacharyya_reliability(o, np.exp(-0.5 * 10 ** 0.2)), 32).frozen_indicator
    assert (mc != bh).sum() <= 4


def test_genie_leaves_match_sequential_decoder_on_zero_codeword():
    from mkpolar.decoder import REFERENCE, decode
    rng = np.random.default_rng(0)
    o = KernelOrder.of(3, 2, 3)
    alpha = rng.normal(1.0, 1.0, (50, o.block_length))
    leaves = genie_leaf_llrs(alpha, o)
    # every leaf decoded as information: errors are exactly the negative leaves
    # as long as no earlier leaf erred, i.e. on the first error position
    res = decode(alpha, np.ones(o.block_length), o, REFERENCE, hardware_ties=False)
    for row in range(50):
        wrong = np.flatnonzero(res.u_hat[row])
        neg = np.flatnonzero(leaves[row] < 0)
        if wrong.size:
            assert wrong[0] == neg[0]
        else:
            assert neg.size == 0


def test_select_frozen_set_edges():
    r = ReliabilityRanking.from_scores(KernelOrder.of(3), [0.2, 0.9, 0.9])
    assert list(r.ranking) == [1, 2, 0]
    assert list(select_frozen_set(r, 3).frozen_indicator) == [1, 1, 1]
    assert not select_frozen_set(r, 0).frozen_indicator.any()
    for k in (-1, 4):
        with pytest.raises(ValueError):
            select_frozen_set(r, k)


@given(st.lists(st.floats(0, 1), min_size=12, max_size=12))
def test_information_sets_nest(scores):
    r = ReliabilityRanking.from_scores(KernelOrder.of(3, 2, 2), scores)
    prev = np.zeros(12, dtype=np.uint8)
    for k in range(13):
        a = select_frozen_set(r, k).frozen_indicator
        assert a.sum() == k and not (prev & ~a & 1).any()
        prev = a


def test_ranking_and_code_files_round_trip(tmp_path):
    o = KernelOrder.of(3, 2, 2)
    r = monte_carlo_reliability(o, 1.0, 2000, seed=5)
    r.save(tmp_path / "rank.txt")
    back = ReliabilityRanking.load(tmp_path / "rank.txt")
    assert np.array_equal(back.ranking, r.ranking) and np.allclose(back.scores, r.scores)
    spec = select_frozen_set(r, 5)
    save_code_spec(spec, r, tmp_path / "code.txt")
    loaded = load_code_spec(tmp_path / "code.txt")
    assert loaded.order == o and loaded.k == 5
    assert np.array_equal(loaded.frozen_indicator, spec.frozen_indicator)
    b = bhattacharyya_reliability(KernelOrder.of(2, 2), 0.4)
    b.save(tmp_path / "b.txt")
    assert ReliabilityRanking.load(tmp_path / "b.txt").metric == BHATTACHARYYA


def test_hex_helpers():
    assert bits_to_hex([1, 0, 1, 1, 1]) == "b8"
    assert list(hex_to_bits("b8", 5)) == [1, 0, 1, 1, 1]
    with pytest.raises(ValueError):
        hex_to_bits("b9", 5)
    with pytest.raises(ValueError):
        hex_to_bits("b", 5)
