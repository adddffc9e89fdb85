"""Reliability estimation and frozen-set selection."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import decoder as dec
from .kernels import KernelOrder, KernelTag

MIN_MC_FRAMES = 1000
MC_CHUNK = 1000

BHATTACHARYYA = "bhattacharyya"  # lower score = more reliable
RELIABILITY = "reliability"  # higher score = more reliable


class UnsupportedMethodError(ValueError):
    pass


@dataclass(frozen=True)
class ReliabilityRanking:
    """Per-channel scores plus the channel indices from most to least reliable.

    ``metric`` says how to read ``scores``: Bhattacharyya parameters rank
    ascending, Monte-Carlo reliabilities descending. Equal scores are ordered
    by ascending index either way.
    """

    order: KernelOrder
    scores: np.ndarray
    ranking: np.ndarray
    metric: str = RELIABILITY

    @classmethod
    def from_scores(cls, order: KernelOrder, scores, metric: str = RELIABILITY) -> "ReliabilityRanking":
        scores = np.asarray(scores, dtype=np.float64)
        if scores.shape != (order.block_length,):
            raise ValueError(f"expected {order.block_length} scores, got shape {scores.shape}")
        key = scores if metric == BHATTACHARYYA else -scores
        ranking = np.lexsort((np.arange(scores.size), key))
        return cls(order, scores, ranking, metric)

    @property
    def block_length(self) -> int:
        return self.order.block_length

    def save(self, path) -> None:
        lines = [f"# order {self.order}", f"# metric {self.metric}"]
        lines += [f"{i} {float(self.scores[i])!r}" for i in self.ranking]
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "ReliabilityRanking":
        order = None
        metric = RELIABILITY
        pairs = []
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition(" ")
                if key == "order":
                    order = KernelOrder.parse(val)
                elif key == "metric":
                    metric = val.strip()
                continue
            idx, score = line.split()
            pairs.append((int(idx), float(score)))
        if order is None:
            raise ValueError(f"{path}: missing '# order' header")
        scores = np.empty(order.block_length)
        seen = set()
        for i, s in pairs:
            scores[i] = s
            seen.add(i)
        if seen != set(range(order.block_length)):
            raise ValueError(f"{path}: ranking does not cover all {order.block_length} channels")
        return cls.from_scores(order, scores, metric)


@dataclass(frozen=True)
class CodeSpec:
    order: KernelOrder
    k: int
    frozen_indicator: np.ndarray  # 1 = information bit

    @property
    def n(self) -> int:
        return self.order.block_length

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def information_set(self) -> np.ndarray:
        return np.flatnonzero(self.frozen_indicator)


def bhattacharyya_reliability(order: KernelOrder, design_erasure: float) -> ReliabilityRanking:
    """Erasure-channel Bhattacharyya recursion ``z -> (2z - z^2, z^2)``."""
    if not order.is_binary:
        raise UnsupportedMethodError(
            "Bhattacharyya construction covers binary kernels only; "
            "use monte_carlo_reliability for orders containing ternary kernels"
        )
    if not 0.0 <= design_erasure <= 1.0:
        raise ValueError(f"design erasure must lie in [0, 1], got {design_erasure}")
    z = np.array([design_erasure], dtype=np.float64)
    for _ in order.kernels:
        # each stage adds a less significant index digit: entry e -> (f(e), g(e))
        z = np.stack([2 * z - z * z, z * z], axis=-1).reshape(-1)
    return ReliabilityRanking.from_scores(order, z, BHATTACHARYYA)


def awgn_sigma(ebn0_db: float, rate: float) -> float:
    return float(np.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))))


def genie_leaf_llrs(alpha: np.ndarray, order: KernelOrder) -> np.ndarray:
    """Leaf LLRs of SC decoding when every earlier bit is known to be 0."""
    return _genie(np.asarray(alpha, dtype=np.float64), order.kernels)


def _genie(alpha, kernels):
    k = kernels[0]
    m = alpha.shape[-1] // k.dimension
    a = [alpha[..., j * m:(j + 1) * m] for j in range(k.dimension)]
    if k is KernelTag.B2:
        children = [dec.f_b(a[0], a[1]), a[1] + a[0]]
    else:
        children = [dec.f_t(a[0], a[1], a[2]), a[0] + dec.f_b(a[1], a[2]), a[1] + a[2]]
    if len(kernels) == 1:
        return np.concatenate(children, axis=-1)
    return np.concatenate([_genie(c, kernels[1:]) for c in children], axis=-1)


def monte_carlo_reliability(
    order: KernelOrder,
    design_snr_db: float,
    frames: int,
    seed: int,
    rate: float = 0.5,
) -> ReliabilityRanking:
    """Genie-aided SC estimate: ``score[i] = 1 - errors_i / frames``.

    The all-zero codeword is sent over BPSK/AWGN at ``design_snr_db`` (Eb/N0
    for the given ``rate``); channel ``i`` errs when its leaf LLR is negative.
    Each chunk of frames draws from its own stream keyed by ``(seed, chunk)``.
    """
    if frames < MIN_MC_FRAMES:
        raise ValueError(f"Monte-Carlo construction needs at least {MIN_MC_FRAMES} frames, got {frames}")
    if not 0 < rate <= 1:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    n = order.block_length
    sigma = awgn_sigma(design_snr_db, rate)
    errors = np.zeros(n, dtype=np.int64)
    for chunk, start in enumerate(range(0, frames, MC_CHUNK)):
        count = min(MC_CHUNK, frames - start)
        rng = np.random.default_rng(np.random.SeedSequence([seed, chunk]))
        y = 1.0 + sigma * rng.standard_normal((count, n))
        leaves = genie_leaf_llrs(2.0 * y / sigma**2, order)
        errors += (leaves < 0).sum(axis=0)
    return ReliabilityRanking.from_scores(order, 1.0 - errors / frames, RELIABILITY)


def select_frozen_set(ranking: ReliabilityRanking, k: int) -> CodeSpec:
    n = ranking.block_length
    if not 0 <= k <= n:
        raise ValueError(f"K must lie in [0, {n}], got {k}")
    a = np.zeros(n, dtype=np.uint8)
    a[ranking.ranking[:k]] = 1
    return CodeSpec(ranking.order, k, a)


def design_erasure_for(ebn0_db: float, rate: float) -> float:
    """Bhattacharyya parameter of BPSK/AWGN: ``exp(-R Eb/N0)``."""
    return float(np.exp(-rate * 10.0 ** (ebn0_db / 10.0)))


def construct_ranking(
    order: KernelOrder,
    k: int,
    design_snr_db: float = 2.0,
    frames: int = 20000,
    seed: int = 0,
) -> ReliabilityRanking:
    """Bhattacharyya for binary orders, genie-aided Monte-Carlo otherwise."""
    rate = max(k, 1) / order.block_length
    if order.is_binary:
        return bhattacharyya_reliability(order, design_erasure_for(design_snr_db, rate))
    return monte_carlo_reliability(order, design_snr_db, frames, seed, rate)


def construct_code(order: KernelOrder, k: int, design_snr_db: float = 2.0,
                   frames: int = 20000, seed: int = 0) -> CodeSpec:
    return select_frozen_set(construct_ranking(order, k, design_snr_db, frames, seed), k)


def bits_to_hex(bits) -> str:
    """MSB-first hex of a bit vector, zero-padded to whole nibbles."""
    bits = [int(b) for b in np.asarray(bits).ravel()]
    bits += [0] * (-len(bits) % 4)
    return "".join(f"{int(''.join(map(str, bits[i:i + 4])), 2):x}" for i in range(0, len(bits), 4))


def hex_to_bits(text: str, n: int) -> np.ndarray:
    text = text.strip().lower()
    if len(text) != (n + 3) // 4:
        raise ValueError(f"hex frame of {len(text)} digits does not hold {n} bits")
    try:
        bits = [int(b) for ch in text for b in format(int(ch, 16), "04b")]
    except ValueError:
        raise ValueError(f"malformed hex frame {text!r}") from None
    if any(bits[n:]):
        raise ValueError("nonzero padding bits in hex frame")
    return np.array(bits[:n], dtype=np.uint8)


def save_code_spec(spec: CodeSpec, ranking: ReliabilityRanking, path) -> None:
    """Ranking file with ``k`` and the frozen indicator in extra header lines."""
    if ranking.order != spec.order:
        raise ValueError("ranking and code use different kernel orders")
    lines = [f"# order {spec.order}", f"# k {spec.k}", f"# frozen {bits_to_hex(spec.frozen_indicator)}",
             f"# metric {ranking.metric}"]
    lines += [f"{i} {float(ranking.scores[i])!r}" for i in ranking.ranking]
    Path(path).write_text("\n".join(lines) + "\n")


def load_code_spec(path) -> CodeSpec:
    ranking = ReliabilityRanking.load(path)
    header = {}
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition(" ")
            header[key] = val.strip()
    if "k" not in header or "frozen" not in header:
        raise ValueError(f"{path}: not a code file (missing k/frozen headers)")
    a = hex_to_bits(header["frozen"], ranking.block_length)
    k = int(header["k"])
    if int(a.sum()) != k:
        raise ValueError(f"{path}: frozen indicator has {int(a.sum())} information bits, header says {k}")
    return CodeSpec(ranking.order, k, a)
