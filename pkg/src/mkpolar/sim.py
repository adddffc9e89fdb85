"""
Monte-Carlo FER/BER over BPSK/AWGN.

Frames are generated in fixed-size chunks. Chunk ``c`` draws its messages
and unit-variance noise from a stream keyed by ``(seed, c)`` and the stopping
rule is applied after each chunk in chunk order, so a run's result does not
depend on how many worker processes computed the chunks. The same streams are
reused at every SNR point and quantization setting (common random numbers),
which keeps curves smooth and comparisons between settings low-variance.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import binomtest

from .arith import DEFAULT_SCALE, QScheme, quantize_llrs
from .construction import CodeSpec, awgn_sigma
from .decoder import OPTIMIZED, REFERENCE, decode
from .kernels import KernelOrder, encode

CHUNK_FRAMES = 500
NETLIST = "netlist"
CSV_HEADER = ("ebn0_db", "frames", "frame_errors", "bit_errors", "fer", "ber")


@dataclass(frozen=True)
class ChannelConfig:
    eb_n0_db: float
    rate: float
    seed: int = 0
    noiseless: bool = False

    def __post_init__(self):
        if not 0 < self.rate <= 1:
            raise ValueError(f"rate must lie in (0, 1], got {self.rate}")

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.eb_n0_db / 10.0))

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


def bpsk_awgn_llrs(x, cfg: ChannelConfig, rng: np.random.Generator) -> np.ndarray:
    """Channel LLRs ``2 y / sigma^2`` for ``y = (1 - 2x) + n``."""
    s = 1.0 - 2.0 * np.asarray(x, dtype=np.float64)
    y = s if cfg.noiseless else s + cfg.sigma * rng.standard_normal(s.shape)
    return 2.0 * y / cfg.sigma2


@dataclass(frozen=True)
class StopRule:
    min_frame_errors: int = 100
    max_frames: int = 1_000_000

    def __post_init__(self):
        if self.max_frames < 1:
            raise ValueError(f"max_frames must be >= 1, got {self.max_frames}")
        if self.min_frame_errors < 1:
            raise ValueError(f"min_frame_errors must be >= 1, got {self.min_frame_errors}")


@dataclass(frozen=True)
class FerPoint:
    eb_n0_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    k: int = field(default=0, repr=False)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.k) if self.k else 0.0

    def fer_interval(self, confidence: float = 0.95) -> tuple[float, float]:
        """Clopper-Pearson interval for the frame error rate."""
        ci = binomtest(self.frame_errors, self.frames).proportion_ci(confidence, method="exact")
        return ci.low, ci.high


@dataclass(frozen=True)
class _Job:
    order: KernelOrder
    k: int
    frozen: bytes
    snr: float
    scheme: QScheme | None
    scale: float
    seed: int
    chunk: int
    count: int
    decoder: str
    noiseless: bool
    all_zero: bool


def _frames(job: _Job) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Messages, codewords and unit noise of one chunk."""
    n = job.order.block_length
    a = np.frombuffer(job.frozen, dtype=np.uint8)
    rng = np.random.default_rng(np.random.SeedSequence([job.seed, job.chunk]))
    bits = rng.integers(0, 2, size=(job.count, n), dtype=np.uint8)
    noise = rng.standard_normal((job.count, n))
    u = np.zeros_like(bits) if job.all_zero else bits * a
    return u, encode(u, job.order), noise


@lru_cache(maxsize=8)
def _cached_netlist(order: KernelOrder, scheme: QScheme):
    from .netlist import build_decoder_netlist

    return build_decoder_netlist(order, scheme)


def _run_chunk(job: _Job) -> tuple[int, int]:
    a = np.frombuffer(job.frozen, dtype=np.uint8)
    u, x, noise = _frames(job)
    cfg = ChannelConfig(job.snr, job.k / job.order.block_length if job.k else 1.0, noiseless=job.noiseless)
    s = 1.0 - 2.0 * x
    y = s if cfg.noiseless else s + cfg.sigma * noise
    llr = 2.0 * y / cfg.sigma2
    if job.scheme is not None:
        llr = quantize_llrs(llr, job.scheme, job.scale)
        width = job.scheme.q_internal
    else:
        width = None
    if job.decoder == NETLIST:
        from .netlist import evaluate

        if job.scheme is None:
            raise ValueError("netlist decoding requires a fixed-point scheme")
        u_hat = evaluate(_cached_netlist(job.order, job.scheme), llr, a).u_hat
    else:
        u_hat = decode(llr, a, job.order, variant=job.decoder, width=width).u_hat
    wrong = (u_hat != u) & (a == 1)
    return int(wrong.any(axis=1).sum()), int(wrong.sum())


def run_fer_trials(
    spec: CodeSpec,
    snr_points,
    scheme: QScheme | None = None,
    stop: StopRule | None = None,
    seed: int = 0,
    scale: float = DEFAULT_SCALE,
    workers: int = 1,
    decoder: str = OPTIMIZED,
    noiseless: bool = False,
    all_zero: bool = False,
) -> list[FerPoint]:
    """FER/BER at each Eb/N0 point; ``scheme=None`` decodes in floating point."""
    snr_points = [float(s) for s in snr_points]
    if not snr_points:
        raise ValueError("need at least one SNR point")
    if decoder not in (OPTIMIZED, REFERENCE, NETLIST):
        raise ValueError(f"unknown decoder {decoder!r}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    stop = stop or StopRule()
    frozen = np.asarray(spec.frozen_indicator, dtype=np.uint8).tobytes()
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        return [
            _run_point(spec, snr, scheme, stop, seed, scale, decoder, noiseless, all_zero, frozen, pool, workers)
            for snr in snr_points
        ]
    finally:
        if pool is not None:
            pool.shutdown()


def _run_point(spec, snr, scheme, stop, seed, scale, decoder, noiseless, all_zero, frozen, pool, workers):
    frames = frame_errors = bit_errors = 0
    chunk = 0
    while True:
        jobs = []
        planned = frames
        for _ in range(workers):
            if planned >= stop.max_frames:
                break
            count = min(CHUNK_FRAMES, stop.max_frames - planned)
            jobs.append(_Job(spec.order, spec.k, frozen, snr, scheme, scale, seed,
                             chunk + len(jobs), count, decoder, noiseless, all_zero))
            planned += count
        results = pool.map(_run_chunk, jobs) if pool is not None else map(_run_chunk, jobs)
        for job, (fe, be) in zip(jobs, results):
            frames += job.count
            frame_errors += fe
            bit_errors += be
            chunk += 1
            if frame_errors >= stop.min_frame_errors or frames >= stop.max_frames:
                return FerPoint(snr, frames, frame_errors, bit_errors, spec.k)


def fer_crossing(points: list[FerPoint], target: float = 1e-2) -> float:
    """Eb/N0 where the FER curve crosses ``target`` (log-linear interpolation)."""
    pts = sorted(points, key=lambda p: p.eb_n0_db)
    for lo, hi in zip(pts, pts[1:]):
        if lo.fer >= target >= hi.fer and lo.fer > 0:
            if hi.fer == 0:
                return hi.eb_n0_db
            if lo.fer == hi.fer:
                return lo.eb_n0_db
            t = (math.log10(lo.fer) - math.log10(target)) / (math.log10(lo.fer) - math.log10(hi.fer))
            return lo.eb_n0_db + t * (hi.eb_n0_db - lo.eb_n0_db)
    raise ValueError(f"FER curve does not cross {target:g} within the simulated points")


def to_csv(points: list[FerPoint]) -> str:
    """CSV rows; a 95% Clopper-Pearson FER interval trails the fixed columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + ("fer_ci_low", "fer_ci_high"))
    for p in points:
        lo, hi = p.fer_interval()
        w.writerow([f"{p.eb_n0_db:g}", p.frames, p.frame_errors, p.bit_errors,
                    f"{p.fer:.6e}", f"{p.ber:.6e}", f"{lo:.6e}", f"{hi:.6e}"])
    return buf.getvalue()


def snr_range(text: str) -> list[float]:
    """Parse ``a:b:step`` (inclusive of ``b``) or a single value."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"malformed SNR range {text!r}; expected a:b:step") from None
    if len(vals) == 1:
        return vals
    if len(vals) != 3 or vals[2] <= 0 or vals[1] < vals[0]:
        raise ValueError(f"malformed SNR range {text!r}; expected a:b:step with step > 0 and a <= b")
    a, b, step = vals
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 10) for i in range(count)]
