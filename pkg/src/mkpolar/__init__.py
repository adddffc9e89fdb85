"""Multi-kernel polar codes: encoding, SC decoding, hardware netlists and VHDL generation."""
from .arith import DEFAULT_SCALE, QScheme, SMValue, quantize_llr, quantize_llrs
from .construction import (CodeSpec, ReliabilityRanking, bhattacharyya_reliability, construct_code,
                           monte_carlo_reliability, select_frozen_set)
from .decoder import DecodeResult, decode
from .hdl import HdlFileSet, default_kernel_order, emit_decoder_hdl
from .kernels import KernelOrder, KernelTag, encode, enumerate_block_lengths, generator_matrix
from .netlist import (ComponentCounts, Netlist, build_decoder_netlist, closed_form_complexity,
                      complexity_gain_metric, count_components, evaluate)
from .sim import ChannelConfig, FerPoint, StopRule, bpsk_awgn_llrs, run_fer_trials

__version__ = "0.1.0"
