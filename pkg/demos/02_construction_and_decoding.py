"""
Constructing a code and decoding it
===================================

Binary orders get a Bhattacharyya construction. Orders with a ternary kernel
use a genie-aided Monte-Carlo estimate. We then decode noisy fixed-point
frames with the reference decoder, the optimized one and the gate-level
netlist.
"""

# %%
import numpy as np

from mkpolar import QScheme, construct_code, decode, encode, quantize_llrs
from mkpolar.decoder import OPTIMIZED, REFERENCE, leaf_tie_mask
from mkpolar.hdl import default_kernel_order
from mkpolar.netlist import build_decoder_netlist, evaluate

order = default_kernel_order(48)
spec = construct_code(order, 24, design_snr_db=2.0, frames=5000)
print(order, "information set:", spec.information_set)

# %%
# Random messages over BPSK/AWGN at 2 dB, quantized to Q(5,5).
scheme = QScheme(5, 5)
rng = np.random.default_rng(1)
u = rng.integers(0, 2, (2000, spec.n), dtype=np.uint8) * spec.frozen_indicator
sigma2 = 1 / (2 * spec.rate * 10 ** 0.2)
y = 1 - 2.0 * encode(u, order) + np.sqrt(sigma2) * rng.standard_normal(u.shape)
llr = quantize_llrs(2 * y / sigma2, scheme)

opt = decode(llr, spec.frozen_indicator, order, OPTIMIZED, width=5)
ref = decode(llr, spec.frozen_indicator, order, REFERENCE, width=5)
net = evaluate(build_decoder_netlist(order, scheme), llr, spec.frozen_indicator)
print("FER", (opt.u_hat != u).any(axis=1).mean())
print("optimized == netlist:", np.array_equal(opt.u_hat, net.u_hat))
print("optimized == reference (hardware ties):", np.array_equal(opt.u_hat, ref.u_hat))

# %%
# Leaf blocks decide with comparators, so an exact-zero LLR at an information
# leaf follows the hardware sign convention instead of the hard-decision rule.
# Those frames are the only place the plain reference can differ.
plain = decode(llr, spec.frozen_indicator, order, REFERENCE, width=5, hardware_ties=False)
ties = leaf_tie_mask(llr, spec.frozen_indicator, order, 5)
differ = (plain.u_hat != opt.u_hat).any(axis=1)
print(f"{ties.sum()} frames hit a tie; {differ.sum()} differ from the plain reference")
assert not (differ & ~ties).any()
