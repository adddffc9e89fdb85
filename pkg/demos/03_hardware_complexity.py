"""
Counting hardware
=================

The netlist is built from a handful of cells. Counting them gives the
comparator/adder/mux totals, which we set against the closed forms, and the
LLR-memory saving over the next power-of-two mother code.
"""

# %%
from mkpolar import KernelOrder
from mkpolar.hdl import default_kernel_order
from mkpolar.netlist import (binary_complexity, build_decoder_netlist, closed_form_complexity,
                             complexity_gain_metric, count_components, ternary_complexity)

for m in (5, 8, 10):
    c = count_components(build_decoder_netlist(KernelOrder.of(*[2] * m)))
    print(f"binary N={2 ** m}: {c.total} components, closed form {binary_complexity(2 ** m)}")

# %%
# Ternary totals approach the closed form only as N grows; small codes sit
# well below it.
for m in range(2, 7):
    c = count_components(build_decoder_netlist(KernelOrder.of(*[3] * m)))
    print(f"ternary N={3 ** m}: {c.total} vs {ternary_complexity(3 ** m):.1f}")

# %%
for n in (48, 96, 144, 768):
    order = default_kernel_order(n)
    c = count_components(build_decoder_netlist(order))
    b = closed_form_complexity(order)
    g = complexity_gain_metric(n)
    print(f"N={n} [{order}]: total {c.total}, bounds [{b['lower']:.0f}, {b['upper']:.0f}], "
          f"LLR memory gain {g['gain_percent']:.1f}%")
