"""
Block lengths, kernel orders and encoding
=========================================

Mixing the binary kernel with the ternary one fills in the gaps between powers
of two. This walk-through lists the supported lengths, builds a generator
matrix and encodes a message.
"""

# %%
# Every length below 4096 of the form 2^a 3^b is reachable.
import numpy as np

from mkpolar.kernels import KernelOrder, encode, enumerate_block_lengths, generator_matrix, gf2_rank

lengths = enumerate_block_lengths(4096)
print(len(lengths), "lengths:", lengths[:12], "...", lengths[-3:])

# %%
# A kernel order lists kernels from the root stage to the leaves. The
# generator matrix is their Kronecker product and is full rank over GF(2).
order = KernelOrder.parse("3,2")
G = generator_matrix(order)
print(order, "N =", order.block_length)
print(G)
print("rank", gf2_rank(G))

# %%
# Encoding works on batches; it agrees with u @ G mod 2.
rng = np.random.default_rng(0)
u = rng.integers(0, 2, (4, order.block_length), dtype=np.uint8)
x = encode(u, order)
assert np.array_equal(x, u @ G % 2)
print(x)
