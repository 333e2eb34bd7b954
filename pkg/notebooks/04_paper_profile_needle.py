"""
Needle in a haystack
====================

At n = 2 the encoding has 128 bits.  A decider that is wrong on exactly one
instance makes A_star nonzero on a handful of points of GF(2)^131, which
uniform sampling will not hit.  Walking the valid encodings finds it at once.
"""

# %%
import time

from pitreduce.gf import make_field
from pitreduce.harness import TesterConfig, run_pipeline, single_encoding_mutant, synth_decider
from pitreduce.sat3 import ThreeSatInstance, encode, paper_profile

pr = paper_profile(2)
F = make_field(2)
dec = synth_decider(2, pr)
f = ThreeSatInstance.from_ints(2, [[1, 2], [-1]])
mutant = single_encoding_mutant(dec, encode(2, f, pr))

# %%
t = time.perf_counter()
rep = run_pipeline(dec, 2, pr, F, [TesterConfig("structured", 771)])
print(rep.summary())
print(f"{time.perf_counter() - t:.1f}s")

# %%
t = time.perf_counter()
rep = run_pipeline(mutant, 2, pr, F, [TesterConfig("structured", 771), TesterConfig("uniform", 10_000)], seed=7)
print(rep.summary())
print(f"{time.perf_counter() - t:.1f}s")
