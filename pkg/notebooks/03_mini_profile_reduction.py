"""
The full reduction on a 6-bit encoding
======================================

With one variable and a 6-bit layout, A_star has 9 inputs, small enough to
evaluate on every point of GF(2)^9 and GF(3)^9.
"""

# %%
import numpy as np

from pitreduce.circuit import eval_arith_batch
from pitreduce.gf import make_field
from pitreduce.harness import classify, mutant_suite, mutate, synth_decider
from pitreduce.pit import exhaustive_test
from pitreduce.reduction import build_A_star
from pitreduce.sat3 import mini_profile

pr = mini_profile()
dec = synth_decider(1, pr)
for q in (2, 3):
    bundle = build_A_star(dec, 1, pr, make_field(q))
    print(f"GF({q})", {k: v["size"] for k, v in bundle.manifest()["circuits"].items()})
    print("  correct decider:", exhaustive_test(bundle.A_star))

# %% [markdown]
# A wrong decider leaves a witness.  Negating the output breaks the TRUE base case.

# %%
bad, note = mutate(dec, "negate_output", 0)
print(note.detail, "->", classify(bad, 1, pr).kind)
w = exhaustive_test(build_A_star(bad, 1, pr, make_field(3)).A_star)
print("witness:", [e.index for e in w.assignment], "value", w.value)

# %% [markdown]
# Over GF(3) the witness set is spread across many points.

# %%
A = build_A_star(bad, 1, pr, make_field(3)).A_star
grid = np.array(np.meshgrid(*[range(3)] * 9, indexing="ij")).reshape(9, -1).T
vals = eval_arith_batch(A, grid)[:, 0]
print("nonzero points:", int((vals != 0).sum()), "of", len(vals))

# %%
suite = mutant_suite(dec, 1, pr, behavioral=10, seed=1)
for m in suite:
    v = exhaustive_test(build_A_star(m.circuit, 1, pr, make_field(2)).A_star)
    print(f"{m.note.detail:<40} {m.classification.kind:<10} {type(v).__name__}")
