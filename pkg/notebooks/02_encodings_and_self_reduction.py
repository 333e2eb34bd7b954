"""
Encodings and self-reduction
============================

Normalized 3SAT instances as fixed-length bit strings, the validity circuit V
and the substitution circuits S0/S1 that fix the lowest variable.
"""

# %%
import numpy as np

from pitreduce.circuit import eval_bool_batch
from pitreduce.reduction import build_S, build_V
from pitreduce.sat3 import (
    BitString,
    ClauseSetSpace,
    ThreeSatInstance,
    brute_force_sat,
    decode,
    encode,
    enumerate_instances,
    is_valid_encoding,
    paper_profile,
    substitute,
)

pr = paper_profile(2)
print(pr)
f = ThreeSatInstance.from_ints(2, [[1, -2], [2]])
s = encode(2, f, pr)
print(f, "->", str(s)[:40], "...")
print("decoded:", decode(s))

# %% [markdown]
# Substitution keeps the instance normalized: satisfied clauses vanish,
# falsified literals drop out, duplicates merge.

# %%
for value in (0, 1):
    g = substitute(f, value)
    print(f"x1 := {value}:", g, " sat:", brute_force_sat(g))
print("f sat:", brute_force_sat(f))

# %%
V, S0 = build_V(2, pr), build_S(2, pr, 0)
print("V:", V.metrics(), " S0:", S0.metrics())
insts = list(enumerate_instances(2))
enc = np.asarray([encode(2, g, pr).bits for g in insts])
print("V accepts all", len(insts), "encodings:", bool(eval_bool_batch(V, enc).all()))
out = eval_bool_batch(S0, enc).astype(int)
ok = all(decode(BitString(tuple(r), pr)) == substitute(g, 0) for g, r in zip(insts, out.tolist()))
print("S0 matches substitute on all of them:", ok)

# %% [markdown]
# Random strings are almost never valid encodings.

# %%
rng = np.random.default_rng(0)
pts = rng.integers(0, 2, size=(20_000, pr.total_length))
print("valid random strings:", int(eval_bool_batch(V, pts).sum()))
print("reference agrees:", all(not is_valid_encoding(BitString(tuple(r), pr)) for r in pts[:2000].tolist()))

# %% [markdown]
# At n = 3 there are 26 clauses and 2^26 formulas.  The mask space does the
# sat/substitute bookkeeping for a slice of them at once.

# %%
space = ClauseSetSpace(3)
masks = np.arange(1, 1 << 20, dtype=np.uint64)
sat = space.sat(masks)
k0, m0 = space.substitute(masks, 0)
k1, m1 = space.substitute(masks, 1)
print("self-reduction violations:", int((sat != (space.sat_kind(k0, m0) | space.sat_kind(k1, m1))).sum()))
print("satisfiable fraction:", sat.mean())
