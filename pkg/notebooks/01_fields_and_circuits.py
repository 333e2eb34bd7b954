"""
Finite fields and circuits
==========================

GF(4) arithmetic, a boolean circuit, its arithmetic translation, and the
R gadget that picks out {0, 1} inside a larger field.
"""

# %%
import numpy as np

from pitreduce.arithmetize import arithmetize_circuit, build_R
from pitreduce.circuit import BoolBuilder, all_assignments, eval_arith, eval_arith_batch, eval_bool_batch, to_netlist
from pitreduce.gf import make_field

F4 = make_field(2, 2)
x = F4.generator_x()
print(F4, "modulus", F4.modulus)
print("x*x =", x * x, " x^3 =", x**3, " 1/x =", x.inverse())

# %% [markdown]
# Multiplication table by element index (index = c0 + 2*c1).

# %%
idx = np.arange(F4.q)
print(F4.vec_mul(idx[:, None], idx[None, :]))

# %%
b = BoolBuilder(2)
c = b.build([b.or_(b.and_(0, 1), b.not_(0))])
print(to_netlist(c))

F3 = make_field(3)
a, report = arithmetize_circuit(c, F3)
pts = all_assignments(2)
print("bool :", eval_bool_batch(c, pts)[:, 0].astype(int))
print("arith:", eval_arith_batch(a, pts)[:, 0])
print(report.to_dict())

# %% [markdown]
# Off the boolean cube the arithmetic circuit keeps computing a polynomial,
# so values other than 0/1 show up.

# %%
grid = np.array([[i, j] for i in range(3) for j in range(3)])
print(np.c_[grid, eval_arith_batch(a, grid)])

# %%
for q, pk in [(3, (3, 1)), (4, (2, 2)), (5, (5, 1)), (9, (3, 2))]:
    F = make_field(*pk)
    R = build_R(F)
    print(f"GF({q}) R:", [eval_arith(R, [e])[0].index for e in F.elements()], f"({R.metrics().size} gates)")
