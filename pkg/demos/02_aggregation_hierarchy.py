# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # From strength graph to V-cycle
#
# Non-smoothed aggregation builds its coarse levels from the matrix alone.
# Strongly coupled unknowns are grouped into aggregates, each aggregate
# becomes one coarse unknown, and the prolongation `P` is the 0/1 matrix
# mapping fine nodes to their aggregate.

# %%
import numpy as np

from amgreuse import (AmgParams, aggregate, poisson1d, poisson2d, setup, spmv, strength_graph,
                      tentative_prolongation, vcycle)

A = poisson1d(12)
g = strength_graph(A, eps=0.08)
agg = aggregate(g)
print("strong edges:", g.n_edges)
print("aggregates:", agg.members())

P = tentative_prolongation(agg)
print(P.to_dense().astype(int))

# %% [markdown]
# ## A full hierarchy
#
# `setup` repeats coarsening until the operator is small enough for a dense
# LU, and records how long each setup phase took.

# %%
A = poisson2d(64)
h = setup(A, AmgParams())
print("level sizes:", h.sizes)
print("nonzeros per level:", [lv.A.nnz for lv in h.levels])
print(f"operator complexity: {h.operator_complexity():.3f}")

for name, share in h.setup_timings.shares().items():
    print(f"  {name:>14s}: {100 * share:5.1f}% of setup")

# %% [markdown]
# ## One V-cycle as an approximate inverse

# %%
f = np.random.default_rng(0).standard_normal(A.nrows)
u = vcycle(h, f)
print("relative residual after one cycle:",
      np.linalg.norm(f - spmv(A, u)) / np.linalg.norm(f))
