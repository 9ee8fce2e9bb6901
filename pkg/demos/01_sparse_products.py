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
# # Sparse products in two phases
#
# Every matrix in the package is a frozen CSR value. Sparse matrix products
# are split into a *symbolic* phase, which works out where the nonzeros go,
# and a *numeric* phase, which fills in the numbers. When only the values of
# an operand change, the symbolic result can be kept.

# %%
import numpy as np

from amgreuse import (CsrMatrix, csr_from_triplets, poisson2d, spmm, spmm_numeric,
                      spmm_symbolic, spmv, transpose)

A = csr_from_triplets(3, 3, [(0, 0, 2.0), (0, 1, -1.0), (1, 1, 2.0), (2, 1, -1.0), (2, 2, 2.0),
                             (0, 0, 1.0)])  # duplicates are summed
print(A)
print(A.to_dense())

# %% [markdown]
# ## Symbolic and numeric phases

# %%
B = poisson2d(20)
pattern = spmm_symbolic(B, B)
C1 = spmm_numeric(B, B, pattern)
print("B @ B has", pattern.nnz, "nonzeros")

# same pattern, new values: skip the symbolic phase
C2 = spmm_numeric(B.scaled(3.0), B, pattern)
print("values scale linearly:", np.allclose(C2.values, 3.0 * C1.values))

# %% [markdown]
# ## Agreement with scipy

# %%
ref = (B.to_scipy() @ B.to_scipy()).toarray()
print("max |spmm - scipy| =", np.abs(spmm(B, B).to_dense() - ref).max())
print("transpose(B) == B:", transpose(B) == B)

x = np.linspace(0.0, 1.0, B.ncols)
print("spmv residual vs dense:", np.abs(spmv(B, x) - B.to_dense() @ x).max())

# %%
try:
    csr_from_triplets(2, 2, [(0, 0, 1.0), (2, 1, 1.0)])
except ValueError as e:
    print("rejected:", e)
