# %% [markdown]
# # Transfer matrices of one cell
#
# Over a cell of length `ell` the potential is constant, so the solution
# data `(u, u')` is propagated by `T = exp(ell X)` with
# `X = [[0, I], [M, 0]]`.  The package evaluates this exponential in closed
# form from the eigendecomposition of `M`; here we compare it with a
# general Padé exponential and check that `T` is symplectic.

# %%
import numpy as np

from matrix_anderson import (ModelConfig, build_m, build_x, check_symplectic,
                             transfer_matrix, transfer_matrix_oracle, x_norm)

cfg = ModelConfig(n=3, ell=0.4, couplings=(1.0, -0.5, 2.0))
omega = [1.0, 0.0, 1.0]
energy = 0.7

print("M =\n", build_m(cfg, omega, energy))
print("X =\n", build_x(cfg, omega, energy))

# %% [markdown]
# The operator norm of `X` is `max(1, max_i |lambda_i - E|)`; compare with
# the largest singular value.

# %%
print("x_norm        :", x_norm(cfg, omega, energy))
print("largest sing. :", np.linalg.svd(build_x(cfg, omega, energy), compute_uv=False)[0])

# %%
t = transfer_matrix(cfg, omega, energy)
t_ref = transfer_matrix_oracle(cfg, omega, energy)
print("relative difference to expm:", np.linalg.norm(t - t_ref) / np.linalg.norm(t_ref))
print("||T^T J T - J||            :", check_symplectic(t))
print("det T                      :", np.linalg.det(t))

# %% [markdown]
# Lengths compose: two cells of lengths `a` and `b` with the same
# realisation equal one cell of length `a + b`.

# %%
a, b = 0.15, 0.25
lhs = transfer_matrix(cfg, omega, energy, ell=a + b)
rhs = transfer_matrix(cfg, omega, energy, ell=b) @ transfer_matrix(cfg, omega, energy, ell=a)
print("semigroup defect:", np.linalg.norm(lhs - rhs))
