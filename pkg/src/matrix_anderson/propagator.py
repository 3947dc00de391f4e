"""Single-cell transfer matrices ``T_ω(E) = exp(ℓ X_ω(E))``.

Because ``X² = diag(M, M)`` the exponential splits into even and odd
parts, ``T = [[C, S], [M S, C]]`` with ``C = cosh(ℓ√M)`` and
``S = sinh(ℓ√M)/√M``, both entire functions of ``M`` evaluated through
its eigendecomposition.  :func:`transfer_matrix_oracle` computes the same
matrix with a general-purpose dense exponential and is kept as an
independent check.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (InvalidArgumentError, InvalidDimensionError,
                     NumericalFailureError)
from .model import as_omega, build_m, build_x, symmetric_eigh

SERIES_CUTOFF = 1e-6
MAX_EXPONENT_NORM = 700.0


def cell_functions(z):
    """Return ``(cosh √z, sinh(√z)/√z)`` for real ``z``, continued to ``z <= 0``.

    For ``z < 0`` these are ``cos √-z`` and ``sin(√-z)/√-z``; near zero a
    short Taylor series avoids cancellation.
    """
    z = np.asarray(z, dtype=float)
    c = np.empty_like(z)
    s = np.empty_like(z)
    small = np.abs(z) < SERIES_CUTOFF
    pos = (z > 0) & ~small
    neg = (z < 0) & ~small

    zs = z[small]
    c[small] = 1.0 + zs / 2.0 + zs * zs / 24.0
    s[small] = 1.0 + zs / 6.0 + zs * zs / 120.0

    r = np.sqrt(z[pos])
    c[pos] = np.cosh(r)
    s[pos] = np.sinh(r) / r

    r = np.sqrt(-z[neg])
    c[neg] = np.cos(r)
    s[neg] = np.sin(r) / r
    return c, s


def _assemble(lam, q, ell):
    n = lam.shape[-1]
    c, s = cell_functions(ell * ell * lam)
    s = ell * s
    qt = np.swapaxes(q, -1, -2)
    cmat = (q * c[..., None, :]) @ qt
    smat = (q * s[..., None, :]) @ qt
    msmat = (q * (lam * s)[..., None, :]) @ qt
    t = np.empty(lam.shape[:-1] + (2 * n, 2 * n))
    t[..., :n, :n] = cmat
    t[..., :n, n:] = smat
    t[..., n:, :n] = msmat
    t[..., n:, n:] = cmat
    return t


def transfer_matrix(config, omega, energy, ell=None):
    """Transfer matrix over one cell, from the closed form.

    ``ell`` defaults to ``config.ell``; passing it explicitly is handy for
    checking the semigroup property.
    """
    ell = config.ell if ell is None else float(ell)
    lam, q = symmetric_eigh(build_m(config, omega, energy))
    return _assemble(lam, q, ell)


def transfer_matrices(config, omegas, energy):
    """Batched :func:`transfer_matrix` for an ``(k, N)`` array of realisations."""
    omegas = np.atleast_2d(np.asarray(omegas, dtype=float))
    if omegas.shape[1] != config.n:
        raise InvalidArgumentError(
            f"omega rows must have length {config.n}, got {omegas.shape[1]}")
    n = config.n
    m = np.broadcast_to(np.array(build_m(config, np.zeros(n), energy)),
                        (omegas.shape[0], n, n)).copy()
    idx = np.arange(n)
    m[:, idx, idx] += omegas * np.asarray(config.couplings)
    lam, q = symmetric_eigh(m)
    return _assemble(lam, q, config.ell)


def transfer_matrix_oracle(config, omega, energy, ell=None):
    """``exp(ℓX)`` by scaling and squaring with a Padé approximant."""
    ell = config.ell if ell is None else float(ell)
    as_omega(config, omega)
    a = ell * np.array(build_x(config, omega, energy))
    if np.linalg.norm(a, 2) > MAX_EXPONENT_NORM:
        raise OverflowError(
            f"||ell X|| exceeds {MAX_EXPONENT_NORM}; exp would overflow")
    t = scipy.linalg.expm(a)
    if not np.all(np.isfinite(t)):
        raise NumericalFailureError("matrix exponential is not finite")
    return t


def symplectic_form(n):
    """Standard form ``J = [[0, I], [-I, 0]]`` of size ``2n``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {n!r}")
    n = int(n)
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def check_symplectic(t):
    """Spectral norm of ``TᵀJT - J``."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] % 2:
        raise InvalidArgumentError(
            f"expected a square matrix of even size, got shape {t.shape}")
    j = symplectic_form(t.shape[0] // 2)
    return float(np.linalg.norm(t.T @ j @ t - j, 2))
