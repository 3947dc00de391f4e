"""Matrix-valued random Schrödinger model on the line.

The operator is ``-d²/dx² ⊗ I_N + V0 + Σ_n diag(c_i ω_i^(n)) 1_[0,ℓ](x - ℓn)``
with ``V0`` the tridiagonal matrix of zeros on the diagonal and ones on the
first off-diagonals.  Over one cell the potential is constant, so the cell
dynamics is governed by the real symmetric matrix

    M_ω(E) = V0 + diag(c_1 ω_1 - E, ..., c_N ω_N - E)

and the first-order generator ``X_ω(E) = [[0, I], [M_ω(E), 0]]``.

Matrices are returned as read-only ``numpy`` arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConfigValidationError, InvalidArgumentError,
                     InvalidDimensionError, NumericalFailureError,
                     ResourceLimitError)

PROB_TOL = 1e-12
MAX_ENUMERATION_N = 20


def _frozen(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SiteLaw:
    """Finite discrete single-site distribution ν.

    Atoms are kept sorted; probabilities follow the same order.
    """

    atoms: tuple
    probabilities: tuple

    def __post_init__(self):
        atoms = tuple(float(a) for a in self.atoms)
        probs = tuple(float(p) for p in self.probabilities)
        if len(atoms) == 0 or len(atoms) != len(probs):
            raise ConfigValidationError(
                "site_law needs as many probabilities as atoms")
        if len(set(atoms)) != len(atoms):
            raise ConfigValidationError("site_law atoms must be distinct")
        if not all(np.isfinite(a) for a in atoms):
            raise ConfigValidationError("site_law atoms must be finite")
        if any(not p > 0 for p in probs):
            raise ConfigValidationError(
                "site_law probabilities must be positive")
        if abs(sum(probs) - 1.0) > PROB_TOL:
            raise ConfigValidationError(
                f"site_law probabilities sum to {sum(probs)!r}, not 1")
        order = sorted(range(len(atoms)), key=atoms.__getitem__)
        object.__setattr__(self, "atoms", tuple(atoms[i] for i in order))
        object.__setattr__(self, "probabilities",
                           tuple(probs[i] for i in order))

    @classmethod
    def bernoulli(cls, p=0.5):
        """Law with ``P(1) = p`` and ``P(0) = 1 - p``."""
        return cls((0.0, 1.0), (1.0 - p, p))

    @classmethod
    def point_mass(cls, value=0.0):
        return cls((value,), (1.0,))

    def contains_zero_and_one(self):
        return 0.0 in self.atoms and 1.0 in self.atoms


@dataclass(frozen=True)
class ModelConfig:
    """Static parameters of the model.

    Parameters
    ----------
    n : int
        Number of channels ``N``.
    ell : float
        Cell (interaction) length ``ℓ``.
    couplings : sequence of float
        The ``N`` nonzero coupling constants ``c_i``.
    site_law : SiteLaw
        Single-site distribution.  Must charge both 0 and 1 unless
        ``require_support=False``, which is only meant for limiting cases
        such as the free operator (point mass at 0).
    bg_radius : float
        Radius of the ball around 0 in the Lie algebra on which the
        exponential stays inside the dense-generation neighbourhood.  Its
        true value is unknown; everything downstream scales with it.
    """

    n: int
    ell: float
    couplings: tuple
    site_law: SiteLaw = field(default_factory=SiteLaw.bernoulli)
    bg_radius: float = 1.0
    require_support: bool = field(default=True, compare=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ConfigValidationError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        couplings = tuple(float(c) for c in np.atleast_1d(self.couplings))
        if len(couplings) != self.n:
            raise ConfigValidationError(
                f"expected {self.n} couplings, got {len(couplings)}")
        if any(c == 0.0 for c in couplings):
            raise ConfigValidationError("coupling must be nonzero")
        if not all(np.isfinite(c) for c in couplings):
            raise ConfigValidationError("couplings must be finite")
        object.__setattr__(self, "couplings", couplings)
        if not (np.isfinite(self.ell) and self.ell > 0):
            raise ConfigValidationError(f"ell must be positive, got {self.ell!r}")
        if not (np.isfinite(self.bg_radius) and self.bg_radius > 0):
            raise ConfigValidationError(
                f"bg_radius must be positive, got {self.bg_radius!r}")
        object.__setattr__(self, "ell", float(self.ell))
        object.__setattr__(self, "bg_radius", float(self.bg_radius))
        if not isinstance(self.site_law, SiteLaw):
            raise ConfigValidationError("site_law must be a SiteLaw")
        if self.require_support and not self.site_law.contains_zero_and_one():
            raise ConfigValidationError(
                "site_law support must contain both atoms 0 and 1")

    @property
    def algebra_dim(self):
        """Dimension ``N(2N+1)`` of the symplectic Lie algebra."""
        return self.n * (2 * self.n + 1)

    def with_ell(self, ell):
        return ModelConfig(self.n, ell, self.couplings, self.site_law,
                           self.bg_radius, self.require_support)


def as_omega(config, omega):
    """Validate a disorder realisation ``ω = (ω_1, ..., ω_N)``."""
    w = np.asarray(omega, dtype=float)
    if w.ndim != 1 or w.shape[0] != config.n:
        raise InvalidArgumentError(
            f"omega must have length {config.n}, got shape {w.shape}")
    return w


def binary_patterns(n):
    """All ω in ``{0,1}^n`` as an ``(2**n, n)`` float array."""
    if n > MAX_ENUMERATION_N:
        raise ResourceLimitError(
            f"2**{n} disorder patterns exceed the enumeration limit "
            f"2**{MAX_ENUMERATION_N}")
    return np.array(list(itertools.product((0.0, 1.0), repeat=n)))


def build_v0(n):
    """Tridiagonal ``n x n`` matrix with zero diagonal and unit off-diagonals."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {n!r}")
    n = int(n)
    v0 = np.zeros((n, n))
    idx = np.arange(n - 1)
    v0[idx, idx + 1] = 1.0
    v0[idx + 1, idx] = 1.0
    return _frozen(v0)


def build_m(config, omega, energy):
    """``M_ω(E) = V0 + diag(c_i ω_i - E)``, exactly symmetric."""
    w = as_omega(config, omega)
    m = np.array(build_v0(config.n))
    m[np.diag_indices(config.n)] = np.asarray(config.couplings) * w - energy
    return _frozen(m)


def build_x(config, omega, energy):
    """Block generator ``[[0, I], [M_ω(E), 0]]`` of size ``2N``."""
    m = build_m(config, omega, energy)
    n = config.n
    x = np.zeros((2 * n, 2 * n))
    x[:n, n:] = np.eye(n)
    x[n:, :n] = m
    return _frozen(x)


def symmetric_eigh(a):
    """Eigendecomposition of a real symmetric matrix.

    Returns ascending eigenvalues and orthonormal eigenvectors, raising
    :class:`NumericalFailureError` rather than returning a bad result.
    """
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NumericalFailureError("matrix has non-finite entries")
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(q))):
        raise NumericalFailureError("eigensolver returned non-finite values")
    return w, q


def spectrum_m(config, omega):
    """Eigenvalues of ``M_ω(0)`` in nondecreasing order."""
    w, _ = symmetric_eigh(build_m(config, omega, 0.0))
    return _frozen(w)


def x_norm(config, omega, energy):
    """Spectral norm of ``X_ω(E)``: ``max(1, max_i |λ_i - E|)``.

    ``X Xᵀ = diag(I, M²)``, so the singular values of ``X`` are 1 and the
    moduli of the eigenvalues of ``M_ω(E)``.
    """
    lam = spectrum_m(config, omega)
    return float(max(1.0, np.max(np.abs(lam - energy))))
