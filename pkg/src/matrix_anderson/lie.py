"""Lie algebra generated by the cell generators ``ℓ X_ω(E)``.

The span is tracked as an orthonormal basis of flattened matrices (trace
inner product ``<A, B> = tr(Aᵀ B)``).  Closure is computed breadth first:
every newly accepted element is bracketed with every basis element, and
the result is kept when its component orthogonal to the current span is
not negligible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ClosureError, InvalidArgumentError, ResourceLimitError
from .model import MAX_ENUMERATION_N, binary_patterns, build_x
from .propagator import symplectic_form

__all__ = [
    "MatrixSpan",
    "GenerationReport",
    "bracket",
    "lie_span_dimension",
    "sp_dimension",
    "symplectic_form",
    "algebra_residual",
    "verify_sp_generation",
]

DEFAULT_RANK_TOL = 1e-8
MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True)
class MatrixSpan:
    dim: int
    basis: np.ndarray  # (rank, dim, dim), orthonormal under the trace product

    @property
    def rank(self):
        return self.basis.shape[0]

    def gram(self):
        flat = self.basis.reshape(self.rank, -1)
        return flat @ flat.T


@dataclass(frozen=True)
class GenerationReport:
    generated: bool
    rank: int
    expected_rank: int
    energy: float
    max_membership_residual: float

    def __bool__(self):
        return self.generated


def sp_dimension(n):
    return n * (2 * n + 1)


def bracket(a, b):
    """Commutator ``AB - BA``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise InvalidArgumentError(
            f"bracket needs equal square matrices, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def algebra_residual(a):
    """``||JA + AᵀJ||``; zero exactly when ``A`` lies in the symplectic algebra."""
    a = np.asarray(a, dtype=float)
    j = symplectic_form(a.shape[0] // 2)
    return float(np.linalg.norm(j @ a + a.T @ j, 2))


def _orthogonal_part(v, basis):
    # two passes of Gram-Schmidt keep the basis orthonormal to ~eps
    for _ in range(2):
        if basis:
            b = np.asarray(basis)
            v = v - b.T @ (b @ v)
    return v


def lie_span_dimension(generators, rank_tol=DEFAULT_RANK_TOL):
    """Dimension of the smallest bracket-closed subspace containing ``generators``.

    A candidate joins the span when the norm of its orthogonal component
    exceeds ``rank_tol * max(1, ||candidate||)``.

    Returns
    -------
    rank : int
    span : MatrixSpan
    """
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise InvalidArgumentError("need at least one generator")
    d = gens[0].shape[0] if gens[0].ndim == 2 else -1
    for g in gens:
        if g.ndim != 2 or g.shape != (d, d):
            raise InvalidArgumentError(
                "generators must be square matrices of one common size")

    basis = []
    pending = deque()

    def offer(m):
        v = m.reshape(-1)
        nrm = np.linalg.norm(v)
        w = _orthogonal_part(v, basis)
        wn = np.linalg.norm(w)
        if wn > rank_tol * max(1.0, nrm):
            basis.append(w / wn)
            pending.append(basis[-1].reshape(d, d))
            return True
        return False

    for g in gens:
        offer(g)

    rounds = 0
    while pending:
        rounds += 1
        if rounds > d * d + len(gens):
            raise ClosureError("Lie closure failed to stabilise")
        p = pending.popleft()
        for b in list(basis):
            offer(bracket(p, b.reshape(d, d)))

    span = MatrixSpan(d, np.array(basis).reshape(len(basis), d, d))
    return span.rank, span


def verify_sp_generation(config, energy, rank_tol=DEFAULT_RANK_TOL):
    """Check that ``{ℓ X_ω(E) : ω ∈ {0,1}^N}`` generates the full algebra.

    Every generator must also satisfy ``||JA + AᵀJ|| <= 1e-12``.
    """
    if config.n > MAX_ENUMERATION_N:
        raise ResourceLimitError(
            f"2**{config.n} generators exceed the limit 2**{MAX_ENUMERATION_N}")
    gens = [config.ell * np.asarray(build_x(config, w, energy))
            for w in binary_patterns(config.n)]
    resid = max(algebra_residual(g) for g in gens)
    rank, _ = lie_span_dimension(gens, rank_tol)
    expected = sp_dimension(config.n)
    return GenerationReport(
        generated=bool(rank == expected and resid <= MEMBERSHIP_TOL),
        rank=rank,
        expected_rank=expected,
        energy=float(energy),
        max_membership_residual=resid,
    )
