"""Monte-Carlo Lyapunov spectrum of the random transfer-matrix cocycle.

The frame ``Q`` (all ``2N`` directions) is pushed through
``T_{ω(n)}(E)`` and re-orthonormalised every ``qr_stride`` cells; the logs
of the diagonal of ``R`` accumulate into per-batch sums from which the
exponents (per unit length) and their batch-means standard errors follow.

Each ``(energy, seed)`` task owns an independent ``numpy`` stream derived
from ``SeedSequence(seed, spawn_key=(stream,))``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import NumericalFailureError
from .interval import EnergyInterval, energy_interval
from .lie import DEFAULT_RANK_TOL, verify_sp_generation
from .propagator import transfer_matrices

DEFAULT_STEPS = 10**6
DEFAULT_BATCHES = 20
DEFAULT_SIGNIFICANCE = 3.0
MAX_TABLE = 4096
CHUNK = 1 << 16


@dataclass(frozen=True)
class LyapunovEstimate:
    energy: float
    exponents: np.ndarray  # 2N values, nonincreasing
    standard_errors: np.ndarray
    steps: int
    ell: float
    seeds: tuple

    @property
    def n(self):
        return self.exponents.shape[0] // 2

    @property
    def positive(self):
        return self.exponents[: self.n]

    def gaps(self):
        """Consecutive gaps ``γ_i - γ_{i+1}`` (i < N) followed by ``γ_N``,
        with their combined standard errors."""
        g = self.exponents
        s = self.standard_errors
        n = self.n
        gaps = np.append(g[: n - 1] - g[1:n], g[n - 1])
        errs = np.append(s[: n - 1] + s[1:n], s[n - 1])
        return gaps, errs

    @property
    def min_positive_gap(self):
        return float(self.gaps()[0].min())

    def pairing_residuals(self):
        """``|γ_i + γ_{2N+1-i}|`` and the combined error of each pair."""
        g = self.exponents
        s = self.standard_errors
        return np.abs(g + g[::-1]), s + s[::-1]

    def is_separable(self, significance=DEFAULT_SIGNIFICANCE):
        gaps, errs = self.gaps()
        return bool(np.all(gaps > significance * errs) and np.all(gaps > 0))

    def confidence(self):
        """Smallest gap measured in units of its standard error."""
        gaps, errs = self.gaps()
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(errs > 0, gaps / errs, np.copysign(np.inf, gaps))
        return float(z.min())


def _batch_bounds(steps, batches):
    b = max(1, min(batches, steps))
    return np.round(np.linspace(0, steps, b + 1)).astype(np.int64)


@numba.njit(nogil=True, cache=True)
def _propagate(table, idx, q, state, stride, bounds, batch_logs):
    """Advance the frame through ``table[idx[k]]`` for every k.

    ``state = [global step, steps since last QR, current batch]`` is
    updated in place.  Returns 0 on success, 1 on a degenerate R.
    """
    d = q.shape[0]
    tmp = np.empty((d, d))
    for k in range(idx.shape[0]):
        t = table[idx[k]]
        for i in range(d):
            for j in range(d):
                acc = 0.0
                for m in range(d):
                    acc += t[i, m] * q[m, j]
                tmp[i, j] = acc
        for i in range(d):
            for j in range(d):
                q[i, j] = tmp[i, j]
        state[0] += 1
        state[1] += 1
        b = state[2]
        if state[1] == stride or state[0] == bounds[b + 1]:
            # modified Gram-Schmidt, two passes; R diagonal is positive
            for j in range(d):
                for _ in range(2):
                    for p in range(j):
                        r = 0.0
                        for i in range(d):
                            r += q[i, p] * q[i, j]
                        for i in range(d):
                            q[i, j] -= r * q[i, p]
                nrm = 0.0
                for i in range(d):
                    nrm += q[i, j] * q[i, j]
                nrm = math.sqrt(nrm)
                if not (nrm > 0.0) or not math.isfinite(nrm):
                    return 1
                for i in range(d):
                    q[i, j] /= nrm
                batch_logs[b, j] += math.log(nrm)
            state[1] = 0
            if state[0] == bounds[b + 1]:
                state[2] = b + 1
    return 0


def _stream(seed, stream):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def _draw_indices(law, rng, size):
    cum = np.cumsum(law.probabilities)
    u = rng.random(size)
    return np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1)


def sample_omega(config, rng):
    """One realisation ``ω`` with i.i.d. coordinates of law ``config.site_law``.

    ``rng`` is a ``numpy.random.Generator`` owned by the caller.  The
    engine consumes the generator in exactly the same way, row by row.
    """
    atoms = np.asarray(config.site_law.atoms)
    return atoms[_draw_indices(config.site_law, rng, config.n)]


def lyapunov_spectrum(config, energy, steps=DEFAULT_STEPS, seed=1, qr_stride=1,
                      *, stream=0, batches=DEFAULT_BATCHES):
    """Estimate all ``2N`` Lyapunov exponents at ``energy``.

    Exponents are per unit length (log growth divided by ``steps * ℓ``).

    Parameters
    ----------
    steps : int
        Number of cells in the product.
    seed, stream : int
        Select the random stream; different streams are independent.
    qr_stride : int
        Cells between re-orthonormalisations.
    batches : int
        Number of batches for the standard errors.
    """
    steps = int(steps)
    qr_stride = int(qr_stride)
    if steps < 1 or qr_stride < 1:
        raise ValueError("steps and qr_stride must be >= 1")
    n = config.n
    law = config.site_law
    atoms = np.asarray(law.atoms)
    k = len(atoms)
    rng = _stream(seed, stream)

    use_table = k**n <= MAX_TABLE
    if use_table:
        codes = np.indices((k,) * n).reshape(n, -1).T  # row r: digits of r, base k
        table = transfer_matrices(config, atoms[codes], energy)
        weights = k ** np.arange(n - 1, -1, -1)

    bounds = _batch_bounds(steps, batches)
    batch_logs = np.zeros((len(bounds) - 1, 2 * n))
    q = np.eye(2 * n)
    state = np.zeros(3, dtype=np.int64)
    done = 0
    while done < steps:
        m = min(CHUNK, steps - done)
        sites = _draw_indices(law, rng, (m, n))
        if use_table:
            idx = sites @ weights
            tab = table
        else:
            uniq, idx = np.unique(sites, axis=0, return_inverse=True)
            tab = transfer_matrices(config, atoms[uniq], energy)
        status = _propagate(np.ascontiguousarray(tab), idx.astype(np.int64).ravel(),
                            q, state, qr_stride, bounds, batch_logs)
        if status:
            raise NumericalFailureError(
                f"degenerate QR factor at E={energy!r} after {state[0]} steps")
        done += m

    lengths = np.diff(bounds) * config.ell
    exps = batch_logs.sum(axis=0) / (steps * config.ell)
    per_batch = batch_logs / lengths[:, None]
    if per_batch.shape[0] > 1:
        se = per_batch.std(axis=0, ddof=1) / math.sqrt(per_batch.shape[0])
    else:
        se = np.full(2 * n, np.inf)
    order = np.argsort(-exps, kind="stable")
    return LyapunovEstimate(
        energy=float(energy),
        exponents=exps[order],
        standard_errors=se[order],
        steps=steps,
        ell=config.ell,
        seeds=(seed,),
    )


def combine_estimates(estimates):
    """Average independent estimates at one energy (errors add in quadrature)."""
    ests = list(estimates)
    g = np.mean([e.exponents for e in ests], axis=0)
    se = np.sqrt(np.sum([e.standard_errors**2 for e in ests], axis=0)) / len(ests)
    seeds = tuple(s for e in ests for s in e.seeds)
    return LyapunovEstimate(ests[0].energy, g, se, ests[0].steps, ests[0].ell, seeds)


@dataclass
class ScanReport:
    interval: EnergyInterval
    energies: np.ndarray
    estimates: list  # LyapunovEstimate or None where the estimation failed
    lie_ranks: list
    lie_generated: list
    separable: list
    confidence: list
    significance: float
    steps: int
    seeds: tuple
    failures: dict = field(default_factory=dict)  # grid index -> message

    @property
    def all_separable(self):
        return all(self.separable)

    @property
    def min_gap(self):
        gaps = [e.min_positive_gap for e in self.estimates if e is not None]
        return min(gaps) if gaps else float("nan")


def separability_scan(config, grid_points=21, steps=DEFAULT_STEPS, seeds=(1, 2, 3),
                      qr_stride=1, rank_tol=DEFAULT_RANK_TOL,
                      significance=DEFAULT_SIGNIFICANCE, workers=None):
    """Lie rank and Lyapunov spectrum on a grid over the energy interval.

    An energy counts as separable when every gap ``γ_i - γ_{i+1}`` (i < N)
    and ``γ_N`` itself exceed ``significance`` combined standard errors,
    averaged over ``seeds``.  Numerical failures at one energy are recorded
    in ``failures`` and make that energy's verdict false.
    """
    interval = energy_interval(config)
    energies = interval.grid(grid_points)
    seeds = tuple(int(s) for s in seeds)
    if not seeds:
        raise ValueError("need at least one seed")

    def task(i, seed):
        try:
            return lyapunov_spectrum(config, energies[i], steps, seed, qr_stride,
                                     stream=i)
        except (NumericalFailureError, FloatingPointError) as exc:
            return exc

    jobs = [(i, s) for i in range(len(energies)) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda a: task(*a), jobs))
    by_key = dict(zip(jobs, results))

    report = ScanReport(interval=interval, energies=energies, estimates=[],
                        lie_ranks=[], lie_generated=[], separable=[], confidence=[],
                        significance=significance, steps=int(steps), seeds=seeds)
    for i, e in enumerate(energies):
        gen = verify_sp_generation(config, e, rank_tol)
        report.lie_ranks.append(gen.rank)
        report.lie_generated.append(gen.generated)
        parts = [by_key[(i, s)] for s in seeds]
        errors = [p for p in parts if isinstance(p, Exception)]
        if errors:
            report.failures[i] = str(errors[0])
            report.estimates.append(None)
            report.separable.append(False)
            report.confidence.append(float("nan"))
            continue
        est = combine_estimates(parts)
        report.estimates.append(est)
        report.separable.append(est.is_separable(significance))
        report.confidence.append(est.confidence())
    return report
