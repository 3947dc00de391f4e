"""Critical length and the energy interval on which every cell generator
stays inside the ball of radius ``bg_radius``.

With ``λ_min``/``λ_max`` the extreme eigenvalues of ``M_ω(0)`` over
``ω ∈ {0,1}^N``, ``δ = (λ_max - λ_min)/2`` and ``r = bg_radius/ℓ``, the set
of energies with ``ℓ ||X_ω(E)|| <= bg_radius`` for all ``ω`` is
``[λ_max - r, λ_min + r]`` as soon as ``r >= 1`` and ``δ < r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyIntervalError
from .model import binary_patterns, spectrum_m, x_norm

CONTAINMENT_SLACK = 1e-12


@dataclass(frozen=True)
class EnergyInterval:
    lower: float
    upper: float
    lambda_min: float
    lambda_max: float
    delta: float
    r_ell: float
    ell_c: float
    bg_radius: float
    ell: float

    @property
    def length(self):
        return self.upper - self.lower

    @property
    def midpoint(self):
        return 0.5 * (self.lower + self.upper)

    def contains(self, energy):
        return self.lower <= energy <= self.upper

    def grid(self, points):
        """``points`` energies spanning the interval, endpoints included.

        A single point is placed at the midpoint.
        """
        if points == 1:
            return np.array([self.midpoint])
        return np.linspace(self.lower, self.upper, points)


@dataclass
class ContainmentReport:
    grid_points: int
    max_ratio: float
    violations: list = field(default_factory=list)  # (energy, omega, ratio)

    @property
    def ok(self):
        return not self.violations


def extremal_eigenvalues(config):
    """``(λ_min, λ_max, δ)`` over all ``ω ∈ {0,1}^N``."""
    spectra = np.array([spectrum_m(config, w) for w in binary_patterns(config.n)])
    lmin = float(spectra.min())
    lmax = float(spectra.max())
    return lmin, lmax, (lmax - lmin) / 2.0


def _critical_length(bg_radius, delta):
    # ell <= bg_radius keeps r_ell >= 1; ell < bg_radius/delta keeps delta < r_ell
    if delta == 0.0:
        return bg_radius
    return min(bg_radius, bg_radius / delta)


def critical_length(config):
    """``ℓ_C = min(bg_radius, bg_radius/δ)`` (``bg_radius`` when ``δ = 0``)."""
    _, _, delta = extremal_eigenvalues(config)
    return _critical_length(config.bg_radius, delta)


def energy_interval(config):
    """Build ``I = [λ_max - r, λ_min + r]``.

    Raises
    ------
    EmptyIntervalError
        If ``config.ell >= ℓ_C``; the exception carries ``ell_c``.
    """
    lmin, lmax, delta = extremal_eigenvalues(config)
    ell_c = _critical_length(config.bg_radius, delta)
    if not config.ell < ell_c:
        raise EmptyIntervalError(config.ell, ell_c)
    r = config.bg_radius / config.ell
    return EnergyInterval(
        lower=lmax - r,
        upper=lmin + r,
        lambda_min=lmin,
        lambda_max=lmax,
        delta=delta,
        r_ell=r,
        ell_c=ell_c,
        bg_radius=config.bg_radius,
        ell=config.ell,
    )


def containment_ratio(config, energy):
    """``max_ω ℓ ||X_ω(E)|| / bg_radius``; at most 1 inside the interval."""
    worst = max(x_norm(config, w, energy) for w in binary_patterns(config.n))
    return config.ell * worst / config.bg_radius


def verify_containment(config, grid_points):
    """Check ``ℓ ||X_ω(E)|| <= bg_radius`` on a grid over the interval for all ω."""
    interval = energy_interval(config)
    report = ContainmentReport(grid_points=grid_points, max_ratio=0.0)
    bound = config.bg_radius + CONTAINMENT_SLACK
    for e in interval.grid(grid_points):
        for w in binary_patterns(config.n):
            val = config.ell * x_norm(config, w, e)
            ratio = val / config.bg_radius
            report.max_ratio = max(report.max_ratio, ratio)
            if val > bound:
                report.violations.append((float(e), tuple(w), ratio))
    return report
