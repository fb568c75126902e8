"""Semi-classical frame model: a random walk of a direction on the sphere.

The frame's orientation is a probability distribution on S^2, restricted to
azimuthal symmetry and carried as a truncated Legendre series

    p(theta) = sum_l c_l P_l(cos theta),

normalised so that the l = 0 coefficient is exactly one under the measure
sin(theta) d(theta) / 2.  Each measurement kicks the direction by a fixed
angle alpha toward a uniformly random azimuth; the induced averaging
operator is diagonal in this basis with eigenvalue P_l(cos alpha), so the
walk is evolved in coefficient space.  A direct grid implementation of the
ring average is provided purely as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss, legval, legvander
from scipy.special import eval_legendre

from .angular_momentum import as_spin
from .errors import AccuracyError, DomainError, InternalConsistencyError
from .quantum_drf import FidelitySeries
from .tolerances import ORACLE_TOL, POSITIVITY_ALLOWANCE

__all__ = [
    "LegendreSpectrum",
    "WalkParameters",
    "initial_spectrum",
    "walk_evolve",
    "classical_fidelity",
    "classical_fidelity_series",
    "fitted_step",
    "ring_average",
    "angular_variance",
    "default_l_max",
]

_C0_ACCURACY = 1e-8
_MIN_RING_GRID = 2048


def default_l_max(j) -> int:
    """Truncation order used when none is given: max(4j + 16, 64).

    The initial spectrum decays super-exponentially beyond l ~ sqrt(8j) and
    the walk only shrinks coefficients, so this is generous enough for
    positive reconstructions at every tested size.
    """
    return max(2 * as_spin(j).twice_j + 16, 64)


@dataclass(frozen=True)
class LegendreSpectrum:
    """Truncated Legendre coefficients of an azimuthally symmetric distribution."""

    l_max: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.l_max < 1:
            raise DomainError("l_max must be at least 1")
        arr = np.array(self.coeffs, dtype=float)
        if arr.shape != (self.l_max + 1,):
            raise DomainError(
                f"expected {self.l_max + 1} coefficients, got shape {arr.shape}"
            )
        if arr[0] != 1.0:
            raise DomainError(f"c_0 must be exactly 1, got {arr[0]!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def reconstruct(self, theta) -> np.ndarray:
        """Evaluate p(theta) = sum_l c_l P_l(cos theta)."""
        return legval(np.cos(theta), self.coeffs)

    def min_reconstructed(self, grid_points: int = 4096) -> float:
        """Minimum of the reconstruction on a uniform theta grid."""
        theta = np.linspace(0.0, math.pi, grid_points)
        return float(np.min(self.reconstruct(theta)))

    def require_positive(self, allowance: float = POSITIVITY_ALLOWANCE,
                         grid_points: int = 4096):
        worst = self.min_reconstructed(grid_points)
        if worst < -allowance:
            raise InternalConsistencyError(
                f"reconstructed distribution dips to {worst:.3e}"
            )


@dataclass(frozen=True)
class WalkParameters:
    """Fixed-step walk settings: kick angle alpha (radians) and step count n."""

    alpha: float
    n: int

    def __post_init__(self):
        if not 0.0 <= self.alpha <= math.pi:
            raise DomainError(f"alpha must lie in [0, pi], got {self.alpha}")
        if self.n < 0:
            raise DomainError(f"step count must be non-negative, got {self.n}")


def initial_spectrum(j, l_max: int | None = None) -> LegendreSpectrum:
    """Expand the starting distribution matched to the aligned quantum frame.

    The distribution is p0(theta) = (4j + 1) [cos(theta/2)]^(8j): aligned
    with the reference axis and carrying the same angular spread as the
    aligned spin-j coherent state.  Coefficients come from Gauss-Legendre
    quadrature in x = cos(theta) of order 4j + l_max + 8, which integrates
    the polynomial integrands exactly; the first two satisfy c_0 = 1 and
    c_1 = 6j / (2j + 1).

    Raises
    ------
    AccuracyError
        If the computed c_0 strays from 1 by more than 1e-8.
    """
    j = as_spin(j)
    if l_max is None:
        l_max = default_l_max(j)
    if l_max < 1:
        raise DomainError("l_max must be at least 1")
    n_quad = 2 * j.twice_j + l_max + 8  # 4j + l_max + 8
    x, w = leggauss(n_quad)
    # In x: p0 = (4j+1) ((1+x)/2)^(4j'), with 4j' = 2 * twice_j.
    p0 = (2.0 * j.twice_j + 1.0) * ((1.0 + x) / 2.0) ** (2 * j.twice_j)
    ell = np.arange(l_max + 1)
    coeffs = (2 * ell + 1) * 0.5 * (legvander(x, l_max).T @ (w * p0))
    if abs(coeffs[0] - 1.0) > _C0_ACCURACY:
        raise AccuracyError(
            f"classical_walk.initial_spectrum: quadrature order {n_quad} "
            f"insufficient, c_0 = {coeffs[0]!r}"
        )
    coeffs[0] = 1.0
    return LegendreSpectrum(l_max, coeffs)


def walk_evolve(spec: LegendreSpectrum, params: WalkParameters) -> LegendreSpectrum:
    """Advance a spectrum by n fixed-angle kicks.

    The ring-averaging operator of a single kick has the Legendre
    polynomials as eigenfunctions, so each coefficient just scales:

        c_l(n) = c_l(0) * [P_l(cos alpha)]^n.

    c_0 is untouched (P_0 = 1), preserving normalisation exactly.
    """
    ell = np.arange(spec.l_max + 1)
    gains = eval_legendre(ell, math.cos(params.alpha)) ** params.n
    coeffs = spec.coeffs * gains
    coeffs[0] = 1.0
    return LegendreSpectrum(spec.l_max, coeffs)


def classical_fidelity(spec: LegendreSpectrum) -> float:
    """Average probability of a correct reading with a distributed frame.

    A frame misaligned by theta reads a known test spin correctly with
    probability cos^2(theta/2) = (P_0 + P_1)/2, so by orthogonality only the
    first two coefficients survive the average:

        F = (c_0 + c_1 / 3) / 2.
    """
    return 0.5 * (spec.coeffs[0] + spec.coeffs[1] / 3.0)


def fitted_step(j) -> float:
    """Kick angle that makes the walk reproduce the quantum fidelity decay.

    alpha = arccos(1 - 2 / (2j+1)^2); approximately 1/j for large j, i.e.
    the ratio of the measured spin's angular momentum to the frame's.
    """
    j = as_spin(j)
    if j.twice_j < 1:
        raise DomainError("fitted_step requires 2j >= 1")
    q = j.twice_j + 1.0
    return math.acos(1.0 - 2.0 / q**2)


def classical_fidelity_series(j, alpha: float, n_max: int,
                              l_max: int | None = None) -> FidelitySeries:
    """Fidelity after each walk step, computed through the Legendre pipeline.

    Each entry runs initial_spectrum -> walk_evolve -> classical_fidelity;
    the result is verified against the closed form
    1/2 + [j/(2j+1)] cos(alpha)^n before being returned.
    """
    j = as_spin(j)
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    spec0 = initial_spectrum(j, l_max)
    fid = np.empty(n_max + 1)
    for n in range(n_max + 1):
        fid[n] = classical_fidelity(walk_evolve(spec0, WalkParameters(alpha, n)))
    steps = np.arange(n_max + 1)
    q = j.twice_j + 1.0
    closed = 0.5 + (j.twice_j / (2.0 * q)) * math.cos(alpha) ** steps
    series = FidelitySeries(j, steps, fid, closed)
    if series.max_abs_diff > ORACLE_TOL:
        raise InternalConsistencyError(
            "classical_walk.classical_fidelity_series: pipeline strays "
            f"{series.max_abs_diff:.3e} from the closed form"
        )
    return series


def ring_average(thetas: np.ndarray, values: np.ndarray, alpha: float,
                 n_psi: int = 1024) -> np.ndarray:
    """Grid implementation of one averaging kick (test oracle, not production).

    For each grid angle theta the operand is averaged over the ring of
    points one angular step alpha away, using the spherical law of cosines

        cos theta' = cos theta cos alpha + sin theta sin alpha cos psi,

    a uniform trapezoid rule over the ring azimuth psi (periodic, so
    spectrally accurate) and linear interpolation of ``values`` on the theta
    grid.  Deliberately independent of the Legendre route.

    Parameters
    ----------
    thetas : array
        Uniform ascending grid covering [0, pi] with at least 2048 points.
    values : array
        Distribution tabulated on ``thetas``.
    alpha : float
        Kick angle, strictly inside (0, pi).
    n_psi : int
        Number of azimuth nodes for the ring quadrature.
    """
    thetas = np.asarray(thetas, dtype=float)
    values = np.asarray(values, dtype=float)
    if thetas.ndim != 1 or thetas.shape != values.shape:
        raise DomainError("thetas and values must be 1-d arrays of equal length")
    if len(thetas) < _MIN_RING_GRID:
        raise AccuracyError(
            f"classical_walk.ring_average: grid of {len(thetas)} points is too "
            f"coarse (need >= {_MIN_RING_GRID})"
        )
    if not (0.0 < alpha < math.pi):
        raise DomainError(f"alpha must lie strictly inside (0, pi), got {alpha}")
    if abs(thetas[0]) > 1e-12 or abs(thetas[-1] - math.pi) > 1e-12:
        raise DomainError("theta grid must span [0, pi]")

    cos_psi = np.cos(np.arange(n_psi) * (2.0 * math.pi / n_psi))
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)
    cos_a, sin_a = math.cos(alpha), math.sin(alpha)
    out = np.empty_like(values)
    chunk = max(1, (1 << 22) // n_psi)  # bound the temporary to ~32 MB
    for start in range(0, len(thetas), chunk):
        stop = min(start + chunk, len(thetas))
        cos_ring = np.clip(
            cos_t[start:stop, None] * cos_a
            + sin_t[start:stop, None] * sin_a * cos_psi[None, :],
            -1.0,
            1.0,
        )
        out[start:stop] = np.interp(np.arccos(cos_ring), thetas, values).mean(axis=1)
    return out


def angular_variance(j, n_quad: int | None = None) -> float:
    """Variance of the misalignment angle of the starting distribution.

    The angular profile cos^(8j)(theta/2) is treated as a symmetric
    one-dimensional distribution in theta (its even extension has zero
    mean), so the variance is the plain second moment

        Var = int theta^2 f(theta) dtheta / int f(theta) dtheta

    over [0, pi], evaluated by Gauss-Legendre quadrature.  For large j this
    converges to 1/(2j), the squared angular uncertainty of the aligned
    spin-j coherent state.
    """
    j = as_spin(j)
    if j.twice_j < 1:
        raise DomainError("angular_variance requires 2j >= 1")
    if n_quad is None:
        n_quad = max(256, 4 * j.twice_j + 64)
    x, w = leggauss(n_quad)
    theta = (x + 1.0) * (math.pi / 2.0)
    weights = w * (math.pi / 2.0)
    profile = np.cos(theta / 2.0) ** (4 * j.twice_j)
    return float((weights * theta**2 * profile).sum() / (weights * profile).sum())
