"""von Mises-Fisher directional statistics and supporting special functions."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi

# Power series of sinc(sqrt(w)) = sum_k (-w)^k / (2k+1)!; ten terms keep the
# truncation error below 1e-16 for |w| <= 0.25.
_SERIES_RADIUS = 0.25
_SERIES_COEFFS = [(-1.0) ** k / math.factorial(2 * k + 1) for k in range(10)]


def direction_from_angles(phi: float, psi: float) -> np.ndarray:
    """Unit vector (cos phi cos psi, sin phi cos psi, sin psi) for azimuth phi
    and elevation psi, both in radians."""
    if abs(psi) > _HALF_PI:
        raise ValueError(f"elevation must lie in [-pi/2, pi/2], got {psi}")
    cpsi = math.cos(psi)
    return np.array([math.cos(phi) * cpsi, math.sin(phi) * cpsi, math.sin(psi)])


def angles_from_direction(unit) -> tuple[float, float]:
    """(azimuth, elevation) of a unit vector; inverse of direction_from_angles
    away from the poles."""
    u = np.asarray(unit, dtype=float)
    if u.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    if abs(float(np.linalg.norm(u)) - 1.0) > 1e-9:
        raise ValueError("direction must have unit norm")
    psi = math.asin(min(1.0, max(-1.0, float(u[2]))))
    phi = math.atan2(float(u[1]), float(u[0]))
    return phi, psi


@dataclass(frozen=True)
class VmfCluster:
    """One scattering cluster.

    The mean direction of arrival is given by azimuth mu_phi and elevation
    mu_psi in radians, kappa >= 0 sets the angular concentration (0 is uniform
    over the sphere) and power is the normalized cluster power in (0, 1].
    """

    mu_phi: float
    mu_psi: float
    kappa: float
    power: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mu_phi) and math.isfinite(self.mu_psi)):
            raise ValueError("mean direction angles must be finite")
        if abs(self.mu_psi) > _HALF_PI:
            raise ValueError(f"mu_psi must lie in [-pi/2, pi/2], got {self.mu_psi}")
        if not (math.isfinite(self.kappa) and self.kappa >= 0.0):
            raise ValueError(f"kappa must be finite and >= 0, got {self.kappa}")
        if not 0.0 < self.power <= 1.0 + 1e-12:
            raise ValueError(f"power must lie in (0, 1], got {self.power}")

    @property
    def mean_direction(self) -> np.ndarray:
        return direction_from_angles(self.mu_phi, self.mu_psi)


def _log_sinh(x: float) -> float:
    # sinh overflows for x > ~710; above 1, factor out the dominant exponential.
    if x > 1.0:
        return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)
    return math.log(math.sinh(x))


def _log_kappa_over_sinh(kappa: float) -> float:
    """log(kappa / sinh(kappa)), stable for arbitrarily large kappa."""
    return math.log(kappa) - _log_sinh(kappa)


def vmf_pdf(cluster: VmfCluster, phi, psi):
    """Angular density at azimuth phi / elevation psi (radians).

    Includes the cos(psi) area factor, so the density integrates to one over
    phi in [-pi, pi], psi in [-pi/2, pi/2]. Accepts scalars or broadcastable
    arrays. The exponent is assembled in the log domain, so concentrations up
    to ~1e5 evaluate without overflow; kappa = 0 returns the uniform-sphere
    density cos(psi) / (4 pi).
    """
    phi_arr = np.asarray(phi, dtype=float)
    psi_arr = np.asarray(psi, dtype=float)
    if np.any(np.abs(psi_arr) > _HALF_PI + 1e-12):
        raise ValueError("elevation must lie in [-pi/2, pi/2]")
    cpsi = np.maximum(np.cos(psi_arr), 0.0)
    if cluster.kappa == 0.0:
        out = cpsi / (4.0 * math.pi) + 0.0 * phi_arr
    else:
        align = (
            math.cos(cluster.mu_psi) * cpsi * np.cos(phi_arr - cluster.mu_phi)
            + math.sin(cluster.mu_psi) * np.sin(psi_arr)
        )
        log_norm = _log_kappa_over_sinh(cluster.kappa) - math.log(4.0 * math.pi)
        with np.errstate(divide="ignore"):
            out = np.exp(log_norm + cluster.kappa * align + np.log(cpsi))
    if out.ndim == 0:
        return float(out)
    return out


def _tangent_basis(unit: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.array([0.0, 0.0, 1.0]) if abs(unit[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(helper, unit)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(unit, e1)


def sample_vmf(cluster: VmfCluster, n: int, seed) -> np.ndarray:
    """Draw n unit vectors from the cluster's distribution, shape (n, 3).

    The cosine along the mean direction is sampled by exact CDF inversion,
    w = 1 + log(u + (1 - u) exp(-2 kappa)) / kappa for uniform u, and the
    tangent angle uniformly. No rejection step, so the output is a fixed
    deterministic function of the seed.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    theta = rng.uniform(0.0, TWO_PI, n)
    kappa = cluster.kappa
    if kappa == 0.0:
        w = 2.0 * u - 1.0
    else:
        # shift u into (0, 1] so the log argument stays positive even when
        # exp(-2 kappa) underflows to zero
        shifted = 1.0 - u
        w = 1.0 + np.log(shifted + (1.0 - shifted) * math.exp(-2.0 * kappa)) / kappa
        w = np.clip(w, -1.0, 1.0)
    sin_polar = np.sqrt(np.maximum(0.0, 1.0 - w * w))
    mean = cluster.mean_direction
    e1, e2 = _tangent_basis(mean)
    return (
        w[:, None] * mean
        + (sin_polar * np.cos(theta))[:, None] * e1
        + (sin_polar * np.sin(theta))[:, None] * e2
    )


def mean_resultant_length(kappa: float) -> float:
    """coth(kappa) - 1/kappa, the expected norm of the average sample direction."""
    if not (math.isfinite(kappa) and kappa >= 0.0):
        raise ValueError(f"kappa must be finite and >= 0, got {kappa}")
    if kappa < 1e-4:
        # series around zero avoids the coth/1-over-kappa cancellation
        return kappa / 3.0 - kappa**3 / 45.0
    return 1.0 / math.tanh(kappa) - 1.0 / kappa


def kappa_from_angular_width(delta_theta: float) -> float:
    """Concentration whose density falls to exp(-2) of its peak at an angular
    offset of half the given width: 2 / (1 - cos(delta_theta / 2))."""
    if not 0.0 < delta_theta < TWO_PI:
        raise ValueError(f"angular width must lie in (0, 2 pi), got {delta_theta}")
    return 2.0 / (1.0 - math.cos(0.5 * delta_theta))


def csinc_sqrt(w) -> complex:
    """sinc of the square root, evaluated as an entire function of w.

    Equals sum_k (-w)^k / (2k+1)!, so both square-root branches give the same
    value. Small arguments use the power series to dodge the 0/0 at w = 0;
    elsewhere sin(z)/z with z = sqrt(w).
    """
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValueError("argument must be finite")
    if abs(w) <= _SERIES_RADIUS:
        acc = 0.0 + 0.0j
        for coeff in reversed(_SERIES_COEFFS):
            acc = acc * w + coeff
        return acc
    z = cmath.sqrt(w)
    return cmath.sin(z) / z
