"""Closed-form spatial and temporal correlation for vMF scattering channels."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .vmf import TWO_PI, VmfCluster, _log_kappa_over_sinh, csinc_sqrt, direction_from_angles

_HALF_PI = 0.5 * math.pi

# Above this concentration sinh(kappa) no longer fits in a double, so the
# spatial correlation switches to the log-domain large-kappa form.
LARGE_KAPPA_THRESHOLD = 700.0


@dataclass(frozen=True)
class MotionState:
    """Constant linear motion: speed in m/s plus direction angles in radians."""

    speed: float
    phi_v: float = 0.0
    psi_v: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.speed) and self.speed >= 0.0):
            raise ValueError(f"speed must be finite and >= 0, got {self.speed}")
        if not (math.isfinite(self.phi_v) and math.isfinite(self.psi_v)):
            raise ValueError("motion direction angles must be finite")
        if abs(self.psi_v) > _HALF_PI:
            raise ValueError(f"psi_v must lie in [-pi/2, pi/2], got {self.psi_v}")

    @property
    def velocity(self) -> np.ndarray:
        return self.speed * direction_from_angles(self.phi_v, self.psi_v)


@dataclass(frozen=True)
class DopplerParams:
    """Doppler shifts in Hz: f_m for the motion itself, f_mu for the mean
    arrival direction."""

    f_m: float
    f_mu: float

    def __post_init__(self):
        if abs(self.f_mu) > abs(self.f_m) * (1.0 + 1e-9) + 1e-300:
            raise ValueError("|f_mu| cannot exceed f_m")


@dataclass(frozen=True)
class ScfArgument:
    """Intermediate complex coefficients of the correlation closed form.

    bx, by, bz combine the concentration and the scaled displacement per axis;
    b_sq is the transverse pair combined as -(bx**2 + by**2); sinc_arg is the
    square root of the radicand bz**2 - b_sq with nonpositive imaginary part;
    mean_dot_d is the displacement projected on the mean arrival direction.
    """

    bx: complex
    by: complex
    bz: complex
    b_sq: complex
    sinc_arg: complex
    mean_dot_d: float


def _as_displacement(d) -> np.ndarray:
    v = np.asarray(d, dtype=float)
    if v.shape != (3,):
        raise ValueError("displacement must be a 3-vector in meters")
    if not np.all(np.isfinite(v)):
        raise ValueError("displacement components must be finite")
    return v


def _check_wavelength(wavelength: float):
    if not (math.isfinite(wavelength) and wavelength > 0.0):
        raise ValueError(f"wavelength must be positive, got {wavelength}")


def _sinc_radicand(cluster: VmfCluster, d: np.ndarray, wavelength: float) -> tuple[complex, float]:
    # (2 pi / lam)^2 |d|^2 - kappa^2 - 2j kappa (2 pi / lam) (mean . d)
    k0 = TWO_PI / wavelength
    proj = float(cluster.mean_direction @ d)
    radicand = (k0 * k0) * float(d @ d) - cluster.kappa**2 - 2.0j * cluster.kappa * k0 * proj
    return radicand, proj


def _branch_sqrt(w: complex) -> complex:
    """Square root with nonpositive imaginary part."""
    z = cmath.sqrt(w)
    if z.imag > 0.0:
        z = -z
    return z


def scf_argument(cluster: VmfCluster, d, wavelength: float) -> ScfArgument:
    """Assemble the intermediate coefficients entering the closed form."""
    d = _as_displacement(d)
    _check_wavelength(wavelength)
    k0 = TWO_PI / wavelength
    kappa = cluster.kappa
    cmu = math.cos(cluster.mu_psi)
    bx = kappa * math.cos(cluster.mu_phi) * cmu + 1j * k0 * d[0]
    by = kappa * math.sin(cluster.mu_phi) * cmu + 1j * k0 * d[1]
    bz = kappa * math.sin(cluster.mu_psi) + 1j * k0 * d[2]
    radicand, proj = _sinc_radicand(cluster, d, wavelength)
    return ScfArgument(
        bx=bx,
        by=by,
        bz=bz,
        b_sq=-(bx * bx + by * by),
        sinc_arg=_branch_sqrt(radicand),
        mean_dot_d=proj,
    )


def scf_isotropic(distance: float, wavelength: float) -> float:
    """sinc(2 pi distance / wavelength), the uniform-scattering special case."""
    _check_wavelength(wavelength)
    if not (math.isfinite(distance) and distance >= 0.0):
        raise ValueError(f"distance must be finite and >= 0, got {distance}")
    return float(np.sinc(2.0 * distance / wavelength))


def scf(cluster: VmfCluster, d, wavelength: float) -> complex:
    """Spatial correlation between two positions separated by displacement d.

    Equal to (kappa / sinh kappa) * sinc(sqrt(w)) with the radicand
    w = (2 pi / lam)^2 |d|^2 - kappa^2 - 2j kappa (2 pi / lam) (mean . d).
    kappa = 0 reduces to the real isotropic result, and concentrations beyond
    the sinh overflow threshold are routed to the log-domain large-kappa form.
    The value at d = 0 is exactly one.
    """
    d = _as_displacement(d)
    _check_wavelength(wavelength)
    if not np.any(d):
        return 1.0 + 0.0j
    kappa = cluster.kappa
    if kappa == 0.0:
        return complex(scf_isotropic(float(np.linalg.norm(d)), wavelength))
    if kappa > LARGE_KAPPA_THRESHOLD:
        return scf_large_kappa(cluster, d, wavelength)
    radicand, _ = _sinc_radicand(cluster, d, wavelength)
    return math.exp(_log_kappa_over_sinh(kappa)) * csinc_sqrt(radicand)


def scf_large_kappa(cluster: VmfCluster, d, wavelength: float) -> complex:
    """Tight large-concentration form kappa e^(-kappa) e^(jz) / (jz).

    z is the square root of the sinc radicand taken with nonpositive imaginary
    part, which keeps the dominant exponentials of sinh and sin paired; the
    whole expression is assembled in the exponent, so nothing overflows for
    kappa up to ~1e6. Relative error versus the exact form decays like
    exp(-2 |Im z|), negligible whenever kappa is large and the displacement is
    small against kappa * wavelength.
    """
    d = _as_displacement(d)
    _check_wavelength(wavelength)
    kappa = cluster.kappa
    if kappa <= 0.0:
        raise ValueError("large-kappa evaluation requires kappa > 0")
    radicand, _ = _sinc_radicand(cluster, d, wavelength)
    z = _branch_sqrt(radicand)
    if z == 0.0:
        raise ValueError("degenerate argument: sinc argument is zero")
    jz = 1j * z
    return cmath.exp(math.log(kappa) - kappa + jz - cmath.log(jz))


def scf_exact_log(cluster: VmfCluster, d, wavelength: float) -> complex:
    """Overflow-safe exact evaluation, equal to scf for any kappa > 0.

    Keeps every term of the sinh/sin ratio in the exponent, including the
    1 - e^(-2jz) and 1 - e^(-2 kappa) corrections that the large-kappa form
    drops; serves as the cross-check target for that approximation.
    """
    d = _as_displacement(d)
    _check_wavelength(wavelength)
    kappa = cluster.kappa
    if kappa <= 0.0:
        raise ValueError("log-domain evaluation requires kappa > 0")
    radicand, _ = _sinc_radicand(cluster, d, wavelength)
    if abs(radicand) <= 0.25:
        return math.exp(_log_kappa_over_sinh(kappa)) * csinc_sqrt(radicand)
    z = _branch_sqrt(radicand)
    jz = 1j * z
    log_value = (
        math.log(kappa)
        - kappa
        - math.log1p(-math.exp(-2.0 * kappa))
        + jz
        - cmath.log(jz)
        + cmath.log(1.0 - cmath.exp(-2.0 * jz))
    )
    return cmath.exp(log_value)


def scf_multicluster(clusters, d, wavelength: float) -> complex:
    """Power-weighted mixture of per-cluster correlations."""
    clusters = list(clusters)
    if not clusters:
        raise ValueError("cluster list must not be empty")
    total_power = sum(c.power for c in clusters)
    if abs(total_power - 1.0) > 1e-9:
        raise ValueError(f"cluster powers must sum to 1, got {total_power}")
    return sum(c.power * scf(c, d, wavelength) for c in clusters)


def doppler_params(
    cluster: VmfCluster, motion: MotionState, wavelength: float, monostatic: bool = False
) -> DopplerParams:
    """Doppler shifts of the motion: f_m = speed / wavelength and the shift of
    the mean arrival direction f_mu = (mean . velocity) / wavelength, both
    doubled for round-trip (monostatic) operation."""
    _check_wavelength(wavelength)
    factor = 2.0 if monostatic else 1.0
    f_m = factor * motion.speed / wavelength
    f_mu = factor * float(cluster.mean_direction @ motion.velocity) / wavelength
    return DopplerParams(f_m=f_m, f_mu=f_mu)


def acf(
    cluster: VmfCluster, motion: MotionState, dt: float, wavelength: float, monostatic: bool = False
) -> complex:
    """Temporal correlation at lag dt under constant linear motion.

    The lag maps onto the spatial displacement velocity * dt, doubled for
    monostatic operation where path lengths change twice as fast.
    """
    if not math.isfinite(dt):
        raise ValueError(f"time lag must be finite, got {dt}")
    factor = 2.0 if monostatic else 1.0
    return scf(cluster, factor * dt * motion.velocity, wavelength)


class DecorrelationNotFound(RuntimeError):
    """|ACF| stayed above the threshold over the whole search horizon."""


_GRID_POINTS_PER_DECADE = 64


def decorrelation_time(
    cluster: VmfCluster,
    motion: MotionState,
    wavelength: float,
    monostatic: bool = False,
    threshold: float = 0.5,
    horizon: float | None = None,
) -> float:
    """Smallest positive lag at which |ACF| first falls to the threshold.

    The first downward crossing is bracketed on a geometric lag grid (64
    points per decade starting at 1 us) and refined by bisection to 1e-6
    relative. Raises DecorrelationNotFound if no crossing occurs before the
    horizon, which defaults to 10 / f_m.
    """
    if motion.speed <= 0.0:
        raise ValueError("decorrelation time requires speed > 0")
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    params = doppler_params(cluster, motion, wavelength, monostatic)
    if horizon is None:
        horizon = 10.0 / params.f_m
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValueError(f"horizon must be positive, got {horizon}")

    def excess(t: float) -> float:
        return abs(acf(cluster, motion, t, wavelength, monostatic)) - threshold

    start = min(1e-6, horizon / _GRID_POINTS_PER_DECADE)
    if excess(start) < 0.0:
        lo, hi = 0.0, start
    else:
        ratio = 10.0 ** (1.0 / _GRID_POINTS_PER_DECADE)
        lo = start
        hi = None
        t = start
        while t < horizon:
            t = min(t * ratio, horizon)
            if excess(t) < 0.0:
                hi = t
                break
            lo = t
        if hi is None:
            raise DecorrelationNotFound(
                f"|ACF| never fell below {threshold} within horizon {horizon} s"
            )
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
