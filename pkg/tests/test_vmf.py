import math

import numpy as np
import pytest

from vmfcorr import (
    VmfCluster,
    angles_from_direction,
    csinc_sqrt,
    direction_from_angles,
    kappa_from_angular_width,
    mean_resultant_length,
    sample_vmf,
    scf_quadrature,
    vmf_pdf,
)


class TestDirection:
    def test_axis_cases(self):
        np.testing.assert_allclose(direction_from_angles(0.0, 0.0), [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(direction_from_angles(math.pi / 2, 0.0), [0, 1, 0], atol=1e-15)

    def test_mixed_angles(self):
        u = direction_from_angles(math.pi / 4, math.pi / 4)
        np.testing.assert_allclose(u, [0.5, 0.5, math.sqrt(2) / 2], atol=1e-15)

    def test_unit_norm(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            phi = rng.uniform(-4 * math.pi, 4 * math.pi)
            psi = rng.uniform(-math.pi / 2, math.pi / 2)
            u = direction_from_angles(phi, psi)
            assert abs(np.linalg.norm(u) - 1.0) < 1e-12

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            phi = rng.uniform(-math.pi, math.pi)
            psi = rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3)
            got_phi, got_psi = angles_from_direction(direction_from_angles(phi, psi))
            assert abs(got_phi - phi) < 1e-12
            assert abs(got_psi - psi) < 1e-12

    def test_elevation_domain(self):
        with pytest.raises(ValueError):
            direction_from_angles(0.0, 2.0)
        with pytest.raises(ValueError):
            angles_from_direction([1.0, 1.0, 1.0])


class TestVmfCluster:
    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            VmfCluster(0.0, 0.0, -1.0)
        with pytest.raises(ValueError):
            VmfCluster(0.0, 2.0, 1.0)
        with pytest.raises(ValueError):
            VmfCluster(0.0, 0.0, 1.0, power=0.0)
        with pytest.raises(ValueError):
            VmfCluster(0.0, 0.0, 1.0, power=1.5)

    def test_mean_direction(self):
        cluster = VmfCluster(0.3, -0.2, 5.0)
        np.testing.assert_allclose(
            cluster.mean_direction, direction_from_angles(0.3, -0.2), atol=0
        )


class TestVmfPdf:
    def test_uniform_limit(self):
        cluster = VmfCluster(0.7, 0.1, 0.0)
        for phi, psi in [(0.0, 0.0), (2.0, 1.0), (-1.0, -1.2)]:
            assert vmf_pdf(cluster, phi, psi) == pytest.approx(math.cos(psi) / (4 * math.pi))

    def test_peak_value(self):
        cluster = VmfCluster(1.1, 0.3, 2.0)
        expected = 2.0 / (4 * math.pi * math.sinh(2.0)) * math.exp(2.0) * math.cos(0.3)
        assert vmf_pdf(cluster, 1.1, 0.3) == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(0.30976662272235933)

    @pytest.mark.parametrize("kappa", [0.0, 1.0, 10.0, 100.0, 1000.0])
    def test_normalization(self, kappa):
        # the quadrature oracle at zero displacement integrates the bare density
        cluster = VmfCluster(0.4, -0.25, kappa)
        total = scf_quadrature(cluster, (0.0, 0.0, 0.0), 1.0)
        assert abs(total - 1.0) < 1e-9

    def test_no_overflow_at_high_concentration(self):
        cluster = VmfCluster(0.0, 0.0, 1e5)
        peak = vmf_pdf(cluster, 0.0, 0.0)
        assert math.isfinite(peak) and peak > 0
        assert vmf_pdf(cluster, math.pi, 0.0) == 0.0

    def test_domain_error(self):
        with pytest.raises(ValueError):
            vmf_pdf(VmfCluster(0, 0, 1.0), 0.0, 2.0)

    def test_vectorized(self):
        cluster = VmfCluster(0.2, 0.1, 3.0)
        phi = np.linspace(-math.pi, math.pi, 7)
        psi = np.linspace(-1.0, 1.0, 5)
        grid = vmf_pdf(cluster, phi[:, None], psi[None, :])
        assert grid.shape == (7, 5)
        assert grid[3, 2] == pytest.approx(vmf_pdf(cluster, phi[3], psi[2]))


class TestSampler:
    def test_deterministic(self):
        cluster = VmfCluster(0.5, 0.2, 8.0)
        a = sample_vmf(cluster, 1000, seed=7)
        b = sample_vmf(cluster, 1000, seed=7)
        np.testing.assert_array_equal(a, b)

    def test_unit_norm(self):
        samples = sample_vmf(VmfCluster(1.0, -0.4, 3.0), 5000, seed=3)
        assert np.max(np.abs(np.linalg.norm(samples, axis=1) - 1.0)) < 1e-12

    def test_uniform_case(self):
        samples = sample_vmf(VmfCluster(0.0, 0.0, 0.0), 100_000, seed=11)
        assert np.linalg.norm(samples.mean(axis=0)) < 0.01

    @pytest.mark.parametrize("kappa", [0.5, 5.0, 50.0])
    def test_resultant_length(self, kappa):
        cluster = VmfCluster(0.9, 0.3, kappa)
        samples = sample_vmf(cluster, 200_000, seed=int(kappa * 10))
        along = samples @ cluster.mean_direction
        observed = float(np.linalg.norm(samples.mean(axis=0)))
        stderr = float(np.std(along)) / math.sqrt(samples.shape[0])
        assert abs(observed - mean_resultant_length(kappa)) < 4 * stderr

    def test_concentrated_mean_direction(self):
        cluster = VmfCluster(-0.7, 0.45, 10.0)
        samples = sample_vmf(cluster, 1_000_000, seed=4)
        mean = samples.mean(axis=0)
        mean /= np.linalg.norm(mean)
        angle = math.acos(float(np.clip(mean @ cluster.mean_direction, -1, 1)))
        assert math.degrees(angle) < 0.5

    def test_invalid_count(self):
        with pytest.raises(ValueError):
            sample_vmf(VmfCluster(0, 0, 1.0), 0, seed=0)


class TestKappaFromWidth:
    def test_hemisphere(self):
        assert kappa_from_angular_width(math.pi) == pytest.approx(2.0, rel=1e-14)

    def test_narrow_targets(self):
        assert kappa_from_angular_width(math.radians(2.0)) == pytest.approx(13131.55873845995)
        assert kappa_from_angular_width(math.radians(0.5)) == pytest.approx(210099.93973448372)

    def test_strictly_decreasing(self):
        widths = np.linspace(0.01, 2 * math.pi - 0.01, 50)
        values = [kappa_from_angular_width(w) for w in widths]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(v > 0 for v in values)

    def test_domain(self):
        for bad in (0.0, -1.0, 2 * math.pi, 7.0):
            with pytest.raises(ValueError):
                kappa_from_angular_width(bad)


class TestCsincSqrt:
    def test_at_zero(self):
        assert csinc_sqrt(0.0) == 1.0 + 0.0j

    def test_zero_of_sinc(self):
        assert abs(csinc_sqrt(math.pi**2)) < 1e-15

    def test_negative_argument(self):
        assert csinc_sqrt(-4.0) == pytest.approx(math.sinh(2.0) / 2.0, rel=1e-14)
        assert csinc_sqrt(-4.0).imag == pytest.approx(0.0, abs=1e-16)

    def test_branch_invariance(self):
        rng = np.random.default_rng(8)
        for _ in range(1000):
            w = complex(rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4))
            z = np.sqrt(complex(w))
            a = np.sin(z) / z
            b = np.sin(-z) / (-z)
            assert abs(a - b) <= 1e-13 * abs(a)

    def test_series_matches_direct_near_switchover(self):
        rng = np.random.default_rng(9)
        for _ in range(500):
            radius = rng.uniform(0.05, 0.25)
            angle = rng.uniform(0, 2 * math.pi)
            w = radius * complex(math.cos(angle), math.sin(angle))
            series = csinc_sqrt(w)
            z = np.sqrt(complex(w))
            direct = complex(np.sin(z) / z)
            assert abs(series - direct) <= 1e-13 * abs(direct)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            csinc_sqrt(complex(math.nan, 0.0))
        with pytest.raises(ValueError):
            csinc_sqrt(complex(math.inf, 1.0))
