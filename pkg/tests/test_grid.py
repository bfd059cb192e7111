import dataclasses
import math

import numpy as np
import pytest

from bhgs import (
    DomainError,
    RadialField,
    build_grid,
    integrate,
    laplacian,
    load_field,
    mass_dilate,
    save_field,
    scale_field,
    sphere_area,
)

PI_52 = math.pi ** 2.5                    # integral of e^{-r^2} over R^5
BEND_GAUSS = 8.75 * PI_52                 # |Delta e^{-r^2/2}|_2^2 over R^5


def gaussian(grid, a=0.5):
    return RadialField(grid, np.exp(-a * grid.nodes ** 2))


class TestBuildValidation:
    def test_rejects_low_dim(self):
        with pytest.raises(DomainError):
            build_grid(4, 128, 10.0)

    def test_rejects_float_dim(self):
        with pytest.raises(DomainError):
            build_grid(5.0, 128, 10.0)

    def test_rejects_small_n(self):
        with pytest.raises(DomainError):
            build_grid(5, 63, 10.0)

    def test_rejects_float_n(self):
        with pytest.raises(DomainError):
            build_grid(5, 128.0, 10.0)

    def test_rejects_bad_r_max(self):
        with pytest.raises(DomainError):
            build_grid(5, 128, 0.0)
        with pytest.raises(DomainError):
            build_grid(5, 128, -3.0)

    def test_grid_shape(self):
        g = build_grid(5, 128, 10.0)
        assert g.nodes.shape == (128,) and g.weights.shape == (128,)
        assert g.nodes[0] == 0.0 and g.nodes[-1] == 10.0
        assert g.h == pytest.approx(10.0 / 127.0, rel=1e-15)

    def test_same_as(self):
        a = build_grid(5, 128, 10.0)
        b = build_grid(5, 128, 10.0)
        c = build_grid(5, 128, 12.0)
        assert a.same_as(b) and not a.same_as(c)


class TestSphereArea:
    def test_n5(self):
        assert sphere_area(5) == pytest.approx(8.0 * math.pi ** 2 / 3.0, rel=1e-15)

    def test_n6(self):
        assert sphere_area(6) == pytest.approx(math.pi ** 3, rel=1e-15)


class TestQuadrature:
    @pytest.mark.parametrize("dim", [5, 6, 7, 8, 9, 10])
    def test_weights_nonnegative(self, dim):
        g = build_grid(dim, 128, 7.0)
        assert np.all(g.weights >= 0.0)

    @pytest.mark.parametrize("dim", [5, 8])
    @pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
    def test_monomial_exactness(self, dim, m):
        # r^m integrates exactly for m <= 4: the corrections are built in
        # Fraction arithmetic, only the final float cast rounds
        g = build_grid(dim, 101, 3.0)
        got = integrate(g, g.nodes ** m)
        want = sphere_area(dim) * 3.0 ** (m + dim) / (m + dim)
        assert got == pytest.approx(want, rel=5e-14)

    def test_degree_five_nearly_exact(self):
        g = build_grid(5, 101, 3.0)
        got = integrate(g, g.nodes ** 5)
        want = sphere_area(5) * 3.0 ** 10 / 10.0
        assert got == pytest.approx(want, rel=1e-9)

    def test_ball_volume(self):
        g = build_grid(5, 101, 1.0)
        assert integrate(g, np.ones(g.n)) == pytest.approx(
            8.0 * math.pi ** 2 / 15.0, rel=1e-13)

    def test_gaussian_mass_oracle(self, grid12):
        got = integrate(grid12, np.exp(-grid12.nodes ** 2))
        assert got == pytest.approx(PI_52, rel=1e-10)

    def test_gaussian_mass_oracle_n6(self):
        g = build_grid(6, 257, 10.0)
        got = integrate(g, np.exp(-g.nodes ** 2))
        assert got == pytest.approx(math.pi ** 3, rel=1e-8)

    def test_length_mismatch(self, grid12):
        with pytest.raises(DomainError):
            integrate(grid12, np.ones(7))


class TestLaplacian:
    def test_gaussian_symbolic(self, grid12):
        # Delta e^{-r^2/2} = (r^2 - 5) e^{-r^2/2} in five dimensions
        r = grid12.nodes
        u = gaussian(grid12)
        want = (r ** 2 - 5.0) * np.exp(-0.5 * r ** 2)
        err = np.max(np.abs(laplacian(u).values - want))
        assert err <= 1e-6

    def test_fourth_order_convergence(self):
        errs = []
        for n in (257, 513, 1025):
            g = build_grid(5, n, 12.0)
            r = g.nodes
            want = (r ** 2 - 5.0) * np.exp(-0.5 * r ** 2)
            errs.append(np.max(np.abs(laplacian(gaussian(g)).values - want)))
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) >= 3.9

    def test_exact_on_r_squared(self):
        # the five-point stencil differentiates quartics exactly; rows near
        # r = R see the zero extension, so restrict to the interior
        g = build_grid(5, 257, 12.0)
        got = (g.lap @ (g.nodes ** 2))[: g.n - 3]
        assert np.max(np.abs(got - 10.0)) <= 1e-8

    def test_exact_on_r_fourth(self):
        g = build_grid(5, 257, 12.0)
        want = 28.0 * g.nodes ** 2
        got = g.lap @ (g.nodes ** 4)
        assert np.max(np.abs((got - want)[: g.n - 3])) <= 1e-7

    def test_transpose_is_cached(self, grid12):
        d = abs(grid12.lap_t - grid12.lap.T)
        assert d.max() == 0.0


class TestRadialField:
    def test_length_check(self, grid12):
        with pytest.raises(DomainError):
            RadialField(grid12, np.ones(5))

    def test_finiteness_check(self, grid12):
        bad = np.ones(grid12.n)
        bad[3] = np.nan
        with pytest.raises(DomainError):
            RadialField(grid12, bad)

    def test_frozen(self, grid12):
        fld = gaussian(grid12)
        with pytest.raises(dataclasses.FrozenInstanceError):
            fld.values = np.zeros(grid12.n)


class TestScaleField:
    def test_rejects_nonpositive(self, grid30):
        with pytest.raises(DomainError):
            scale_field(gaussian(grid30), 0.0)
        with pytest.raises(DomainError):
            scale_field(gaussian(grid30), -1.0)

    def test_identity(self, grid30):
        u = gaussian(grid30)
        v = scale_field(u, 1.0)
        assert v.values is not u.values
        assert np.array_equal(v.values, u.values)

    @pytest.mark.parametrize("s", [0.5, 2.0, 4.0])
    def test_matches_analytic_gaussian(self, grid30, s):
        # the Gaussian family is closed under the dilation
        r = grid30.nodes
        got = scale_field(gaussian(grid30), s).values
        want = s ** 1.25 * np.exp(-0.5 * s * r ** 2)
        assert np.max(np.abs(got - want)) <= 1e-4 * np.max(np.abs(want))

    @pytest.mark.parametrize("s", [0.5, 2.0])
    def test_mass_preserved(self, grid30, s):
        u = gaussian(grid30)
        m0 = integrate(grid30, u.values ** 2)
        m1 = integrate(grid30, scale_field(u, s).values ** 2)
        assert m1 == pytest.approx(m0, rel=1e-6)

    def test_bend_scaling_law(self, grid30):
        u = gaussian(grid30)
        b0 = integrate(grid30, laplacian(u).values ** 2)
        b2 = integrate(grid30, laplacian(scale_field(u, 2.0)).values ** 2)
        assert b2 == pytest.approx(4.0 * b0, rel=1e-4)

    def test_composition(self, grid30):
        u = gaussian(grid30)
        via = scale_field(scale_field(u, 2.0), 3.0)
        direct = scale_field(u, 6.0)
        peak = np.max(np.abs(direct.values))
        assert np.max(np.abs(via.values - direct.values)) <= 1e-4 * peak


class TestMassDilate:
    def test_moves_mass(self, grid30):
        u = gaussian(grid30)
        v = mass_dilate(u, PI_52, 2.0)
        assert integrate(grid30, v.values ** 2) == pytest.approx(2.0, rel=1e-6)

    def test_preserves_bend(self, grid30):
        u = gaussian(grid30)
        v = mass_dilate(u, PI_52, 2.0)
        b0 = integrate(grid30, laplacian(u).values ** 2)
        b1 = integrate(grid30, laplacian(v).values ** 2)
        assert b1 == pytest.approx(b0, rel=1e-5)

    def test_q_norm_law(self, grid30):
        u = gaussian(grid30)
        c_to = 2.0
        v = mass_dilate(u, PI_52, c_to)
        s0 = integrate(grid30, np.abs(u.values) ** 3)
        s1 = integrate(grid30, np.abs(v.values) ** 3)
        # exponent (2N - q(N-4))/8 = 7/8 for N=5, q=3
        assert s1 / s0 == pytest.approx((c_to / PI_52) ** 0.875, rel=1e-5)

    def test_identity_when_masses_equal(self, grid30):
        u = gaussian(grid30)
        v = mass_dilate(u, PI_52, PI_52)
        assert np.array_equal(v.values, u.values)

    def test_rejects_wrong_declared_mass(self, grid30):
        with pytest.raises(DomainError):
            mass_dilate(gaussian(grid30), 1.0, 2.0)

    def test_rejects_nonpositive_masses(self, grid30):
        with pytest.raises(DomainError):
            mass_dilate(gaussian(grid30), PI_52, 0.0)


class TestFieldCsv:
    @pytest.fixture()
    def small(self):
        return build_grid(5, 64, 5.0)

    def test_roundtrip_bitwise(self, small, tmp_path, rng):
        vals = rng.standard_normal(small.n)
        path = tmp_path / "f.csv"
        save_field(RadialField(small, vals), path)
        back = load_field(path, small)
        assert np.array_equal(back.values, vals)
        assert back.grid is small

    def test_roundtrip_without_grid(self, small, tmp_path):
        path = tmp_path / "f.csv"
        save_field(gaussian(small), path)
        back = load_field(path)
        assert back.grid.same_as(small)
        assert np.array_equal(back.values, gaussian(small).values)

    def test_rejects_grid_mismatch(self, small, tmp_path):
        path = tmp_path / "f.csv"
        save_field(gaussian(small), path)
        other = build_grid(5, 128, 5.0)
        with pytest.raises(DomainError, match="does not match"):
            load_field(path, other)

    def test_rejects_missing_header(self, small, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("r,value\n0.0,1.0\n")
        with pytest.raises(DomainError, match="header"):
            load_field(path, small)

    def test_rejects_malformed_header(self, small, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("# dim=five n=64 r_max=5.0\nr,value\n")
        with pytest.raises(DomainError, match="malformed"):
            load_field(path, small)

    def test_rejects_wrong_column_header(self, small, tmp_path):
        path = tmp_path / "f.csv"
        save_field(gaussian(small), path)
        lines = path.read_text().splitlines()
        lines[1] = "radius,u"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(DomainError, match="r,value"):
            load_field(path, small)

    def test_rejects_truncated_rows(self, small, tmp_path):
        path = tmp_path / "f.csv"
        save_field(gaussian(small), path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-5]) + "\n")
        with pytest.raises(DomainError, match="rows"):
            load_field(path, small)

    def test_rejects_tampered_radius_column(self, small, tmp_path):
        path = tmp_path / "f.csv"
        save_field(gaussian(small), path)
        lines = path.read_text().splitlines()
        lines[10] = "99.5," + lines[10].split(",")[1]
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(DomainError, match="disagrees"):
            load_field(path, small)
