from fractions import Fraction as F

import pytest

from openchainq.exactq import GenericityError
from openchainq.fock import (FockSpace, agree_on_window, compose, flip_legs, identity, invert,
                             is_zero_on_window, restrict_to_block)
from openchainq.operators import (CATALOGUE, L_REPS, build_fusion, build_K, build_L, build_O,
                                  build_R, k_diagonal)

N = 8


class TestL:
    def test_rho_vacuum_plus(self, point):
        assert build_L("rho", point, point.s("z"), N).column((0, 0)) == {(0, 0): 1}

    def test_rho_vacuum_minus(self, point):
        q, z = point.q, point.s("z")
        col = build_L("rho", point, z, N).column((0, 1))
        assert col == {(1, 0): z * (1 - q * q) / q, (0, 1): 1 - q * q * z * z}

    def test_phi_vacuum(self, point):
        assert build_L("phi", point, point.s("z"), N).column((0, 0)) == {(0, 0): point.q}

    @pytest.mark.parametrize("name", L_REPS)
    def test_tilde_link(self, point, name):
        q, z = point.q, point.s("z")
        l = build_L(name, point, q * q * z, N)
        assert agree_on_window(compose(build_L(name, point, z, N, "tilde"), l), identity(l.dom))

    @pytest.mark.parametrize("name", L_REPS)
    def test_minus_is_flip(self, point, name):
        z = point.s("z")
        minus = build_L(name, point, z, N, "minus")
        assert minus.dom.layout == ("C2", "W")
        assert agree_on_window(minus, flip_legs(build_L(name, point, z, N)))

    def test_charge_preserving(self, point):
        for name in L_REPS:
            assert build_L(name, point, point.s("y"), N).is_charge_preserving


class TestK:
    @pytest.mark.parametrize("name", L_REPS)
    @pytest.mark.parametrize("side", ["right", "left"])
    def test_fixes_vacuum(self, point, name, side):
        assert build_K(name, point, point.s("z"), N, side).column((0,)) == {(0,): 1}

    def test_rho_first_entry(self, point):
        q, xi, z = point.q, point.xi, point.s("z")
        assert k_diagonal("rho", point, z, 1)[1] == -xi / q * (1 - q * q * z * z / xi)

    def test_phi_second_entry(self, point):
        q, u, xi = point.q, point.u, point.xi
        assert k_diagonal("phi", point, point.s("z"), 2)[2] == u**-4 * q**-6 * xi**2

    def test_upsilon_ratio(self, point):
        q, u, xi, z = point.q, point.u, point.xi, point.s("z")
        c = q * q / (u * u * xi)
        k = k_diagonal("upsilon", point, z, 1)
        assert k[1] / k[0] == (1 - c * z * z) / (z * z - c)

    def test_left_rho_first_entry(self, point):
        q, xt, z = point.q, point.xitilde, point.s("z")
        assert k_diagonal("rho", point, z, 1, "left")[1] == -q * xt / (1 - q**4 * xt * z * z)

    def test_pi(self, point):
        xi, z = point.xi, point.s("z")
        k = build_K("Pi", point, z, N)
        assert k.column((0,)) == {(0,): xi * z * z - 1} and k.column((1,)) == {(1,): xi - z * z}

    @pytest.mark.parametrize("name", L_REPS)
    def test_left_link(self, point, name):
        q, z = point.q, point.s("z")
        swapped = point.with_values(xi=1 / point.xitilde)
        assert agree_on_window(build_K(name, point, z, N, "left"), invert(build_K(name, swapped, q * z, N)))

    def test_vanishing_denominator(self, point):
        z = point.s("z")
        bad = point.with_values(xi=point.p / (z * z))
        with pytest.raises(GenericityError):
            build_K("rhobar", bad, z, N)


class TestR:
    def test_rho_rhobar_vacuum(self, point):
        r = build_R("rho_rhobar", point, point.s("z"), N)
        assert r.column((0, 0)) == {(0, 0): 1}

    def test_rho_rhobar_block_one(self, point):
        q, z = point.q, point.s("z")
        r = build_R("rho_rhobar", point, z, N)
        assert r.column((1, 0)) == {(1, 0): q**-2, (0, 1): -z / q}

    def test_upsilon_phi_at_zero(self, point):
        q, u = point.q, point.u
        r = build_R("upsilon_phi", point, 0, N)
        for b, col in r.cols.items():
            j1, j2 = b
            assert col == {b: u ** (2 * (j2 - j1)) * q ** ((j1 - j2) - 2 * j1 * (j2 + 1))}

    @pytest.mark.parametrize("pair", ["upsilon_phi", "rho_rhobar"])
    def test_tilde_link(self, point, pair):
        q, z = point.q, point.s("z")
        prod = compose(build_R(pair, point, z, N, tilde=True), build_R(pair, point, q * q * z, N))
        for m in range(N + 1):
            assert restrict_to_block(prod, m) == [[int(i == j) for j in range(m + 1)] for i in range(m + 1)]

    @pytest.mark.parametrize("pair", ["upsilon_phi", "rho_rhobar"])
    def test_block_preserving(self, point, pair):
        assert build_R(pair, point, point.s("y"), N).is_block_preserving


class TestO:
    def test_vacuum(self, point):
        assert build_O(point, N).column((0, 0)) == {(0, 0): 1}

    def test_block_one(self, point):
        u = point.u
        assert build_O(point, N).column((1, 0)) == {(1, 0): u, (0, 1): u}

    def test_inverse(self, point):
        prod = compose(build_O(point, N), build_O(point, N, "O_inverse"))
        assert agree_on_window(prod, identity(prod.dom))

    def test_o21_is_flip(self, point):
        assert agree_on_window(build_O(point, N, "O21"), flip_legs(build_O(point, N)))


class TestFusion:
    def test_iota_vacuum(self, point):
        q, r = point.q, point.r
        assert build_fusion("iota", point, N).column((0,)) == {(1, 0): (1 - q * q) / q, (0, 1): -q * r}

    def test_tau_vacuum(self, point):
        q, r = point.q, point.r
        tau = build_fusion("tau", point, N)
        assert tau.column((0, 0)) == {(0,): 1}
        assert tau.column((0, 1)) == {(1,): (1 - q * q) / (q * r)}

    def test_shapes(self, point):
        iota = build_fusion("iota", point, N, r=F(3, 5))
        assert iota.dom == FockSpace(N, ("W",)) and iota.cod == FockSpace(N, ("W", "C2"))

    def test_composite_vanishes(self, point):
        assert is_zero_on_window(compose(build_fusion("tau", point, N), build_fusion("iota", point, N)))


def test_catalogue_lists_constructors():
    assert set(CATALOGUE) == {"build_L", "build_K", "build_R", "build_O", "build_fusion"}
