from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from openchainq.exactq import (Admissibility, GenericityError, InadmissibleError, NotNilpotentError,
                               ParamPoint, SamplingExhausted, as_scalar, certificates,
                               check_admissible, format_scalar, mat_identity, mat_mul, q_pochhammer,
                               qexp_big_nilpotent, qexp_nilpotent, sample_params, sample_points)

nonunit = st.fractions(min_value=-3, max_value=3, max_denominator=9).filter(lambda x: x not in (0, 1, -1))
small = st.fractions(min_value=-3, max_value=3, max_denominator=9)


def direct_poch(x, p, n):
    # independent oracle: the defining product written out
    out = F(1)
    if n >= 0:
        for m in range(n):
            out *= 1 - x * p**m
        return out
    for m in range(n, 0):
        out /= 1 - x * p**m
    return out


class TestPochhammer:
    def test_empty_product(self):
        assert q_pochhammer(F(1, 3), F(1, 2), 0) == 1

    def test_two_factors(self):
        assert q_pochhammer(F(1, 3), F(1, 2), 2) == F(5, 9)

    def test_negative_index(self):
        assert q_pochhammer(F(1, 2), F(1, 3), -1) == -2

    def test_vanishing_factor_names_index(self):
        with pytest.raises(GenericityError, match="m=-1"):
            q_pochhammer(F(1, 2), F(1, 2), -1)

    @given(small, nonunit, st.integers(-6, 6))
    def test_matches_direct_product(self, x, p, n):
        try:
            expected = direct_poch(x, p, n)
        except ZeroDivisionError:
            with pytest.raises(GenericityError):
                q_pochhammer(x, p, n)
            return
        assert q_pochhammer(x, p, n) == expected

    @given(small, nonunit, st.integers(-5, 5))
    def test_shift_recurrence(self, x, p, n):
        try:
            lhs = q_pochhammer(x, p, n + 1)
            rhs = q_pochhammer(x, p, n) * (1 - x * p**n)
        except GenericityError:
            return
        assert lhs == rhs

    @given(nonunit, nonunit, st.integers(0, 6))
    def test_negative_index_forms(self, x, p, n):
        try:
            forms = {q_pochhammer(x, p, -n), 1 / q_pochhammer(p**-n * x, p, n),
                     1 / q_pochhammer(x / p, 1 / p, n),
                     (-x) ** -n * p ** (n * (n + 1) // 2) / q_pochhammer(p / x, p, n)}
        except (GenericityError, ZeroDivisionError):
            return
        assert len(forms) == 1


def upper(dim, entries):
    m = [[F(0)] * dim for _ in range(dim)]
    k = 0
    for i in range(dim):
        for j in range(i + 1, dim):
            m[i][j] = entries[k % len(entries)]
            k += 1
    return m


nilpotents = st.integers(1, 6).flatmap(
    lambda d: st.lists(small, min_size=1, max_size=15).map(lambda e: upper(d, e)))


class TestQexp:
    def test_zero_matrix(self):
        assert qexp_nilpotent(F(1, 2), [[F(0)] * 3 for _ in range(3)]) == mat_identity(3)

    def test_single_entry(self):
        c = F(7, 5)
        assert qexp_nilpotent(F(1, 2), [[0, c], [0, 0]]) == [[1, 2 * c], [0, 1]]

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotentError):
            qexp_nilpotent(F(1, 2), [[F(1), F(0)], [F(0), F(0)]])

    @given(nonunit, nilpotents)
    def test_big_exponential_is_inverse(self, p, m):
        neg = [[-x for x in row] for row in m]
        assert mat_mul(qexp_nilpotent(p, m), qexp_big_nilpotent(p, neg)) == mat_identity(len(m))

    @given(nonunit, nilpotents)
    def test_functional_relation(self, p, m):
        dim = len(m)
        pm = [[p * x for x in row] for row in m]
        one_minus = [[F(int(i == j)) - m[i][j] for j in range(dim)] for i in range(dim)]
        assert qexp_nilpotent(p, pm) == mat_mul(one_minus, qexp_nilpotent(p, m))


class TestScalars:
    def test_format(self):
        assert format_scalar(F(-3, 4)) == "-3/4"
        assert format_scalar(2) == "2/1"

    def test_parse(self):
        assert as_scalar("3/4") == F(3, 4)
        with pytest.raises(ValueError):
            as_scalar("abc")
        with pytest.raises(TypeError):
            as_scalar(0.5)


class TestSampling:
    def test_deterministic(self):
        assert sample_params(1) == sample_params(1)
        assert sample_params(1) != sample_params(2)

    def test_certificates_hold(self):
        point = sample_params(1)
        assert all(certificates(point, 12).values())
        check_admissible(point, 12)

    def test_pinned_q_one_exhausts(self):
        with pytest.raises(SamplingExhausted):
            sample_params(0, Admissibility(fixed={"q": 1}, max_retries=5))

    def test_fixed_values_respected(self):
        point = sample_params(3, Admissibility(fixed={"q": "2/3", "z": "5/7"}))
        assert point.q == F(2, 3) and point.s("z") == F(5, 7)

    def test_resonant_point_rejected(self):
        point = sample_params(4)
        bad = point.with_values(z=1 / point.q)
        with pytest.raises(InadmissibleError):
            check_admissible(bad, 10)

    def test_dict_round_trip(self):
        point = sample_params(5)
        assert ParamPoint.from_dict(point.to_dict()) == point

    def test_points_independent(self):
        pts = sample_points(2, 3)
        assert len(set(pts)) == 3
