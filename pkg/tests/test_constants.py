import math

import pytest
import scipy.integrate
import scipy.special

from treedim import (
    OffspringPmf,
    QuadratureSpec,
    adaptive_simpson,
    c_from_pk_integral,
    c_general,
    c_gw,
    c_mary,
    c_rich,
    c_rrt,
    gw_pk_prob,
    h_tail,
    lower_incomplete_gamma,
    p_leaf,
    pk_given_x,
    q_line_prob,
    trinomial,
)
from treedim.constants import _general_integrals, _mary_coefficient
from treedim.errors import DomainError, InvalidPmf, Unsupported

E2 = math.exp(2.0)
E4 = math.exp(4.0)
BST_LITERAL = (3 * E4 - 48 * E2 + 233) / 384.0


class TestIncompleteGamma:
    def test_closed_forms(self):
        assert lower_incomplete_gamma(1, 1) == pytest.approx(1 - 1 / math.e, abs=1e-14)
        assert lower_incomplete_gamma(2, 1) == pytest.approx(1 - 2 / math.e, abs=1e-14)
        assert lower_incomplete_gamma(3, 2) == pytest.approx(
            2 * (1 - 5 * math.exp(-2)), abs=1e-13
        )

    def test_against_scipy(self):
        for s in (0.3, 0.9, 1.5, 2.25, 3.0, 5.5, 8.0):
            for t in (0.0, 0.2, 1.0, 2.5, 6.25, 15.0):
                reference = scipy.special.gammainc(s, t) * math.gamma(s)
                assert lower_incomplete_gamma(s, t) == pytest.approx(
                    reference, rel=1e-12, abs=1e-15
                )

    def test_domain(self):
        with pytest.raises(DomainError):
            lower_incomplete_gamma(0, 1)
        with pytest.raises(DomainError):
            lower_incomplete_gamma(1, -0.5)


class TestTrinomial:
    def test_values(self):
        assert trinomial(2, 1, 1) == 2
        assert trinomial(3, 1, 1) == 6
        assert trinomial(5, 2, 2) == 30

    def test_large_is_exact(self):
        assert trinomial(60, 20, 20) == math.factorial(60) // (
            math.factorial(20) ** 2 * math.factorial(20)
        )

    def test_domain(self):
        with pytest.raises(DomainError):
            trinomial(3, 2, 2)
        with pytest.raises(DomainError):
            trinomial(3, -1, 1)


class TestQuadrature:
    def test_polynomial(self):
        value, err = adaptive_simpson(lambda x: x * x, 0.0, 1.0)
        assert value == pytest.approx(1 / 3, abs=1e-13)
        assert err >= 0

    def test_oscillatory_vs_scipy(self):
        value, _ = adaptive_simpson(lambda x: math.sin(3 * x) * math.exp(-x), 0.0, 4.0)
        reference = scipy.integrate.quad(
            lambda x: math.sin(3 * x) * math.exp(-x), 0, 4, epsabs=1e-14
        )[0]
        assert value == pytest.approx(reference, abs=1e-11)

    def test_reversed_bounds(self):
        forward, _ = adaptive_simpson(math.exp, 0.0, 1.0)
        backward, _ = adaptive_simpson(math.exp, 1.0, 0.0)
        assert backward == -forward

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(rel_tol=-1)
        with pytest.raises(DomainError):
            QuadratureSpec(max_depth=3)


class TestGWConstant:
    def test_poisson(self):
        result = c_gw(OffspringPmf.poisson(1.0))
        exact = 1 / math.e - 1 + math.exp(-1 / (math.e - 1)) + (1 / math.e) / (math.e - 1)
        assert result.value == pytest.approx(exact, abs=1e-14)
        assert result.value == pytest.approx(0.14076941, abs=1e-7)
        assert result.method == "closed_form"

    def test_half_half(self):
        pmf = OffspringPmf.from_probs([0.5, 0.0, 0.5])
        assert c_gw(pmf).value == pytest.approx(0.125, abs=1e-15)

    def test_geometric(self):
        pmf = OffspringPmf.geometric(0.5, kmax=60)
        assert c_gw(pmf).value == pytest.approx(4 / 15, abs=1e-12)

    def test_non_critical_rejected(self):
        pmf = OffspringPmf.from_probs([0.6, 0.4])
        with pytest.raises(InvalidPmf):
            c_gw(pmf)

    def test_pk_probability(self):
        pmf = OffspringPmf.poisson(1.0)
        q = 1 / (math.e - 1)
        expected = 1 - math.exp(-q) - q / math.e
        assert gw_pk_prob(pmf) == pytest.approx(expected, abs=1e-12)
        # leaves minus branching vertices reproduces the constant
        assert pmf.p0 - gw_pk_prob(pmf) == pytest.approx(c_gw(pmf).value, abs=1e-12)


class TestMaryConstant:
    def test_m2_coefficients_pin_the_signs(self):
        assert _mary_coefficient(2, 1, 1) == pytest.approx(E2 / 2**4, rel=1e-14)
        assert _mary_coefficient(2, 1, 0) == pytest.approx(-E2 / 2**2, rel=1e-14)
        assert _mary_coefficient(2, 2, 0) == pytest.approx(E4 / 2**8, rel=1e-14)

    def test_m2_closed_form(self):
        result = c_mary(2)
        assert abs(result.value - BST_LITERAL) <= 1e-12
        assert result.abs_error_estimate <= 1e-8

    def test_table_values(self):
        assert c_mary(3).value == pytest.approx(0.15812, abs=5e-5)
        assert c_mary(4).value == pytest.approx(0.18377, abs=5e-5)
        assert c_mary(5).value == pytest.approx(0.19953, abs=5e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            c_mary(1)


class TestRRTConstant:
    def test_value(self):
        assert c_rrt().value == pytest.approx(0.263709059, abs=1e-8)

    def test_against_scipy(self):
        integral = scipy.integrate.quad(
            lambda x: math.exp(-x) / x, 1, math.e, epsabs=1e-14, epsrel=1e-14
        )[0]
        reference = math.e * (integral + (1 - 2 / math.e)) - 1
        assert c_rrt().value == pytest.approx(reference, abs=1e-11)

    def test_matches_general_dispatch(self):
        assert c_general(1.0, 0).value == c_rrt().value


class TestRichConstant:
    def test_table(self):
        assert c_rich(1.0).value == pytest.approx(0.50120, abs=5e-5)
        assert c_rich(2.0).value == pytest.approx(0.40304, abs=5e-5)
        assert c_rich(0.1).value == pytest.approx(0.87501, abs=5e-5)

    def test_integral_split_published_values(self):
        i1, i2, _ = _general_integrals(1.0, 1, QuadratureSpec())
        assert i1 == pytest.approx(0.679824, abs=1e-6)
        assert i2 == pytest.approx(0.821372, abs=1e-6)

    def test_second_integral_gamma_identity(self):
        # I2 = e^r r^-(1+r) gamma(1+r, r) with r = rho/(rho+chi)
        for rho, chi in ((1.0, 1), (2.0, 1), (0.1, 1), (2.0, -1), (5.0, -1)):
            r = rho / (rho + chi)
            closed = math.exp(r) * r ** (-(1 + r)) * lower_incomplete_gamma(1 + r, r)
            _, i2, _ = _general_integrals(rho, chi, QuadratureSpec())
            assert i2 == pytest.approx(closed, abs=2e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            c_rich(0.0)


class TestGeneralConstant:
    def test_matches_mary(self):
        for m in (2, 3, 4, 5):
            assert abs(c_general(float(m), -1).value - c_mary(m).value) <= 1e-9

    def test_matches_rich(self):
        assert abs(c_general(1.0, 1).value - c_rich(1.0).value) <= 1e-9

    def test_chi_zero_requires_unit_rho(self):
        with pytest.raises(Unsupported):
            c_general(2.0, 0)

    def test_degenerate_path_model_rejected(self):
        with pytest.raises(DomainError):
            c_general(1.0, -1)

    def test_non_integer_rho_with_negative_chi_rejected(self):
        with pytest.raises(DomainError):
            c_general(2.5, -1)

    def test_all_constants_in_unit_interval(self):
        values = [
            c_mary(2).value,
            c_rrt().value,
            c_gw(OffspringPmf.poisson(1.0)).value,
            c_rich(0.1).value,
            c_rich(10.0).value,
            c_general(5.0, -1).value,
        ]
        assert all(0.0 < v < 1.0 for v in values)

    def test_rich_monotone_on_grid(self):
        # observed on the evaluation grid; logged rather than a theorem
        grid = [0.1, 0.5, 1.0, 2.0]
        values = [c_rich(r).value for r in grid]
        print("rich-get-richer constants over rho grid:", list(zip(grid, values)))
        assert values == sorted(values, reverse=True)

    def test_halving_tolerances_stays_within_reported_error(self):
        tight = QuadratureSpec(rel_tol=5e-11, abs_tol=5e-13)
        for make in (
            lambda spec: c_rrt(spec),
            lambda spec: c_rich(1.0, spec),
            lambda spec: c_general(5.0, -1, spec),
            lambda spec: c_general(0.1, 1, spec),
        ):
            default = make(QuadratureSpec())
            refined = make(tight)
            assert abs(default.value - refined.value) <= default.abs_error_estimate
            assert default.abs_error_estimate <= 1e-8


class TestConditionalPieces:
    def test_q_limits_to_one_at_small_x(self):
        for rho, chi in ((1.0, 0), (1.0, 1), (2.0, -1)):
            assert q_line_prob(rho, chi, 1e-9) == pytest.approx(1.0, abs=1e-8)

    def test_q_recursive_model(self):
        expected = math.exp(1 - math.exp(-1)) - 1
        assert q_line_prob(1.0, 0, 1.0) == pytest.approx(expected, abs=1e-14)

    def test_q_decreases_in_x(self):
        values = [q_line_prob(1.0, 1, x) for x in (0.25, 0.5, 1.0, 2.0, 4.0)]
        assert values == sorted(values, reverse=True)

    def test_q_domain(self):
        with pytest.raises(DomainError):
            q_line_prob(1.0, 1, 0.0)
        with pytest.raises(Unsupported):
            q_line_prob(2.0, 0, 1.0)

    def test_h_tail_values(self):
        assert h_tail(1, 1, 0) == 1.0
        assert h_tail(1, 1, 1) == pytest.approx(math.exp(-1 / math.e), abs=1e-14)
        assert h_tail(1, 2, 2) == pytest.approx(
            math.exp(-2 + 0.5 * (1 - math.exp(-4))), abs=1e-14
        )

    def test_h_tail_asymptote(self):
        # for large t the tail behaves like e^(-lam t + lam/nu)
        assert h_tail(1, 1, 40) / math.exp(-40 + 1) == pytest.approx(1.0, rel=1e-12)

    def test_h_tail_domain(self):
        with pytest.raises(DomainError):
            h_tail(0, 1, 1)
        with pytest.raises(DomainError):
            h_tail(1, 1, -1)

    def test_pk_limits_to_zero_at_small_x(self):
        for rho, chi in ((1.0, 0), (1.0, 1), (2.0, -1)):
            assert pk_given_x(rho, chi, 1e-9) == pytest.approx(0.0, abs=1e-12)

    def test_pk_recursive_model_hand_value(self):
        expected = (
            1
            - math.exp(1 - math.exp(1 - 1 / math.e))
            - math.exp(-1 / math.e)
            + math.exp(-1)
        )
        assert pk_given_x(1.0, 0, 1.0) == pytest.approx(expected, abs=1e-14)

    def test_p_leaf(self):
        assert p_leaf(2.0, -1) == pytest.approx(1 / 3, abs=1e-15)
        assert p_leaf(1.0, 1) == pytest.approx(2 / 3, abs=1e-15)

    def test_unmerged_integral_reproduces_constants(self):
        value, _ = c_from_pk_integral(1.0, 0)
        assert value == pytest.approx(c_rrt().value, abs=1e-8)
        value, _ = c_from_pk_integral(1.0, 1)
        assert value == pytest.approx(c_general(1.0, 1).value, abs=1e-8)
        value, _ = c_from_pk_integral(2.0, -1)
        assert value == pytest.approx(c_mary(2).value, abs=1e-8)
