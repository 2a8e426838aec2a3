import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiagm import (
    QuartetParams,
    QuartetTrace,
    SignSchedule,
    complete_E,
    complete_K,
    complete_from_complement,
    incomplete_F,
    jacobi_Z,
    quad_E_inc,
    quad_F,
    quartet_step,
    run_quartet,
)

K_SQRT09375 = math.sqrt(0.9375)


def params(b=0.25, sinphi=0.5, signb=1, **kw):
    b = complex(b)
    k = cmath.sqrt((1 - b) * (1 + b))
    return QuartetParams(k=k, sinphi=sinphi, signb=signb, complement=b, **kw)


class TestQuartetStep:
    def test_fixed_point(self):
        assert quartet_step((1, 1, 1, 1)) == (1, 1, 1, 1)

    def test_generic_row_and_identity(self):
        a, g, u, v = quartet_step((1, 0.25, 1, 1))
        assert a == 0.625
        assert g == 0.5
        assert u == 1
        assert v == pytest.approx(math.sqrt(4 - 0.5625) / 2, rel=1e-15)
        lhs = a * a - g * g
        rhs = u * u - v * v
        assert abs(lhs - rhs) <= 1e-15

    def test_sigma_flip_negates_g(self):
        _, g, _, _ = quartet_step((1, 0.25, 1, 1), sigma=-1)
        assert g == -0.5


class TestRunQuartet:
    def test_classical_limit(self):
        trace = run_quartet(params())
        K = complete_K(trace)
        assert trace.a_inf == pytest.approx(0.5607572, abs=1e-7)
        assert K == pytest.approx(2.80121, abs=1e-5)
        assert K == pytest.approx(2.801206084665204, rel=1e-13)
        assert trace.converged and not trace.ill_conditioned

    @pytest.mark.parametrize("k", [0.1, 0.5, K_SQRT09375])
    def test_all_plus_limit_matches_oracle(self, k):
        from multiagm import ref_complete

        K_ref, _ = ref_complete(k)
        K = complete_K(run_quartet(QuartetParams(k=k, sinphi=0.5)))
        assert abs(K - K_ref) <= 1e-12 * abs(K_ref)

    def test_amplitude_copies_mean_pair_at_sinphi_one(self):
        trace = run_quartet(params(sinphi=1.0))
        for a, g, u, v in trace.rows:
            assert u == pytest.approx(a, rel=1e-13, abs=1e-15)
            assert v == pytest.approx(g, rel=1e-13, abs=1e-15)

    def test_zero_modulus_degenerates(self):
        trace = run_quartet(QuartetParams(k=0, sinphi=0.5))
        for a, g, _, _ in trace.rows:
            assert a == 1 and g == 1
        assert trace.s_sum == 0

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            QuartetParams(k=0.5, sinphi=0)
        with pytest.raises(ValueError):
            QuartetParams(k=0.5, sinphi=1, signb=2)
        with pytest.raises(ValueError):
            QuartetParams(k=0.5, sinphi=1, max_iter=0)
        with pytest.raises(ValueError):
            QuartetParams(k=0.5, sinphi=1, conv_tol=0.0)

    def test_singular_modulus_flags(self):
        trace = run_quartet(QuartetParams(k=1, sinphi=0.5))
        assert trace.ill_conditioned
        assert not trace.converged

    def test_identity_random_draws(self):
        rng = random.Random(1234)
        for _ in range(100):
            rk = 0.99 * math.sqrt(rng.random())
            tk = rng.uniform(0, 2 * math.pi)
            rs = rng.uniform(0.3, 2.0)
            ts = rng.uniform(0, 2 * math.pi)
            p = QuartetParams(
                k=complex(rk * math.cos(tk), rk * math.sin(tk)),
                sinphi=complex(rs * math.cos(ts), rs * math.sin(ts)),
            )
            sched = SignSchedule(rng.getrandbits(8), rng.getrandbits(8), rng.getrandbits(8))
            trace = run_quartet(p, sched)
            for a, g, u, v in trace.rows:
                lhs = a * a - g * g
                rhs = u * u - v * v
                scale = max(abs(a) ** 2, abs(g) ** 2, abs(u) ** 2, abs(v) ** 2)
                if scale == 0:
                    assert lhs == rhs
                else:
                    assert abs(lhs - rhs) <= 1e-10 * scale

    def test_identity_on_default_sweep_rows(self):
        # on the standard sweep the identity holds even relative to the
        # smaller of the two chain scales
        for smask in range(32):
            trace = run_quartet(params(), SignSchedule(sigma_mask=smask))
            for a, g, u, v in trace.rows:
                denom = max(abs(a) ** 2, abs(u) ** 2)
                assert abs((a * a - g * g) - (u * u - v * v)) <= 1e-10 * denom

    def test_quadratic_gap_decay(self):
        trace = run_quartet(params(b=0.1))
        gaps = [abs(a - g) for a, g, _, _ in trace.rows]
        mags = [abs(a) for a, _, _, _ in trace.rows]
        for n in range(len(gaps) - 1):
            if 0 < gaps[n] < 0.1 and gaps[n + 1] > 0:
                assert gaps[n + 1] <= gaps[n] ** 2 / (2 * mags[n] * 0.9)

    def test_gamma_only_touches_zeta(self):
        base = run_quartet(params(sinphi=0.8), SignSchedule(sigma_mask=3, delta_mask=5))
        flipped = run_quartet(params(sinphi=0.8), SignSchedule(sigma_mask=3, delta_mask=5, gamma_mask=0b1101))
        assert flipped.a_inf == base.a_inf
        assert flipped.u_inf == base.u_inf
        assert flipped.s_sum == base.s_sum
        assert flipped.rows == base.rows
        assert flipped.z_sum != base.z_sum

    def test_deterministic(self):
        sched = SignSchedule(11, 6, 9)
        t1 = run_quartet(params(sinphi=0.8), sched)
        t2 = run_quartet(params(sinphi=0.8), sched)
        assert t1 == t2


class TestTraceValues:
    def test_complete_K_zero_modulus(self):
        assert complete_K(run_quartet(QuartetParams(k=0, sinphi=0.5))) == math.pi / 2

    def test_sigma0_flip_offsets_by_four_quarter_periods(self):
        K_b, _ = complete_from_complement(complex(K_SQRT09375))
        base = complete_K(run_quartet(params()))
        flipped = complete_K(run_quartet(params(), SignSchedule(sigma_mask=1)))
        dist = min(abs(flipped - (base + 4j * K_b)), abs(flipped - (base - 4j * K_b)))
        assert dist < 1e-9

    def test_signb_flip_offsets_by_two_quarter_periods(self):
        K_b, _ = complete_from_complement(complex(K_SQRT09375))
        base = complete_K(run_quartet(params()))
        black = complete_K(run_quartet(params(signb=-1)))
        dist = min(abs(black - (base + 2j * K_b)), abs(black - (base - 2j * K_b)))
        assert dist < 1e-9

    def test_F_equals_K_at_full_amplitude(self):
        trace = run_quartet(params(sinphi=1.0))
        assert incomplete_F(trace) == pytest.approx(complete_K(trace), rel=1e-12)

    def test_F_branch_arithmetic(self):
        trace = run_quartet(params(sinphi=0.8))
        four_k = 4 * complete_K(trace)
        assert incomplete_F(trace, 2) - incomplete_F(trace, 0) == pytest.approx(four_k, rel=1e-13)
        assert incomplete_F(trace, 1) == pytest.approx(2 * complete_K(trace) - incomplete_F(trace, 0), rel=1e-13)

    def test_F_matches_quadrature(self):
        trace = run_quartet(params(sinphi=0.8))
        oracle = quad_F(math.asin(0.8), K_SQRT09375)
        assert incomplete_F(trace) == pytest.approx(oracle, abs=1e-8)

    def test_E_matches_oracle(self):
        trace = run_quartet(params())
        _, E_k = complete_from_complement(0.25)
        assert complete_E(trace) == pytest.approx(E_k, abs=1e-9)

    def test_E_over_K_ratio(self):
        trace = run_quartet(params())
        ratio = complete_E(trace) / complete_K(trace)
        assert ratio == pytest.approx(0.38280036865719, rel=1e-12)

    def test_zeta_printed_value(self):
        trace = run_quartet(params(sinphi=0.5))
        assert jacobi_Z(trace) == pytest.approx(0.2920, abs=5e-4)
        assert jacobi_Z(trace) == pytest.approx(0.29195724584282772, rel=1e-12)

    def test_zeta_vanishes_at_full_amplitude(self):
        trace = run_quartet(params(sinphi=1.0))
        assert abs(jacobi_Z(trace)) < 1e-10

    def test_zeta_decomposition(self):
        trace = run_quartet(params(sinphi=0.8))
        phi = math.asin(0.8)
        K_k, E_k = complete_from_complement(0.25)
        oracle = quad_E_inc(phi, K_SQRT09375) - quad_F(phi, K_SQRT09375) * (E_k / K_k).real
        assert jacobi_Z(trace) == pytest.approx(oracle, abs=1e-8)

    def test_degenerate_accessors_raise(self):
        trace = run_quartet(params())
        broken = QuartetTrace(
            rows=trace.rows,
            s_sum=trace.s_sum,
            z_sum=complex(math.nan, math.nan),
            a_inf=trace.a_inf,
            u_inf=0j,
            converged=False,
            ill_conditioned=True,
            zeta_defined=False,
        )
        with pytest.raises(ValueError, match="amplitude limit degenerate"):
            incomplete_F(broken)
        with pytest.raises(ValueError, match="u=0"):
            jacobi_Z(broken)


@given(
    sigma=st.integers(min_value=0, max_value=255),
    delta=st.integers(min_value=0, max_value=255),
    gamma=st.integers(min_value=0, max_value=255),
)
@settings(max_examples=50, deadline=None)
def test_schedule_generation_is_last_nontrivial_bit(sigma, delta, gamma):
    sched = SignSchedule(sigma, delta, gamma)
    expected = max(sigma.bit_length(), delta.bit_length(), gamma.bit_length())
    assert sched.generation() == expected
    assert all(sched.sigma(n) == 1 for n in range(sigma.bit_length(), 12))
