import math

import numpy as np
import pytest

from homspec.analysis import (
    HypothesisViolation,
    NonPositiveValuesInWindow,
    OrderTooLargeForGeneralCase,
    SequenceTooShort,
    WindowTooSmall,
    check_counting_lemmas,
    fit_decay,
    rate_diagnostic,
    theorem_exponent,
    verify_theorem,
    weyl_check,
    weyl_partial_products,
    weyl_random_sweep,
    _eigen_moduli_general,
)
from homspec.geometry import SpaceKind, space_params
from homspec.linalg import SymmetricMatrix
from homspec.operators import make_kernel, zonal_spectrum

S2 = space_params(SpaceKind.SPHERE, 2)
RP2 = space_params(SpaceKind.REAL_PROJECTIVE, 2)


class TestFitDecay:
    def test_exact_inverse_square(self):
        k = np.arange(1, 1001, dtype=float)
        slope, _, _ = fit_decay(k**-2, 0.5)
        assert slope == pytest.approx(-2.0, abs=1e-6)

    def test_scaled_power_law(self):
        k = np.arange(1, 1001, dtype=float)
        slope, intercept, rms = fit_decay(3.0 * k**-1.5, 0.5)
        assert slope == pytest.approx(-1.5, abs=1e-6)
        assert intercept == pytest.approx(math.log(3.0), abs=1e-6)
        assert rms < 1e-10

    @pytest.mark.parametrize("tail", [0.1, 0.25, 0.5, 0.9, 1.0])
    def test_recovery_independent_of_tail(self, tail):
        k = np.arange(1, 2001, dtype=float)
        slope, _, _ = fit_decay(k**-3, tail)
        assert slope == pytest.approx(-3.0, abs=1e-6)

    def test_block_expanded_algebraic_family(self):
        # independent oracle: brute-force multiplicity expansion and polyfit
        gamma = 4.0
        K = make_kernel(S2, "algebraic", 120, gamma=gamma)
        spec = zonal_spectrum(K, 10_000)
        slope, _, _ = fit_decay(spec, 0.5)
        assert slope == pytest.approx(-gamma / 2.0, abs=0.05)
        brute = np.sort(
            np.repeat(
                (np.arange(121) + 1.0) ** -gamma, 2 * np.arange(121) + 1
            )
        )[::-1][:10_000]
        x = np.log(np.arange(5001, 10_001, dtype=float))
        oracle = np.polyfit(x, np.log(brute[5000:]), 1)[0]
        assert slope == pytest.approx(oracle, abs=1e-9)

    def test_window_too_small(self):
        with pytest.raises(WindowTooSmall):
            fit_decay(np.arange(1, 21, dtype=float) ** -1, 0.2)

    def test_non_positive_values(self):
        vals = np.ones(100)
        vals[80] = 0.0
        with pytest.raises(NonPositiveValuesInWindow):
            fit_decay(vals, 0.5)

    def test_accepts_spectrum_objects(self):
        spec = zonal_spectrum(make_kernel(S2, "algebraic", 40, gamma=3.0), 500)
        slope, _, _ = fit_decay(spec)
        assert slope < -1.0


class TestVerifyTheorem:
    def test_theorem_22_sphere(self):
        report = verify_theorem("2.2", S2, r=1, gamma=3.5, count=10_000)
        assert report.theoretical_exponent == pytest.approx(-1.5)
        assert report.fitted_slope == pytest.approx(-1.75, abs=0.05)
        assert report.verdict
        assert report.metadata["constructed_exponent"] == pytest.approx(-1.75)

    def test_theorem_21_sphere(self):
        report = verify_theorem("2.1", S2, r=2, p=3.5, gamma=4.0, count=10_000)
        assert report.theoretical_exponent == pytest.approx(-1.75)
        assert report.fitted_slope == pytest.approx(-2.0, abs=0.05)
        assert report.verdict

    def test_theorem_21_rejects_small_r(self):
        with pytest.raises(HypothesisViolation, match="r >= "):
            verify_theorem("2.1", S2, r=1, p=3.5, gamma=4.0, count=1000)

    def test_theorem_21_rejects_p_out_of_range(self):
        with pytest.raises(HypothesisViolation, match="p in "):
            verify_theorem("2.1", S2, r=2, p=6.0, gamma=4.0, count=1000)

    def test_theorem_22_rejects_gamma_at_threshold(self):
        with pytest.raises(HypothesisViolation, match="gamma > 2r"):
            verify_theorem("2.2", S2, r=1, gamma=3.0, count=1000)

    def test_theorem_23_needs_p(self):
        with pytest.raises(HypothesisViolation, match="p > 0"):
            verify_theorem("2.3", S2, r=1, gamma=4.0, count=1000)

    def test_theorem_23_passes_above_threshold(self):
        report = verify_theorem("2.3", S2, r=1, p=1.5, gamma=11 / 3 + 0.5, count=10_000)
        assert report.theoretical_exponent == pytest.approx(-1 / 1.5 - 1)
        assert report.verdict

    def test_unknown_theorem(self):
        with pytest.raises(ValueError):
            verify_theorem("9.9", S2, r=1, gamma=4.0, count=1000)

    def test_exponents(self):
        assert theorem_exponent("2.1", 2, 2, 3.5) == pytest.approx(-1.75)
        assert theorem_exponent("2.2", 2, 1, None) == pytest.approx(-1.5)
        assert theorem_exponent("2.3", 2, 1, 1.5) == pytest.approx(-5 / 3)


class TestCountingLemmas:
    def test_sphere_delta_three(self):
        # oracle: (n+1)^2 <= 2 n^2 exactly when n >= 3
        reports = {r.lemma_id: r for r in check_counting_lemmas(S2, 10_000)}
        rep = reports["counting-A"]
        assert rep.minimal_delta == 3
        assert rep.violations == ()

    def test_real_projective_delta_two(self):
        # oracle: 2*binom(2n+2, 2) + 1 = 4n^2 + 6n + 3 <= 9 n^2 iff n >= 2
        reports = {r.lemma_id: r for r in check_counting_lemmas(RP2, 1000)}
        rep = reports["counting-B"]
        assert rep.minimal_delta == 2
        assert rep.violations == ()

    def test_mean_value_boundary_case(self):
        # m=2, n=1: (n+1)^2 - (n^2+1) + 1 = 3 <= m 2^{m-1} n^{m-1} = 4
        reports = {r.lemma_id: r for r in check_counting_lemmas(S2, 100)}
        rep = reports["counting-C"]
        assert rep.minimal_delta == 1
        assert rep.violations == ()

    def test_all_spaces_clean_with_moderate_range(self):
        for kind, m in [
            (SpaceKind.SPHERE, 16),
            (SpaceKind.COMPLEX_PROJECTIVE, 16),
            (SpaceKind.QUATERNION_PROJECTIVE, 16),
            (SpaceKind.CAYLEY, 16),
            (SpaceKind.REAL_PROJECTIVE, 16),
        ]:
            for rep in check_counting_lemmas(space_params(kind, m), 500):
                assert rep.verdict, rep

    def test_small_range_rejected(self):
        with pytest.raises(ValueError):
            check_counting_lemmas(S2, 5)


class TestWeylCheck:
    def test_symmetric_equality(self):
        rng = np.random.default_rng(4)
        raw = rng.uniform(-1, 1, (20, 20))
        A = SymmetricMatrix((raw + raw.T) / 2)
        assert weyl_check(A, 20)
        lhs, rhs = weyl_partial_products(A, 20)
        assert np.max(np.abs(lhs / rhs - 1)) < 1e-8

    def test_nilpotent(self):
        assert weyl_check(np.array([[0.0, 1.0], [0.0, 0.0]]), 2)

    def test_nilpotent_larger(self):
        A = np.diag(np.ones(7), 1)  # 8x8 shift matrix
        assert weyl_check(A, 8)

    def test_rank_one_nonsymmetric(self):
        u = np.array([1.0, 2.0, 0.0, -1.0, 3.0])
        v = np.array([2.0, -1.0, 1.0, 0.0, 1.0])
        assert weyl_check(np.outer(u, v), 5)

    def test_random_general_small_orders(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            A = rng.uniform(-1, 1, (5, 5))
            assert weyl_check(A, 5)
            # oracle: both sides computed directly via numpy
            lam = np.sort(np.abs(np.linalg.eigvals(A)))[::-1]
            s = np.linalg.svd(A, compute_uv=False)
            assert np.all(np.cumprod(lam) <= np.cumprod(s) * (1 + 1e-8))

    def test_moduli_match_numpy(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            A = rng.uniform(-1, 1, (6, 6))
            ours = _eigen_moduli_general(A)
            ref = np.sort(np.abs(np.linalg.eigvals(A)))[::-1]
            assert np.max(np.abs(ours - ref)) < 1e-8

    def test_large_nonsymmetric_rejected(self):
        with pytest.raises(OrderTooLargeForGeneralCase):
            weyl_check(np.triu(np.ones((9, 9)), 1), 9)

    def test_seeded_sweep(self):
        all_ok, worst = weyl_random_sweep(10, 30, seed=0)
        assert all_ok
        assert worst < 1e-8


class TestRateDiagnostic:
    def test_borderline_divergent_fails(self):
        n = np.arange(1, 1001, dtype=float)
        diag = rate_diagnostic(n**-2, 1.0, 1.0)  # t_N constant
        assert not diag.verdict

    def test_clean_convergent_passes(self):
        n = np.arange(1, 1001, dtype=float)
        diag = rate_diagnostic(n**-3, 1.0, 1.0)  # t_N = 1/N
        assert diag.verdict
        trend = [t for _, t in diag.samples]
        assert all(a > b for a, b in zip(trend, trend[1:]))

    def test_logarithmic_correction_passes(self):
        # a = 0: trend t_N = N s_N = (log N)^{-2}, decreasing
        n = np.arange(1, 1001, dtype=float)
        vals = 1.0 / (n * np.log(n + 1.0) ** 2)
        diag = rate_diagnostic(vals, 0.0, 1.0)
        assert diag.verdict

    def test_too_short(self):
        with pytest.raises(SequenceTooShort):
            rate_diagnostic(np.ones(10), 1.0, 1.0)
