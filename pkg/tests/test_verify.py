"""Tests for the residual suites: dynamical Yang-Baxter, equivariance,
triangularity, product-space Jacobiators, momentum map, and the control.

Closed-form anchor for the dynamical equation (derived by substituting the
coefficient ansatz r = s(x)(e⊗f - f⊗e) into the equation for split sl2 with
Cartan residual subgroup): the bracket terms contribute (s² + s)·A + A/4 and
the derivative terms s'·A for a fixed alternating 3-tensor A, so the
coefficient must satisfy s' + s² + s = 0 in the Drinfeld-Jimbo case
(solution 1/(exp(x) - 1)) and s' + s² = 0 in the R = 0 case (solution 1/x).
Both solutions are produced by the reduction and drive the residuals below
verify their tolerances.
"""

import numpy as np
import pytest

from plrmat.dual_group import identity_word
from plrmat.errors import InputShapeError
from plrmat.lie_core import Tensor2
from plrmat.reduction import hstar_word, sample_hstar_points
from plrmat.verify import (
    DualPoint,
    PPoint,
    ProductCaches,
    QFunction,
    QPoint,
    ResidualReport,
    ambient_word,
    dual_entry,
    equivariance_residual,
    g_entry,
    hat_entry,
    largest_entry,
    momentum_map,
    p_bracket,
    p_jacobi_residual,
    plcdybe_residual,
    q_bracket,
    q_jacobi_residual,
    reduced_r_function,
    run_suite,
    sign_flipped_rfun,
    tilde_entry,
    triangularity_check,
    zero_r_function,
)

from test_reduction import classical_setup, dj_setup, trivial_setup


def abelian_trivial_setup():
    from plrmat.bialgebra_double import validate_setup
    from plrmat.lie_core import LieAlgebra, Subspace

    A = LieAlgebra.abelian(2)
    return validate_setup(
        A, Tensor2.zero(2), Subspace(2, np.eye(2)), Subspace(2, np.eye(2)),
        Subspace(2, np.zeros((0, 2))),
    )


class TestPlcdybe:
    def test_constant_zero_r_with_full_h_is_exact(self):
        # the equation collapses to the constant Yang-Baxter identity
        s = trivial_setup()
        res = plcdybe_residual(s, zero_r_function(s), identity_word(s.double), 1e-5)
        assert res.norm() == 0.0

    def test_abelian_everything_vanishes(self):
        s = abelian_trivial_setup()
        res = plcdybe_residual(s, zero_r_function(s), identity_word(s.double), 1e-5)
        assert res.norm() == 0.0

    def test_classical_reduced_r_solves_equation(self):
        s = classical_setup()
        rfun = reduced_r_function(s)
        for x in (0.5, 1.0, 2.0):
            res = plcdybe_residual(s, rfun, hstar_word(s, [x]), 1e-5)
            assert res.norm() <= 1e-6

    def test_dj_reduced_r_solves_equation_at_samples(self):
        s = dj_setup()
        rfun = reduced_r_function(s, None, 2.5)
        for w in sample_hstar_points(s, 10, seed=6, cond_threshold=2.5):
            assert plcdybe_residual(s, rfun, w, 1e-5).norm() <= 1e-6
            assert triangularity_check(s, rfun, w, 1e-5) <= 1e-6

    def test_quadratic_step_convergence(self):
        # at a point with visible truncation the residual scales like h²
        s = classical_setup()
        rfun = reduced_r_function(s)
        w = hstar_word(s, [0.3])
        r1 = plcdybe_residual(s, rfun, w, 1e-2).norm()
        r2 = plcdybe_residual(s, rfun, w, 5e-3).norm()
        assert 2.5 <= r1 / r2 <= 6.0

    def test_corrupted_r_detected(self):
        s = dj_setup()
        rfun = reduced_r_function(s, None, 2.5)
        words = sample_hstar_points(s, 5, seed=6, cond_threshold=2.5)
        a, b = largest_entry(rfun(words[0]))
        bad = sign_flipped_rfun(rfun, int(a), int(b))
        worst = max(plcdybe_residual(s, bad, w, 1e-5).norm() for w in words)
        assert worst > 1e-2


class TestEquivariance:
    def test_zero_x_gives_zero(self):
        s = dj_setup()
        w = hstar_word(s, [0.7])
        rfun = reduced_r_function(s)
        res = equivariance_residual(s, rfun, w, [0.0], 1e-5)
        assert res.norm() <= 1e-12

    def test_constant_invariant_r_abelian(self):
        s = abelian_trivial_setup()
        res = equivariance_residual(
            s, zero_r_function(s), identity_word(s.double), [0.0, 0.0], 1e-5
        )
        assert res.norm() == 0.0

    def test_dj_reduced_r_equivariant(self):
        s = dj_setup()
        rfun = reduced_r_function(s, None, 2.5)
        for w in sample_hstar_points(s, 5, seed=6, cond_threshold=2.5):
            assert equivariance_residual(s, rfun, w, [1.0], 1e-5).norm() <= 1e-6


class TestMomentumMap:
    def test_equal_arguments_give_identity(self):
        s = dj_setup()
        w = hstar_word(s, [0.8])
        mm = momentum_map(w, w)
        assert np.max(np.abs(mm.ad - np.eye(6))) <= 1e-9

    def test_identity_second_argument(self):
        s = dj_setup()
        w = hstar_word(s, [0.8])
        mm = momentum_map(w, identity_word(s.double))
        np.testing.assert_allclose(mm.ad, w.ad, atol=1e-12)

    def test_homomorphism_identity_random(self):
        s = dj_setup()
        rng = np.random.default_rng(0)
        from plrmat.dual_group import ad_of_word

        for _ in range(5):
            w1 = ad_of_word(s.double, [rng.uniform(-1, 1, 3) for _ in range(2)])
            w2 = ad_of_word(s.double, [rng.uniform(-1, 1, 3)])
            mm = momentum_map(w1, w2)
            assert np.max(np.abs(mm.ad @ w2.ad - w1.ad)) <= 1e-9


class TestProductBrackets:
    def setup_method(self):
        self.s = dj_setup()
        self.rfun = reduced_r_function(self.s, None, 2.5)
        self.h = 1e-3
        self.caches = ProductCaches(self.s, self.h)
        rng = np.random.default_rng(1)
        self.g = ambient_word(self.s.G, [rng.uniform(-0.3, 0.3, 3)])
        self.lam = DualPoint.from_coords(self.s, [np.array([0.8])])
        self.lam2 = DualPoint.from_coords(self.s, [np.array([-0.6])])
        self.qpt = QPoint(self.g, self.lam)
        self.ppt = PPoint(self.lam2, self.g, self.lam)

    def test_constant_function_brackets_vanish(self):
        const = QFunction(lambda pt: 2.0, depends=())
        assert q_bracket(self.s, self.rfun, self.qpt, const, g_entry(1, 2), self.h, self.caches) == 0.0
        assert p_bracket(self.s, self.rfun, self.ppt, const, g_entry(1, 2), self.h, self.caches) == 0.0

    def test_ambient_block_vanishes_without_r(self):
        # zero R and zero r kill the double-gradient contraction block
        s = abelian_trivial_setup()
        caches = ProductCaches(s, self.h)
        g = ambient_word(s.G, [np.array([0.4, -0.2])])
        lam = DualPoint.from_coords(s, [np.zeros(2)])
        val = q_bracket(
            s, zero_r_function(s), QPoint(g, lam), g_entry(0, 0), g_entry(1, 1), self.h, caches
        )
        assert val == 0.0

    def test_antisymmetry(self):
        fs = [g_entry(1, 2), g_entry(0, 1), dual_entry(0, 1)]
        for i in range(3):
            for j in range(3):
                a = q_bracket(self.s, self.rfun, self.qpt, fs[i], fs[j], self.h, self.caches)
                b = q_bracket(self.s, self.rfun, self.qpt, fs[j], fs[i], self.h, self.caches)
                assert abs(a + b) <= 1e-7

    def test_hat_tilde_block_vanishes(self):
        val = p_bracket(
            self.s, self.rfun, self.ppt, hat_entry(0, 1), tilde_entry(1, 0), self.h, self.caches
        )
        assert val == 0.0

    def test_q_jacobi_small_for_reduced_r(self):
        phis = [g_entry(1, 2), g_entry(0, 1), g_entry(2, 0)]
        res = q_jacobi_residual(self.s, self.rfun, self.qpt, *phis, self.h, self.caches)
        assert res <= 1e-4

    def test_p_jacobi_small_for_reduced_r(self):
        phis = [g_entry(1, 2), g_entry(0, 1), g_entry(2, 0)]
        res = p_jacobi_residual(self.s, self.rfun, self.ppt, *phis, self.h, self.caches)
        assert res <= 1e-4

    def test_jacobi_of_constants_vanishes(self):
        const = QFunction(lambda pt: 1.5, depends=())
        res = q_jacobi_residual(
            self.s, self.rfun, self.qpt, const, const, const, self.h, self.caches
        )
        assert res == 0.0

    def test_corrupted_r_breaks_q_jacobi(self):
        a, b = largest_entry(self.rfun(self.lam.big))
        bad = sign_flipped_rfun(self.rfun, int(a), int(b))
        phis = [g_entry(1, 2), g_entry(0, 1), g_entry(2, 0)]
        res = q_jacobi_residual(self.s, bad, self.qpt, *phis, self.h, self.caches)
        assert res > 1e-2


class TestResidualReport:
    def test_pass_semantics(self):
        r = ResidualReport("X", ((),), (((), 1e-7),), 1e-7, 1e-5, 1e-6)
        assert r.passed
        r = ResidualReport("X", ((),), (((), 1e-5),), 1e-5, 1e-5, 1e-6)
        assert not r.passed

    def test_lower_direction_for_control(self):
        r = ResidualReport("X", ((),), (((), 0.5),), 0.5, 1e-5, 1e-2, direction="lower")
        assert r.passed
        r = ResidualReport("X", ((),), (((), 1e-3),), 1e-3, 1e-5, 1e-2, direction="lower")
        assert not r.passed


class TestRunSuite:
    def test_all_suites_pass_on_dj(self):
        s = dj_setup()
        reports = run_suite(s, "all", num_points=10, seed=6, cond_threshold=2.5)
        ids = {r.equation_id for r in reports}
        assert {"mCYBE", "PL_CDYBE", "TRIANGULARITY", "EQUIVARIANCE",
                "DIRAC_EQ_HSTAR", "CONSTRAINT_PB", "RHO_CONSISTENCY",
                "PAIRING_CHARACTERIZATION", "Q_JACOBI", "P_JACOBI", "PL_CDYBE_CONTROL"} == ids
        for r in reports:
            assert r.passed, f"{r.equation_id} failed with {r.max_residual:.3e}"

    def test_single_suite_selection(self):
        s = classical_setup()
        reports = run_suite(s, "equivariance", num_points=3, seed=6, cond_threshold=2.5)
        assert [r.equation_id for r in reports] == ["EQUIVARIANCE"]

    def test_unknown_suite_rejected(self):
        with pytest.raises(InputShapeError):
            run_suite(classical_setup(), "nonsense")

    def test_suite_results_independent_of_combination(self):
        # the jacobi numbers must not depend on which other suites ran
        s = classical_setup()
        alone = run_suite(s, "jacobi", num_points=5, seed=6, cond_threshold=2.5)
        combined = run_suite(s, "all", num_points=5, seed=6, cond_threshold=2.5)
        combined_j = [r for r in combined if r.equation_id in ("Q_JACOBI", "P_JACOBI")]
        for ra, rb in zip(alone, combined_j):
            assert ra.equation_id == rb.equation_id
            assert ra.max_residual == rb.max_residual
