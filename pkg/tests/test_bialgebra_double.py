"""Tests for the bialgebra derivation, the double, and setup validation.

The cobracket and the semidirect mixed brackets are checked against
brute-force oracles that apply the defining formulas componentwise,
independent of the library's vectorized assembly.
"""

import numpy as np
import pytest

from plrmat.bialgebra_double import (
    Bialgebra,
    build_double,
    derive_cobracket,
    suggest_complement,
    validate_setup,
)
from plrmat.errors import (
    DecompositionError,
    DoubleJacobiError,
    NotSubBialgebraError,
    ReductivityError,
    SubalgebraError,
)
from plrmat.lie_core import LieAlgebra, Subspace, Tensor2

from test_lie_core import r_dj_sl2, sl2


def full_subspace(dim):
    return Subspace(dim, np.eye(dim))


def brute_force_cobracket(G, R, x):
    """Oracle: (ad_x ⊗ 1 + 1 ⊗ ad_x) R by explicit loops over components."""
    n = G.dim
    out = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            if R[a, b] == 0.0:
                continue
            ea, eb = np.zeros(n), np.zeros(n)
            ea[a], eb[b] = 1.0, 1.0
            out += np.outer(G.bracket(x, ea), eb) * R[a, b]
            out += np.outer(ea, G.bracket(x, eb)) * R[a, b]
    return out


class TestDeriveCobracket:
    def test_zero_r_gives_abelian_dual(self):
        A = sl2()
        b = derive_cobracket(A, Tensor2.zero(3), full_subspace(3))
        assert np.all(b.cobracket == 0.0)
        assert np.all(b.Kstar.c == 0.0)

    def test_abelian_ambient_gives_zero_cobracket(self):
        A = LieAlgebra.abelian(3)
        rng = np.random.default_rng(0)
        r = rng.uniform(-1, 1, (3, 3))
        r = (r - r.T) / 2
        b = derive_cobracket(A, Tensor2(r, antisymmetric=True), full_subspace(3))
        assert np.all(b.cobracket == 0.0)

    def test_sl2_dj_cobracket_values(self):
        A = sl2()
        R = r_dj_sl2()
        b = derive_cobracket(A, R, full_subspace(3))
        # oracle evaluation per basis vector
        for k in range(3):
            x = np.zeros(3)
            x[k] = 1.0
            np.testing.assert_allclose(
                b.cobracket[k], brute_force_cobracket(A, R.coeffs, x), atol=1e-14
            )
        # delta(h) = 0, delta(e) = (e⊗h - h⊗e)/2, delta(f) = (f⊗h - h⊗f)/2
        np.testing.assert_allclose(b.cobracket[0], 0.0, atol=1e-15)
        want_e = np.zeros((3, 3))
        want_e[1, 0], want_e[0, 1] = 0.5, -0.5
        np.testing.assert_allclose(b.cobracket[1], want_e, atol=1e-15)
        want_f = np.zeros((3, 3))
        want_f[2, 0], want_f[0, 2] = 0.5, -0.5
        np.testing.assert_allclose(b.cobracket[2], want_f, atol=1e-15)

    def test_sl2_dj_dual_bracket(self):
        # with the sign convention of the package: [h*,e*] = e*/2, [h*,f*] = f*/2
        b = derive_cobracket(sl2(), r_dj_sl2(), full_subspace(3))
        hs, es, fs = np.eye(3)
        np.testing.assert_allclose(b.Kstar.bracket(hs, es), 0.5 * es, atol=1e-15)
        np.testing.assert_allclose(b.Kstar.bracket(hs, fs), 0.5 * fs, atol=1e-15)
        np.testing.assert_allclose(b.Kstar.bracket(es, fs), 0.0, atol=1e-15)

    def test_duality_roundtrip(self):
        b = derive_cobracket(sl2(), r_dj_sl2(), full_subspace(3))
        assert b.duality_residual() <= 1e-12

    def test_cocycle_residual_small(self):
        b = derive_cobracket(sl2(), r_dj_sl2(), full_subspace(3))
        assert b.cocycle_residual() <= 1e-10

    def test_borel_is_a_sub_bialgebra(self):
        # span{h, e} is closed under bracket and under the cobracket
        K = Subspace(3, np.array([[1.0, 0, 0], [0, 1.0, 0]]))
        b = derive_cobracket(sl2(), r_dj_sl2(), K)
        assert b.K.dim == 2

    def test_not_closed_subspace_rejected(self):
        K = Subspace(3, np.array([[1.0, 0, 0], [0, 1.0, 1.0]]))  # span{h, e+f}
        with pytest.raises(SubalgebraError):
            derive_cobracket(sl2(), r_dj_sl2(), K)

    def test_leaking_cobracket_rejected(self):
        # span{e} is an abelian subalgebra but delta(e) is not in e∧e = {0}
        K = Subspace(3, np.array([[0.0, 1.0, 0.0]]))
        with pytest.raises(NotSubBialgebraError):
            derive_cobracket(sl2(), r_dj_sl2(), K)


class TestBuildDouble:
    def test_abelian_double(self):
        A = LieAlgebra.abelian(2)
        b = derive_cobracket(A, Tensor2.zero(2), full_subspace(2))
        d = build_double(b)
        assert d.dim == 4
        assert np.all(d.D.c == 0.0)
        assert d.pairing_isotropy_residual() <= 1e-14
        assert d.projector_residual() <= 1e-14

    def test_semidirect_mixed_brackets_r_zero(self):
        """With R = 0 the double is K ⋉ K* via <[X,a],Y> = -<a,[X,Y]>."""
        A = sl2()
        b = derive_cobracket(A, Tensor2.zero(3), full_subspace(3))
        d = build_double(b)
        eye = np.eye(3)
        for i in range(3):
            for j in range(3):
                br = d.D.bracket(d.embed_K(eye[i]), d.embed_Kstar(eye[j]))
                assert np.max(np.abs(d.comp_K(br))) <= 1e-14  # lands in K*
                # oracle: coefficients of [e_i, eps^j] on eps^k
                for k in range(3):
                    want = -A.bracket(eye[i], eye[k])[j]
                    assert abs(d.comp_Kstar(br)[k] - want) <= 1e-14

    def test_invariance_and_jacobi_r_zero(self):
        b = derive_cobracket(sl2(), Tensor2.zero(3), full_subspace(3))
        d = build_double(b)
        assert d.invariance_residual() <= 1e-10
        assert d.D.jacobi_residual() <= 1e-10

    def test_sl2_dj_double_passes_invariants(self):
        b = derive_cobracket(sl2(), r_dj_sl2(), full_subspace(3))
        d = build_double(b)
        assert d.dim == 6
        assert d.D.jacobi_residual() <= 1e-10
        assert d.invariance_residual() <= 1e-10
        assert d.pairing_isotropy_residual() <= 1e-14

    def test_inconsistent_input_raises_double_jacobi_error(self):
        # bypass the bialgebra validation to feed an inconsistent pair
        K = sl2()
        Kstar = sl2()  # wrong: not the dual bracket of any cobracket of sl2
        bad = object.__new__(Bialgebra)
        object.__setattr__(bad, "K", K)
        object.__setattr__(bad, "Kstar", Kstar)
        object.__setattr__(bad, "cobracket", -np.transpose(Kstar.c, (2, 0, 1)))
        object.__setattr__(bad, "cocycle_tol", 1e-10)
        with pytest.raises(DoubleJacobiError):
            build_double(bad)


class TestValidateSetup:
    def test_sl2_cartan_setup_valid(self):
        s = validate_setup(
            sl2(),
            r_dj_sl2(),
            full_subspace(3),
            Subspace(3, np.array([[1.0, 0, 0]])),
            Subspace(3, np.array([[0.0, 1.0, 0], [0.0, 0, 1.0]])),
        )
        assert s.dim_H == 1 and s.dim_M == 2
        r1, r2 = s.closure_pairing_residuals()
        assert max(r1, r2) <= 1e-10
        # dual bases pair canonically
        np.testing.assert_allclose(s.Hdual @ s.H_in_K.T, np.eye(1), atol=1e-12)
        np.testing.assert_allclose(s.Mdual @ s.M_in_K.T, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(s.Hdual @ s.M_in_K.T, 0.0, atol=1e-12)

    def test_trivial_reduction_h_equals_k(self):
        s = validate_setup(
            sl2(),
            r_dj_sl2(),
            full_subspace(3),
            full_subspace(3),
            Subspace(3, np.zeros((0, 3))),
        )
        assert s.dim_M == 0
        assert s.sub_double.dim == 6

    def test_nilpotent_line_fails_reductivity(self):
        with pytest.raises(ReductivityError):
            validate_setup(
                sl2(),
                r_dj_sl2(),
                full_subspace(3),
                Subspace(3, np.array([[0.0, 1.0, 0.0]])),  # span{e}
                Subspace(3, np.array([[1.0, 0, 0], [0.0, 0, 1.0]])),  # span{h, f}
            )

    def test_wrong_dimension_split_rejected(self):
        with pytest.raises(DecompositionError):
            validate_setup(
                sl2(),
                r_dj_sl2(),
                full_subspace(3),
                Subspace(3, np.array([[1.0, 0, 0]])),
                Subspace(3, np.array([[0.0, 1.0, 0]])),
            )

    def test_sub_double_of_cartan_is_abelian_for_sl2(self):
        s = validate_setup(
            sl2(),
            r_dj_sl2(),
            full_subspace(3),
            Subspace(3, np.array([[1.0, 0, 0]])),
            Subspace(3, np.array([[0.0, 1.0, 0], [0.0, 0, 1.0]])),
        )
        assert s.sub_double.dim == 2
        assert np.max(np.abs(s.sub_double.D.c)) <= 1e-12
        assert s.sub_double.invariance_residual() <= 1e-10

    def test_sub_double_matches_independently_derived_double(self):
        # extracting H + H* from the big double must reproduce the double
        # built directly from the bialgebra of H (same R, same conventions)
        s = validate_setup(
            sl2(),
            r_dj_sl2(),
            full_subspace(3),
            Subspace(3, np.array([[1.0, 0, 0]])),
            Subspace(3, np.array([[0.0, 1.0, 0], [0.0, 0, 1.0]])),
        )
        own = build_double(derive_cobracket(s.G, s.R, s.H_embed))
        np.testing.assert_allclose(own.D.c, s.sub_double.D.c, atol=1e-12)
        np.testing.assert_allclose(own.pairing, s.sub_double.pairing, atol=1e-14)

    def test_component_splitting(self):
        s = validate_setup(
            sl2(),
            r_dj_sl2(),
            full_subspace(3),
            Subspace(3, np.array([[1.0, 0, 0]])),
            Subspace(3, np.array([[0.0, 1.0, 0], [0.0, 0, 1.0]])),
        )
        v = np.array([2.0, 3.0, -1.0])  # 2h + 3e - f in K coordinates
        np.testing.assert_allclose(s.M_component(v), [3.0, -1.0], atol=1e-12)
        a = np.array([0.5, 1.0, 2.0])  # dual coordinates
        np.testing.assert_allclose(s.Mstar_component(a), [1.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(s.Hstar_component(a), [0.5], atol=1e-12)


class TestDistinctDiagnostics:
    """Each hypothesis failure carries its own error type, on real inputs."""

    def gl2(self):
        # sl2 plus a central generator z, basis (h, e, f, z)
        c = np.zeros((4, 4, 4))
        c[0, 1, 1], c[1, 0, 1] = 2.0, -2.0
        c[0, 2, 2], c[2, 0, 2] = -2.0, 2.0
        c[1, 2, 0], c[2, 1, 0] = 1.0, -1.0
        return LieAlgebra(c)

    def test_central_mixing_r_breaks_dual_subalgebra(self):
        # R = h∧e/2 + z∧e has an invariant anomaly (rank-one trivector space),
        # and its dual bracket sends h*∧z* onto f*, so ann(M) for M = {e, f}
        # is not closed even though H = {h, z} is reductive
        g = self.gl2()
        r = np.zeros((4, 4))
        r[0, 1], r[1, 0] = 0.5, -0.5
        r[3, 1], r[1, 3] = 1.0, -1.0
        from plrmat.lie_core import cybe_lhs, is_invariant3

        R = Tensor2(r, antisymmetric=True)
        assert is_invariant3(g, cybe_lhs(g, R), tol=1e-12)
        from plrmat.errors import DualSubalgebraError

        with pytest.raises(DualSubalgebraError):
            validate_setup(
                g,
                R,
                Subspace(4, np.eye(4)),
                Subspace(4, np.eye(4)[[0, 3]]),
                Subspace(4, np.eye(4)[[1, 2]]),
            )

    def test_long_root_subalgebra_fails_ideal_condition(self):
        # the rank-one subalgebra through the highest root of sl3 misses the
        # Cartan directions needed for ann(H) to be an ideal of the dual
        from plrmat.catalog import _dj_r, sl3_algebra
        from plrmat.errors import IdealError

        g = sl3_algebra()
        e8 = np.eye(8)
        h_rows = np.array([e8[0] + e8[1], e8[4], e8[7]])
        m_rows = np.array([e8[0] - e8[1], e8[2], e8[3], e8[5], e8[6]])
        with pytest.raises(IdealError):
            validate_setup(
                g,
                _dj_r(8, ((2, 5), (3, 6), (4, 7))),
                Subspace(8, e8),
                Subspace(8, h_rows),
                Subspace(8, m_rows),
            )


class TestSuggestComplement:
    def test_sl2_cartan_complement(self):
        m = suggest_complement(sl2(), full_subspace(3), Subspace(3, np.array([[1.0, 0, 0]])))
        assert m.dim == 2
        # the span must be {e, f}: no h-component
        assert np.max(np.abs(m.basis[:, 0])) <= 1e-12

    def test_degenerate_trace_form_rejected(self):
        A = LieAlgebra.abelian(3)
        with pytest.raises(DecompositionError):
            suggest_complement(A, full_subspace(3), Subspace(3, np.array([[1.0, 0, 0]])))

    def test_suggested_complement_validates_for_rank_two_levi(self):
        from plrmat.catalog import _dj_r, sl3_algebra

        g = sl3_algebra()
        e8 = np.eye(8)
        levi = Subspace(8, e8[[0, 1, 2, 5]])
        m = suggest_complement(g, Subspace(8, e8), levi)
        assert m.dim == 4
        s = validate_setup(
            g, _dj_r(8, ((2, 5), (3, 6), (4, 7))), Subspace(8, e8), levi, m
        )
        assert s.dim_M == 4
