"""Constraint functions, the constraint matrix, Dirac brackets, and the
reduced dynamical r-matrices.

A point λ of the dual of H (a word with factors in H* = ann(M)) carries the
antisymmetric constraint-bracket matrix

    C[i,j](λ) = << (Ad_λ M^j)_{M*}, (Ad_λ M^i)_M >>
              = << (Ad_λ M^i)_M, Ad_λ M^j >>        (both forms are computed
                                                     and must agree),

where {M^i} is the basis of the complement M and the subscripts are the
components in the splittings K = H ⊕ M and K* = H* ⊕ M*.  Wherever C is
invertible the constraints are second class and the reduced r-matrix

    rho(λ) = Σ_ij (C^{-1})_ij (Ad_λ M^i)_M ⊗ (Ad_λ M^j)_M

is defined; it is antisymmetric and supported on M⊗M, and can equivalently
be written as -Σ_i N_i(λ) ⊗ M^i = Σ_i M^i ⊗ N_i(λ) through the unique
vectors N_i(λ) in M with  Ad_λ^{-1} M_i = (Ad_λ^{-1} N_i(λ))_{M*}.

The Dirac bracket of functions F1, F2 on the dual of H (extended to the
ambient dual group as constant along the exp(M*) directions) is

    {F1,F2}* = {f1,f2} - Σ_ij {f1, ξ_i} (C^{-1})_ij {ξ_j, f2},

with the constraint gradients known in closed form: grad' ξ_i = M^i and
grad ξ_i = (Ad_λ M^i)_M.  It must reproduce the Poisson bracket computed
natively in the double of (H, H*).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bialgebra_double import ReductionSetup
from .dual_group import GroupWord, StepCache, ad_of_word, gradients
from .errors import (
    CDegenerateError,
    ConsistencyError,
    FactorNotInDualError,
    InputShapeError,
    SamplingExhaustedError,
)
from .lie_core import Tensor2

COND_THRESHOLD = 1e8
FORM_AGREE_TOL = 1e-12
MAX_SAMPLE_ATTEMPTS = 100


@dataclass(frozen=True, eq=False)
class ConstraintBasis:
    """Basis {M^i} of M and the dual basis {M_i} of M* with <M_i, M^j> = δ."""

    M_basis: np.ndarray  # (m, n) rows in K coordinates
    M_dual: np.ndarray  # (m, n) rows in K* coordinates

    def duality_residual(self) -> float:
        if self.M_basis.shape[0] == 0:
            return 0.0
        g = self.M_dual @ self.M_basis.T
        return float(np.max(np.abs(g - np.eye(g.shape[0]))))


def constraint_basis(S: ReductionSetup) -> ConstraintBasis:
    return ConstraintBasis(M_basis=S.M_in_K, M_dual=S.Mdual)


@dataclass(frozen=True, eq=False)
class CMatrix:
    """Constraint-bracket matrix at a point, with its conditioning data."""

    entries: np.ndarray
    word: GroupWord
    cond: float
    antisym_residual: float
    form_agreement: float

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    def diagnosis(self, cond_threshold: float = COND_THRESHOLD) -> str:
        if self.m == 0:
            return "ok"
        if self.m % 2 == 1:
            return (
                f"odd-dimensional complement (dim M = {self.m}); an antisymmetric "
                "matrix of odd size is always singular"
            )
        if not np.isfinite(self.cond) or self.cond > cond_threshold:
            return f"condition number {self.cond:.3e} exceeds threshold {cond_threshold:.1e}"
        return "ok"


def _moved_basis(S: ReductionSetup, word: GroupWord):
    """Ad_λ M^i for every i, split into components.

    Returns (m_parts, kstar_parts, mstar_parts): the M-component over the K
    basis, the K*-component over the dual basis, and the M*-coordinates of
    the latter.
    """
    d = S.double
    m = S.dim_M
    m_parts = np.zeros((m, S.n))
    kstar_parts = np.zeros((m, S.n))
    mstar_coords = np.zeros((m, m))
    for i in range(m):
        v = word.ad @ d.embed_K(S.M_in_K[i])
        k_part = d.comp_K(v)
        m_coords = S.M_component(k_part)
        m_parts[i] = m_coords @ S.M_in_K if m else np.zeros(S.n)
        kstar_parts[i] = d.comp_Kstar(v)
        mstar_coords[i] = S.Mstar_component(kstar_parts[i])
    return m_parts, kstar_parts, mstar_coords


def constraint_matrix(S: ReductionSetup, word: GroupWord) -> CMatrix:
    """Evaluate the constraint-bracket matrix C at the given word.

    Degeneracy is recorded, not raised; use check_second_class or rho to act
    on it.  The two equivalent pairing forms of C are both computed and must
    agree to FORM_AGREE_TOL.
    """
    m = S.dim_M
    m_parts, kstar_parts, mstar_coords = _moved_basis(S, word)
    c_a = np.zeros((m, m))
    c_b = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            # << (Ad M^j)_{M*}, (Ad M^i)_M >>: canonical pairing is the
            # coordinate dot product between dual and primal K coordinates
            c_a[i, j] = (mstar_coords[j] @ S.Mdual) @ m_parts[i]
            # << (Ad M^i)_M, Ad M^j >> picks out the full K*-part of Ad M^j
            c_b[i, j] = m_parts[i] @ kstar_parts[j]
    scale = 1.0 + float(np.max(np.abs(c_a), initial=0.0))
    agree = float(np.max(np.abs(c_a - c_b), initial=0.0))
    if agree > FORM_AGREE_TOL * scale:
        raise ConsistencyError(
            f"the two pairing forms of C disagree by {agree:.3e}"
        )
    if m == 0:
        cond = 0.0
    else:
        # conditioning against the canonical unit scale of the pairing, not
        # just sigma_max: the second-class test must diverge as C -> 0, which
        # is how sampling automatically avoids the degenerate neighbourhood
        # of the identity (where sigma_max/sigma_min can stay bounded)
        s = np.linalg.svd(c_a, compute_uv=False)
        cond = float(max(s[0], 1.0) / s[-1]) if s[-1] > 0.0 else float("inf")
    anti = float(np.max(np.abs(c_a + c_a.T), initial=0.0))
    return CMatrix(
        entries=c_a, word=word, cond=cond, antisym_residual=anti, form_agreement=agree
    )


def check_second_class(C: CMatrix, cond_threshold: float = COND_THRESHOLD) -> bool:
    """Membership test for the open set where the constraints are second class."""
    return C.diagnosis(cond_threshold) == "ok"


def _require_second_class(C: CMatrix, cond_threshold: float) -> None:
    diag = C.diagnosis(cond_threshold)
    if diag != "ok":
        raise CDegenerateError(f"constraint matrix degenerate: {diag}")


def rho(
    S: ReductionSetup,
    word: GroupWord,
    cond_threshold: float = COND_THRESHOLD,
) -> Tensor2:
    """The reduced dynamical r-matrix at λ, as an antisymmetric tensor over G.

    rho = Σ_ij (C^{-1})_ij (Ad_λ M^i)_M ⊗ (Ad_λ M^j)_M, computed with a
    linear solve against C rather than an explicit inverse.
    """
    C = constraint_matrix(S, word)
    _require_second_class(C, cond_threshold)
    if C.m == 0:
        return Tensor2.zero(S.G.dim)
    m_parts, _, _ = _moved_basis(S, word)
    a_g = np.array([S.K_to_G(v) for v in m_parts])  # rows: (Ad M^i)_M in G coords
    w = np.linalg.solve(C.entries, a_g)
    coeffs = a_g.T @ w
    return Tensor2(coeffs, antisymmetric=True, tol=1e-9)


def reduced_r(
    S: ReductionSetup,
    rfun: Optional[Callable[[GroupWord], Tensor2]],
    word: GroupWord,
    cond_threshold: float = COND_THRESHOLD,
) -> Tensor2:
    """r*(λ) = r(λ) + rho(λ); with r = None this is the pure rho family."""
    p = rho(S, word, cond_threshold)
    if rfun is None:
        return p
    base = rfun(word)
    return Tensor2(base.coeffs + p.coeffs, antisymmetric=True, tol=1e-9)


def n_vectors(
    S: ReductionSetup,
    word: GroupWord,
    cond_threshold: float = COND_THRESHOLD,
) -> list:
    """The unique N_i in M with Ad_λ^{-1} M_i = (Ad_λ^{-1} N_i)_{M*}.

    Returned as K-coordinate vectors, one per dual basis element M_i.  The
    defining relation is verified to 1e-10 after the solve.
    """
    C = constraint_matrix(S, word)
    _require_second_class(C, cond_threshold)
    m = S.dim_M
    if m == 0:
        return []
    d = S.double
    inv_ad = np.linalg.inv(word.ad)
    # columns of E: M*-coordinates of (Ad^{-1} M^j)_{M*}
    e_mat = np.zeros((m, m))
    moved_m = np.zeros((m, 2 * S.n))
    for j in range(m):
        moved_m[j] = inv_ad @ d.embed_K(S.M_in_K[j])
        e_mat[:, j] = S.Mstar_component(d.comp_Kstar(moved_m[j]))
    # solvability guard only: second-class membership was already enforced
    # through C, so this fires solely on numerically singular systems
    s = np.linalg.svd(e_mat, compute_uv=False)
    if s[-1] <= 0.0 or s[0] / s[-1] > 1e8:
        raise CDegenerateError(
            f"moved complement basis is numerically singular "
            f"(condition {s[0] / max(s[-1], 1e-300):.3e})"
        )
    out = []
    for i in range(m):
        target = inv_ad @ d.embed_Kstar(S.Mdual[i])
        beta = S.Mstar_component(d.comp_Kstar(target))
        coeffs = np.linalg.solve(e_mat, beta)
        n_i = coeffs @ S.M_in_K
        # full residual of the defining relation in double coordinates; the
        # solve fixes the M* component, so this certifies that Ad^{-1} M_i
        # has no H* leak (which is what makes the relation an equality)
        moved_n = inv_ad @ d.embed_K(n_i)
        rhs = d.embed_Kstar(S.Mstar_component(d.comp_Kstar(moved_n)) @ S.Mdual)
        resid = float(np.max(np.abs(target - rhs)))
        if resid > 1e-10 * (1.0 + float(np.max(np.abs(target)))):
            raise ConsistencyError(
                f"defining relation for N_{i} has residual {resid:.3e}"
            )
        out.append(n_i)
    return out


def rho_via_n(
    S: ReductionSetup,
    word: GroupWord,
    cond_threshold: float = COND_THRESHOLD,
) -> Tensor2:
    """rho recomputed from the N_i in both product orders.

    Both -Σ N_i ⊗ M^i and +Σ M^i ⊗ N_i are assembled; they must agree with
    each other to 1e-9 (and with rho, which callers assert separately).
    """
    ns = n_vectors(S, word, cond_threshold)
    dim_g = S.G.dim
    a = np.zeros((dim_g, dim_g))
    b = np.zeros((dim_g, dim_g))
    for i, n_i in enumerate(ns):
        n_g = S.K_to_G(n_i)
        m_g = S.K_to_G(S.M_in_K[i])
        a -= np.outer(n_g, m_g)
        b += np.outer(m_g, n_g)
    if np.max(np.abs(a - b), initial=0.0) > 1e-9 * (1.0 + np.max(np.abs(a), initial=0.0)):
        raise ConsistencyError("the two product orders for rho disagree")
    return Tensor2(a, antisymmetric=True, tol=1e-8)


def constraint_inverse_operator_residual(
    S: ReductionSetup,
    word: GroupWord,
    cond_threshold: float = COND_THRESHOLD,
) -> float:
    """Residual of the identity sending M_k to -N_k through C^{-1}.

    The operator Σ_ij (C^{-1})_ij (Ad M^i)_M <M_k, (Ad M^j)_M> must equal
    -N_k for every k.
    """
    C = constraint_matrix(S, word)
    _require_second_class(C, cond_threshold)
    m = S.dim_M
    if m == 0:
        return 0.0
    m_parts, _, _ = _moved_basis(S, word)
    ns = n_vectors(S, word, cond_threshold)
    worst = 0.0
    for k in range(m):
        pair_vec = np.array([S.Mdual[k] @ m_parts[j] for j in range(m)])
        coeffs = np.linalg.solve(C.entries, pair_vec)  # Σ_j (C^{-1})_ij pair_j
        image = coeffs @ m_parts
        worst = max(worst, float(np.max(np.abs(image + ns[k]))))
    return worst


def characterization_identity_residual(
    S: ReductionSetup,
    word: GroupWord,
    u,
    v,
    cond_threshold: float = COND_THRESHOLD,
) -> float:
    """Residual of the pairing identity characterizing the rho family.

    << (λ^{-1}uλ)_M, λ^{-1}vλ >> = Σ_i << (λ^{-1}uλ)_M, λ^{-1}M^iλ >> ·
                                        << (λ^{-1}vλ)_M, λ^{-1}N_iλ >>
    for u, v in M (K coordinates).
    """
    d = S.double
    inv_ad = np.linalg.inv(word.ad)
    ns = n_vectors(S, word, cond_threshold)

    def moved(x_k):
        return inv_ad @ d.embed_K(x_k)

    def m_part_embedded(w_vec):
        coords = S.M_component(d.comp_K(w_vec))
        return d.embed_K(coords @ S.M_in_K)

    mu, mv = moved(np.asarray(u, dtype=float)), moved(np.asarray(v, dtype=float))
    lhs = d.pair(m_part_embedded(mu), mv)
    rhs = 0.0
    for i in range(S.dim_M):
        t1 = d.pair(m_part_embedded(mu), moved(S.M_in_K[i]))
        t2 = d.pair(m_part_embedded(mv), moved(ns[i]))
        rhs += t1 * t2
    return abs(lhs - rhs)


def hstar_coords_of_word(S: ReductionSetup, word: GroupWord, tol: float = 1e-10):
    """Express the factors of a word over the H* basis; error if any leaks out."""
    if word.factors is None:
        raise InputShapeError("word carries no factor list")
    out = []
    for f in word.factors:
        h_coords = S.Hstar_component(f)
        resid = np.max(np.abs(f - h_coords @ S.Hdual), initial=0.0)
        if resid > tol * (1.0 + np.max(np.abs(f), initial=0.0)):
            raise FactorNotInDualError(
                f"word factor leaves H*: M*-component of size {resid:.3e}"
            )
        out.append(h_coords)
    return out


def small_word(S: ReductionSetup, word: GroupWord) -> GroupWord:
    """The same dual-group point realized on the double of (H, H*)."""
    return ad_of_word(S.sub_double, hstar_coords_of_word(S, word))


def hstar_word(S: ReductionSetup, coords) -> GroupWord:
    """Single-factor word exp(Σ x_a H^a) from H* coordinates."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (S.dim_H,):
        raise InputShapeError(f"expected {S.dim_H} H* coordinates")
    return ad_of_word(S.double, [coords @ S.Hdual])


def _extended_gradients(S: ReductionSetup, word: GroupWord, F, h: float, cache=None):
    """Gradients of the extension of F (a function on the dual of H) at word.

    The extension is constant along the exp(M*) directions, so its gradients
    coincide with the native gradients of F on the double of (H, H*); they are
    returned embedded as K-coordinate vectors.
    """
    sw = small_word(S, word)
    g_small, gp_small = gradients(sw, F, h, cache)
    return g_small @ S.H_in_K, gp_small @ S.H_in_K


def dirac_bracket(
    S: ReductionSetup,
    word: GroupWord,
    F1,
    F2,
    h: float = 1e-5,
    cond_threshold: float = COND_THRESHOLD,
    cache: Optional[StepCache] = None,
) -> float:
    """The Dirac bracket {F1, F2}* at λ for functions on the dual of H.

    F1, F2 take a word over the double of (H, H*); they are extended to the
    ambient dual group as constant along exp(M*) and bracketed there, with the
    full second-class correction term assembled from the closed-form
    constraint gradients.  The result must match the native bracket of
    (H, H*) to 1e-6 at second-class points.
    """
    C = constraint_matrix(S, word)
    _require_second_class(C, cond_threshold)
    d = S.double
    g1, _ = _extended_gradients(S, word, F1, h, cache)
    _, g2p = _extended_gradients(S, word, F2, h, cache)
    plain = d.pair(d.embed_K(g1), word.ad @ d.embed_K(g2p))
    if C.m == 0:
        return plain
    m_parts, _, _ = _moved_basis(S, word)
    # {f1, ξ_i} = << grad f1, Ad_λ M^i >>  (grad' ξ_i = M^i)
    b1 = np.array(
        [d.pair(d.embed_K(g1), word.ad @ d.embed_K(S.M_in_K[i])) for i in range(C.m)]
    )
    # {ξ_j, f2} = << (Ad_λ M^j)_M, Ad_λ grad' f2 >>
    moved_g2 = word.ad @ d.embed_K(g2p)
    b2 = np.array([d.pair(d.embed_K(m_parts[j]), moved_g2) for j in range(C.m)])
    correction = b1 @ np.linalg.solve(C.entries, b2)
    return plain - correction


def native_hstar_bracket(
    S: ReductionSetup,
    word: GroupWord,
    F1,
    F2,
    h: float = 1e-5,
    cache: Optional[StepCache] = None,
) -> float:
    """{F1, F2} computed directly in the double of (H, H*): the oracle side."""
    from .dual_group import pb_dual

    return pb_dual(small_word(S, word), F1, F2, h, cache)


def constraint_pb_check(
    S: ReductionSetup,
    word: GroupWord,
    f,
    m_index: int,
    h: float = 1e-5,
    cache: Optional[StepCache] = None,
) -> float:
    """{f, ξ_i}(λ) for an extended function f; vanishes on the dual of H.

    The constraint gradient is used in closed form (grad' ξ_i = M^i), so the
    value is << grad f, Ad_λ M^i >> with grad f in H.
    """
    d = S.double
    g1, _ = _extended_gradients(S, word, f, h, cache)
    return d.pair(d.embed_K(g1), word.ad @ d.embed_K(S.M_in_K[m_index]))


def sample_hstar_points(
    S: ReductionSetup,
    num_points: int,
    seed: int,
    box_radius: float = 1.0,
    cond_threshold: float = COND_THRESHOLD,
    max_attempts: int = MAX_SAMPLE_ATTEMPTS,
) -> list:
    """Draw second-class points of the dual of H with a reproducible stream.

    Each point is a single-factor word with H* coordinates uniform in
    [-box_radius, box_radius]; draws failing the second-class test are
    rejected and retried up to max_attempts times per requested point.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for k in range(num_points):
        for attempt in range(max_attempts):
            coords = rng.uniform(-box_radius, box_radius, S.dim_H)
            word = hstar_word(S, coords)
            if check_second_class(constraint_matrix(S, word), cond_threshold):
                out.append(word)
                break
        else:
            raise SamplingExhaustedError(
                f"no second-class point found for sample {k} after {max_attempts} attempts"
            )
    return out
