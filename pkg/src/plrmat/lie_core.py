"""Structure-constant Lie algebras and the tensor algebra on g⊗g and g⊗g⊗g.

A Lie algebra is stored as a dense array c with [e_i, e_j] = Σ_k c[i,j,k] e_k.
Everything downstream (doubles, constraint matrices, Yang-Baxter residuals)
is computed from c by contraction, so this module also provides the
three-slot bracket operations entering the classical Yang-Baxter equation

    [R12, R13] + [R12, R23] + [R13, R23]

for antisymmetric R, and the invariance test for 3-tensors.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputShapeError, StructureConstantError, SubspaceError

ANTISYM_TOL = 1e-12
JACOBI_TOL = 1e-10
RANK_TOL = 1e-10

SLOT_PAIRS = ("12_13", "12_23", "13_23")


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=float))
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """A finite-dimensional real Lie algebra given by structure constants.

    c[i,j,k] is the coefficient of e_k in [e_i, e_j]. Antisymmetry in (i,j)
    and the Jacobi identity are checked at construction; the measured
    residuals are available afterwards through the *_residual methods.
    """

    c: np.ndarray
    basis_labels: tuple = ()
    antisym_tol: float = ANTISYM_TOL
    jacobi_tol: float = JACOBI_TOL

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise InputShapeError(
                f"structure constants must be a cubic 3-index array, got shape {c.shape}"
            )
        object.__setattr__(self, "c", _freeze(c))
        n = c.shape[0]
        if not self.basis_labels:
            object.__setattr__(self, "basis_labels", tuple(f"e{i}" for i in range(n)))
        elif len(self.basis_labels) != n:
            raise InputShapeError(
                f"{len(self.basis_labels)} basis labels for dimension {n}"
            )
        r = self.antisymmetry_residual()
        if r > self.antisym_tol:
            raise StructureConstantError(
                f"structure constants not antisymmetric: residual {r:.3e} > {self.antisym_tol:.1e}"
            )
        r = self.jacobi_residual()
        if r > self.jacobi_tol:
            raise StructureConstantError(
                f"Jacobi identity fails: residual {r:.3e} > {self.jacobi_tol:.1e}"
            )

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @staticmethod
    def abelian(dim: int, labels: tuple = ()) -> "LieAlgebra":
        return LieAlgebra(np.zeros((dim, dim, dim)), basis_labels=labels)

    def antisymmetry_residual(self) -> float:
        if self.c.size == 0:
            return 0.0
        return float(np.max(np.abs(self.c + np.swapaxes(self.c, 0, 1))))

    def jacobi_residual(self) -> float:
        """Max-norm of Σ_m (c^m_ij c^l_mk + c^m_jk c^l_mi + c^m_ki c^l_mj)."""
        if self.c.size == 0:
            return 0.0
        c = self.c
        j = (
            np.einsum("ijm,mkl->ijkl", c, c)
            + np.einsum("jkm,mil->ijkl", c, c)
            + np.einsum("kim,mjl->ijkl", c, c)
        )
        return float(np.max(np.abs(j)))

    def _check_vector(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InputShapeError(f"expected vector of length {self.dim}, got shape {x.shape}")
        return x

    def bracket(self, x, y) -> np.ndarray:
        """[x, y] in coordinates, bilinear and antisymmetric."""
        x = self._check_vector(x)
        y = self._check_vector(y)
        return np.einsum("i,j,ijk->k", x, y, self.c)

    def ad_matrix(self, x) -> np.ndarray:
        """Matrix M of ad_x, i.e. M @ y == bracket(x, y) for every y."""
        x = self._check_vector(x)
        return np.einsum("i,ijk->kj", x, self.c)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of an ambient coordinate space, spanned by the rows of basis."""

    ambient_dim: int
    basis: np.ndarray  # shape (k, ambient_dim)
    rank_tol: float = RANK_TOL

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[1] != self.ambient_dim:
            raise InputShapeError(
                f"subspace basis must have shape (k, {self.ambient_dim}), got {b.shape}"
            )
        object.__setattr__(self, "basis", _freeze(b))
        if b.shape[0] > 0:
            s = np.linalg.svd(b, compute_uv=False)
            if b.shape[0] > b.shape[1] or s[-1] <= self.rank_tol * s[0]:
                raise SubspaceError(
                    f"basis vectors not linearly independent "
                    f"(smallest/largest singular value {s[-1]:.3e}/{s[0]:.3e})"
                )

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def embed(self, coords) -> np.ndarray:
        """Ambient coordinates of the element with the given basis coordinates."""
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dim,):
            raise InputShapeError(f"expected {self.dim} coordinates, got shape {coords.shape}")
        if self.dim == 0:
            return np.zeros(self.ambient_dim)
        return coords @ self.basis


@dataclass(frozen=True, eq=False)
class Tensor2:
    """Element of g⊗g as a dense coefficient matrix over the algebra basis."""

    coeffs: np.ndarray
    antisymmetric: bool = False
    tol: float = ANTISYM_TOL

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputShapeError(f"Tensor2 coefficients must be square, got shape {a.shape}")
        object.__setattr__(self, "coeffs", _freeze(a))
        if self.antisymmetric:
            r = self.antisymmetry_residual()
            if r > self.tol:
                raise InputShapeError(
                    f"tensor flagged antisymmetric has residual {r:.3e} > {self.tol:.1e}"
                )

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def antisymmetry_residual(self) -> float:
        if self.coeffs.size == 0:
            return 0.0
        return float(np.max(np.abs(self.coeffs + self.coeffs.T)))

    def norm(self) -> float:
        if self.coeffs.size == 0:
            return 0.0
        return float(np.max(np.abs(self.coeffs)))

    @staticmethod
    def zero(dim: int, antisymmetric: bool = True) -> "Tensor2":
        return Tensor2(np.zeros((dim, dim)), antisymmetric=antisymmetric)


@dataclass(frozen=True, eq=False)
class Tensor3:
    """Element of g⊗g⊗g as a dense 3-index coefficient array."""

    coeffs: np.ndarray
    alternating: bool = False
    tol: float = JACOBI_TOL

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=float)
        if a.ndim != 3 or len(set(a.shape)) != 1:
            raise InputShapeError(f"Tensor3 coefficients must be cubic, got shape {a.shape}")
        object.__setattr__(self, "coeffs", _freeze(a))
        if self.alternating:
            r = self.alternation_residual()
            if r > self.tol:
                raise InputShapeError(
                    f"tensor flagged alternating has residual {r:.3e} > {self.tol:.1e}"
                )

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def alternation_residual(self) -> float:
        """Deviation from total antisymmetry under all index transpositions."""
        a = self.coeffs
        if a.size == 0:
            return 0.0
        r = max(
            np.max(np.abs(a + np.transpose(a, (1, 0, 2)))),
            np.max(np.abs(a + np.transpose(a, (0, 2, 1)))),
            np.max(np.abs(a + np.transpose(a, (2, 1, 0)))),
        )
        return float(r)

    def norm(self) -> float:
        if self.coeffs.size == 0:
            return 0.0
        return float(np.max(np.abs(self.coeffs)))


def _tensor2_coeffs(t) -> np.ndarray:
    return t.coeffs if isinstance(t, Tensor2) else np.asarray(t, dtype=float)


def mixed_bracket_terms(A: LieAlgebra, s, t, slot_pair: str) -> Tensor3:
    """Bracket of s and t embedded in the indicated slots of g⊗g⊗g.

    ``12_13`` gives [s_12, t_13], ``12_23`` gives [s_12, t_23] and ``13_23``
    gives [s_13, t_23]; the bracket acts in the slot the two embeddings share.
    """
    s = _tensor2_coeffs(s)
    t = _tensor2_coeffs(t)
    if s.shape != (A.dim, A.dim) or t.shape != (A.dim, A.dim):
        raise InputShapeError(
            f"tensors must be {A.dim}x{A.dim}, got {s.shape} and {t.shape}"
        )
    c = A.c
    if slot_pair == "12_13":
        out = np.einsum("ay,cz,acx->xyz", s, t, c)
    elif slot_pair == "12_23":
        out = np.einsum("xb,cz,bcy->xyz", s, t, c)
    elif slot_pair == "13_23":
        out = np.einsum("xb,yd,bdz->xyz", s, t, c)
    else:
        raise InputShapeError(f"slot_pair must be one of {SLOT_PAIRS}, got {slot_pair!r}")
    return Tensor3(out)


def cybe_lhs(A: LieAlgebra, R) -> Tensor3:
    """[R12, R13] + [R12, R23] + [R13, R23] as a 3-tensor over the basis of A.

    For an antisymmetric R this is the modified-Yang-Baxter anomaly; whether
    it is ad-invariant is checked separately with is_invariant3.
    """
    total = np.zeros((A.dim, A.dim, A.dim))
    for pair in SLOT_PAIRS:
        total = total + mixed_bracket_terms(A, R, R, pair).coeffs
    return Tensor3(total)


def invariance_residual3(A: LieAlgebra, T) -> float:
    """Max-norm of (ad_x⊗1⊗1 + 1⊗ad_x⊗1 + 1⊗1⊗ad_x)T over all basis x."""
    t = T.coeffs if isinstance(T, Tensor3) else np.asarray(T, dtype=float)
    worst = 0.0
    for i in range(A.dim):
        x = np.zeros(A.dim)
        x[i] = 1.0
        m = A.ad_matrix(x)
        acted = (
            np.einsum("xa,ayz->xyz", m, t)
            + np.einsum("ya,xaz->xyz", m, t)
            + np.einsum("za,xya->xyz", m, t)
        )
        worst = max(worst, float(np.max(np.abs(acted))))
    return worst


def is_invariant3(A: LieAlgebra, T, tol: float = JACOBI_TOL) -> bool:
    """Whether T is annihilated by the diagonal adjoint action, up to tol."""
    t = T.coeffs if isinstance(T, Tensor3) else np.asarray(T, dtype=float)
    scale = 1.0 + float(np.max(np.abs(t))) if t.size else 1.0
    return invariance_residual3(A, T) <= tol * scale
