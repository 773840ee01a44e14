"""Elements of the dual group as exponential words, and calculus on them.

A point of K* is a word exp(x1)·exp(x2)·… with factors in K*; everything the
formulas consume factors through the adjoint matrix of the word on the double,
so a word caches Ad = Π exp(ad_{x_i}).  Functions on K* are pullbacks of
Ad-matrix entries (or combinations of them), which separate points well
enough for bracket testing.  Derivatives are central finite differences:

    (L_X f)(w) = d/dt f(exp(tX) w)|_0,   (R_X f)(w) = d/dt f(w exp(tX))|_0,

and the gradients over the dual pairing assemble from them basiswise.  The
Poisson bracket on the dual group is

    {f1, f2}(k) = << grad f1, Ad_k (grad' f2) >>

with the double's invariant pairing.  The infinitesimal dressing action of X
in K moves k along k·exp(t·(Ad_k^{-1} X)_{K*}).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .bialgebra_double import DoubleAlgebra
from .errors import FactorNotInDualError, InputShapeError

DEFAULT_FD_STEP = 1e-5
DUAL_COMPONENT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GroupWord:
    """A dual-group element together with its cached adjoint matrix.

    factors holds the K*-coordinate vectors of the word, left to right; it is
    None for points derived purely at the Ad level (finite-difference
    translates), for which only the matrix is meaningful.
    """

    double: DoubleAlgebra
    factors: Optional[tuple]
    ad: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.ad, dtype=float)
        if a.shape != (self.double.dim, self.double.dim):
            raise InputShapeError(f"Ad matrix must be {self.double.dim}x{self.double.dim}")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "ad", a)

    def inverse(self) -> "GroupWord":
        if self.factors is None:
            return GroupWord(self.double, None, np.linalg.inv(self.ad))
        rev = tuple(-f for f in reversed(self.factors))
        return ad_of_word(self.double, rev)

    def left_mul(self, xi, exp_matrix=None) -> "GroupWord":
        """The word exp(xi)·self, with xi in K* coordinates."""
        xi = _dual_coords(self.double, xi)
        e = _exp_ad(self.double, xi) if exp_matrix is None else exp_matrix
        factors = None if self.factors is None else (xi,) + self.factors
        return GroupWord(self.double, factors, e @ self.ad)

    def right_mul(self, xi, exp_matrix=None) -> "GroupWord":
        """The word self·exp(xi), with xi in K* coordinates."""
        xi = _dual_coords(self.double, xi)
        e = _exp_ad(self.double, xi) if exp_matrix is None else exp_matrix
        factors = None if self.factors is None else self.factors + (xi,)
        return GroupWord(self.double, factors, self.ad @ e)

    def pairing_residual(self) -> float:
        p = self.double.pairing
        return float(np.max(np.abs(self.ad.T @ p @ self.ad - p)))

    def dual_stability_residual(self) -> float:
        """Norm of the K-block of Ad restricted to K*, which must vanish."""
        d = self.double
        return float(np.max(np.abs(d.proj_K @ self.ad @ d.proj_Kstar)))


def _dual_coords(double: DoubleAlgebra, xi) -> np.ndarray:
    """Coerce a factor to K* coordinates, accepting full double coordinates."""
    xi = np.asarray(xi, dtype=float)
    n = double.n
    if xi.shape == (n,):
        return xi
    if xi.shape == (2 * n,):
        kpart = float(np.max(np.abs(xi[:n]), initial=0.0))
        if kpart > DUAL_COMPONENT_TOL:
            raise FactorNotInDualError(
                f"factor has a K-component of size {kpart:.3e}"
            )
        return xi[n:]
    raise InputShapeError(f"factor must have length {n} or {2 * n}, got shape {xi.shape}")


def _exp_ad(double: DoubleAlgebra, xi: np.ndarray) -> np.ndarray:
    return expm(double.D.ad_matrix(double.embed_Kstar(xi)))


def identity_word(double: DoubleAlgebra) -> GroupWord:
    return GroupWord(double, (), np.eye(double.dim))


def ad_of_word(double: DoubleAlgebra, factors) -> GroupWord:
    """Build the word exp(x1)·exp(x2)·… and cache its adjoint matrix."""
    coords = tuple(_dual_coords(double, f) for f in factors)
    ad = np.eye(double.dim)
    for xi in coords:
        ad = ad @ _exp_ad(double, xi)
    return GroupWord(double, coords, ad)


class AdEntry:
    """Pullback of a single entry of the adjoint representation."""

    def __init__(self, a: int, b: int):
        self.a, self.b = a, b

    def __call__(self, w: GroupWord) -> float:
        return float(w.ad[self.a, self.b])

    def __repr__(self):
        return f"AdEntry({self.a}, {self.b})"


class FuncCombo:
    """Finite linear combination of functions on the dual group."""

    def __init__(self, terms):
        self.terms = tuple(terms)  # (coefficient, function) pairs

    def __call__(self, w: GroupWord) -> float:
        return float(sum(c * f(w) for c, f in self.terms))


class FuncProduct:
    """Pointwise product of two functions on the dual group."""

    def __init__(self, f1, f2):
        self.f1, self.f2 = f1, f2

    def __call__(self, w: GroupWord) -> float:
        return self.f1(w) * self.f2(w)


class StepCache:
    """Precomputed exp(±h·ad) matrices along the K*-coordinate directions.

    Finite-difference loops hit the same step matrices thousands of times;
    precomputing turns every translate into a single matrix product.
    """

    def __init__(self, double: DoubleAlgebra, h: float, directions=None):
        self.double = double
        self.h = h
        n = double.n
        dirs = np.eye(n) if directions is None else np.asarray(directions, dtype=float)
        self.directions = dirs
        self.plus = [_exp_ad(double, h * d) for d in dirs]
        self.minus = [_exp_ad(double, -h * d) for d in dirs]


def left_derivative(w: GroupWord, X, f, h: float = DEFAULT_FD_STEP) -> float:
    """Central difference of f along left translation by exp(tX), X in K*."""
    X = _dual_coords(w.double, X)
    return (f(w.left_mul(h * X)) - f(w.left_mul(-h * X))) / (2.0 * h)


def right_derivative(w: GroupWord, X, f, h: float = DEFAULT_FD_STEP) -> float:
    X = _dual_coords(w.double, X)
    return (f(w.right_mul(h * X)) - f(w.right_mul(-h * X))) / (2.0 * h)


def gradients(
    w: GroupWord,
    f,
    h: float = DEFAULT_FD_STEP,
    cache: Optional[StepCache] = None,
) -> tuple:
    """Left and right gradients of f at w, as K-coordinate vectors.

    grad lives in K = (K*)*; its i-th coordinate is the left derivative along
    the i-th dual basis direction, and similarly for grad_prime with right
    derivatives.  The two satisfy grad' f = (Ad_w^{-1} grad f)_K up to O(h²).
    """
    n = w.double.n
    if cache is not None and cache.h == h and cache.double is w.double:
        plus, minus = cache.plus, cache.minus
        eye = cache.directions
    else:
        eye = np.eye(n)
        plus = [_exp_ad(w.double, h * eye[i]) for i in range(n)]
        minus = [_exp_ad(w.double, -h * eye[i]) for i in range(n)]
    grad = np.zeros(n)
    grad_prime = np.zeros(n)
    for i in range(n):
        grad[i] = (f(w.left_mul(eye[i], plus[i])) - f(w.left_mul(eye[i], minus[i]))) / (2 * h)
        grad_prime[i] = (f(w.right_mul(eye[i], plus[i])) - f(w.right_mul(eye[i], minus[i]))) / (
            2 * h
        )
    return grad, grad_prime


def pb_dual(
    w: GroupWord,
    f1,
    f2,
    h: float = DEFAULT_FD_STEP,
    cache: Optional[StepCache] = None,
) -> float:
    """Poisson bracket {f1, f2}(w) = << grad f1, Ad_w (grad' f2) >>."""
    g1, _ = gradients(w, f1, h, cache)
    _, g2p = gradients(w, f2, h, cache)
    d = w.double
    return d.pair(d.embed_K(g1), w.ad @ d.embed_K(g2p))


def dressing_vector(w: GroupWord, X) -> np.ndarray:
    """K*-part of Ad_w^{-1} X for X in K (K coordinates); returns K* coordinates.

    The dressing flow of X through w is t ↦ w·exp(tY) with Y the returned
    vector, to first order in t.
    """
    X = np.asarray(X, dtype=float)
    d = w.double
    if X.shape != (d.n,):
        raise InputShapeError(f"X must be a K vector of length {d.n}")
    moved = np.linalg.solve(w.ad, d.embed_K(X))
    return d.comp_Kstar(moved)
