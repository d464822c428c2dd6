"""Interpolation-set maintenance and local model construction.

The solver keeps a set of points with residual-vector values and builds a
linear model r(x_k + s) ~ r_k + J_k s for the residuals by regression (when
the set has at least n+1 points) or by minimal-norm interpolation (while the
set is still growing). The quadratic objective model, the Lagrange polynomials
of the set and the geometry-improvement machinery all live here.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DegenerateSetError,
    clamp_singular_values,
    random_orthonormal,
    solve_min_norm,
    solve_regression,
)

__all__ = [
    "InterpolationSet",
    "LinearResidualModel",
    "FullModel",
    "LagrangeBasis",
    "build_initial_set",
    "build_linear_model",
    "full_model",
    "lagrange_basis",
    "poisedness_estimate",
    "geometry_point",
    "needs_geometry_improvement",
    "choose_point_to_replace",
]

logger = logging.getLogger("dfls")

# Smallest acceptable step fraction when both signs of an initial direction
# have to be projected onto the bounds.
MIN_INITIAL_STEP_FRAC = 1e-3


class InterpolationSet:
    """Point set with residual values, per-point sample counts and a base index.

    The base point is kept at the minimum of ||values[t]||^2 over the set;
    call sites that fill values lazily must call rebase() once done.
    """

    def __init__(self, points, values=None, sample_counts=None, base_index=0):
        self.points = np.atleast_2d(np.asarray(points, dtype=float)).copy()
        npt = self.points.shape[0]
        if values is None:
            self.values = None
            self._fvals = np.full(npt, np.inf)
        else:
            self.values = np.atleast_2d(np.asarray(values, dtype=float)).copy()
            self._fvals = np.einsum("ij,ij->i", self.values, self.values)
        if sample_counts is None:
            self.sample_counts = np.ones(npt, dtype=int)
        else:
            self.sample_counts = np.asarray(sample_counts, dtype=int).copy()
        self.base_index = int(base_index)

    @property
    def npt(self):
        return self.points.shape[0]

    @property
    def n(self):
        return self.points.shape[1]

    @property
    def m(self):
        return None if self.values is None else self.values.shape[1]

    def base_point(self):
        return self.points[self.base_index]

    def base_value(self):
        return self.values[self.base_index]

    def base_objective(self):
        return self._fvals[self.base_index]

    def objective_values(self):
        return self._fvals.copy()

    def set_value(self, t, value, n_samples=1):
        value = np.asarray(value, dtype=float)
        if self.values is None:
            self.values = np.full((self.npt, value.size), np.nan)
        self.values[t] = value
        self._fvals[t] = float(value @ value)
        self.sample_counts[t] = n_samples

    def rebase(self):
        """Point the base at the strictly smallest objective value."""
        t = int(np.argmin(self._fvals))
        if self._fvals[t] < self._fvals[self.base_index]:
            self.base_index = t

    def distances_from(self, center):
        diff = self.points - np.asarray(center, dtype=float)
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def update(self, new_point, new_value, replace_index=None, n_samples=1):
        """Append (growing) or replace one point, then re-point the base.

        Duplicate points are rejected: they would make the interpolation
        system singular.
        """
        new_point = np.asarray(new_point, dtype=float)
        if np.any(np.all(self.points == new_point, axis=1)):
            raise ValueError("duplicate interpolation point")
        if replace_index is None:
            self.points = np.vstack([self.points, new_point])
            self._fvals = np.append(self._fvals, np.inf)
            self.sample_counts = np.append(self.sample_counts, 1)
            if self.values is not None:
                self.values = np.vstack([self.values, np.full(self.values.shape[1], np.nan)])
            self.set_value(self.npt - 1, new_value, n_samples)
        else:
            if replace_index == self.base_index:
                raise ValueError("cannot replace the base point")
            self.points[replace_index] = new_point
            self.set_value(replace_index, new_value, n_samples)
        self.rebase()

    def copy(self):
        out = InterpolationSet(self.points, self.values, self.sample_counts, self.base_index)
        return out


@dataclass
class LinearResidualModel:
    """Linear residual model r(x_k + s) ~ r_k + J_k s around the base point."""

    r: np.ndarray          # (m,)
    J: np.ndarray          # (m, n)
    alpha: float           # max distance of set points from the base
    rank_repaired: bool = False

    def predict(self, s):
        return self.r + self.J @ np.asarray(s, dtype=float)


@dataclass
class FullModel:
    """Quadratic model of the sum-of-squares objective derived from a linear model.

    m(s) = c + g.s + 0.5 s.H.s with c = ||r||^2, g = 2 J^T r, H = 2 J^T J,
    which equals ||r + J s||^2 identically.
    """

    c: float
    g: np.ndarray
    H: np.ndarray

    def value(self, s):
        s = np.asarray(s, dtype=float)
        return self.c + self.g @ s + 0.5 * (s @ self.H @ s)

    def decrease(self, s):
        s = np.asarray(s, dtype=float)
        return -(self.g @ s) - 0.5 * (s @ self.H @ s)


@dataclass
class LagrangeBasis:
    """Regression Lagrange polynomials L_t(y) = c[t] + g[t].(y - center)."""

    c: np.ndarray        # (p+1,)
    g: np.ndarray        # (p+1, n)
    center: np.ndarray   # (n,)

    def evaluate(self, y):
        """Values of all polynomials at y."""
        return self.c + self.g @ (np.asarray(y, dtype=float) - self.center)


def _feasible_step(x0, direction, delta, lower, upper):
    """Initial-set step along +/- direction, adjusted for the bounds.

    Prefers the + step; flips the sign if that is infeasible; if both signs
    are infeasible projects the + step onto the box. Returns None when even
    the projected step is shorter than MIN_INITIAL_STEP_FRAC * delta.
    """
    for sign in (1.0, -1.0):
        y = x0 + sign * delta * direction
        if np.all(y >= lower) and np.all(y <= upper):
            return y
    y = np.clip(x0 + delta * direction, lower, upper)
    if np.linalg.norm(y - x0) >= MIN_INITIAL_STEP_FRAC * delta:
        return y
    y = np.clip(x0 - delta * direction, lower, upper)
    if np.linalg.norm(y - x0) >= MIN_INITIAL_STEP_FRAC * delta:
        return y
    return None


def build_initial_set(x0, delta0, p_init, bounds, rng):
    """Initial geometry: x0 plus p_init points at distance delta0.

    Directions are random orthonormal vectors q_t; the first min(p_init, n)
    points are x0 + delta0 q_t, the next n are x0 - delta0 q_t, and any
    remainder uses fresh random unit directions. Values are not evaluated
    here; the caller fills them and calls rebase().
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    if p_init < 1:
        raise ValueError("need p_init >= 1")
    if delta0 <= 0.0:
        raise ValueError("need delta0 > 0")
    lower, upper = _bounds_arrays(bounds, n)
    if np.any(x0 < lower) or np.any(x0 > upper):
        raise ValueError("x0 is not within the bounds")

    k = min(p_init, n)
    Q = random_orthonormal(n, k, rng)
    points = [x0]
    for t in range(p_init):
        if t < n:
            direction = Q[t]
        elif t < 2 * n:
            direction = -Q[t - n]
        else:
            v = rng.standard_normal(n)
            direction = v / np.linalg.norm(v)
        y = _feasible_step(x0, direction, delta0, lower, upper)
        if y is None:
            raise ValueError("infeasible initial geometry")
        points.append(y)
    return InterpolationSet(np.array(points), base_index=0)


def _interp_matrix(iset, scale):
    """Rows [1, (y_t - x_k)^T / scale] for every point of the set."""
    dy = (iset.points - iset.base_point()) / scale
    W = np.empty((iset.npt, iset.n + 1))
    W[:, 0] = 1.0
    W[:, 1:] = dy
    return W


def set_radius(iset):
    """Max distance of the set points from the base point."""
    return float(np.max(iset.distances_from(iset.base_point())))


def build_linear_model(iset, repair_rank=True):
    """Fit the linear residual model to the current set.

    With p >= n points beyond the base this is the least-squares fit of the
    (preconditioned) interpolation system; with p < n it is the exact
    interpolant minimizing ||r||^2 + alpha ||J||_F^2, whose Jacobian has rank
    p and is then made full-rank by raising its trailing singular values
    (unless repair_rank is false, for the perturbed-step growing variant).
    """
    if iset.values is None or np.any(np.isnan(iset.values)):
        raise ValueError("interpolation set has unevaluated points")
    p = iset.npt - 1
    n = iset.n
    alpha = set_radius(iset)
    if alpha <= 0.0:
        raise DegenerateSetError("degenerate interpolation set")
    repaired = False
    if p >= n:
        W = _interp_matrix(iset, alpha)
        Z = solve_regression(W, iset.values)
        r = Z[0].copy()
        J = Z[1:].T / alpha
    else:
        # Column scaling by sqrt(alpha) makes the minimal-norm objective
        # exactly ||r||^2 + alpha ||J||_F^2.
        scale = np.sqrt(alpha)
        W = _interp_matrix(iset, scale)
        Z = solve_min_norm(W, iset.values)
        r = Z[0].copy()
        J = Z[1:].T / scale
        if repair_rank and p < n:
            J = clamp_singular_values(J, p)
            repaired = True
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(J))):
        raise DegenerateSetError("degenerate interpolation set")
    return LinearResidualModel(r=r, J=J, alpha=alpha, rank_repaired=repaired)


def full_model(lm):
    """Quadratic objective model ||r + J s||^2 from a linear residual model."""
    g = 2.0 * (lm.J.T @ lm.r)
    H = 2.0 * (lm.J.T @ lm.J)
    return FullModel(c=float(lm.r @ lm.r), g=g, H=H)


def lagrange_basis(iset):
    """Regression Lagrange polynomials of the set, centred at the base point.

    Requires p >= n points beyond the base and a full-column-rank system.
    """
    p = iset.npt - 1
    if p < iset.n:
        raise DegenerateSetError("degenerate interpolation set")
    alpha = set_radius(iset)
    if alpha <= 0.0:
        raise DegenerateSetError("degenerate interpolation set")
    W = _interp_matrix(iset, alpha)
    Z = solve_regression(W, np.eye(iset.npt))
    return LagrangeBasis(c=Z[0].copy(), g=Z[1:].T / alpha, center=iset.base_point().copy())


def fit_model_and_basis(iset):
    """Linear model and Lagrange basis from a single least-squares solve.

    Only valid in the regression regime (p >= n); the solver hot path uses
    this to avoid factorizing the interpolation matrix twice per iteration.
    """
    p = iset.npt - 1
    if p < iset.n:
        raise DegenerateSetError("degenerate interpolation set")
    alpha = set_radius(iset)
    if alpha <= 0.0:
        raise DegenerateSetError("degenerate interpolation set")
    W = _interp_matrix(iset, alpha)
    rhs = np.hstack([iset.values, np.eye(iset.npt)])
    if W.shape[0] == W.shape[1]:
        # Square system: LU is markedly cheaper than the SVD-based solve.
        try:
            Z = np.linalg.solve(W, rhs)
        except np.linalg.LinAlgError:
            raise DegenerateSetError("degenerate interpolation set") from None
    else:
        Z = solve_regression(W, rhs)
    m = iset.values.shape[1]
    r = Z[0, :m].copy()
    J = Z[1:, :m].T / alpha
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(J))):
        raise DegenerateSetError("degenerate interpolation set")
    lm = LinearResidualModel(r=r, J=J, alpha=alpha, rank_repaired=False)
    basis = LagrangeBasis(c=Z[0, m:].copy(), g=Z[1:, m:].T / alpha, center=iset.base_point().copy())
    return lm, basis


def poisedness_estimate(iset, center, delta):
    """Largest Lagrange-polynomial magnitude over the ball B(center, delta).

    For linear polynomials the ball maximum is |L_t(center)| + delta ||g_t||,
    which is exact. Returns +inf for a degenerate set.
    """
    try:
        basis = lagrange_basis(iset)
    except DegenerateSetError:
        return np.inf
    vals = np.abs(basis.evaluate(center)) + delta * np.linalg.norm(basis.g, axis=1)
    return float(np.max(vals))


def _bounds_arrays(bounds, n):
    if bounds is None:
        return np.full(n, -np.inf), np.full(n, np.inf)
    lower = np.asarray(bounds[0], dtype=float)
    upper = np.asarray(bounds[1], dtype=float)
    lower = np.full(n, -np.inf) if lower is None else np.broadcast_to(lower, (n,)).astype(float)
    upper = np.full(n, np.inf) if upper is None else np.broadcast_to(upper, (n,)).astype(float)
    return lower, upper


def geometry_point(basis, t, center, delta, bounds=None, rng=None):
    """Point maximizing |L_t| over the ball B(center, delta), box-projected.

    Unconstrained the maximizer is center +/- delta g_t/||g_t|| with the sign
    picked to maximize |L_t|. With bounds, both endpoints are projected onto
    the box and the better one is returned.
    """
    center = np.asarray(center, dtype=float)
    n = center.size
    lower, upper = _bounds_arrays(bounds, n)
    g = basis.g[t]
    gnorm = np.linalg.norm(g)
    if gnorm == 0.0:
        logger.warning("geometry step: zero Lagrange gradient, using a random direction")
        if rng is None:
            d = np.zeros(n)
            d[0] = 1.0
        else:
            d = rng.standard_normal(n)
            d /= np.linalg.norm(d)
        return np.clip(center + delta * d, lower, upper)
    step = delta * g / gnorm
    cands = [np.clip(center + step, lower, upper), np.clip(center - step, lower, upper)]
    vals = [abs(basis.evaluate(y)[t]) for y in cands]
    return cands[int(np.argmax(vals))]


def needs_geometry_improvement(iset, center, epsilon):
    """True iff some point lies strictly further than epsilon from center."""
    return bool(np.max(iset.distances_from(center)) > epsilon)


def choose_point_to_replace(iset, basis, new_point, center, delta):
    """Index of the point to drop when new_point enters the set.

    Scores each non-base point by |L_t(new_point)| * max(dist_t^4 / delta^4, 1)
    so distant points are evicted preferentially; ties in distance reduce the
    criterion to the Lagrange magnitude.
    """
    lam = np.abs(basis.evaluate(new_point))
    dist = iset.distances_from(center)
    score = lam * np.maximum((dist / delta) ** 4, 1.0)
    score[iset.base_index] = -np.inf
    return int(np.argmax(score))
