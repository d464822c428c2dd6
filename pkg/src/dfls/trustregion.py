"""Bound-constrained trust-region subproblem with a guaranteed Cauchy decrease.

The quadratic model here always has a positive-semidefinite Hessian (it comes
from a Gauss-Newton construction), so a projected truncated conjugate-gradient
refinement of the Cauchy point is enough. Every returned step is checked
against the decrease bound

    m(0) - m(s) >= 0.5 ||g|| min(delta, ||g|| / max(||H||, 1)),

and the module keeps counters so a whole benchmark run can be audited for
violations afterwards.
"""

import numpy as np

__all__ = ["solve_trust_region", "cauchy_point", "contract_stats", "reset_contract_stats"]

_FEAS_TOL = 1e-12

# Decrease-contract audit counters (per process).
_STATS = {"checks": 0, "violations": 0}


def contract_stats():
    return dict(_STATS)


def reset_contract_stats():
    _STATS["checks"] = 0
    _STATS["violations"] = 0


def _bounds(lower, upper, n):
    lo = np.full(n, -np.inf) if lower is None else np.asarray(lower, dtype=float)
    up = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
    return lo, up


def _max_feasible_step(s, d, delta, lower, upper, box=True):
    """Largest t >= 0 with s + t d inside the ball and the box."""
    dd = float(d @ d)
    if dd == 0.0:
        return 0.0
    # Ball: ||s + t d|| = delta.
    sd = float(s @ d)
    ss = float(s @ s)
    disc = sd * sd + dd * (delta * delta - ss)
    t_ball = (-sd + np.sqrt(max(disc, 0.0))) / dd if disc > 0.0 else 0.0
    if not box:
        return max(0.0, t_ball)
    # Box, coordinate-wise; inactive directions contribute +inf.
    with np.errstate(divide="ignore", invalid="ignore"):
        t_up = np.where(d > 0, (upper - s) / d, np.inf)
        t_lo = np.where(d < 0, (lower - s) / d, np.inf)
    t_box = min(np.min(t_up), np.min(t_lo))
    return max(0.0, min(t_ball, t_box))


def cauchy_point(model, delta, lower=None, upper=None, hnorm=None):
    """Exact line search along -g truncated by the ball and the box.

    The computed directional curvature d.H.d can round to zero or negative
    when H mixes huge magnitudes (ill-conditioned interpolation sets); in
    that regime the spectral norm of H, which is computed stably, bounds the
    curvature instead so the step can never increase the model.
    """
    g = model.g
    n = g.size
    lo, up = _bounds(lower, upper, n)
    gnorm = np.sqrt(float(g @ g))
    if gnorm == 0.0:
        return np.zeros(n)
    if hnorm is None:
        hnorm = _spectral_norm(model.H)
    d = -g / gnorm
    box = not (np.all(np.isinf(lo)) and np.all(np.isinf(up)))
    t_max = _max_feasible_step(np.zeros(n), d, delta, lo, up, box=box)
    curv = float(d @ model.H @ d)
    if curv > 1e-8 * hnorm and curv > 0.0:
        t_opt = gnorm / curv
    elif hnorm > 0.0:
        t_opt = gnorm / hnorm  # conservative curvature bound
    else:
        t_opt = np.inf
    t = min(t_opt, t_max)
    return t * d


def _spectral_norm(H):
    # H is symmetric PSD, so the spectral norm is the top eigenvalue.
    if H.shape[0] == 1:
        return abs(float(H[0, 0]))
    return float(np.linalg.eigvalsh(H)[-1])


def _cg_ball_only(model, s0, delta, max_iter):
    """Steihaug truncated CG inside the ball (no box constraints)."""
    H = model.H
    g = model.g
    s = s0.copy()
    r = -(g + H @ s)
    gg = float(g @ g)
    rr = float(r @ r)
    if rr <= 1e-28 * max(1.0, gg):
        return s
    d = r.copy()
    ss = float(s @ s)
    for _ in range(max_iter):
        Hd = H @ d
        dHd = float(d @ Hd)
        sd = float(s @ d)
        dd = float(d @ d)
        disc = sd * sd + dd * (delta * delta - ss)
        t_ball = (-sd + np.sqrt(max(disc, 0.0))) / dd if disc > 0.0 else 0.0
        if dHd <= 1e-15 * dd:
            return s + t_ball * d
        t = rr / dHd
        if t >= t_ball:
            return s + t_ball * d
        s += t * d
        ss += t * (2.0 * sd + t * dd)
        r -= t * Hd
        rr_new = float(r @ r)
        if rr_new <= 1e-28 * max(1.0, gg):
            break
        d = r + (rr_new / rr) * d
        rr = rr_new
    return s


def _projected_cg(model, s0, delta, lower, upper, max_iter):
    """Truncated CG from s0 on the free coordinates, restarting at box hits.

    Monotone in the model value; stops at the ball boundary (Steihaug rule)
    or after max_iter total CG iterations.
    """
    H = model.H
    g = model.g
    n = g.size
    s = s0.copy()
    tol_lo = np.where(np.isfinite(lower), _FEAS_TOL * np.maximum(1.0, np.abs(lower)), 0.0)
    tol_up = np.where(np.isfinite(upper), _FEAS_TOL * np.maximum(1.0, np.abs(upper)), 0.0)
    iters = 0
    for _ in range(n + 1):
        grad = g + H @ s
        at_lo = s <= lower + tol_lo
        at_up = s >= upper - tol_up
        fixed = (at_lo & (grad >= 0)) | (at_up & (grad <= 0))
        free = ~fixed
        if not np.any(free) or iters >= max_iter:
            break
        r = -grad.copy()
        r[fixed] = 0.0
        if np.linalg.norm(r) <= 1e-14 * max(1.0, np.linalg.norm(g)):
            break
        d = r.copy()
        rr = float(r @ r)
        hit_box = False
        while iters < max_iter:
            iters += 1
            Hd = H @ d
            dHd = float(d @ Hd)
            t_max = _max_feasible_step(s, d, delta, lower, upper)
            if dHd <= 1e-15 * float(d @ d):
                t = t_max
            else:
                t = min(rr / dHd, t_max)
            if t <= 0.0:
                break
            s = s + t * d
            if t >= t_max - 1e-15 * max(1.0, t_max):
                # Hit the ball or a box face; if a box face, fix and restart.
                if np.linalg.norm(s) >= delta * (1.0 - 1e-12):
                    return s
                hit_box = True
                break
            r = r - t * Hd
            r[fixed] = 0.0
            rr_new = float(r @ r)
            if rr_new <= 1e-28 * max(1.0, float(g @ g)):
                break
            d = r + (rr_new / rr) * d
            d[fixed] = 0.0
            rr = rr_new
        if not hit_box:
            break
    return s


def solve_trust_region(model, delta, lower=None, upper=None):
    """Approximate minimizer of the model over the ball intersected with the box.

    The step starts from the Cauchy point and is refined by projected
    truncated CG (at most 2n iterations), so the Cauchy decrease bound holds;
    it is verified on every call and an AssertionError is raised on violation.
    Returns the zero step when the model gradient vanishes.
    """
    if delta <= 0.0:
        raise ValueError("need delta > 0")
    g = model.g
    n = g.size
    lo, up = _bounds(lower, upper, n)
    if np.any(lo > _FEAS_TOL) or np.any(up < -_FEAS_TOL):
        raise ValueError("bounds must contain the origin (shift to the current iterate)")
    lo = np.minimum(lo, 0.0)
    up = np.maximum(up, 0.0)
    gnorm = np.sqrt(float(g @ g))
    if gnorm == 0.0:
        return np.zeros(n)

    hnorm = _spectral_norm(model.H)
    unconstrained = bool(np.all(np.isinf(lo)) and np.all(np.isinf(up)))
    # With bounds, the reachable length along -g caps the decrease any step
    # can achieve; without bounds this is exactly the ball radius.
    if unconstrained:
        t_reach = delta
    else:
        t_reach = _max_feasible_step(np.zeros(n), -g / gnorm, delta, lo, up)
    bound = 0.5 * gnorm * min(t_reach, gnorm / max(hnorm, 1.0))
    s_c = _finalize(cauchy_point(model, delta, lo, up, hnorm=hnorm), lo, up, delta)
    if unconstrained:
        s = _cg_ball_only(model, s_c, delta, max_iter=2 * n)
    else:
        s = _projected_cg(model, s_c, delta, lo, up, max_iter=2 * n)
    s = _finalize(s, lo, up, delta)

    # Keep the CG refinement only when its decrease verifiably beats the
    # Cauchy step and the bound; the evaluation of the decrease itself is
    # noise-limited for the huge near-singular models an ill-conditioned
    # interpolation set can produce, while the Cauchy step always evaluates
    # cleanly (its products stay at the scale of the bound).
    decrease, tol = _decrease_with_tol(model, s, gnorm, bound)
    dec_c, tol_c = _decrease_with_tol(model, s_c, gnorm, bound)
    if not (decrease >= dec_c and decrease >= bound - tol):
        s = s_c
        decrease, tol = dec_c, tol_c

    _STATS["checks"] += 1
    if decrease < bound - tol:
        _STATS["violations"] += 1
        raise AssertionError(
            "trust-region step failed the Cauchy decrease bound: "
            f"decrease={decrease:.6e} bound={bound:.6e}"
        )
    return s


def _finalize(s, lo, up, delta):
    # Exact feasibility clean-up; scaling towards the origin stays in the box.
    s = np.clip(s, lo, up)
    snorm = np.sqrt(float(s @ s))
    if snorm > delta:
        s = s * (delta / snorm)
    return s


_EPS = float(np.finfo(float).eps)


def _decrease_with_tol(model, s, gnorm, bound):
    """Model decrease at s and the rounding tolerance of its evaluation.

    The tolerance covers exact-equality cases (isotropic H) at the scale of
    the bound plus the cancellation error of the two dot products.
    """
    Hs = model.H @ s
    gs = float(model.g @ s)
    sHs = float(s @ Hs)
    decrease = -gs - 0.5 * sHs
    n = s.size
    snorm = np.sqrt(float(s @ s))
    cancel = gnorm * snorm + 0.5 * snorm * np.sqrt(float(Hs @ Hs))
    tol = 1e-12 * max(1.0, abs(bound)) + 8.0 * (n + 4) * _EPS * cancel
    return decrease, tol
