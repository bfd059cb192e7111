"""Constrained minimization inside the bend ball, plus constant estimation.

The solver runs projected gradient descent on the mass sphere with a
renormalization retraction and Armijo backtracking. Raw descent is useless
here: the bending term makes the gradient stiffness scale like h^{-4}, so
steps are preconditioned by the banded SPD operator P = a W + L^T W L
(Cholesky factored once per shift regime, a tracks |lambda|). The descent
direction is the tangent projection of P^{-1} applied to the weighted
gradient; energy still decreases strictly every accepted step.

Two residuals gate convergence: the weighted norm of the projected gradient
and |Q|/bend. Both are cheap and the second is the necessary condition the
analysis itself provides.

Iterates never leave the admissible ball: a candidate whose bend reaches
rho0 (1 - margin) is rejected and the step shrunk. The count of such
rejections is reported; a run dominated by them signals constants that are
inconsistent with the requested mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cho_solve_banded, cholesky_banded

from .fiber import analyze_fiber
from .functionals import (NormBundle, energy, lagrange_multiplier, norm_bundle,
                          pohozaev, pohozaev_coefficient)
from .grid import RadialField, RadialGrid
from .landscape import DomainError, LandscapeParams, mass_threshold

__all__ = ["SolverConfig", "GroundState", "ConvergenceError", "seed",
           "minimize", "estimate_gn_constant", "estimate_sobolev_constant",
           "fiber_consistency"]


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted or invariants unattainable at this setup."""


@dataclass(frozen=True)
class SolverConfig:
    step0: float = 1.0
    shrink: float = 0.5
    grow: float = 1.3
    grad_tol: float = 1e-8
    q_tol: float = 5e-7
    max_iter: int = 2000
    seed_shape: float = 1.0
    safeguard_margin: float = 1e-3
    safeguard_max_frac: float = 0.5
    stall_iters: int = 30

    def __post_init__(self):
        if not (self.step0 > 0):
            raise DomainError(f"step0 must be positive, got {self.step0}")
        if not (0 < self.shrink < 1 < self.grow):
            raise DomainError(
                f"need 0 < shrink < 1 < grow, got {self.shrink}, {self.grow}")
        if not (self.grad_tol > 0 and self.q_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")
        if not (self.seed_shape > 0):
            raise DomainError(f"seed_shape must be positive, got {self.seed_shape}")
        if not (0 < self.safeguard_margin < 1):
            raise DomainError("safeguard_margin must lie in (0, 1)")
        if not (0 < self.safeguard_max_frac <= 1):
            raise DomainError("safeguard_max_frac must lie in (0, 1]")
        if self.stall_iters < 1:
            raise DomainError("stall_iters must be >= 1")


@dataclass(frozen=True)
class GroundState:
    field: RadialField
    c: float
    m: float
    lam: float             # serialized under the key "lambda"
    q_residual: float
    bend: float
    iters: int
    constraint_active: bool


def _wdot(g: RadialGrid, a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(g.weights * a * b))


def seed(params: LandscapeParams, thresholds, c: float, grid: RadialGrid,
         shape: float = 1.0) -> RadialField:
    """Gaussian at mass c, fiber-contracted until J < 0 and bend < rho0.

    The dilation acts on the Gaussian family analytically, so no
    interpolation enters: u_s(r) = s^{N/4} t exp(-s r^2 / (2 shape^2)),
    renormalized to mass c on the grid at every trial s. Termination is
    guaranteed since psi -> 0- while bend shrinks like s^2.
    """
    _, c0, rho0 = thresholds
    if not (0 < c < c0):
        raise DomainError(f"mass must lie in (0, c0={c0}), got {c}")
    N = grid.dim
    r2 = grid.nodes ** 2
    margin = 1.0 - 1e-3
    s = 1.0
    for _ in range(60):
        prof = s ** (N / 4.0) * np.exp(-s * r2 / (2.0 * shape * shape))
        mass = _wdot(grid, prof, prof)
        prof *= math.sqrt(c / mass)
        fld = RadialField(grid, prof)
        b = norm_bundle(params, fld)
        if energy(params, b) < 0.0 and b.bend < rho0 * margin:
            return fld
        s *= 0.5
    raise ConvergenceError(
        "seed contraction did not reach J < 0 and bend < rho0 in 60 halvings")


def _banded_factor(grid: RadialGrid, a: float):
    # upper-banded Cholesky of P = a W + L^T W L, bandwidth 4
    n = grid.n
    K = (grid.lap_t @ sp.diags(grid.weights) @ grid.lap
         + sp.diags(a * grid.weights)).todia()
    ab = np.zeros((5, n))
    for off, diag in zip(K.offsets, K.data):
        if off >= 0:
            ab[4 - off, :] = diag
    return cholesky_banded(ab, lower=False)


def _precond_apply(factor, grid: RadialGrid, v: np.ndarray) -> np.ndarray:
    # P^{-1} W v: the W makes the preconditioned step the gradient of J in
    # the P-inner product, keeping quadrature weights consistent
    return cho_solve_banded((factor, False), grid.weights * v)


def minimize(params: LandscapeParams, grid: RadialGrid, c: float,
             config: SolverConfig = SolverConfig()) -> GroundState:
    """Local minimizer of J on the mass-c sphere inside the bend ball.

    Raises ConvergenceError if the residuals are not met within max_iter,
    the line search dies, or the bend safeguard bound more than
    safeguard_max_frac of accepted steps.
    """
    thresholds = mass_threshold(params)
    _, c0, rho0 = thresholds
    if not (0 < c < c0):
        raise DomainError(f"mass must lie in (0, c0={c0}), got {c}")
    if grid.dim != params.N:
        raise DomainError(f"grid dim {grid.dim} does not match params N={params.N}")

    u = seed(params, thresholds, c, grid, config.seed_shape).values
    bend_cap = rho0 * (1.0 - config.safeguard_margin)
    w = grid.weights
    kq = pohozaev_coefficient(params)

    def bundle_of(vec: np.ndarray) -> NormBundle:
        return norm_bundle(params, RadialField(grid, vec))

    b = bundle_of(u)
    J = energy(params, b)
    tau = config.step0
    a_shift = None
    factor = None
    n_safe = 0
    accepted = 0
    stall = 0
    iters = 0

    for iters in range(1, config.max_iter + 1):
        lu = grid.lap @ u
        au = np.abs(u)
        grad = ((grid.lap_t @ (w * lu)) / w
                - params.mu * np.sign(u) * au ** (params.q - 1.0)
                - np.sign(u) * au ** (params.p_crit - 1.0))
        lam_hat = _wdot(grid, grad, u) / c
        g_proj = grad - lam_hat * u
        gnorm = math.sqrt(_wdot(grid, g_proj, g_proj))
        qres = abs(pohozaev(params, b)) / b.bend
        if gnorm <= config.grad_tol and qres <= config.q_tol:
            break

        a_new = max(abs(lam_hat), 1e-12)
        if factor is None or not (0.5 < a_new / a_shift < 2.0):
            a_shift = a_new
            factor = _banded_factor(grid, a_shift)
        d = _precond_apply(factor, grid, g_proj)
        d = -(d - (_wdot(grid, d, u) / c) * u)
        slope = _wdot(grid, g_proj, d)
        if slope >= 0.0:
            d = -g_proj
            slope = -gnorm * gnorm

        tau = min(tau * config.grow, 1e3)
        for _ in range(60):
            cand = u + tau * d
            cand *= math.sqrt(c / _wdot(grid, cand, cand))
            b2 = bundle_of(cand)
            if b2.bend >= bend_cap:
                n_safe += 1
                tau *= config.shrink
                continue
            J2 = energy(params, b2)
            if J2 <= J + 1e-4 * tau * slope:
                break
            tau *= config.shrink
        else:
            raise ConvergenceError(
                f"line search failed at iteration {iters} "
                f"(gnorm={gnorm:.3e}, q_residual={qres:.3e})")

        accepted += 1
        if J - J2 <= 1e-16 * abs(J):
            stall += 1
            if stall >= config.stall_iters:
                raise ConvergenceError(
                    f"stalled for {config.stall_iters} steps at "
                    f"gnorm={gnorm:.3e}, q_residual={qres:.3e} "
                    f"(tolerances {config.grad_tol}, {config.q_tol})")
        else:
            stall = 0
        u, b, J = cand, b2, J2
    else:
        raise ConvergenceError(
            f"no convergence in {config.max_iter} iterations "
            f"(gnorm={gnorm:.3e}, q_residual={qres:.3e})")

    if accepted and n_safe > config.safeguard_max_frac * accepted:
        raise ConvergenceError(
            f"bend safeguard bound {n_safe} times over {accepted} accepted "
            "steps; constants look inconsistent with this mass")

    mass_err = abs(b.mass - c) / c
    if mass_err > 1e-8:
        raise ConvergenceError(f"converged mass drifted: rel err {mass_err:.3e}")
    if not (b.bend < rho0):
        raise ConvergenceError(f"converged bend {b.bend} is not below rho0 {rho0}")
    if not (J < 0):
        raise ConvergenceError(f"converged energy {J} is not negative")
    return GroundState(
        field=RadialField(grid, u), c=c, m=J,
        lam=lagrange_multiplier(params, b),
        q_residual=abs(pohozaev(params, b)) / b.bend,
        bend=b.bend, iters=iters,
        constraint_active=n_safe > 0)


def _quotient_gn(params: LandscapeParams, grid: RadialGrid, q: float,
                 u: np.ndarray) -> float:
    beta = params.N * (q - 2.0) / (4.0 * q)
    lu = grid.lap @ u
    B = float(np.sum(grid.weights * np.abs(u) ** q))
    A = float(np.sum(grid.weights * lu * lu))
    mass = float(np.sum(grid.weights * u * u))
    return (B ** (1.0 / q)) / (A ** (beta / 2.0) * mass ** ((1.0 - beta) / 2.0))


def estimate_gn_constant(params: LandscapeParams, grid: RadialGrid, q: float,
                         max_iter: int = 500, tol: float = 1e-14) -> float:
    """Best interpolation-quotient over radial fields, by preconditioned ascent.

    Maximizes log |u|_q - beta log |Du|_2 - (1-beta) log |u|_2 starting from
    the unit Gaussian, renormalizing mass to 1 every step. The returned value
    is the achieved quotient: a certified lower bound on the true constant,
    used as the working constant.
    """
    if not (2.0 < q < params.p_crit):
        raise DomainError(f"q must lie in (2, 4*={params.p_crit}), got {q}")
    beta = params.N * (q - 2.0) / (4.0 * q)
    w = grid.weights
    factor = _banded_factor(grid, 1.0)

    u = np.exp(-grid.nodes ** 2 / 2.0)
    u /= math.sqrt(_wdot(grid, u, u))

    def logF(vec: np.ndarray) -> float:
        lu = grid.lap @ vec
        B = float(np.sum(w * np.abs(vec) ** q))
        A = float(np.sum(w * lu * lu))
        mass = float(np.sum(w * vec * vec))
        return (math.log(B) / q - beta * math.log(A) / 2.0
                - (1.0 - beta) * math.log(mass) / 2.0)

    F = logF(u)
    tau = 1.0
    for _ in range(max_iter):
        lu = grid.lap @ u
        au = np.abs(u)
        B = float(np.sum(w * au ** q))
        A = float(np.sum(w * lu * lu))
        mass = float(np.sum(w * u * u))
        grad = (np.sign(u) * au ** (q - 1.0) / B
                - beta * (grid.lap_t @ (w * lu)) / w / A
                - (1.0 - beta) * u / mass)
        d = cho_solve_banded((factor, False), w * grad)
        gnorm2 = _wdot(grid, grad, d)
        tau = min(tau * 1.5, 1e3)
        improved = False
        for _ in range(60):
            cand = u + tau * d
            cand /= math.sqrt(_wdot(grid, cand, cand))
            F2 = logF(cand)
            if F2 > F + 1e-4 * tau * gnorm2:
                improved = True
                break
            tau *= 0.5
        if not improved or F2 - F <= tol * max(1.0, abs(F)):
            u = cand if improved else u
            return _quotient_gn(params, grid, q, u)
        u, F = cand, F2
    raise ConvergenceError(f"quotient ascent did not settle in {max_iter} steps")


def _sobolev_quotient(params: LandscapeParams, grid: RadialGrid,
                      eps: float) -> float:
    # (eps + r^2)^{-(N-4)/2} tapered to zero on [R/2, R] by a C^2 smoothstep;
    # the family, taper window, and eps search window all commute with
    # dilation, so the estimate is invariant under doubling R at fixed n
    N = grid.dim
    r = grid.nodes
    R = grid.r_max
    u = (eps + r ** 2) ** (-(N - 4) / 2.0)
    t = np.clip((r - R / 2.0) / (R / 2.0), 0.0, 1.0)
    u *= 1.0 - t ** 3 * (10.0 - 15.0 * t + 6.0 * t * t)
    lu = grid.lap @ u
    p = params.p_crit
    C = float(np.sum(grid.weights * np.abs(u) ** p))
    A = float(np.sum(grid.weights * lu * lu))
    return C ** (1.0 / p) / math.sqrt(A)


def estimate_sobolev_constant(params: LandscapeParams, grid: RadialGrid,
                              check_truncation: bool = True) -> float:
    """Critical-embedding quotient over the tapered bubble family.

    Golden-section maximization over log eps; the window floor keeps the
    core resolvable at the grid spacing. Raises if doubling R moves the
    value by more than 1e-3 relative (truncation-dominated setup).
    """
    def best_on(g: RadialGrid) -> float:
        lo = math.log(max(1e-2, (4.0 * g.h) ** 2))
        hi = math.log(1e2)
        if lo >= hi:
            raise DomainError("grid too coarse to resolve the bubble core")
        gr = (math.sqrt(5.0) - 1.0) / 2.0
        x1 = hi - gr * (hi - lo)
        x2 = lo + gr * (hi - lo)
        f1 = _sobolev_quotient(params, g, math.exp(x1))
        f2 = _sobolev_quotient(params, g, math.exp(x2))
        for _ in range(80):
            if hi - lo < 1e-12:
                break
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + gr * (hi - lo)
                f2 = _sobolev_quotient(params, g, math.exp(x2))
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - gr * (hi - lo)
                f1 = _sobolev_quotient(params, g, math.exp(x1))
        return max(f1, f2)

    val = best_on(grid)
    if check_truncation:
        from .grid import build_grid
        doubled = best_on(build_grid(grid.dim, grid.n, 2.0 * grid.r_max))
        if abs(doubled - val) > 1e-3 * val:
            raise DomainError(
                f"truncation sensitivity {abs(doubled - val) / val:.2e} above "
                "1e-3; increase r_max")
    return val


def fiber_consistency(params: LandscapeParams, state: GroundState) -> float:
    """|s1 - 1| for the converged bundle; the minimizer sits at its own
    fiber minimum, so this is a free end-to-end self-check."""
    b = norm_bundle(params, state.field)
    fa = analyze_fiber(params, b)
    if fa.s1 is None:
        raise ConvergenceError("converged bundle has no fiber minimum")
    return abs(fa.s1 - 1.0)
