"""Semigroup and two-time evolution engines.

The reference exponential is scipy's scaling-and-squaring Pade ``expm``. A
separate Euler-limit construction builds exp(L) as the n-th power of the CP
factor Id + (1/n)(L + eta(1/n) pi[Id]); it converges like 1/n and exists to
exercise the positivity argument, not as a production integrator.

Time-dependent generators are propagated by piecewise-constant splicing with
left-endpoint evaluation: Lambda_eps(t, s) = exp[(t - t_N) L(t_N)] ...
exp[eps L(t_0)] with t_n = s + n eps. When every L(t_n) is dCP each factor is
CP and therefore so is the product.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

from .errors import NotDcpError
from .operators import DEFAULT_TOL, Tolerance
from .superops import SuperOperator, dyad_vec
from .generators import is_dcp


def exp_generator(lam: SuperOperator, t: float) -> SuperOperator:
    """Matrix exponential exp(t L) as a superoperator."""
    if lam.dim_in != lam.dim_out:
        raise ValueError("exponential needs a square superoperator")
    return SuperOperator(expm(t * lam.matrix), lam.dim_in, lam.dim_out)


def euler_shift(lam: SuperOperator, eps: float) -> float:
    """The PSD-repair shift eta(eps) for one Euler factor.

    eta is the smallest nonneg shift (padded by a relative 1e-6) making
    pi[Id] + eps (J L + eta Id) positive semidefinite, computed from the
    smallest eigenvalue of the unshifted test matrix. It vanishes as eps -> 0
    for a dCP generator.
    """
    d = lam.dim_in
    w = dyad_vec(np.eye(d))
    test = np.outer(w, w) + eps * lam.choi.matrix
    lam_min = float(np.linalg.eigvalsh(0.5 * (test + test.conj().T))[0])
    shift = max(0.0, -lam_min) * (1.0 + 1e-6)
    return shift / eps


def euler_factor(lam: SuperOperator, eps: float) -> SuperOperator:
    """One CP Euler factor Id + eps (L + eta(eps) pi[Id])."""
    d = lam.dim_in
    w_vec = np.eye(d).reshape(-1, order="F")
    pi_id = np.outer(w_vec, w_vec)      # superoperator X -> Tr(X) Id
    eta = euler_shift(lam, eps)
    return SuperOperator(np.eye(d * d) + eps * lam.matrix + eps * eta * pi_id,
                         lam.dim_in, lam.dim_out)


def euler_limit_exp(lam: SuperOperator, n: int, tol: Tolerance = DEFAULT_TOL) -> SuperOperator:
    """n-step Euler product approximating exp(L) through CP factors."""
    if n < 1:
        raise ValueError(f"step count must be >= 1, got {n}")
    verdict = is_dcp(lam, tol)
    if not verdict.is_dcp:
        raise NotDcpError(
            "Euler-limit construction requires a dCP generator",
            verdict.compressed_choi_min_eig)
    factor = euler_factor(lam, 1.0 / n)
    return SuperOperator(np.linalg.matrix_power(factor.matrix, n),
                         lam.dim_in, lam.dim_out)


@dataclass(frozen=True)
class GeneratorSchedule:
    """Time-dependent generator t -> L(t) on the open interval (t_start, t_end)."""

    t_start: float
    t_end: float
    eval: Callable[[float], SuperOperator]
    continuity_modulus: Optional[float] = None

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(
                f"need t_start < t_end, got ({self.t_start}, {self.t_end})")

    def __call__(self, t: float) -> SuperOperator:
        return self.eval(t)


def constant_schedule(lam: SuperOperator,
                      t_start: float = -np.inf, t_end: float = np.inf) -> GeneratorSchedule:
    """Schedule that returns the same generator at every time."""
    return GeneratorSchedule(t_start, t_end, lambda t: lam, continuity_modulus=0.0)


@dataclass(frozen=True)
class Propagator:
    """Evolution map from time s to time t."""

    s: float
    t: float
    map: SuperOperator


def propagate(schedule: GeneratorSchedule, s: float, t: float, eps: float) -> Propagator:
    """Piecewise-constant splicing of the schedule from s to t with step eps.

    Left-endpoint evaluation: each full step applies exp[eps L(t_n)] with
    t_n = s + n eps; the final partial step covers the remainder. Returns the
    identity when t == s.
    """
    if eps <= 0:
        raise ValueError(f"step must be positive, got {eps}")
    if not (schedule.t_start < s <= t < schedule.t_end):
        raise ValueError(
            f"need t_start < s <= t < t_end, got s={s}, t={t}, "
            f"window ({schedule.t_start}, {schedule.t_end})")
    first = schedule.eval(s)
    d = first.dim_in
    if first.dim_out != d:
        raise ValueError("schedule must return square superoperators")
    total = np.eye(d * d, dtype=complex)
    span = t - s
    n_full = int(np.floor(span / eps + 1e-9))
    for k in range(n_full):
        gen = first if k == 0 else schedule.eval(s + k * eps)
        if gen.dim_in != d or gen.dim_out != d:
            raise ValueError("schedule returned inconsistent dimensions")
        total = expm(eps * gen.matrix) @ total
    t_last = s + n_full * eps
    remainder = t - t_last
    if remainder > 1e-9 * max(1.0, abs(span)):
        gen = schedule.eval(t_last)
        total = expm(remainder * gen.matrix) @ total
    return Propagator(s, t, SuperOperator(total, d, d))


def cocycle_check(p1: Propagator, p2: Propagator, p3: Propagator,
                  tol: Tolerance = DEFAULT_TOL) -> bool:
    """Check the composition law P1(u,t) o P2(t,s) == P3(u,s) in Frobenius norm."""
    if not (np.isclose(p1.s, p2.t) and np.isclose(p3.s, p2.s) and np.isclose(p3.t, p1.t)):
        raise ValueError(
            f"time mismatch: P1 ({p1.s},{p1.t}) P2 ({p2.s},{p2.t}) P3 ({p3.s},{p3.t})")
    product = p1.map @ p2.map
    scale = max(1.0, float(np.linalg.norm(p3.map.matrix)))
    return float(np.linalg.norm(product.matrix - p3.map.matrix)) <= tol.rtol * scale


def invertibility_check(p: Propagator) -> float:
    """2-norm condition number of the propagator matrix (finite == invertible)."""
    return float(np.linalg.cond(p.map.matrix))
