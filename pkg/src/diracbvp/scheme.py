"""Fixed-point iteration for D u = lambda |u|^{p-2} u, P u = P g.

The homogenized iterate is utilde_k = u_k - g.  One step of the general
(shifted by a, rescaled by R) scheme solves

    (R D_P - a) utilde_{k+1} = R lambda |u_k|^{p-2} u_k - a utilde_k - R D g

in constrained coordinates; with a = 0, R = 1 this is the plain Picard map
utilde_{k+1} = D_P^{-1}(lambda |u_k|^{p-2} u_k - D g).  True solutions are
stationary for every admissible (a, R).  Convergence is monitored through
the increments Delta_k = u_k - u_{k-1} in the H^{1/2}_D graph norm.
"""

import json
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import (DivergenceError, NearSingularError, ParameterError,
                     UndefinedScalingError)
from .grids import SpinorField, lp_norm, nonlinearity, w1q_norm
from .operators import apply_D, boundary_residual
from .spectral import graph_norm

AUTO = "auto"  # R = 2 / |lambda_1|


@dataclass
class SchemeConfig:
    lam: complex
    p: float
    g: SpinorField
    a: complex = 0.0
    R: object = 1.0  # positive real or AUTO
    f0: Optional[SpinorField] = None  # default: start from g
    Xi: float = 1.0
    Lambda_cap: float = 1.0
    max_iter: int = 200
    tol_cauchy: float = 1e-10
    tol_residual: float = 1e-8

    def __post_init__(self):
        if self.p < 2:
            raise ParameterError("scheme needs p >= 2, got %r" % (self.p,))
        if self.max_iter < 1:
            raise ParameterError("max_iter must be >= 1")
        if self.tol_cauchy <= 0 or self.tol_residual <= 0:
            raise ParameterError("tolerances must be positive")
        if self.R != AUTO and not (np.isreal(self.R) and float(np.real(self.R)) > 0):
            raise ParameterError("R must be a positive real or 'auto'")
        if self.Xi <= 0 or self.Lambda_cap <= 0:
            raise ParameterError("Xi and Lambda_cap must be positive")

    def resolve_R(self, sd):
        if self.R == AUTO:
            return 2.0 / abs(sd.lambda1)
        return float(np.real(self.R))


@dataclass
class IterationState:
    k: int
    u: SpinorField
    u_tilde: SpinorField
    delta_norm_H12D: float  # ||u_k - u_{k-1}|| in the graph norm, 0 at k=0
    l2t_norm: float
    h1t_norm: float
    pde_residual: float


@dataclass
class IterationReport:
    states: list
    ratios: list
    verdict: str
    iterations: int  # steps that actually moved the iterate
    pde_residual: float
    boundary_residual: float
    bounds_held: bool
    lambda1: float
    conditions_certified: Optional[bool] = None

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "iterations": self.iterations,
            "pde_residual": self.pde_residual,
            "boundary_residual": self.boundary_residual,
            "bounds_held": self.bounds_held,
            "lambda1": self.lambda1,
            "conditions_certified": self.conditions_certified,
        }


def _coeffs_of(sd, f):
    return sd.eigenvectors.conj().T @ sd.operator.project(f)


def step(sd, cfg, u_k):
    """One iteration step; returns u_{k+1} = utilde_{k+1} + g."""
    r_scale = cfg.resolve_R(sd)
    shifted = r_scale * sd.eigenvalues - cfg.a
    k_min = int(np.argmin(np.abs(shifted)))
    if abs(shifted[k_min]) <= 1e-8:
        raise NearSingularError(
            "R*lambda - a = %r too close to zero at eigenvalue %r"
            % (shifted[k_min], sd.eigenvalues[k_min]))

    u_tilde = u_k - cfg.g
    rhs = r_scale * cfg.lam * nonlinearity(u_k, cfg.p) \
        - r_scale * apply_D(sd.operator.spec, cfg.g)
    rhs_c = _coeffs_of(sd, rhs) - cfg.a * _coeffs_of(sd, u_tilde)
    if not np.all(np.isfinite(rhs_c)):
        raise DivergenceError("iterate overflowed to non-finite values")
    new_c = rhs_c / shifted
    return sd.operator.embed(sd.eigenvectors @ new_c) + cfg.g


def verify_solution(sd, cfg, u):
    """Strong PDE residual and boundary residual of a candidate solution."""
    spec = sd.operator.spec
    res = apply_D(spec, u) - cfg.lam * nonlinearity(u, cfg.p)
    return lp_norm(res, 2), boundary_residual(spec, u, cfg.g)


def run(sd, cfg):
    """Iterate from f0 until Cauchy convergence, divergence or max_iter."""
    u = cfg.f0 if cfg.f0 is not None else cfg.g
    blow_up = 10.0 * max(cfg.Xi, cfg.Lambda_cap, 1.0)

    def make_state(k, u_cur, delta):
        return IterationState(
            k=k, u=u_cur, u_tilde=u_cur - cfg.g, delta_norm_H12D=delta,
            l2t_norm=lp_norm(u_cur, 2), h1t_norm=w1q_norm(u_cur, 2),
            pde_residual=verify_solution(sd, cfg, u_cur)[0])

    states = [make_state(0, u, 0.0)]
    ratios = []
    bounds_held = states[0].l2t_norm <= cfg.Xi * (1 + 1e-12) \
        and states[0].h1t_norm <= cfg.Lambda_cap * (1 + 1e-12)
    verdict = "max_iter_exceeded"
    effective = 0

    for k in range(1, cfg.max_iter + 1):
        try:
            u_next = step(sd, cfg, u)
        except DivergenceError:
            verdict = "diverged"
            break
        delta = graph_norm(sd, 0.5, u_next - u)
        if not np.isfinite(delta):
            verdict = "diverged"
            break
        if delta >= cfg.tol_cauchy:
            effective = k
        if len(states) >= 2 and states[-1].delta_norm_H12D > 0:
            ratios.append(delta / states[-1].delta_norm_H12D)
        u = u_next
        st = make_state(k, u, delta)
        states.append(st)
        if st.l2t_norm > cfg.Xi * (1 + 1e-12) \
                or st.h1t_norm > cfg.Lambda_cap * (1 + 1e-12):
            bounds_held = False
        if st.l2t_norm > blow_up:
            verdict = "diverged"
            break
        if delta < cfg.tol_cauchy and (not ratios or ratios[-1] < 1.0):
            if st.pde_residual < cfg.tol_residual:
                verdict = "converged"
                break
            # Cauchy but residual still large: keep iterating up to max_iter

    if verdict == "max_iter_exceeded" and not bounds_held:
        verdict = "bound_violated"

    pde_res, bdy_res = verify_solution(sd, cfg, u)
    return IterationReport(states=states, ratios=ratios, verdict=verdict,
                           iterations=effective, pde_residual=pde_res,
                           boundary_residual=bdy_res, bounds_held=bounds_held,
                           lambda1=sd.lambda1)


def scale_problem(cfg, alpha):
    """Equivalent problem with lambda-hat = alpha*lambda (Remark-style scaling).

    Fields (and the caps Xi, Lambda) scale by alpha^{1/(2-p)}; defined for
    p > 2 only.
    """
    if alpha <= 0:
        raise ParameterError("alpha must be positive, got %r" % (alpha,))
    if cfg.p == 2:
        raise UndefinedScalingError("scaling is undefined at p = 2")
    fac = alpha ** (1.0 / (2.0 - cfg.p))
    return replace(cfg,
                   lam=alpha * cfg.lam,
                   g=fac * cfg.g,
                   f0=None if cfg.f0 is None else fac * cfg.f0,
                   Xi=fac * cfg.Xi,
                   Lambda_cap=fac * cfg.Lambda_cap)


def trace_rows(report):
    """Iteration trace as rows `k,delta_H12D,ratio,u_L2,u_H1,pde_residual`."""
    rows = []
    for st in report.states:
        ratio = ""
        if st.k >= 2 and st.k - 2 < len(report.ratios):
            ratio = repr(report.ratios[st.k - 2])
        rows.append([st.k, repr(st.delta_norm_H12D), ratio,
                     repr(st.l2t_norm), repr(st.h1t_norm),
                     repr(st.pde_residual)])
    return rows


def report_json(report, certified=None):
    d = report.to_dict()
    if certified is not None:
        d["conditions_certified"] = bool(certified)
    return json.dumps(d, sort_keys=True, indent=2)
