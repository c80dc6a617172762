"""Entropic quantities built on the sandwiched Renyi divergence.

All logarithms are base 2 (values in bits) and 0*log(0) = 0.  Matrix powers
follow the pseudoinverse convention of `linalg.frac_power`.  Optimised
quantities (conditional entropy with optimisation, mutual informations) run a
mirror-descent loop over density matrices; a Bloch-ball grid oracle is
available for qubit cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize

from .linalg import (
    EIG_CUTOFF,
    InvalidOrder,
    SystemLayout,
    as_layout,
    dagger,
    embed_factors,
    frac_power,
    partial_trace,
    power_spectrum,
    schatten_norm,
    _psd_eigvals,
)
from .states import DensityOperator, Pmf

SUPPORT_TOL = 1e-9
ALPHA_ONE_WINDOW = 1e-6


class OptimizerDiverged(RuntimeError):
    pass


def _mat(x) -> np.ndarray:
    if isinstance(x, DensityOperator):
        return x.mat
    return np.asarray(x, dtype=complex)


# ---------------------------------------------------------------------------
# classical quantities
# ---------------------------------------------------------------------------

def _pmf(p) -> np.ndarray:
    if isinstance(p, Pmf):
        return p.probabilities
    return np.asarray(p, dtype=float)


def classical_renyi_entropy(p, alpha: float) -> float:
    p = _pmf(p)
    p = p[p > 0.0]
    if alpha < 0.0:
        raise InvalidOrder("entropy order must be nonnegative")
    if math.isinf(alpha):
        return float(-np.log2(p.max()))
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW:
        return float(-np.sum(p * np.log2(p)))
    if alpha == 0.0:
        return float(np.log2(len(p)))
    return float(np.log2(np.sum(p ** alpha)) / (1.0 - alpha))


def classical_renyi_divergence(p, q, alpha: float) -> float:
    """Order-alpha divergence between two pmfs over the same index set."""
    p, q = _pmf(p), _pmf(q)
    if p.shape != q.shape:
        raise ValueError("pmfs must share an index set")
    if alpha < 0.0:
        raise InvalidOrder("divergence order must be nonnegative")
    sup_p = p > 0.0
    dominated = bool(np.all(q[sup_p] > 0.0))
    if math.isinf(alpha):
        if not dominated:
            return math.inf
        return float(np.log2(np.max(p[sup_p] / q[sup_p])))
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW:
        if not dominated:
            return math.inf
        return float(np.sum(p[sup_p] * np.log2(p[sup_p] / q[sup_p])))
    if alpha == 0.0:
        return float(-np.log2(np.sum(q[sup_p])))
    if alpha > 1.0 and not dominated:
        return math.inf
    common = sup_p & (q > 0.0)
    if not np.any(common):
        return math.inf
    s = np.sum(p[common] ** alpha * q[common] ** (1.0 - alpha))
    return float(np.log2(s) / (alpha - 1.0))


# ---------------------------------------------------------------------------
# quantum divergence and entropy
# ---------------------------------------------------------------------------

def _support_flags(rho: np.ndarray, sigma: np.ndarray):
    """(overlapping, dominated) support relations of rho w.r.t. sigma."""
    vals, vecs = _psd_eigvals(sigma)
    live = power_spectrum(vals, 0.0)  # 1 on support, 0 off it
    proj = (vecs * live) @ dagger(vecs)
    inside = float(np.real(np.trace(proj @ rho @ proj)))
    total = float(np.real(np.trace(rho)))
    return inside > SUPPORT_TOL * max(total, 1.0), total - inside <= SUPPORT_TOL * max(total, 1.0)


def _relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    rvals, rvecs = _psd_eigvals(rho)
    svals, svecs = _psd_eigvals(sigma)
    live_r = rvals > EIG_CUTOFF * rvals.max(initial=0.0)
    term_r = float(np.sum(rvals[live_r] * np.log2(rvals[live_r])))
    live_s = svals > EIG_CUTOFF * svals.max(initial=0.0)
    weights = np.real(np.einsum("ij,jk,ki->i", dagger(svecs), rho, svecs))
    term_s = float(np.sum(weights[live_s] * np.log2(svals[live_s])))
    return term_r - term_s


def quantum_relative_entropy(rho, sigma) -> float:
    """tr rho (log rho - log sigma) in bits; +inf off the support of sigma."""
    rho, sigma = _mat(rho), _mat(sigma)
    overlapping, dominated = _support_flags(rho, sigma)
    if not (overlapping and dominated):
        return math.inf
    return _relative_entropy(rho, sigma)


def _divergence_any_order(rho: np.ndarray, sigma: np.ndarray, alpha: float) -> float:
    """Sandwiched divergence for alpha in (0, inf]; no DPI-range gate."""
    overlapping, dominated = _support_flags(rho, sigma)
    if not overlapping:
        return math.inf
    if alpha > 1.0 and not dominated:
        return math.inf
    if math.isinf(alpha):
        w = frac_power(sigma, -0.5)
        vals, _ = _psd_eigvals(w @ rho @ w)
        return float(np.log2(vals.max(initial=0.0)))
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW:
        return _relative_entropy(rho, sigma)
    w = frac_power(sigma, (1.0 - alpha) / (2.0 * alpha))
    vals, _ = _psd_eigvals(w @ rho @ w)
    top = vals.max(initial=0.0)
    if top <= 0.0:
        return math.inf
    live = vals[vals > EIG_CUTOFF * top]
    logq = alpha * np.log2(top) + np.log2(np.sum((live / top) ** alpha))
    return float(logq / (alpha - 1.0))


def sandwiched_divergence(rho, sigma, alpha: float) -> float:
    """Sandwiched Renyi divergence D_alpha(rho || sigma) in bits.

    alpha must lie in [1/2, inf] (the data-processing range); alpha within
    1e-6 of 1 routes to the quantum relative entropy and alpha = inf to the
    max-divergence closed form.
    """
    if not (alpha >= 0.5):
        raise InvalidOrder(f"divergence order {alpha} below 1/2")
    return _divergence_any_order(_mat(rho), _mat(sigma), alpha)


def renyi_entropy(rho, alpha: float) -> float:
    """H_alpha of a density operator; alpha in [0, inf]."""
    if alpha < 0.0:
        raise InvalidOrder("entropy order must be nonnegative")
    vals, _ = _psd_eigvals(_mat(rho))
    top = vals.max(initial=0.0)
    live = vals[vals > EIG_CUTOFF * top]
    if alpha == 0.0:
        return float(np.log2(len(live)))
    if math.isinf(alpha):
        return float(-np.log2(top))
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW:
        return float(-np.sum(live * np.log2(live)))
    return float(np.log2(np.sum(live ** alpha)) / (1.0 - alpha))


def weighted_norm(y, p: float, sigma, tau) -> float:
    """|| sigma^(1/2p) Y tau^(1/2p) ||_p for strictly positive weights."""
    y = _mat(y)
    e = 0.0 if math.isinf(p) else 0.5 / p
    return schatten_norm(frac_power(_mat(sigma), e) @ y @ frac_power(_mat(tau), e), p)


# ---------------------------------------------------------------------------
# batched divergence objectives over a weight factor
# ---------------------------------------------------------------------------

def _embed_stack(stack: np.ndarray, front: int, back: int) -> np.ndarray:
    """I_front (x) stack_k (x) I_back for a stack of square matrices."""
    if front == 1 and back == 1:
        return stack
    k, d, _ = stack.shape
    out = np.einsum(
        "ij,kab,xy->kiaxjby",
        np.eye(front, dtype=complex), stack, np.eye(back, dtype=complex),
    )
    n = front * d * back
    return out.reshape(k, n, n)


def _stack_power(stack: np.ndarray, a: float) -> np.ndarray:
    """Pseudoinverse-convention power of a stack of PSD matrices."""
    w, v = np.linalg.eigh(stack)
    w = np.clip(w, 0.0, None)
    top = w.max(axis=-1, keepdims=True)
    live = w > EIG_CUTOFF * top
    if a == 0.0:
        wp = np.where(live, 1.0, 0.0)
    else:
        wp = np.where(live, np.where(live, w, 1.0) ** a, 0.0)
    return (v * wp[..., None, :]) @ v.conj().swapaxes(-1, -2)


@dataclass
class _DivergenceObjective:
    """Vectorised sigma |-> D_alpha(rho || fixed (x) sigma) on one block."""

    rho: np.ndarray
    alpha: float
    front: int
    block: int
    back: int
    fixed_pow: np.ndarray | None   # full-space fixed-weight factor, already at power c
    log_fixed_term: float = 0.0    # used only on the alpha = 1 route
    rho_block: np.ndarray | None = None

    def __call__(self, sigmas: np.ndarray) -> np.ndarray:
        single = sigmas.ndim == 2
        if single:
            sigmas = sigmas[None, :, :]
        a = self.alpha
        if abs(a - 1.0) <= ALPHA_ONE_WINDOW:
            w, v = np.linalg.eigh(sigmas)
            w = np.clip(w, 1e-300, None)
            logs = (v * np.log2(w)[..., None, :]) @ v.conj().swapaxes(-1, -2)
            cross = np.einsum("ij,kji->k", self.rho_block, logs).real
            vals = self.log_fixed_term - cross
        else:
            c = -0.5 if math.isinf(a) else (1.0 - a) / (2.0 * a)
            wc = _embed_stack(_stack_power(sigmas, c), self.front, self.back)
            if self.fixed_pow is not None:
                wc = self.fixed_pow @ wc
            s = wc @ self.rho @ wc.conj().swapaxes(-1, -2)
            lam = np.clip(np.linalg.eigvalsh(s), 0.0, None)
            if math.isinf(a):
                vals = np.log2(np.maximum(lam[:, -1], 1e-300))
            else:
                top = np.maximum(lam[:, -1:], 1e-300)
                ratio = np.where(lam > EIG_CUTOFF * top, lam / top, 0.0)
                q = a * np.log2(top[:, 0]) + np.log2(np.sum(np.where(ratio > 0, ratio, 1.0) ** a * (ratio > 0), axis=1))
                vals = q / (a - 1.0)
        return vals[0] if single else vals


def _divergence_objective(rho: np.ndarray, alpha: float, dims, opt_positions, fixed: dict[int, np.ndarray]):
    """Build the vectorised objective for optimising one contiguous weight block."""
    layout = as_layout(dims)
    opt_positions = sorted(opt_positions)
    if opt_positions != list(range(opt_positions[0], opt_positions[-1] + 1)):
        raise ValueError("optimised subsystems must be contiguous")
    if set(fixed) & set(opt_positions):
        raise ValueError("fixed and optimised subsystems overlap")
    front = int(np.prod(layout.dims[: opt_positions[0]])) if opt_positions[0] else 1
    block = int(np.prod([layout.dims[k] for k in opt_positions]))
    back_start = opt_positions[-1] + 1
    back = int(np.prod(layout.dims[back_start:])) if back_start < len(layout.dims) else 1

    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW:
        rvals, _ = _psd_eigvals(rho)
        live = rvals[rvals > EIG_CUTOFF * rvals.max(initial=0.0)]
        const = float(np.sum(live * np.log2(live)))
        for k, w in fixed.items():
            marg = partial_trace(rho, layout, [k])
            svals, svecs = _psd_eigvals(np.asarray(w, dtype=complex))
            keep = svals > EIG_CUTOFF * svals.max(initial=0.0)
            weights = np.real(np.einsum("ij,jk,ki->i", dagger(svecs), marg, svecs))
            const -= float(np.sum(weights[keep] * np.log2(svals[keep])))
        rho_block = partial_trace(rho, layout, opt_positions)
        return _DivergenceObjective(rho, alpha, front, block, back, None, const, rho_block)

    c = -0.5 if math.isinf(alpha) else (1.0 - alpha) / (2.0 * alpha)
    fixed_pow = embed_factors(layout, {k: frac_power(np.asarray(w, dtype=complex), c) for k, w in fixed.items()}) if fixed else None
    return _DivergenceObjective(rho, alpha, front, block, back, fixed_pow)


# ---------------------------------------------------------------------------
# optimisation over density matrices
# ---------------------------------------------------------------------------

@dataclass
class OptimizerConfig:
    max_iter: int = 10_000
    ftol: float = 1e-10
    stall_window: int = 40     # stop when a whole window improves less than stall_tol
    stall_tol: float = 1e-9
    residual_tol: float = 1e-4
    step0: float = 0.5
    step_cap: float = 1e6
    big_step_cap: float = 1e16
    grad_h: float = 1e-6
    floor: float = 1e-11  # kept a decade above the spectral cutoff
    extrapolate: bool = True
    method: str = "mirrorDescent"
    grid_points: tuple[int, int, int] = (64, 64, 64)
    refine_iter: int = 200


@dataclass
class OptimizerResult:
    optimum: DensityOperator
    value: float
    iterations: int
    residual: float
    method: str


DEFAULT_CONFIG = OptimizerConfig()


def _herm_basis(d: int) -> np.ndarray:
    """Orthonormal (Frobenius) basis of d x d Hermitian matrices."""
    mats = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        mats.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            x = np.zeros((d, d), dtype=complex)
            x[i, j] = x[j, i] = 1.0 / math.sqrt(2.0)
            mats.append(x)
            y = np.zeros((d, d), dtype=complex)
            y[i, j] = -1j / math.sqrt(2.0)
            y[j, i] = 1j / math.sqrt(2.0)
            mats.append(y)
    return np.array(mats)


def _density_from_log(lstack: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(lstack)
    w = w - w.max(axis=-1, keepdims=True)
    ew = np.exp(w)
    ew = ew / ew.sum(axis=-1, keepdims=True)
    return (v * ew[..., None, :]) @ v.conj().swapaxes(-1, -2)


def _floor_density(sigma: np.ndarray, floor: float) -> np.ndarray:
    w, v = np.linalg.eigh(sigma)
    w = np.clip(w.real, floor, None)
    w = w / w.sum()
    return (v * w) @ dagger(v)


def mirror_descent(objective, dim: int, config: OptimizerConfig = DEFAULT_CONFIG, init: np.ndarray | None = None):
    """Exponentiated-gradient descent over the density matrices of one block.

    `objective` must accept a (k, dim, dim) stack and return (k,) values.
    Returns (sigma, value, iterations, residual).
    """
    basis = _herm_basis(dim)
    m = len(basis)
    sigma = np.eye(dim, dtype=complex) / dim if init is None else _floor_density(init, config.floor)
    lmat = _log_density(sigma, config.floor)
    fval = float(objective(sigma))
    eta = config.step0
    eta_big = 64.0 * eta
    h = config.grad_h
    residual = math.inf
    it = 0
    window_anchor = fval
    drift_mark = lmat.copy()
    while it < config.max_iter:
        it += 1
        if it % config.stall_window == 0:
            if window_anchor - fval < config.stall_tol:
                residual = window_anchor - fval
                break
            window_anchor = fval
        if it % 10 == 0:
            # line search along the averaged drift: narrow curved valleys
            # otherwise reduce plain descent to a zigzag crawl
            drift = lmat - drift_mark
            if np.abs(drift).max() > 1e-14:
                ss = np.array([0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0])
                jl = lmat[None] + ss[:, None, None] * drift[None]
                w, v = np.linalg.eigh(jl)
                ew = np.exp(w - w.max(axis=-1, keepdims=True))
                ew = np.clip(ew / ew.sum(axis=-1, keepdims=True), config.floor, None)
                ew = ew / ew.sum(axis=-1, keepdims=True)
                js = (v * ew[:, None, :]) @ v.conj().swapaxes(-1, -2)
                jf = np.asarray(objective(js))
                k = int(np.argmin(jf))
                if np.isfinite(jf[k]) and float(jf[k]) < fval - 1e-15:
                    residual = max(residual, fval - float(jf[k]))
                    fval, sigma = float(jf[k]), js[k]
                    lmat = (v[k] * np.log(ew[k])) @ dagger(v[k])
            drift_mark = lmat.copy()
        probes = np.concatenate([lmat[None] + h * basis, lmat[None] - h * basis])
        fs = objective(_density_from_log(probes))
        grad = (fs[:m] - fs[m:]) / (2.0 * h)
        gmat = np.tensordot(grad, basis, axes=(0, 0))
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-9:
            residual = 0.0
            break
        accepted = False
        while eta > 1e-13:
            # two step scales probed at once: boundary optima need step
            # lengths orders of magnitude beyond the interior-progress scale
            etas = np.array([eta, eta / 2.0, eta / 4.0, eta / 8.0,
                             eta_big, eta_big / 8.0])
            trial_l = lmat[None] - etas[:, None, None] * gmat[None]
            w, v = np.linalg.eigh(trial_l)
            ew = np.exp(w - w.max(axis=-1, keepdims=True))
            ew = np.clip(ew / ew.sum(axis=-1, keepdims=True), config.floor, None)
            ew = ew / ew.sum(axis=-1, keepdims=True)
            trial_sig = (v * ew[:, None, :]) @ v.conj().swapaxes(-1, -2)
            trial_f = np.asarray(objective(trial_sig))
            good = np.where(np.isfinite(trial_f) & (trial_f < fval - 1e-15))[0]
            if len(good):
                k = int(good[np.argmin(trial_f[good])])
                residual = fval - float(trial_f[k])
                fval = float(trial_f[k])
                sigma = trial_sig[k]
                lmat = (v[k] * np.log(ew[k])) @ dagger(v[k])
                if k >= 4:
                    eta_big = min(eta_big * 8.0, config.big_step_cap)
                else:
                    eta = min(etas[k] * 1.5, config.step_cap)
                    eta_big = max(eta_big / 2.0, 64.0 * eta)
                accepted = True
                break
            eta /= 16.0
            eta_big = max(eta_big / 16.0, 64.0 * eta)
        if not accepted:
            residual = 0.0
            break
        if residual < config.ftol:
            break
    if it >= config.max_iter and residual > config.residual_tol:
        raise OptimizerDiverged(f"no convergence after {it} iterations (residual {residual:.2e})")
    sigma = _floor_density(sigma, config.floor)
    fval = float(objective(sigma))
    if config.extrapolate:
        fval = min(fval, _richardson_value(objective, sigma, dim))
    return sigma, fval, it, residual


def _log_density(sigma: np.ndarray, floor: float) -> np.ndarray:
    w, v = np.linalg.eigh(sigma)
    w = np.clip(w.real, floor, None)
    return (v * np.log(w)) @ dagger(v)


def _richardson_value(objective, sigma: np.ndarray, dim: int) -> float:
    """Linear epsilon -> 0 limit of the objective along the mixing path."""
    e1, e2 = 1e-6, 1e-8
    u = np.eye(dim, dtype=complex) / dim
    v1 = float(objective((1.0 - e1) * sigma + e1 * u))
    v2 = float(objective((1.0 - e2) * sigma + e2 * u))
    return (e1 * v2 - e2 * v1) / (e1 - e2)


def bloch_density(xyz: np.ndarray) -> np.ndarray:
    """Qubit density matrices from a (..., 3) array of Bloch vectors."""
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    out = np.empty(xyz.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = (1.0 + z) / 2.0
    out[..., 1, 1] = (1.0 - z) / 2.0
    out[..., 0, 1] = (x - 1j * y) / 2.0
    out[..., 1, 0] = (x + 1j * y) / 2.0
    return out


def bloch_grid(n_r: int = 64, n_theta: int = 64, n_phi: int = 64) -> np.ndarray:
    """Bloch-ball lattice of qubit states, radius capped below 1."""
    r = np.linspace(0.0, 0.999, n_r)
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    rr, tt, pp = np.meshgrid(r, theta, phi, indexing="ij")
    xyz = np.stack(
        [rr * np.sin(tt) * np.cos(pp), rr * np.sin(tt) * np.sin(pp), rr * np.cos(tt)],
        axis=-1,
    )
    return xyz.reshape(-1, 3)


def _ball_from_free(v: np.ndarray) -> np.ndarray:
    """Unconstrained R^3 -> open Bloch ball, radius tanh(|v|)."""
    n = float(np.linalg.norm(v))
    if n < 1e-14:
        return np.zeros(3)
    return v * (math.tanh(n) * (1.0 - 1e-12) / n)


def _free_from_ball(xyz: np.ndarray) -> np.ndarray:
    r = float(np.linalg.norm(xyz))
    if r < 1e-14:
        return np.zeros(3)
    r = min(r, 1.0 - 1e-12)
    return xyz * (math.atanh(r) / float(np.linalg.norm(xyz)))


def refine_ball(value, start_xyz: np.ndarray, maxiter: int, restarts: int = 2):
    """Nelder-Mead over the open Bloch ball in a boundary-reaching chart.

    Uses a uniform-scale initial simplex (the default proportional one
    degenerates on lattice points with zero coordinates) and restarts to
    escape premature simplex collapse.
    """
    fun = lambda v: value(_ball_from_free(np.asarray(v)))
    v0 = _free_from_ball(np.asarray(start_xyz, dtype=float))
    total = 0
    fbest = math.inf
    scale = 0.15
    for _ in range(restarts + 1):
        simplex = np.vstack([v0, v0 + scale * np.eye(3)])
        res = scipy.optimize.minimize(
            fun, v0, method="Nelder-Mead",
            options={"maxiter": maxiter, "xatol": 1e-10, "fatol": 1e-14,
                     "initial_simplex": simplex},
        )
        total += int(res.nit)
        if float(res.fun) >= fbest - 1e-15:
            v0, fbest = res.x, min(fbest, float(res.fun))
            break
        v0, fbest = res.x, float(res.fun)
        scale *= 0.1
    return _ball_from_free(v0), fbest, total


def grid_qubit_minimize(objective, config: OptimizerConfig = DEFAULT_CONFIG, maximize: bool = False):
    """Exhaustive Bloch-ball search plus local refinement (qubit only)."""
    sign = -1.0 if maximize else 1.0
    pts = bloch_grid(*config.grid_points)
    vals = np.empty(len(pts))
    chunk = 65536
    for k in range(0, len(pts), chunk):
        vals[k:k + chunk] = sign * np.asarray(objective(bloch_density(pts[k:k + chunk])))
    best = int(np.nanargmin(vals))

    def scalar(xyz):
        return sign * float(objective(bloch_density(xyz)))

    xyz, fref, nit = refine_ball(scalar, pts[best], config.refine_iter)
    if fref > vals[best]:
        xyz, fref = pts[best], float(vals[best])
    sigma = bloch_density(np.asarray(xyz))
    return sigma, sign * fref, nit + len(pts), 0.0


def optimize_density(objective, dim: int, config: OptimizerConfig = DEFAULT_CONFIG,
                     init: np.ndarray | None = None) -> OptimizerResult:
    """Minimise a real objective over the density matrices of dimension dim."""
    if config.method == "gridQubit":
        if dim != 2:
            raise InvalidOrder("gridQubit oracle only supports dimension 2")
        sigma, val, its, res = grid_qubit_minimize(objective, config)
    else:
        sigma, val, its, res = mirror_descent(objective, dim, config, init)
    return OptimizerResult(DensityOperator(sigma, SystemLayout((dim,))), val, its, res, config.method)


# ---------------------------------------------------------------------------
# conditional entropies and mutual informations
# ---------------------------------------------------------------------------

def gen_cond_entropy(rho, tau, alpha: float, dims, weight_pos: int = 1) -> float:
    """H_alpha(rho_AB || tau) = -D_alpha(rho_AB || id (x) tau) with tau at weight_pos."""
    rho = _mat(rho)
    layout = as_layout(dims)
    w = embed_factors(layout, {weight_pos: _mat(tau)})
    return -_divergence_any_order(rho, w, alpha)


def cond_entropy_down(rho, alpha: float, dims=None) -> float:
    """Conditional entropy against the actual marginal (no optimisation)."""
    layout = _layout_of(rho, dims)
    rho = _mat(rho)
    rest = list(range(1, len(layout.dims)))
    tau = partial_trace(rho, layout, rest)
    return -_divergence_any_order(rho, embed_block(layout, tau, rest), alpha)


def embed_block(layout: SystemLayout, block: np.ndarray, positions) -> np.ndarray:
    """Embed an operator living on contiguous positions, identity elsewhere."""
    positions = sorted(positions)
    front = int(np.prod(layout.dims[: positions[0]])) if positions[0] else 1
    back_start = positions[-1] + 1
    back = int(np.prod(layout.dims[back_start:])) if back_start < len(layout.dims) else 1
    return np.kron(np.kron(np.eye(front, dtype=complex), block), np.eye(back, dtype=complex))


def _layout_of(rho, dims) -> SystemLayout:
    if dims is not None:
        return as_layout(dims)
    if isinstance(rho, DensityOperator):
        return rho.layout
    raise ValueError("subsystem dimensions required")


def _optimize_weight(rho: np.ndarray, alpha: float, layout: SystemLayout, opt_positions,
                     fixed: dict[int, np.ndarray], config: OptimizerConfig, init=None):
    objective = _divergence_objective(rho, alpha, layout, opt_positions, fixed)
    block = int(np.prod([layout.dims[k] for k in opt_positions]))
    if init is None:
        init = partial_trace(rho, layout, opt_positions)
    return optimize_density(objective, block, config, init=init)


def cond_entropy_up(rho, alpha: float, dims=None, config: OptimizerConfig = DEFAULT_CONFIG) -> OptimizerResult:
    """H^up_alpha(A|rest): conditional entropy optimised over the conditioner.

    The first subsystem is the target; the optimisation runs over density
    matrices on everything else.  `value` is the optimised entropy and
    `optimum` the achieving conditioner state.
    """
    if not (alpha >= 0.5):
        raise InvalidOrder(f"order {alpha} below 1/2")
    layout = _layout_of(rho, dims)
    rho = _mat(rho)
    alpha_eff = 1e6 if math.isinf(alpha) else alpha
    rest = list(range(1, len(layout.dims)))
    res = _optimize_weight(rho, alpha_eff, layout, rest, {}, config)
    return replace(res, value=-res.value)


def gen_mutual_info(rho, tau, alpha: float, dims=None, fixed: int = 0,
                    config: OptimizerConfig = DEFAULT_CONFIG) -> OptimizerResult:
    """I_alpha(rho || tau) = inf over sigma of D_alpha(rho || tau (x) sigma).

    `fixed` names the bipartite subsystem carrying the weight tau; the
    optimisation runs over the other one.
    """
    layout = _layout_of(rho, dims)
    if len(layout.dims) != 2:
        raise ValueError("generalised mutual information is bipartite")
    rho = _mat(rho)
    alpha_eff = 1e6 if math.isinf(alpha) else alpha
    opt = 1 - fixed
    return _optimize_weight(rho, alpha_eff, layout, [opt], {fixed: _mat(tau)}, config)


def mutual_info_up(rho, alpha: float, dims=None, config: OptimizerConfig = DEFAULT_CONFIG) -> OptimizerResult:
    layout = _layout_of(rho, dims)
    rho_a = partial_trace(_mat(rho), layout, [0])
    return gen_mutual_info(rho, rho_a, alpha, layout, fixed=0, config=config)


def mutual_info_down(rho, alpha: float, dims=None, config: OptimizerConfig = DEFAULT_CONFIG,
                     rounds: int = 40, round_tol: float = 1e-9) -> OptimizerResult:
    """Alternating minimisation over both marginal weights."""
    layout = _layout_of(rho, dims)
    rho = _mat(rho)
    sig_a = partial_trace(rho, layout, [0])
    sig_b = partial_trace(rho, layout, [1])
    value = math.inf
    iterations = 0
    residual = math.inf
    res_b = None
    for _ in range(rounds):
        res_b = gen_mutual_info(rho, sig_a, alpha, layout, fixed=0, config=config)
        sig_b = res_b.optimum.mat
        res_a = gen_mutual_info(rho, sig_b, alpha, layout, fixed=1, config=config)
        sig_a = res_a.optimum.mat
        iterations += res_a.iterations + res_b.iterations
        residual = value - res_a.value
        value = min(value, res_a.value, res_b.value)
        if residual < round_tol:
            break
    opt = DensityOperator(np.kron(sig_a, sig_b), layout)
    return OptimizerResult(opt, value, iterations, max(residual, 0.0), "mirrorDescent")
