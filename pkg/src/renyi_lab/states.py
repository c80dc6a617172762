"""States, bases, and seeded sampling.

All samplers take an explicit numpy Generator.  Trial-level RNGs derive from
(master_seed, trial_index) so trials are order-independent and reproducible
bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    LayoutMismatch,
    SystemLayout,
    as_layout,
    dagger,
    embed_factors,
    partial_trace,
    tensor,
    _psd_eigvals,
)

TRACE_TOL = 1e-10
ONB_TOL = 1e-10


@dataclass(frozen=True)
class DensityOperator:
    """Trace-1 PSD matrix with an attached subsystem layout."""

    mat: np.ndarray
    layout: SystemLayout

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        self.layout.check(m.shape[0])
        vals, vecs = _psd_eigvals(m)  # raises if meaningfully non-PSD
        tr = vals.sum()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} differs from 1 beyond tolerance")
        object.__setattr__(self, "mat", (vecs * vals) @ dagger(vecs))

    @property
    def dim(self) -> int:
        return self.layout.dim

    def marginal(self, keep) -> "DensityOperator":
        keep = sorted(set(keep))
        sub = partial_trace(self.mat, self.layout, keep)
        return DensityOperator(sub, SystemLayout(tuple(self.layout.dims[k] for k in keep)))


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal basis; columns of `vectors` are the basis kets."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        d = v.shape[0]
        if v.shape != (d, d):
            raise LayoutMismatch("basis matrix must be square")
        gram = dagger(v) @ v
        if np.abs(gram - np.eye(d)).max() > ONB_TOL:
            raise ValueError("basis columns are not orthonormal within tolerance")
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def ket(self, x: int) -> np.ndarray:
        return self.vectors[:, x]


@dataclass(frozen=True)
class Pmf:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < -1e-12):
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        object.__setattr__(self, "probabilities", np.clip(p, 0.0, None))


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """Counter-style seeding: independent stream per (master seed, trial)."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(trial)]))


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rank: int, rng: np.random.Generator, dims=None) -> DensityOperator:
    """Marginal of a Haar pure state on dim (x) rank; full rank when rank >= dim."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    v = random_pure(dim * rank, rng)
    rho = partial_trace(np.outer(v, v.conj()), (dim, rank), keep=[0])
    layout = as_layout(dims) if dims is not None else SystemLayout((dim,))
    layout.check(dim)
    return DensityOperator(rho, layout)


def random_onb(dim: int, rng: np.random.Generator) -> MeasurementBasis:
    """Haar unitary via QR of a complex Gaussian matrix with phase fixing."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return MeasurementBasis(q * (d / np.abs(d)))


def classical_state(p: Pmf | np.ndarray, dims=None) -> DensityOperator:
    """Diagonal state carrying a pmf in the computational basis."""
    if not isinstance(p, Pmf):
        p = Pmf(np.asarray(p, dtype=float))
    probs = p.probabilities
    layout = as_layout(dims) if dims is not None else SystemLayout((len(probs),))
    return DensityOperator(np.diag(probs).astype(complex), layout)


def cq_state(p, blocks, dims=None) -> DensityOperator:
    """sum_x p(x) |x><x| (x) rho_x with a computational-basis register."""
    p = np.asarray(p, dtype=float)
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    dx, db = len(p), blocks[0].shape[0]
    rho = np.zeros((dx * db, dx * db), dtype=complex)
    for x, bx in enumerate(blocks):
        e = np.zeros((dx, dx), dtype=complex)
        e[x, x] = 1.0
        rho += p[x] * np.kron(e, bx)
    layout = as_layout(dims) if dims is not None else SystemLayout((dx, db))
    return DensityOperator(rho, layout)


def _pinchers(basis: MeasurementBasis, layout: SystemLayout, subsystem: int):
    d = layout.dims[subsystem]
    if basis.dim != d:
        raise LayoutMismatch(f"basis dimension {basis.dim} != subsystem dimension {d}")
    for x in range(d):
        k = basis.ket(x)
        yield embed_factors(layout, {subsystem: np.outer(k, k.conj())})


def measure(rho: DensityOperator, basis: MeasurementBasis, subsystem: int = 0) -> DensityOperator:
    """Pinch one subsystem in the given basis (projective measurement channel)."""
    out = np.zeros_like(rho.mat)
    for proj in _pinchers(basis, rho.layout, subsystem):
        out += proj @ rho.mat @ proj
    return DensityOperator(out, rho.layout)


def measurement_pmf(rho: DensityOperator, basis: MeasurementBasis, subsystem: int = 0) -> Pmf:
    """Outcome distribution of measuring one subsystem in the given basis."""
    marg = rho.marginal([subsystem]).mat
    if basis.dim != marg.shape[0]:
        raise LayoutMismatch("basis dimension does not match subsystem")
    p = np.real(np.einsum("xi,ij,jx->x", dagger(basis.vectors), marg, basis.vectors))
    p = np.clip(p, 0.0, None)
    return Pmf(p / p.sum())


def stinespring_measure(rho: DensityOperator, basis: MeasurementBasis, subsystem: int = 0) -> DensityOperator:
    """Isometric dilation of `measure`: the measured register is duplicated.

    The measured subsystem (dimension d) is replaced by two registers of
    dimension d each; tracing out the duplicate recovers `measure`.
    """
    layout = rho.layout
    d = layout.dims[subsystem]
    if basis.dim != d:
        raise LayoutMismatch(f"basis dimension {basis.dim} != subsystem dimension {d}")
    # isometry on the subsystem: |z> -> |z> (x) |z>
    iso = np.zeros((d * d, d), dtype=complex)
    for z in range(d):
        k = basis.ket(z)
        iso += np.outer(np.kron(k, k), k.conj())
    front = int(np.prod(layout.dims[:subsystem])) if subsystem else 1
    back = int(np.prod(layout.dims[subsystem + 1:])) if subsystem + 1 < len(layout.dims) else 1
    full = tensor(np.eye(front), iso, np.eye(back))
    out = full @ rho.mat @ dagger(full)
    new_dims = layout.dims[:subsystem] + (d, d) + layout.dims[subsystem + 1:]
    return DensityOperator(out, SystemLayout(new_dims))
