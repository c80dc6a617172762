"""Dense complex linear-operator kernel.

Eigen/singular decompositions, matrix powers with pseudoinverse semantics,
Schatten (quasi-)norms, tensor indexing over subsystem layouts, and the
operator-vector correspondence.  Everything is plain numpy on small dense
matrices (dims <= 64).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

# Eigenvalues below EIG_CUTOFF * lambda_max are treated as exact zeros
# (pseudoinverse convention, applied for every exponent).
EIG_CUTOFF = 1e-12
# Eigenvalues in [-PSD_CLAMP * scale, 0) are clamped to 0; more negative is an error.
PSD_CLAMP = 1e-10
HERM_TOL = 1e-9


class NotHermitian(ValueError):
    pass


class NotPositiveSemidefinite(ValueError):
    pass


class InvalidOrder(ValueError):
    pass


class LayoutMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SystemLayout:
    """Ordered subsystem dimensions of a composite space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if not self.dims or any(int(d) < 1 for d in self.dims):
            raise LayoutMismatch(f"invalid subsystem dimensions {self.dims}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def check(self, n: int) -> None:
        if self.dim != n:
            raise LayoutMismatch(f"layout {self.dims} has dimension {self.dim}, operator has {n}")


def as_layout(dims) -> SystemLayout:
    if isinstance(dims, SystemLayout):
        return dims
    if isinstance(dims, int):
        return SystemLayout((dims,))
    return SystemLayout(tuple(dims))


@dataclass(frozen=True)
class HermitianEig:
    values: np.ndarray   # real, descending
    vectors: np.ndarray  # unitary, columns are eigenvectors


@dataclass(frozen=True)
class SchmidtForm:
    coefficients: np.ndarray  # nonnegative, descending
    left_basis: np.ndarray    # orthonormal columns on the first factor
    right_basis: np.ndarray   # orthonormal columns on the second factor


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def herm_eig(h: np.ndarray) -> HermitianEig:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending."""
    h = np.asarray(h, dtype=complex)
    scale = 1.0 + np.abs(h).max(initial=0.0)
    if np.abs(h - dagger(h)).max(initial=0.0) > HERM_TOL * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh((h + dagger(h)) / 2.0)
    return HermitianEig(vals[::-1].copy(), vecs[:, ::-1].copy())


def _psd_eigvals(h: np.ndarray):
    """Eigendecompose and clamp small negative eigenvalues of a PSD input."""
    eig = herm_eig(h)
    vals = eig.values.copy()
    top = max(vals[0], 0.0) if vals.size else 0.0
    floor = -PSD_CLAMP * max(1.0, top)
    if vals.size and vals[-1] < floor:
        raise NotPositiveSemidefinite(f"eigenvalue {vals[-1]:.3e} below clamp tolerance")
    vals[vals < 0.0] = 0.0
    return vals, eig.vectors


def power_spectrum(vals: np.ndarray, a: float) -> np.ndarray:
    """Map eigenvalues lam -> lam**a with the pseudoinverse cutoff for every a."""
    vals = np.asarray(vals, dtype=float)
    out = np.zeros_like(vals)
    top = vals.max(initial=0.0)
    live = vals > EIG_CUTOFF * top
    if a == 0.0:
        out[live] = 1.0
    else:
        out[live] = vals[live] ** a
    return out


def frac_power(h: np.ndarray, a: float) -> np.ndarray:
    """h**a for PSD h; eigenvalues below the cutoff map to 0 even for a < 0."""
    vals, vecs = _psd_eigvals(h)
    return (vecs * power_spectrum(vals, a)) @ dagger(vecs)


def support_projector(h: np.ndarray) -> np.ndarray:
    return frac_power(h, 0.0)


def schatten_norm(m: np.ndarray, p: float) -> float:
    """(sum_i s_i(m)**p)**(1/p); largest singular value for p = inf.

    A quasi-norm for p < 1; InvalidOrder for p <= 0.
    """
    m = np.asarray(m, dtype=complex)
    s = np.linalg.svd(m, compute_uv=False)
    if np.isinf(p):
        return float(s.max(initial=0.0))
    if not (p > 0.0):
        raise InvalidOrder(f"Schatten order must be positive or inf, got {p}")
    top = s.max(initial=0.0)
    if top == 0.0:
        return 0.0
    s = s[s > EIG_CUTOFF * top]
    # factor out the peak to keep s**p finite for large p
    return float(top * np.exp(np.log(np.sum((s / top) ** p)) / p))


def svd(m: np.ndarray):
    """Rank-truncated SVD m = U @ D @ V with D square positive diagonal.

    U has orthonormal columns, V orthonormal rows; the shared inner dimension
    equals the numerical rank.
    """
    m = np.asarray(m, dtype=complex)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    top = s.max(initial=0.0)
    r = int(np.sum(s > EIG_CUTOFF * top)) if top > 0.0 else 0
    return u[:, :r], np.diag(s[:r]), vh[:r, :]


def polar(m: np.ndarray):
    """Left polar decomposition m = U @ P with U unitary and P PSD."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise LayoutMismatch("polar decomposition requires a square matrix")
    w, s, vh = np.linalg.svd(m)
    u = w @ vh
    p = dagger(vh) @ np.diag(s) @ vh
    return u, p


def tensor(*ops: np.ndarray) -> np.ndarray:
    return reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])


def embed_factors(dims, factors: dict[int, np.ndarray]) -> np.ndarray:
    """Kron together per-subsystem factors, identity on unnamed positions."""
    layout = as_layout(dims)
    parts = []
    for k, d in enumerate(layout.dims):
        op = factors.get(k)
        if op is None:
            parts.append(np.eye(d, dtype=complex))
        else:
            op = np.asarray(op, dtype=complex)
            if op.shape != (d, d):
                raise LayoutMismatch(f"factor at position {k} has shape {op.shape}, expected {(d, d)}")
            parts.append(op)
    return tensor(*parts)


def partial_trace(m: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out every subsystem not in `keep`; kept order follows the layout."""
    layout = as_layout(dims)
    m = np.asarray(m, dtype=complex)
    layout.check(m.shape[0])
    if m.shape[0] != m.shape[1]:
        raise LayoutMismatch("partial trace requires a square operator")
    keep = sorted(set(int(k) for k in keep))
    n = len(layout.dims)
    if any(k < 0 or k >= n for k in keep):
        raise LayoutMismatch(f"keep set {keep} out of range for {n} subsystems")
    t = m.reshape(layout.dims + layout.dims)
    row = list(range(n))
    col = list(range(n))
    out: list[int] = []
    nxt = n
    for k in keep:
        col[k] = nxt
        nxt += 1
    out = [row[k] for k in keep] + [col[k] for k in keep]
    reduced = np.einsum(t, row + col, out)
    dk = int(np.prod([layout.dims[k] for k in keep])) if keep else 1
    return reduced.reshape(dk, dk)


def schmidt(v: np.ndarray, dims) -> SchmidtForm:
    """Schmidt decomposition of a vector on a bipartite layout."""
    layout = as_layout(dims)
    if len(layout.dims) != 2:
        raise LayoutMismatch("Schmidt decomposition requires a bipartite layout")
    v = np.asarray(v, dtype=complex).reshape(-1)
    layout.check(v.size)
    da, db = layout.dims
    psi = v.reshape(da, db)
    u, s, vh = np.linalg.svd(psi)
    top = s.max(initial=0.0)
    r = int(np.sum(s > EIG_CUTOFF * top)) if top > 0.0 else 0
    return SchmidtForm(s[:r], u[:, :r], vh[:r, :].T)


def op_vec(v: np.ndarray, dims) -> np.ndarray:
    """Vector on A(x)B -> operator A -> B: e_i (x) f_j  |->  |f_j><e_i|."""
    layout = as_layout(dims)
    if len(layout.dims) != 2:
        raise LayoutMismatch("operator-vector correspondence requires a bipartite layout")
    v = np.asarray(v, dtype=complex).reshape(-1)
    layout.check(v.size)
    da, db = layout.dims
    return v.reshape(da, db).T


def purify(rho: np.ndarray):
    """Pure vector on system (x) ancilla whose first marginal is rho.

    The ancilla dimension equals the numerical rank of rho.
    """
    vals, vecs = _psd_eigvals(rho)
    top = vals.max(initial=0.0)
    live = np.where(vals > EIG_CUTOFF * top)[0]
    r = len(live)
    d = rho.shape[0]
    v = np.zeros(d * r, dtype=complex)
    for j, i in enumerate(live):
        v += np.sqrt(vals[i]) * np.kron(vecs[:, i], _basis_vec(r, j))
    return v, SystemLayout((d, r))


def _basis_vec(d: int, i: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[i] = 1.0
    return e
