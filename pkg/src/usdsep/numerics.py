"""Dense complex linear algebra primitives shared by the other modules.

Everything operates on plain numpy arrays: complex vectors and matrices for
states and operators, real vectors for the coordinates used by the cone
feasibility tests.  All functions are pure; none mutate their arguments.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "InvariantError",
    "ConvergenceError",
    "kron",
    "kron_all",
    "proj",
    "hermitize",
    "herm_eigen",
    "rank",
    "partial_trace",
    "vec_herm",
    "nnls",
    "von_neumann_entropy",
]

DEFAULT_TOL = 1e-10


class InvariantError(RuntimeError):
    """A quantity that should hold by construction failed its internal check."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap before converging."""


def kron(a, b):
    """Kronecker product with the first factor as the most significant index."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(factors):
    """Kronecker product of a sequence of arrays, first factor most significant."""
    factors = list(factors)
    if not factors:
        raise ValueError("kron_all needs at least one factor")
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f))
    return out


def proj(v):
    """Rank-1 operator |v><v| built from a (not necessarily unit) vector."""
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def hermitize(m, rtol=1e-12):
    """Return the Hermitian part (M + M^dag)/2 of a square matrix.

    Asymmetry beyond ``rtol`` relative to the Frobenius norm is treated as an
    input error rather than silently averaged away.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = np.linalg.norm(m)
    gap = np.linalg.norm(m - m.conj().T)
    if gap > rtol * max(scale, 1.0):
        raise ValueError(f"matrix is not Hermitian: asymmetry {gap:.3e}")
    return (m + m.conj().T) / 2.0


def herm_eigen(h):
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix.

    Raises np.linalg.LinAlgError if the underlying QR iteration fails to
    converge, which for finite Hermitian input signals a genuine numerical
    breakdown rather than anything recoverable here.
    """
    vals, vecs = np.linalg.eigh(hermitize(h))
    return vals, vecs


def rank(m, tol=DEFAULT_TOL):
    """Numerical rank: singular values above ``tol`` relative to the largest."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    sv = np.linalg.svd(np.atleast_2d(np.asarray(m, dtype=complex)), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))


def partial_trace(h, dims, keep):
    """Trace out all tensor factors of a Hermitian operator except one.

    Parameters
    ----------
    h : array, shape (prod(dims), prod(dims))
        Hermitian operator on the full tensor product space.
    dims : sequence of int
        Local dimension of each factor, most significant factor first.
    keep : int
        0-based index of the factor to keep.

    Returns
    -------
    array, shape (dims[keep], dims[keep])
        The reduced Hermitian operator.  Its trace equals the trace of ``h``.
    """
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError("dimensions must be positive")
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep={keep} out of range for {len(dims)} factors")
    h = hermitize(h)
    total = int(np.prod(dims))
    if h.shape[0] != total:
        raise ValueError(f"operator dim {h.shape[0]} does not match prod(dims)={total}")
    p = len(dims)
    t = h.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwx"
    row = list(letters[:p])
    col = list(letters[:p])
    col[keep] = letters[p]
    subscripts = "".join(row) + "".join(col) + "->" + row[keep] + col[keep]
    out = np.einsum(subscripts, t)
    return hermitize(out, rtol=1e-9)


def vec_herm(h):
    """Isometric real vectorization of a Hermitian matrix.

    Coordinates are the diagonal (ascending index), then for each strict
    upper-triangle entry in row-major order its sqrt(2)*Re followed by
    sqrt(2)*Im.  With this scaling Tr(A B) equals the Euclidean inner
    product of vec_herm(A) and vec_herm(B), so Frobenius geometry on
    Hermitian matrices becomes plain dot-product geometry on R^(d^2).
    """
    h = hermitize(h)
    d = h.shape[0]
    iu = np.triu_indices(d, k=1)
    off = h[iu]
    out = np.empty(d * d, dtype=float)
    out[:d] = h.diagonal().real
    out[d::2] = np.sqrt(2.0) * off.real
    out[d + 1 :: 2] = np.sqrt(2.0) * off.imag
    return out


def nnls(a, b, tol=1e-10, max_iter=None):
    """Nonnegative least squares: minimize ||a @ x - b||_2 subject to x >= 0.

    Classical active-set iteration after Lawson & Hanson (Solving Least
    Squares Problems, 1974, ch. 23).  Coordinates move between the passive
    (free) and active (clamped to zero) sets; each outer step frees the
    coordinate with the largest dual value a.T @ (b - a @ x) and inner steps
    retreat along the segment to the unconstrained solution until the
    passive iterate is strictly positive.

    Parameters
    ----------
    a : array, shape (m, n)
    b : array, shape (m,)
    tol : float
        Relative threshold on the dual vector below which no coordinate is
        considered able to reduce the residual further.
    max_iter : int, optional
        Iteration cap, default 100 * n.  Exceeding it raises
        ConvergenceError; on the small well-conditioned systems used here
        that only happens for genuinely degenerate input.

    Returns
    -------
    (x, rnorm) : nonnegative solution and the Euclidean residual norm.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).ravel()
    if a.ndim != 2:
        raise ValueError("a must be a matrix")
    m, n = a.shape
    if n < 1:
        raise ValueError("a must have at least one column")
    if b.shape[0] != m:
        raise ValueError("a and b have incompatible shapes")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter is None:
        max_iter = 100 * n

    scale = max(1.0, float(np.max(np.abs(a.T @ b))))
    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    iters = 0
    while True:
        w = a.T @ (b - a @ x)
        w[passive] = -np.inf
        if passive.all() or np.max(w) <= tol * scale:
            break
        passive[int(np.argmax(w))] = True
        while True:
            iters += 1
            if iters > max_iter:
                raise ConvergenceError(f"nnls exceeded {max_iter} iterations")
            z = np.zeros(n)
            z[passive] = np.linalg.lstsq(a[:, passive], b, rcond=None)[0]
            if np.all(z[passive] > 0.0):
                x = z
                break
            # Retreat toward the previous iterate until the first passive
            # coordinate reaches zero, then clamp it back into the active set.
            blocking = passive & (z <= 0.0) & (x - z > 0.0)
            if not blocking.any():
                stuck = passive & (z <= 0.0)
                x[stuck] = 0.0
                passive[stuck] = False
                continue
            alpha = float(np.min(x[blocking] / (x[blocking] - z[blocking])))
            x = x + alpha * (z - x)
            hit_zero = passive & (x <= 1e-14)
            x[hit_zero] = 0.0
            passive[hit_zero] = False
    return x, float(np.linalg.norm(b - a @ x))


def von_neumann_entropy(rho, log_base=2.0):
    """Entropy -sum(lam * log(lam)) of a density operator, in the given log base.

    The operator must be positive semidefinite and unit trace within 1e-10;
    eigenvalues in [-1e-10, 0) are clipped to zero before taking logs.
    """
    if log_base <= 0 or log_base == 1.0:
        raise ValueError("log_base must be positive and != 1")
    vals = np.linalg.eigvalsh(hermitize(rho))
    if vals[0] < -DEFAULT_TOL:
        raise ValueError(f"operator is not PSD: min eigenvalue {vals[0]:.3e}")
    if abs(float(vals.sum()) - 1.0) > DEFAULT_TOL:
        raise ValueError(f"operator trace {vals.sum():.12f} is not 1")
    vals = np.clip(vals, 0.0, None)
    nz = vals[vals > 0.0]
    return float(-(nz * np.log(nz)).sum() / np.log(log_base)) + 0.0
