"""Small dense complex linear algebra.

Hermitian matrices follow the usual convention: the form attached to ``A`` is
``(u, v) -> v^* A u`` and its quadratic form is ``u^* A u``.  All sizes met in
this package are tiny (at most a few dozen), so everything is dense.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import SingularityError, ValidationError

HERMITIAN_TOL = 1e-12


def as_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``M`` as a finite Hermitian matrix (relative tolerance) and return its symmetrization."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    # relative to the entry scale so large metrics near the boundary pass
    if np.max(np.abs(A - A.conj().T)) > tol * max(1.0, float(np.max(np.abs(A)))):
        raise ValidationError("matrix is not Hermitian within tolerance")
    return 0.5 * (A + A.conj().T)


def eigvalsh(M) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(as_hermitian(M))


def is_positive_definite(M) -> tuple[bool, float]:
    """Return ``(flag, margin)`` where margin is the smallest eigenvalue."""
    margin = float(eigvalsh(M)[0])
    return margin > 0.0, margin


def _cholesky(H: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise ValidationError("matrix is not positive definite") from exc


def max_generalized_eigenvalue(G, H) -> float:
    """Largest value of ``u^*Gu / u^*Hu`` over nonzero ``u``.

    ``H`` must be positive definite.  The pencil is reduced with the Cholesky
    factor ``H = LL^*`` to the ordinary eigenproblem of ``L^{-1} G L^{-*}``.
    """
    G = as_hermitian(G)
    H = as_hermitian(H)
    if G.shape != H.shape:
        raise ValidationError(f"dimension mismatch {G.shape} vs {H.shape}")
    L = _cholesky(H)
    X = np.linalg.solve(L, G)
    C = np.linalg.solve(L, X.conj().T).conj().T
    return float(np.linalg.eigvalsh(0.5 * (C + C.conj().T))[-1])


def hermitian_quadratic_solve(H, g) -> float:
    """Return ``g^T H^{-1} conj(g)``, the supremum of ``|g^T u|^2 / u^*Hu``."""
    H = as_hermitian(H)
    g = np.asarray(g, dtype=complex).reshape(-1)
    if g.shape[0] != H.shape[0]:
        raise ValidationError(f"vector length {g.shape[0]} does not match dimension {H.shape[0]}")
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise SingularityError("form is singular or indefinite") from exc
    y = np.linalg.solve(L, g.conj())
    return float(np.real(np.vdot(y, y)))


def complex_hessian(F: Callable[[np.ndarray], float], z, step: float = 1e-4) -> np.ndarray:
    """Mixed Wirtinger Hessian of a real function, by central differences.

    Entry ``[i, j]`` approximates ``d^2 F / dzbar_i dz_j`` so that the Levi form
    is ``u^* A u``.  One Richardson level (steps ``h`` and ``h/2``) is applied
    to the real Hessian before the Wirtinger combination; the result is
    symmetrized, so it is exactly Hermitian.
    """
    if step <= 0:
        raise ValidationError("step must be positive")
    z = np.asarray(z, dtype=complex).reshape(-1)
    n = z.shape[0]
    x0 = np.concatenate([z.real, z.imag])

    def f(x):
        val = F(x[:n] + 1j * x[n:])
        val = float(np.real(val))
        if not np.isfinite(val):
            raise ValidationError("function returned a non-finite sample")
        return val

    def real_hessian(h):
        m = 2 * n
        R = np.empty((m, m))
        f0 = f(x0)
        E = np.eye(m) * h
        for a in range(m):
            R[a, a] = (f(x0 + E[a]) - 2.0 * f0 + f(x0 - E[a])) / h**2
            for b in range(a + 1, m):
                R[a, b] = R[b, a] = (
                    f(x0 + E[a] + E[b]) - f(x0 + E[a] - E[b]) - f(x0 - E[a] + E[b]) + f(x0 - E[a] - E[b])
                ) / (4.0 * h**2)
        return R

    R = (4.0 * real_hessian(step / 2) - real_hessian(step)) / 3.0
    Rxx, Rxy = R[:n, :n], R[:n, n:]
    Ryx, Ryy = R[n:, :n], R[n:, n:]
    # d_j dbar_i F = (F_xjxi + F_yjyi + i(F_xjyi - F_yjxi)) / 4
    A = 0.25 * ((Rxx + Ryy).T + 1j * (Rxy.T - Ryx.T))
    return 0.5 * (A + A.conj().T)
