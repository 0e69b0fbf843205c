"""Small dense complex linear algebra: Jacobi eigensolver and matrix checks."""
from __future__ import annotations

import numpy as np

TOL = 1e-10


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def is_hermitian(a: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.abs(a - dagger(a)).max() <= tol)


def is_unitary(a: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.abs(dagger(a) @ a - np.eye(a.shape[0])).max() <= tol)


def off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(h: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ascending eigenvalues ``w`` and unitary ``v`` with ``h @ v = v @ diag(w)``.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||h||_F)``.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix required")
    if not is_hermitian(a, 1e-9 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not Hermitian")
    a = (a + dagger(a)) / 2
    v = np.eye(n, dtype=complex)
    stop = tol * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        if off_norm(a) < stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2 * r)
                if abs(theta) > 1e150:
                    t = 1 / (2 * theta)
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = dagger(u) @ a[idx, :]
                a[p, q] = a[q, p] = 0
                v[:, idx] = v[:, idx] @ u
    else:  # pragma: no cover
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def phase_normalize(v: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    """Rotate the global phase so the first largest-magnitude component is real positive."""
    mags = np.abs(v)
    k = int(np.argmax(mags >= mags.max() * (1 - rel)))
    return v * (abs(v[k]) / v[k])


def normalize_columns(vecs: np.ndarray) -> np.ndarray:
    return np.column_stack([phase_normalize(c / np.linalg.norm(c)) for c in vecs.T])
