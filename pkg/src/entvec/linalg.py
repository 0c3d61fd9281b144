"""Dense complex linear algebra for few-qubit workloads (dimension <= 64).

The eigensolver is a cyclic Jacobi iteration with a fixed sweep order, so a
given input always produces bitwise-identical output; nothing here depends on
LAPACK dispatch or thread count.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable, Sequence

import numpy as np

from .errors import BadDimension, BadSubsystem, NoConvergence, NotHermitian, NotPSD

MAX_DIM = 64
HERMITIAN_TOL = 1e-10
PSD_CLAMP = -1e-10
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-12
PHASE_PIVOT_TOL = 1e-12


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a square complex128 array, rejecting bad shapes and non-finite entries."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise BadDimension(f"expected a square matrix, got shape {m.shape}")
    if not 1 <= m.shape[0] <= MAX_DIM:
        raise BadDimension(f"dimension {m.shape[0]} outside supported range 1..{MAX_DIM}")
    if not np.all(np.isfinite(m.view(float))):
        raise BadDimension("matrix entries must be finite")
    return m


def hermiticity_defect(a: np.ndarray) -> float:
    """Largest entrywise modulus of A - A^dagger."""
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def offdiagonal_norm(a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part, summed directly.

    Summing |entries|^2 and subtracting the diagonal afterwards cancels
    catastrophically once the off-diagonal mass is tiny, so the diagonal is
    zeroed before accumulating.
    """
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def default_sweep_order(dim: int) -> list[tuple[int, int]]:
    """Row-major upper-triangle pivot order used by every sweep."""
    return [(p, q) for p in range(dim - 1) for q in range(p + 1, dim)]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (real, descending) with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a, sweep_order: Sequence[tuple[int, int]] | None = None) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : square complex matrix, Hermitian within 1e-10 entrywise.
    sweep_order : optional pivot sequence; must visit every upper-triangle
        position exactly once. Defaults to row-major order. Exposed so
        callers can check that results do not depend on the pivot path.

    Returns eigenvalues sorted descending (stable for ties) and eigenvector
    columns with the first component of modulus > 1e-12 made real positive.

    Raises NotHermitian on asymmetric input and NoConvergence if the
    off-diagonal Frobenius norm stays above 1e-12 * ||A||_F after 100 sweeps.
    """
    m = as_complex_matrix(a)
    n = m.shape[0]
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {HERMITIAN_TOL:.0e}")
    h = (m + m.conj().T) / 2.0
    norm_a = frobenius_norm(h)
    pairs = default_sweep_order(n)
    if sweep_order is not None:
        order = [(int(p), int(q)) for p, q in sweep_order]
        if sorted(order) != pairs:
            raise BadSubsystem("sweep_order must visit each upper-triangle pair exactly once")
        pairs = order

    v = np.eye(n, dtype=complex)
    converged = norm_a == 0.0 or n == 1
    for _ in range(JACOBI_MAX_SWEEPS):
        if offdiagonal_norm(h) <= JACOBI_OFF_TOL * norm_a:
            converged = True
            break
        for p, q in pairs:
            apq = h[p, q]
            r = abs(apq)
            if r <= 1e-300:
                continue
            app = h[p, p].real
            aqq = h[q, q].real
            theta = (aqq - app) / (2.0 * r)
            # stable tangent of the annihilating angle; |t| <= 1
            if abs(theta) > 1e8:
                t = 0.5 / theta
            elif theta >= 0.0:
                t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
            else:
                t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            w = apq.conjugate() / r  # unit phase making the pivot real
            sw = s * w
            cw = c * w
            hp = h[p, :].copy()
            hq = h[q, :]
            h[p, :] = c * hp - sw.conjugate() * hq
            h[q, :] = s * hp + cw.conjugate() * hq
            cp = h[:, p].copy()
            cq = h[:, q]
            h[:, p] = c * cp - sw * cq
            h[:, q] = s * cp + cw * cq
            h[p, q] = 0.0
            h[q, p] = 0.0
            h[p, p] = app - t * r
            h[q, q] = aqq + t * r
            vp = v[:, p].copy()
            vq = v[:, q]
            v[:, p] = c * vp - sw * vq
            v[:, q] = s * vp + cw * vq
    if not converged and offdiagonal_norm(h) > JACOBI_OFF_TOL * norm_a:
        raise NoConvergence(
            f"off-diagonal norm {offdiagonal_norm(h):.3e} still above "
            f"{JACOBI_OFF_TOL:.0e} * {norm_a:.3e} after {JACOBI_MAX_SWEEPS} sweeps"
        )

    eigenvalues = np.diag(h).real.copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    v = v[:, order]
    for k in range(n):
        col = v[:, k]
        big = np.flatnonzero(np.abs(col) > PHASE_PIVOT_TOL)
        if big.size:
            pivot = col[big[0]]
            v[:, k] = col * (pivot.conjugate() / abs(pivot))
    eigenvalues.flags.writeable = False
    v.flags.writeable = False
    return EigenDecomposition(eigenvalues=eigenvalues, eigenvectors=v)


def psd_sqrt(a) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix.

    Eigenvalues in [-1e-10, 0) are treated as rounding noise and clamped to 0;
    anything below -1e-10 is an invalid physical input and raises NotPSD.
    """
    dec = hermitian_eig(a)
    w = dec.eigenvalues.copy()
    low = float(w.min()) if w.size else 0.0
    if low < PSD_CLAMP:
        raise NotPSD(f"eigenvalue {low:.3e} below clamp window {PSD_CLAMP:.0e}")
    w[w < 0.0] = 0.0
    v = dec.eigenvectors
    b = (v * np.sqrt(w)) @ v.conj().T
    return (b + b.conj().T) / 2.0


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the left factor on the most significant position."""
    ma = np.asarray(a, dtype=complex)
    mb = np.asarray(b, dtype=complex)
    if ma.ndim != mb.ndim or ma.ndim not in (1, 2):
        raise BadDimension("tensor_product expects two vectors or two matrices")
    return np.kron(ma, mb)


def _qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise BadDimension(f"dimension {dim} is not a power of two >= 2")
    return n


def partial_trace(rho, keep: Iterable[int]) -> np.ndarray:
    """Trace out every qubit not in `keep` (1-based labels, qubit 1 = most significant).

    The kept qubits retain their relative order. Input must be square with
    power-of-two dimension; returns a matrix over the kept qubits.
    """
    m = as_complex_matrix(rho)
    n = _qubit_count(m.shape[0])
    kept = sorted(set(int(k) for k in keep))
    if not kept:
        raise BadSubsystem("keep must name at least one qubit")
    if kept[0] < 1 or kept[-1] > n:
        raise BadSubsystem(f"keep labels {kept} out of range 1..{n}")
    if len(kept) == n:
        return m
    t = m.reshape((2,) * (2 * n))
    for label in sorted(set(range(1, n + 1)) - set(kept), reverse=True):
        axis = label - 1
        t = np.trace(t, axis1=axis, axis2=axis + t.ndim // 2)
    d = 2 ** len(kept)
    return t.reshape((d, d))
