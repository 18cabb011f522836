"""Dense complex linear algebra kernel.

Vectors and matrices are plain numpy arrays with complex entries.  The
Hermitian eigensolver is a cyclic Jacobi iteration written out in full so it
can serve as an independent route against states constructed by recursion
elsewhere in the package; it does not call numpy.linalg.  Matrix sizes here
stay small (dimension 60 or less), where Jacobi is accurate and fast enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Input Hermiticity acceptance, relative with an absolute floor at unit scale.
HERM_TOL = 1e-10
# Guarantees on what hermitian_eig returns, relative to the spectral norm.
RESIDUAL_TOL = 1e-10
ORTHO_TOL = 1e-10
# Magnitude window treated as a tie when picking the phase anchor.
PHASE_TIE_TOL = 1e-12

_MAX_SWEEPS = 60


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a nonempty 1-d vector")
    return arr


def as_matrix(a) -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError("expected a nonempty square matrix")
    return arr


def inner(u, v) -> complex:
    """Inner product <u|v>, conjugate-linear in the first argument."""
    u = as_vector(u)
    v = as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u, v))


def norm(v) -> float:
    return math.sqrt(max(inner(v, v).real, 0.0))


def frobenius(a) -> float:
    a = np.asarray(a, dtype=complex)
    return math.sqrt(float(np.sum(np.abs(a) ** 2)))


def phase_equal(u, v, eps: float = 1e-9) -> bool:
    """Whether two unit vectors agree up to a global phase.

    True iff |<u|v>| >= 1 - eps.  Both inputs must be normalized to within
    1e-8; eps must lie strictly between 0 and 1.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    u = as_vector(u)
    v = as_vector(v)
    for w in (u, v):
        if abs(norm(w) - 1.0) > 1e-8:
            raise ValueError(f"phase_equal needs unit vectors, got norm {norm(w)!r}")
    return bool(abs(inner(u, v)) >= 1.0 - eps)


def fix_phase(v) -> np.ndarray:
    """Rotate a global phase so the largest-magnitude entry is real positive.

    Ties in magnitude within PHASE_TIE_TOL are broken by lowest index, which
    keeps the choice stable under perturbations that do not cross the window.
    """
    v = as_vector(v)
    mags = np.abs(v)
    top = float(mags.max())
    if top == 0.0:
        raise ValueError("cannot fix the phase of the zero vector")
    anchor = int(np.flatnonzero(mags >= top - PHASE_TIE_TOL)[0])
    return v * (v[anchor].conjugate() / mags[anchor])


def projector(vectors, tol: float = ORTHO_TOL) -> np.ndarray:
    """Orthogonal projector onto the span of mutually orthonormal vectors."""
    cols = [as_vector(v) for v in vectors]
    if not cols:
        raise ValueError("projector needs at least one vector")
    dim = cols[0].shape[0]
    if any(c.shape[0] != dim for c in cols):
        raise ValueError("projector vectors must share one dimension")
    basis = np.column_stack(cols)
    gram = basis.conj().T @ basis
    defect = float(np.abs(gram - np.eye(len(cols))).max())
    if defect > tol:
        raise ValueError(f"vectors are not orthonormal: Gram defect {defect:.3e}")
    return basis @ basis.conj().T


def commutator(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError("commutator needs same-shape square matrices")
    return a @ b - b @ a


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending; eigenvectors[:, i] is the unit vector for
    eigenvalues[i].  Instances come out of hermitian_eig already verified
    against the input matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])


def hermitian_eig(a) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Each sweep conjugates by two-dimensional unitary rotations chosen to zero
    one off-diagonal entry at a time; off-diagonal mass decreases until it is
    negligible relative to the Frobenius norm.  Before returning, the
    eigenpair residuals and the orthonormality of the eigenvector matrix are
    checked against RESIDUAL_TOL and ORTHO_TOL; failure to converge raises
    instead of returning bad output.
    """
    a = as_matrix(a)
    scale = frobenius(a)
    if frobenius(a - a.conj().T) > HERM_TOL * max(1.0, scale):
        raise ValueError("matrix is not Hermitian within tolerance")
    n = a.shape[0]
    # Symmetrize roundoff so the working diagonal is real from the start.
    h = (a + a.conj().T) / 2.0
    v = np.eye(n, dtype=complex)
    if n == 1 or scale == 0.0:
        order = np.arange(n)
        vals = h.diagonal().real.copy()
        order = np.argsort(vals, kind="stable")
        return EigenDecomposition(vals[order], v[:, order])

    target = 1e-14 * scale
    tiny = 1e-18 * scale
    # Summing only off-diagonal entries avoids the cancellation that a
    # "Frobenius minus diagonal" formula hits once the mass drops below
    # sqrt(machine epsilon) times the scale.
    offdiag_mask = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(float(np.sum(np.abs(h[offdiag_mask]) ** 2)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                r = abs(apq)
                if r <= tiny:
                    h[p, q] = 0.0
                    h[q, p] = 0.0
                    continue
                phase = apq / r
                tau = (h[q, q].real - h[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # Right-multiply by the rotation: mixes columns p and q.
                colp = h[:, p].copy()
                colq = h[:, q].copy()
                h[:, p] = c * colp - s * phase.conjugate() * colq
                h[:, q] = s * colp + c * phase.conjugate() * colq
                # Left-multiply by its adjoint: mixes rows p and q.
                rowp = h[p, :].copy()
                rowq = h[q, :].copy()
                h[p, :] = c * rowp - s * phase * rowq
                h[q, :] = s * rowp + c * phase * rowq
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * phase.conjugate() * vq
                v[:, q] = s * vp + c * phase.conjugate() * vq
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    vals = h.diagonal().real.copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = v[:, order]

    spectral = max(float(np.abs(vals).max()), 1e-300)
    sym = (a + a.conj().T) / 2.0
    residual = float(np.abs(sym @ vecs - vecs * vals[np.newaxis, :]).max())
    if residual > RESIDUAL_TOL * spectral:
        raise RuntimeError(f"eigenpair residual {residual:.3e} exceeds tolerance")
    ortho = float(np.abs(vecs.conj().T @ vecs - np.eye(n)).max())
    if ortho > ORTHO_TOL:
        raise RuntimeError(f"eigenvector orthonormality defect {ortho:.3e}")
    return EigenDecomposition(vals, vecs)


def operator_norm(a) -> float:
    """Spectral norm, computed from the eigenvalues of a†a."""
    a = as_matrix(a)
    gram = a.conj().T @ a
    dec = hermitian_eig(gram)
    return math.sqrt(max(float(dec.eigenvalues[-1]), 0.0))
