"""Dense complex linear algebra substrate.

Operators are stored as dense complex matrices together with a linearity
tag.  A *linear* operator acts as ``v -> M v``; a *conjugate-linear*
operator acts as ``v -> M conj(v)``.  All inner products are
conjugate-linear in the FIRST argument, i.e. ``<u, v> = u^H v``, and
every function here is pure: inputs are never mutated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

LINEAR = "linear"
CONJUGATE = "conjugate"

#: default tolerance for identity-style residual checks
DEFAULT_TOL = 1e-10
#: default tolerance for eigenvalue comparisons
EIG_TOL = 1e-9


class OperatorError(ValueError):
    """Raised for malformed operators or violated preconditions."""


class OperatorMatrix:
    """A dense matrix tagged as linear or conjugate-linear.

    Immutable: the wrapped ndarray is marked read-only on construction.
    """

    __slots__ = ("matrix", "linearity")

    def __init__(self, matrix, linearity: str = LINEAR):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2:
            raise OperatorError("operator matrix must be 2-dimensional")
        if not np.all(np.isfinite(m)):
            raise OperatorError("operator matrix has non-finite entries")
        if linearity not in (LINEAR, CONJUGATE):
            raise OperatorError(f"unknown linearity tag {linearity!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "linearity", linearity)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorMatrix is immutable")

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def is_linear(self) -> bool:
        return self.linearity == LINEAR

    def apply(self, v):
        """Apply the operator to a vector, honoring the linearity tag."""
        v = np.asarray(v, dtype=complex)
        if v.shape[-1] != self.cols and v.shape[0] != self.cols:
            raise OperatorError(
                f"dimension mismatch: operator is {self.rows}x{self.cols}, "
                f"vector has shape {v.shape}"
            )
        if self.is_linear:
            return self.matrix @ v
        return self.matrix @ np.conj(v)

    def __repr__(self):
        return f"OperatorMatrix({self.rows}x{self.cols}, {self.linearity})"

    def to_json(self) -> str:
        """Serialize to the shared matrix JSON format."""
        entries = [[z.real, z.imag] for z in self.matrix.reshape(-1)]
        return json.dumps(
            {
                "rows": self.rows,
                "cols": self.cols,
                "linearity": self.linearity,
                "entries": entries,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "OperatorMatrix":
        obj = json.loads(text) if isinstance(text, str) else text
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
        if len(entries) != rows * cols:
            raise OperatorError(
                f"expected {rows * cols} entries, got {len(entries)}"
            )
        data = np.array(
            [complex(re, im) for re, im in entries], dtype=complex
        ).reshape(rows, cols)
        return OperatorMatrix(data, obj.get("linearity", LINEAR))


@dataclass(frozen=True)
class PartialIsometry:
    """Partial isometry with its initial and final projections.

    ``V^H V = initial_projection`` and ``V V^H = final_projection``
    within tolerance; both projections are orthogonal projections.
    """

    matrix: OperatorMatrix
    initial_projection: OperatorMatrix
    final_projection: OperatorMatrix


def identity(n: int, linearity: str = LINEAR) -> OperatorMatrix:
    return OperatorMatrix(np.eye(n), linearity)


def adjoint(T: OperatorMatrix) -> OperatorMatrix:
    """Adjoint with the same linearity tag.

    Linear case: conjugate transpose, satisfying ``<Tu, v> = <u, T*v>``.
    Conjugate-linear case: plain transpose (no conjugation), satisfying
    ``<Tu, v> = conj(<u, T*v>)``.
    """
    if T.is_linear:
        return OperatorMatrix(T.matrix.conj().T, LINEAR)
    return OperatorMatrix(T.matrix.T, CONJUGATE)


def compose(S: OperatorMatrix, T: OperatorMatrix) -> OperatorMatrix:
    """The composition ``S o T``, with the induced linearity tag.

    conj(conj(v)) = v, so two conjugate-linear factors compose to a
    linear operator; the matrix of the inner factor is conjugated when
    the outer factor is conjugate-linear.
    """
    if T.rows != S.cols:
        raise OperatorError(
            f"cannot compose {S.rows}x{S.cols} after {T.rows}x{T.cols}"
        )
    if S.is_linear:
        mat = S.matrix @ T.matrix
        tag = T.linearity
    else:
        mat = S.matrix @ np.conj(T.matrix)
        tag = CONJUGATE if T.is_linear else LINEAR
    return OperatorMatrix(mat, tag)


def _require_linear(T: OperatorMatrix, op_name: str):
    if not T.is_linear:
        raise OperatorError(f"{op_name} requires a linear operator")


def _hermiticity_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def polar_decompose(T: OperatorMatrix, tol: float = 1e-12):
    """Polar factorization ``T = V P`` with ``P = (T*T)^{1/2}`` PSD.

    V is the partial isometry vanishing on ker T; its initial projection
    is onto the orthogonal complement of ker T, its final projection
    onto the closure of the range.
    """
    _require_linear(T, "polar_decompose")
    u, s, vh = np.linalg.svd(T.matrix, full_matrices=False)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    P = vh.conj().T @ (s[:, None] * vh)
    ur, vr = u[:, :r], vh[:r, :]
    V = OperatorMatrix(ur @ vr, LINEAR)
    P1 = OperatorMatrix(vr.conj().T @ vr, LINEAR)
    P2 = OperatorMatrix(ur @ ur.conj().T, LINEAR)
    return PartialIsometry(V, P1, P2), OperatorMatrix(P, LINEAR)


def spectrum(H: OperatorMatrix, tol: float = DEFAULT_TOL, return_vectors=False):
    """Real eigenvalues of a self-adjoint operator, ascending.

    Raises if H deviates from self-adjointness by more than
    ``tol * (1 + max|H|)``.  With ``return_vectors=True`` also returns
    the orthonormal eigenvector columns.
    """
    _require_linear(H, "spectrum")
    M = H.matrix
    if M.shape[0] != M.shape[1]:
        raise OperatorError("spectrum requires a square matrix")
    scale = 1.0 + (float(np.max(np.abs(M))) if M.size else 0.0)
    if _hermiticity_defect(M) > tol * scale:
        raise OperatorError("matrix is not self-adjoint within tolerance")
    w, U = np.linalg.eigh(M)
    if return_vectors:
        return w, U
    return w


def sqrt_psd(P: OperatorMatrix, tol: float = DEFAULT_TOL) -> OperatorMatrix:
    """Positive semidefinite square root of a PSD self-adjoint operator.

    Eigenvalues in ``[-tol, 0)`` (scaled by the largest eigenvalue) are
    clamped to zero; anything more negative is an error, not a clamp.
    """
    w, U = spectrum(P, tol=tol, return_vectors=True)
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
    if w.size and w[0] < -tol * scale:
        raise OperatorError(
            f"matrix is not PSD: smallest eigenvalue {w[0]:.3e}"
        )
    w = np.clip(w, 0.0, None)
    Q = (U * np.sqrt(w)) @ U.conj().T
    return OperatorMatrix(Q, LINEAR)


def cayley(T: OperatorMatrix, tol: float = DEFAULT_TOL) -> OperatorMatrix:
    """Cayley transform ``(iI - T)(iI + T)^{-1}`` of a symmetric operator.

    For bounded everywhere-defined symmetric T the result is unitary.
    """
    _require_linear(T, "cayley")
    M = T.matrix
    if M.shape[0] != M.shape[1]:
        raise OperatorError("cayley requires a square matrix")
    scale = 1.0 + (float(np.max(np.abs(M))) if M.size else 0.0)
    if _hermiticity_defect(M) > tol * scale:
        raise OperatorError("cayley requires a symmetric (self-adjoint) matrix")
    n = M.shape[0]
    shift = 1j * np.eye(n)
    # (i - T)(i + T)^{-1}; solve on the right to avoid an explicit inverse
    try:
        C = np.linalg.solve((shift + M).T, (shift - M).T).T
    except np.linalg.LinAlgError as exc:
        raise OperatorError("(iI + T) is numerically singular") from exc
    return OperatorMatrix(C, LINEAR)


def unitary_power(H: OperatorMatrix, t: float, tol: float = DEFAULT_TOL) -> OperatorMatrix:
    """The unitary ``H^{it}`` for positive definite self-adjoint H."""
    w, U = spectrum(H, tol=tol, return_vectors=True)
    if w.size and w[0] <= tol:
        raise OperatorError(
            f"unitary_power requires positive eigenvalues, got {w[0]:.3e}"
        )
    phases = np.exp(1j * t * np.log(w.real))
    return OperatorMatrix((U * phases) @ U.conj().T, LINEAR)


def _fix_phases(basis: np.ndarray) -> np.ndarray:
    """Normalize column phases so the first sizable entry is real positive."""
    out = basis.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            pivot = col[nz[0]]
            out[:, j] = col * (np.conj(pivot) / abs(pivot))
    return out


def null_space(T: OperatorMatrix, tol: float = DEFAULT_TOL):
    """Orthonormal basis of the numerical kernel, via SVD thresholding.

    Returns the vectors v with ``|Tv| <= tol * |T| * |v|`` as a list of
    1-d arrays (empty when the kernel is trivial).
    """
    _require_linear(T, "null_space")
    M = T.matrix
    if M.size == 0 or not np.any(M):
        basis = np.eye(M.shape[1], dtype=complex)
        return [basis[:, j] for j in range(M.shape[1])]
    u, s, vh = np.linalg.svd(M)
    smax = s[0]
    rank = int(np.sum(s > tol * smax))
    basis = _fix_phases(vh[rank:].conj().T)
    return [basis[:, j] for j in range(basis.shape[1])]


def eig_space(T: OperatorMatrix, lam: complex, tol: float = DEFAULT_TOL):
    """Orthonormal basis of the numerical ``lam``-eigenspace of T."""
    _require_linear(T, "eig_space")
    M = T.matrix
    if M.shape[0] != M.shape[1]:
        raise OperatorError("eig_space requires a square matrix")
    shifted = OperatorMatrix(M - lam * np.eye(M.shape[0]), LINEAR)
    # threshold relative to the unshifted operator so lam = 0 still works
    scale = max(float(np.max(np.abs(M))) if M.size else 0.0, abs(lam), 1e-300)
    u, s, vh = np.linalg.svd(shifted.matrix)
    rank = int(np.sum(s > tol * scale))
    basis = _fix_phases(vh[rank:].conj().T)
    return [basis[:, j] for j in range(basis.shape[1])]
