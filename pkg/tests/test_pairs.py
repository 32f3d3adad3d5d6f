import math

import numpy as np
import pytest

from sympairs.core import CONJUGATE, OperatorMatrix, adjoint, eig_space
from sympairs.pairs import (
    PairError,
    SymmetricPairSpec,
    build_L,
    build_Lstar,
    check_pair,
    defect_eig,
    defect_flip,
    deficiency,
    is_maximal,
    lq_apply,
    pair_from_json,
    psi_pm,
    qtilde_isometry_check,
    symmetry_defect,
)


def hermite_sections(max_deg):
    """Orthonormal-coordinate sections of the derivative/creation pair.

    With the factorial norms, d/dx sends the degree-n unit vector to
    sqrt(n) times the degree n-1 unit vector, and the creation side
    raises with the same coefficient.  H1 holds degrees <= max_deg, H2
    degrees <= max_deg - 1.
    """
    n1 = max_deg + 1
    n2 = max_deg
    A = np.zeros((n2, n1))
    B = np.zeros((n1, n2))
    for n in range(1, n1):
        A[n - 1, n] = math.sqrt(n)
    for n in range(n2):
        B[n + 1, n] = math.sqrt(n + 1)
    return SymmetricPairSpec(OperatorMatrix(A), OperatorMatrix(B))


def test_spec_validation():
    with pytest.raises(PairError):
        SymmetricPairSpec(
            OperatorMatrix(np.eye(2)), OperatorMatrix(np.eye(3))
        )
    with pytest.raises(PairError):
        SymmetricPairSpec(
            OperatorMatrix(np.eye(2)), OperatorMatrix(np.eye(2), CONJUGATE)
        )


def test_check_pair_symmetric_matrix():
    M = np.array([[2.0, 1.0], [1.0, 3.0]])
    spec = SymmetricPairSpec(OperatorMatrix(M), OperatorMatrix(M))
    assert check_pair(spec).residual == 0.0


def test_check_pair_hermite_sections():
    spec = hermite_sections(5)
    rep = check_pair(spec)
    assert rep.residual == 0.0
    assert rep.passed


def test_check_pair_deliberate_violation():
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[1.0]])), OperatorMatrix(np.array([[2.0]]))
    )
    rep = check_pair(spec)
    assert abs(rep.residual - 1.0) < 1e-15
    assert not rep.passed


def test_build_L_examples():
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[1.0]])), OperatorMatrix(np.array([[1.0]]))
    )
    assert np.array_equal(build_L(spec).L.matrix,
                          np.array([[0.0, 1.0], [1.0, 0.0]]))
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[2.0]])), OperatorMatrix(np.array([[3.0]]))
    )
    block = build_L(spec)
    assert np.array_equal(block.L.matrix, np.array([[0.0, 3.0], [2.0, 0.0]]))
    assert symmetry_defect(block) == check_pair(spec).residual == 1.0


def test_build_L_hermite_symmetric():
    block = build_L(hermite_sections(5))
    assert symmetry_defect(block) < 1e-12


def test_build_Lstar_examples():
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[2.0]])), OperatorMatrix(np.array([[3.0]]))
    )
    assert np.array_equal(build_Lstar(spec).L.matrix,
                          np.array([[0.0, 2.0], [3.0, 0.0]]))


def test_build_Lstar_is_adjoint_of_build_L():
    rng = np.random.default_rng(10)
    A = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    B = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    spec = SymmetricPairSpec(OperatorMatrix(A), OperatorMatrix(B))
    dev = np.max(
        np.abs(build_Lstar(spec).L.matrix - adjoint(build_L(spec).L).matrix)
    )
    assert dev < 1e-12


def test_block_defect_bounds_pair_residual():
    # symmetry defect of L and pair residual bound each other
    specs = [
        hermite_sections(5),
        SymmetricPairSpec(
            OperatorMatrix(np.array([[1.0, 0.2], [0.2, 1.0]])),
            OperatorMatrix(np.array([[1.0, 0.2], [0.2, 1.0]])),
        ),
        SymmetricPairSpec(
            OperatorMatrix(np.array([[2.0]])), OperatorMatrix(np.array([[3.0]]))
        ),
    ]
    for spec in specs:
        res = check_pair(spec).residual
        defect = symmetry_defect(build_L(spec))
        assert defect <= 2.0 * res + 1e-15
        assert res <= defect + 1e-15


def test_deficiency_zero_on_symmetric_sections():
    dd = deficiency(hermite_sections(5))
    assert (dd.n_plus, dd.n_minus) == (0, 0)


def test_deficiency_rejects_non_symmetric():
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[2.0]])), OperatorMatrix(np.array([[3.0]]))
    )
    with pytest.raises(PairError):
        deficiency(spec)


def test_defect_flip_trivial():
    assert np.array_equal(defect_flip([1.0, 2.0, 0.0], (2, 1)),
                          [-1.0, -2.0, 0.0])
    assert np.array_equal(defect_flip([0.0, 0.0, 3.0], (2, 1)),
                          [0.0, 0.0, 3.0])
    with pytest.raises(PairError):
        defect_flip([1.0, 2.0], (2, 1))


def test_defect_flip_on_synthetic_probe():
    # non-symmetric probe with actual +-i eigenvectors of L*: columns of
    # A orthonormal makes L skew-adjoint with unit singular values
    rng = np.random.default_rng(11)
    M = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    Q, _ = np.linalg.qr(M)
    A = Q[:, :3]
    spec = SymmetricPairSpec(
        OperatorMatrix(A), OperatorMatrix(-A.conj().T)
    )
    lstar = build_Lstar(spec).L
    plus = eig_space(lstar, 1j, 1e-9)
    assert plus
    for v in plus:
        out = defect_flip(v, (spec.dim_h1, spec.dim_h2))
        resid = np.linalg.norm(lstar.apply(out) - (-1j) * out)
        assert resid < 1e-9


def test_psi_pm_examples():
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[1j]])), OperatorMatrix(np.array([[1j]]))
    )
    vec, pre, eig, lam = psi_pm(np.array([0.0]), spec, 1)
    assert np.array_equal(vec, [0.0, 0.0])
    vec, pre, eig, lam = psi_pm(np.array([1.0]), spec, 1)
    assert pre < 1e-15
    assert np.max(np.abs(vec - np.array([1.0, 1.0]))) < 1e-15
    assert eig < 1e-15
    assert lam == -1j
    # the flipped sign lands in the other defect space
    vec, pre, eig, lam = psi_pm(np.array([1.0]), spec, -1)
    assert eig < 1e-15
    assert lam == 1j


def test_lq_apply_examples():
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[1j]])), OperatorMatrix(np.array([[1j]]))
    )
    x = np.array([2.0])
    y = np.array([3.0])
    z = np.array([0.0])
    out = lq_apply(spec, x, y, z, z)
    L = build_L(spec).L
    assert np.max(np.abs(out - L.apply(np.concatenate([x, y])))) < 1e-15
    u = np.array([1.0 + 1j])
    out = lq_apply(spec, z, z, u, u)
    Bs = adjoint(spec.B)
    assert np.max(np.abs(out - np.concatenate([z, 2 * Bs.apply(u)]))) < 1e-15
    out = lq_apply(spec, z, z, np.array([1.0]), np.array([1.0]))
    assert np.max(np.abs(out - np.array([0.0, -2j]))) < 1e-15


def test_qtilde_isometry_examples():
    spec = hermite_sections(4)
    u = np.array([1.0, 0.5, 0.0, 0.0, 0.25])
    assert qtilde_isometry_check(spec, u, u) == 0.0
    assert qtilde_isometry_check(spec, u, -u) == 0.0
    zero_b = SymmetricPairSpec(
        OperatorMatrix(np.zeros((2, 2))), OperatorMatrix(np.zeros((2, 2)))
    )
    w = np.array([1.0, 2.0])
    expect = 3.0 * np.linalg.norm(w) ** 2
    assert abs(qtilde_isometry_check(zero_b, w, 2 * w) - expect) < 1e-12


def test_is_maximal_examples():
    M = np.array([[1.0, 0.5], [0.5, 2.0]])
    spec = SymmetricPairSpec(OperatorMatrix(M), OperatorMatrix(M))
    ok, dA, dB = is_maximal(spec)
    assert ok and dA < 1e-15 and dB < 1e-15
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[1.0, 0.0]])),
        OperatorMatrix(np.array([[1.0], [0.0]])),
    )
    assert is_maximal(spec)[0]
    spec = SymmetricPairSpec(
        OperatorMatrix(np.array([[1.0, 0.0]])),
        OperatorMatrix(np.array([[1.0], [1.0]])),
    )
    assert not is_maximal(spec)[0]
    assert check_pair(spec).residual > 0.5


def test_defect_eig_examples():
    M = np.array([[1.0, 0.5], [0.5, 2.0]])
    spec = SymmetricPairSpec(OperatorMatrix(M), OperatorMatrix(M))
    assert defect_eig(spec) == []
    toy = SymmetricPairSpec(
        OperatorMatrix(np.array([[1j]])), OperatorMatrix(np.array([[1j]]))
    )
    basis = defect_eig(toy)
    assert len(basis) == 1
    assert abs(abs(basis[0][0]) - 1.0) < 1e-12


def test_pair_from_json_round_trip():
    spec = hermite_sections(3)
    obj = {
        "A": spec.A.to_json(),
        "B": spec.B.to_json(),
        "tol": 1e-8,
    }
    back, tol = pair_from_json(obj)
    assert tol == 1e-8
    assert np.array_equal(back.A.matrix, spec.A.matrix)
    assert np.array_equal(back.B.matrix, spec.B.matrix)
