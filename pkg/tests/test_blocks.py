import math

import numpy as np
import pytest

from normcorner.blocks import (
    assemble,
    check_normal_corner_conditions,
    corner_report,
    partition,
    random_normal,
)
from normcorner.linalg import adj, normality_residual, random_unitary, singular_values
from normcorner.search import example_n2, example_n3

from conftest import random_complex


def test_assemble_scalars():
    N = assemble([[1]], [[2]], [[3]], [[4]]).matrix
    np.testing.assert_array_equal(N, [[1, 2], [3, 4]])


def test_assemble_eq6_blocks():
    r2 = math.sqrt(2)
    N = assemble([[0, 0], [1, 0]], [[r2, 0], [0, 0]], [[0, 1], [1, 0]], [[0, 1], [0, 0]]).matrix
    expected = [[0, 0, r2, 0], [1, 0, 0, 0], [0, 1, 0, 1], [1, 0, 0, 0]]
    np.testing.assert_array_equal(N, expected)


def test_assemble_zero_and_shape_mismatch():
    Z = np.zeros((3, 3))
    np.testing.assert_array_equal(assemble(Z, Z, Z, Z).matrix, np.zeros((6, 6)))
    with pytest.raises(ValueError, match="block B"):
        assemble(Z, np.zeros((2, 2)), Z, Z)


def test_partition_roundtrip(rng):
    for m in (2, 4, 6, 8):
        N = random_complex(rng, m)
        np.testing.assert_array_equal(partition(N).matrix, N)
    b = partition(np.eye(4))
    np.testing.assert_array_equal(b.A, np.eye(2))
    np.testing.assert_array_equal(b.D, np.eye(2))
    assert not b.B.any() and not b.C.any()
    b = partition([[1, 2], [3, 4]])
    assert (b.A[0, 0], b.B[0, 0], b.C[0, 0], b.D[0, 0]) == (1, 2, 3, 4)


def test_partition_rejects_odd():
    with pytest.raises(ValueError, match="even"):
        partition(np.eye(3))


def test_partition_eq7():
    b = partition(example_n3().matrix)
    assert singular_values(b.B)[0] == pytest.approx(math.sqrt(3), abs=1e-15)
    np.testing.assert_array_equal(b.C, np.fliplr(np.eye(3)))


def test_corner_report_paper_examples():
    rep = corner_report(example_n2().matrix)
    assert abs(rep.ratio - math.sqrt(2)) < 1e-12
    assert rep.frobenius_gap < 1e-12
    assert rep.normality_residual < 1e-12
    rep = corner_report(example_n3().matrix)
    assert abs(rep.ratio - math.sqrt(3)) < 1e-12


def test_corner_report_hermitian(rng):
    X = random_complex(rng, 6)
    rep = corner_report(X + adj(X))
    assert rep.ratio <= 1 + 1e-12
    assert rep.singular_value_gap < 1e-10


def test_corner_ratio_conventions():
    assert corner_report(np.eye(4)).ratio == 1.0
    N = np.zeros((4, 4))
    N[0, 2] = 1.0
    assert corner_report(N).ratio == math.inf


def test_check_conditions_random_normal():
    for seed in range(20):
        v = check_normal_corner_conditions(random_normal(2 * (1 + seed % 5), seed))
        assert v.is_normal and v.frobenius_equality and v.ratio_bound


def test_check_conditions_eq6():
    v = check_normal_corner_conditions(example_n2())
    assert v.is_normal and v.passed
    assert v.report.ratio == pytest.approx(math.sqrt(2), abs=1e-12)


def test_check_conditions_example1_not_normal(rng):
    B = np.array([[1, 0.5], [0, 0]])
    C = np.diag([1, 0.5])
    N = assemble(random_complex(rng, 2), B, C, random_complex(rng, 2))
    v = check_normal_corner_conditions(N)
    assert not v.is_normal
    assert v.report.normality_residual > 1e-10


def test_check_conditions_reports_measurements():
    N = np.zeros((2, 2), dtype=complex)
    N[0, 1] = 1.0
    v = check_normal_corner_conditions(N, tol=1e-10)
    assert not v.is_normal
    assert v.report.normality_residual == pytest.approx(math.sqrt(2))
    assert v.report.frobenius_gap == pytest.approx(1.0)
    assert v.report.ratio == math.inf


def test_random_normal_contract():
    assert normality_residual(random_normal(1, 3)) == 0.0
    np.testing.assert_array_equal(random_normal(6, 42), random_normal(6, 42))
    assert normality_residual(random_normal(8, 5)) < 1e-12


# -- properties over seeded corpora ------------------------------------------


def normal_corpus(count):
    for k in range(count):
        n = 1 + k % 6
        yield n, random_normal(2 * n, k)


def test_eq2_frobenius_equality_corpus():
    for n, N in normal_corpus(500):
        rep = corner_report(N)
        assert rep.frobenius_gap < 1e-10 * max(1.0, np.linalg.norm(N))


def test_eq5_ratio_bound_corpus():
    for n, N in normal_corpus(500):
        b = partition(N)
        nb, nc = singular_values(b.B)[0], singular_values(b.C)[0]
        assert nb <= math.sqrt(n) * nc + 1e-10
        assert nc <= math.sqrt(n) * nb + 1e-10


def test_unitary_corners_share_singular_values():
    r = np.random.default_rng(7)
    for k in range(200):
        n = 1 + k % 6
        U = random_unitary(2 * n, r)
        assert corner_report(U).singular_value_gap < 1e-10


def test_hermitian_corners_adjoint():
    r = np.random.default_rng(8)
    for k in range(200):
        n = 1 + k % 6
        X = random_complex(r, 2 * n)
        H = X + adj(X)
        b = partition(H)
        np.testing.assert_array_equal(b.C, adj(b.B))
        assert corner_report(H).singular_value_gap < 1e-12


def test_n1_corollary():
    for seed in range(200):
        N = random_normal(2, seed)
        assert abs(abs(N[0, 1]) - abs(N[1, 0])) < 1e-12
