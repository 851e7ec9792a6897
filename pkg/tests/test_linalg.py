import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_sl
from slnfib.errors import DimensionError, LogDomain, SingularInput
from slnfib.linalg import (
    DEFAULT_TOL,
    FMatrix,
    RMatrix,
    ToleranceContext,
    matrix_exp,
    matrix_log,
    multiply,
    qr_positive,
    rational_rank,
)


def elementary(i, j, n):
    return RMatrix([[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])


class TestMultiply:
    def test_identity_absorbs(self):
        m = RMatrix([[1, 2], [3, 4]])
        assert multiply(RMatrix.identity(2), m) == m

    def test_elementary_product(self):
        # E12 . E21 = E11 by direct hand multiplication
        assert elementary(0, 1, 2) @ elementary(1, 0, 2) == elementary(0, 0, 2)

    def test_nilpotent_square(self):
        e12 = elementary(0, 1, 2)
        assert (e12 @ e12).is_zero()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            multiply(RMatrix.identity(2), RMatrix.identity(3))

    def test_no_mixing_exact_and_float(self):
        with pytest.raises(DimensionError):
            multiply(RMatrix.identity(2), FMatrix.identity(2))


class TestDeterminant:
    def test_identity(self):
        assert RMatrix.identity(3).det() == 1

    def test_triangular(self):
        assert RMatrix([[2, 1], [0, Fraction(1, 2)]]).det() == 1

    def test_diagonal(self):
        assert RMatrix.diagonal([3, Fraction(1, 3), 1]).det() == 1

    def test_multiplicativity_random(self, rng):
        for n in (2, 3, 4):
            for _ in range(500):
                a = RMatrix(rng.integers(-5, 6, size=(n, n)).tolist())
                b = RMatrix(rng.integers(-5, 6, size=(n, n)).tolist())
                assert (a @ b).det() == a.det() * b.det()


class TestQRPositive:
    def test_rotation_input(self):
        th = 0.7
        rot = FMatrix([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        q, r = qr_positive(rot)
        assert q.allclose(rot, 1e-12)
        assert r.allclose(FMatrix.identity(2), 1e-12)

    def test_upper_triangular_input(self):
        m = FMatrix([[2.0, 1.5], [0.0, 0.5]])
        q, r = qr_positive(m)
        assert q.allclose(FMatrix.identity(2), 1e-12)
        assert r.allclose(m, 1e-12)

    def test_reconstruction_random_sl3(self, rng):
        for _ in range(50):
            a = random_sl(3, rng)
            q, r = qr_positive(a)
            assert (q @ r).dist(a) < 1e-9
            assert (q.transpose() @ q).dist(FMatrix.identity(3)) < 1e-9
            assert all(r[i, i] > 0 for i in range(3))

    def test_uniqueness(self, rng):
        a = random_sl(4, rng)
        q, r = qr_positive(a)
        q2, r2 = qr_positive(q @ r)
        assert q2.dist(q) < DEFAULT_TOL.eq_tol
        assert r2.dist(r) < DEFAULT_TOL.eq_tol

    def test_singular_rejected(self):
        with pytest.raises(SingularInput):
            qr_positive(FMatrix([[1.0, 1.0], [1.0, 1.0]]))


class TestExpLog:
    def test_exp_zero(self):
        assert matrix_exp(FMatrix(np.zeros((3, 3)))).allclose(FMatrix.identity(3), 1e-14)

    def test_exp_diagonal_against_series(self):
        t = 0.37
        got = matrix_exp(FMatrix([[t, 0.0], [0.0, -t]]))
        # power-series oracle on the diagonal entries
        series = sum(t ** k / math.factorial(k) for k in range(30))
        series_neg = sum((-t) ** k / math.factorial(k) for k in range(30))
        assert abs(got[0, 0] - series) < 1e-12
        assert abs(got[1, 1] - series_neg) < 1e-12
        assert abs(got[0, 1]) < 1e-14

    def test_log_nilpotent_terminates(self):
        x = FMatrix([[0.0, 0.1], [0.0, 0.0]])
        assert matrix_log(matrix_exp(x)).dist(x) < 1e-12

    def test_roundtrip_diagonal_family(self):
        for t in (0.05, 0.2, 0.4):
            a = FMatrix([[math.exp(t), 0.0], [0.0, math.exp(-t)]])
            assert matrix_exp(matrix_log(a)).dist(a) < DEFAULT_TOL.residual_tol

    def test_log_domain_guard(self):
        with pytest.raises(LogDomain):
            matrix_log(FMatrix([[-1.0, 0.0], [0.0, -1.0]]))


class TestToleranceContext:
    def test_defaults_valid(self):
        ToleranceContext()

    @pytest.mark.parametrize("eq,res", [(0.0, 1e-9), (1e-3, 1e-6), (1e-4, 2.0)])
    def test_invalid(self, eq, res):
        with pytest.raises(ValueError):
            ToleranceContext(eq, res)


class TestDimensionCap:
    def test_rejects_large(self):
        with pytest.raises(DimensionError):
            RMatrix.identity(9)

    def test_rejects_tiny(self):
        with pytest.raises(DimensionError):
            FMatrix([[1.0]])


def test_rational_rank():
    vecs = [
        [Fraction(1), Fraction(0), Fraction(1)],
        [Fraction(0), Fraction(1), Fraction(1)],
        [Fraction(1), Fraction(1), Fraction(2)],
    ]
    assert rational_rank(vecs) == 2


def test_fmatrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        FMatrix([[1.0, float("nan")], [0.0, 1.0]])
