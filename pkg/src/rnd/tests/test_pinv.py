"""伪逆测试"""

import numpy as np
import pytest

from src.common.exceptions import DataError, ShapeMismatchError

from ..exceptions import RankDeficientError
from ..pinv import compute_pinv


@pytest.mark.unit
class TestComputePinv:
    """Moore–Penrose 伪逆测试"""

    def test_selection_matrix(self):
        """测试 [I 0] 的伪逆为 [I; 0]"""
        A = np.hstack([np.eye(3), np.zeros((3, 2))])
        A_pinv, report = compute_pinv(A)

        assert np.allclose(A_pinv, A.T)
        assert report.rank == 3
        assert report.max_reconstruction_error == 0.0

    def test_identity(self):
        """测试单位阵的伪逆仍为单位阵"""
        P, report = compute_pinv(np.eye(4))

        assert np.allclose(P, np.eye(4), atol=1e-14)
        assert report.rank == 4

    def test_scaled_selection(self):
        """测试 [[1,0,0],[0,2,0]] 的伪逆为 [[1,0],[0,0.5],[0,0]]"""
        A = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
        P, report = compute_pinv(A)

        expected = np.array([[1.0, 0.0], [0.0, 0.5], [0.0, 0.0]])
        assert P.shape == (3, 2)
        assert np.allclose(P, expected, atol=1e-14)
        assert report.rank == 2

    def test_penrose_conditions(self):
        """测试四条 Penrose 条件"""
        rng = np.random.default_rng(0)
        A = np.abs(rng.standard_normal((8, 33)))
        P, _ = compute_pinv(A)

        assert np.allclose(A @ P @ A, A, atol=1e-10)
        assert np.allclose(P @ A @ P, P, atol=1e-10)
        assert np.allclose((A @ P).T, A @ P, atol=1e-10)
        assert np.allclose((P @ A).T, P @ A, atol=1e-10)

    def test_matches_numpy(self):
        """测试与 numpy.linalg.pinv 一致"""
        rng = np.random.default_rng(3)
        A = rng.uniform(0, 1, (5, 12))
        P, _ = compute_pinv(A)

        assert np.allclose(P, np.linalg.pinv(A), atol=1e-12)

    def test_duplicate_rows_truncated(self):
        """测试重复行被奇异值截断"""
        A = np.array([[1.0, 2.0, 0.0], [1.0, 2.0, 0.0]])
        P, report = compute_pinv(A)

        assert report.rank == 1
        assert np.allclose(A @ P @ A, A)

    def test_zero_row(self):
        """测试全零行"""
        A = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

        with pytest.raises(RankDeficientError) as exc_info:
            compute_pinv(A)
        assert "rank deficient" in str(exc_info.value)

    def test_tall_matrix(self):
        """测试行数多于列数"""
        with pytest.raises(ShapeMismatchError):
            compute_pinv(np.ones((4, 2)))

    def test_non_finite(self):
        """测试非有限值"""
        with pytest.raises(DataError):
            compute_pinv(np.array([[1.0, np.inf]]))
