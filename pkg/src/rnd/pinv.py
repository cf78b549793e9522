"""Moore–Penrose 伪逆

基于奇异值分解，截断小于 sv_floor·σ_max 的奇异值。
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from src.common.exceptions import DataError, ShapeMismatchError
from src.common.numerics import max_abs

from .exceptions import RankDeficientError

DEFAULT_SV_FLOOR = 1e-8


@dataclass(frozen=True)
class PseudoInverseReport:
    """伪逆计算报告"""

    rank: int
    max_reconstruction_error: float  # ‖AA†A − A‖_max
    singular_value_floor: float  # 实际使用的绝对截断阈值


def compute_pinv(
    A: np.ndarray, sv_floor: float = DEFAULT_SV_FLOOR
) -> tuple[np.ndarray, PseudoInverseReport]:
    """计算 F_m×F 矩阵的伪逆 A† (F×F_m)

    Args:
        A: 退化矩阵，行数不超过列数
        sv_floor: 相对截断阈值

    Returns:
        (A†, 报告)

    Raises:
        DataError: 含非有限值
        ShapeMismatchError: 不是宽矩阵
        RankDeficientError: 存在全零行
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] > A.shape[1]:
        raise ShapeMismatchError("A", "(F_m, F) 且 F_m <= F", A.shape)
    if not np.all(np.isfinite(A)):
        raise DataError("退化矩阵包含 NaN 或 Inf", "A")
    zero_rows = np.flatnonzero(~np.any(A != 0, axis=1))
    if zero_rows.size:
        raise RankDeficientError(zero_rows.tolist())

    U, s, Vh = scipy.linalg.svd(A, full_matrices=False)
    cutoff = sv_floor * float(s[0])
    rank = int(np.count_nonzero(s > cutoff))

    A_pinv = (Vh[:rank].T / s[:rank]) @ U[:, :rank].T
    error = max_abs(A @ A_pinv @ A - A)
    return A_pinv, PseudoInverseReport(rank, error, cutoff)
