"""定序数值工具

网络中的张量收缩统一走 ``numpy.einsum(optimize=False)``，不经过 BLAS，
求和顺序固定，因此结果与线程数无关、逐位稳定。
"""

import numpy as np


def contract(subscripts: str, *operands: np.ndarray) -> np.ndarray:
    """按固定求和顺序做 einsum 收缩"""
    return np.einsum(subscripts, *operands, optimize=False)


def max_abs(x: np.ndarray) -> float:
    """最大绝对值（空数组返回 0）"""
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x)))


def relative_max_error(actual: np.ndarray, expected: np.ndarray) -> float:
    """相对最大误差 ‖actual − expected‖_max / ‖expected‖_max

    参考值全零时退化为绝对误差。
    """
    scale = max_abs(expected)
    err = max_abs(np.asarray(actual) - np.asarray(expected))
    if scale == 0.0:
        return err
    return err / scale
