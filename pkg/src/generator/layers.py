"""网络基础算子

特征张量统一为 (N, C, T)：子带 × 通道 × 帧。
所有收缩经由 ``contract``，求和顺序固定。
"""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np
import scipy.special

from src.common.exceptions import ShapeMismatchError
from src.common.numerics import contract

T = TypeVar("T")
R = TypeVar("R")


def layer_norm(x: np.ndarray, weight: np.ndarray, bias: np.ndarray, eps: float) -> np.ndarray:
    """沿通道轴（倒数第二维）做层归一化"""
    mean = x.mean(axis=-2, keepdims=True)
    var = ((x - mean) ** 2).mean(axis=-2, keepdims=True)
    y = (x - mean) / np.sqrt(var + eps)
    return y * weight[:, None] + bias[:, None]


def gelu(x: np.ndarray) -> np.ndarray:
    """精确 GELU（erf 形式）"""
    return 0.5 * x * (1.0 + scipy.special.erf(x / np.sqrt(2.0)))


def silu(x: np.ndarray) -> np.ndarray:
    return x * scipy.special.expit(x)


def prelu(x: np.ndarray, slope: np.ndarray) -> np.ndarray:
    """逐通道 PReLU"""
    return np.where(x >= 0, x, slope[:, None] * x)


def pointwise(x: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """1×1 卷积: (N, C_in, T) → (N, C_out, T)，weight 为 (C_out, C_in)"""
    return contract("oc,nct->not", weight, x) + bias[:, None]


def _windows(x: np.ndarray, kernel: int, axis: int) -> np.ndarray:
    """沿 axis 两侧补零后取 kernel 个平移视图，堆叠在第 0 维"""
    pad = kernel // 2
    widths = [(0, 0)] * x.ndim
    widths[axis] = (pad, pad)
    xp = np.pad(x, widths)
    length = x.shape[axis]
    return np.stack([np.take(xp, np.arange(j, j + length), axis=axis) for j in range(kernel)])


def conv_subbands(
    x: np.ndarray, weight: np.ndarray, bias: np.ndarray, groups: int
) -> np.ndarray:
    """沿子带轴的分组一维卷积（帧作为批维），零填充保持长度

    Args:
        x: (N, C_in, T)
        weight: (C_out, C_in/groups, k)
        bias: (C_out,)
        groups: 分组数
    """
    n, c_in, t = x.shape
    c_out, c_in_g, k = weight.shape
    if c_in_g * groups != c_in or c_out % groups:
        raise ShapeMismatchError("conv_subbands.weight", f"({c_out}, {c_in // groups}, k)", weight.shape)
    win = _windows(x, k, axis=0).reshape(k, n, groups, c_in_g, t)
    w = weight.reshape(groups, c_out // groups, c_in_g, k)
    out = contract("gocj,jngct->ngot", w, win).reshape(n, c_out, t)
    return out + bias[:, None]


def depthwise_time(x: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """沿帧轴的逐通道卷积（子带作为批维），零填充保持长度

    weight 为 (C, 1, k)。
    """
    k = weight.shape[-1]
    win = _windows(x, k, axis=2)
    return contract("cj,jnct->nct", weight[:, 0, :], win) + bias[:, None]


def band_mix(x: np.ndarray, mixer: np.ndarray) -> np.ndarray:
    """子带间全连接: y_m = Σ_n W[m, n] x_n"""
    if mixer.shape != (x.shape[0], x.shape[0]):
        raise ShapeMismatchError("band_mixer", (x.shape[0], x.shape[0]), mixer.shape)
    return contract("mn,nct->mct", mixer, x)


def global_response_norm(
    x: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = 1e-6
) -> np.ndarray:
    """ConvNeXt-v2 GRN：每个子带内沿帧求 L2 范数，再按通道均值归一"""
    gx = np.sqrt((x * x).sum(axis=2, keepdims=True))
    nx = gx / (gx.mean(axis=1, keepdims=True) + eps)
    return gamma[:, None] * (x * nx) + beta[:, None] + x


def strided_patch_conv(
    x: np.ndarray, weight: np.ndarray, bias: np.ndarray
) -> np.ndarray:
    """频率方向无重叠切块、帧方向 same 填充的二维卷积

    Args:
        x: (F_pad, T) 已补齐的区域幅度
        weight: (C, 1, s, kt)
        bias: (C,)

    Returns:
        (F_pad/s, C, T)
    """
    c, _, s, kt = weight.shape
    f_pad, t = x.shape
    patches = x.reshape(f_pad // s, s, t)
    win = _windows(patches, kt, axis=2)
    return contract("cfj,jnft->nct", weight[:, 0], win) + bias[:, None]


def strided_patch_transpose(
    x: np.ndarray, weight: np.ndarray, bias: np.ndarray
) -> np.ndarray:
    """strided_patch_conv 的转置卷积

    Args:
        x: (N_i, C, T)
        weight: (C, C_out, s, kt)，PyTorch ConvTranspose2d 布局
        bias: (C_out,)

    Returns:
        (C_out, N_i·s, T)
    """
    n, _, t = x.shape
    _, c_out, s, kt = weight.shape
    # 转置卷积等价于翻转时间核后的相关
    flipped = weight[:, :, :, ::-1]
    win = _windows(x, kt, axis=2)
    out = contract("cofj,jnct->onft", flipped, win)
    return out.reshape(c_out, n * s, t) + bias[:, None, None]


def map_ordered(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """按顺序返回结果的映射，workers > 1 时使用线程池"""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
