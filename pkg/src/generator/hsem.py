"""分层谱编码 (HSEM)

每个区域右侧补零到步长整数倍，用频率步长等于核宽的二维卷积压缩为子带，
再沿通道做层归一化，最后在子带轴拼接为 (N, C, T)。
"""

import numpy as np

from src.common.exceptions import ShapeMismatchError

from .config import GeneratorConfig
from .layers import layer_norm, map_ordered, strided_patch_conv
from .weights import WeightBundle


def split_regions(x: np.ndarray, cfg: GeneratorConfig) -> list[np.ndarray]:
    """按区域切分 F×T 矩阵并右侧补零"""
    layout = cfg.layout
    regions = []
    for begin, end, pad in zip(layout.boundaries, layout.boundaries[1:], layout.pad_per_region):
        regions.append(np.pad(x[begin:end], ((0, pad), (0, 0))))
    return regions


def hsem_encode(
    range_mag: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, workers: int = 1
) -> np.ndarray:
    """F×T 值域幅度 → (N, C, T) 子带特征

    Raises:
        ShapeMismatchError: 输入行数不等于 F
    """
    if range_mag.ndim != 2 or range_mag.shape[0] != cfg.n_bins:
        raise ShapeMismatchError("range_mag", f"({cfg.n_bins}, T)", range_mag.shape)

    def encode(item: tuple[int, np.ndarray]) -> np.ndarray:
        i, region = item
        p = f"hsem.region{i}"
        h = strided_patch_conv(region, w.f64(f"{p}.conv.weight"), w.f64(f"{p}.conv.bias"))
        return layer_norm(h, w.f64(f"{p}.norm.weight"), w.f64(f"{p}.norm.bias"), cfg.norm_eps)

    parts = map_ordered(encode, list(enumerate(split_regions(range_mag, cfg))), workers)
    return np.concatenate(parts, axis=0)
