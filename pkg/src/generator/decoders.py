"""分层幅度/相位解码 (HMDM / HPDM)

区域流程：1×1 卷积 → LN → GELU → 转置卷积，去掉补零后在频率轴拼接。
"""

import numpy as np

from src.common.exceptions import ShapeMismatchError

from .config import GeneratorConfig
from .layers import gelu, layer_norm, map_ordered, pointwise, strided_patch_transpose
from .weights import WeightBundle


def _decode_regions(
    o: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, head: str, workers: int
) -> np.ndarray:
    """返回 (C_out, F, T)"""
    if o.ndim != 3 or o.shape[:2] != (cfg.n_subbands, cfg.channels):
        raise ShapeMismatchError(f"{head}.input", f"({cfg.n_subbands}, {cfg.channels}, T)", o.shape)
    layout = cfg.layout
    offsets = layout.subband_offsets()

    def decode(i: int) -> np.ndarray:
        p = f"{head}.region{i}"
        h = pointwise(o[offsets[i] : offsets[i + 1]], w.f64(f"{p}.pwconv.weight"), w.f64(f"{p}.pwconv.bias"))
        h = gelu(layer_norm(h, w.f64(f"{p}.norm.weight"), w.f64(f"{p}.norm.bias"), cfg.norm_eps))
        k = strided_patch_transpose(h, w.f64(f"{p}.trconv.weight"), w.f64(f"{p}.trconv.bias"))
        return k[:, : layout.widths[i]]

    return np.concatenate(map_ordered(decode, list(range(layout.n_regions)), workers), axis=1)


def hmdm_decode(o: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, workers: int = 1) -> np.ndarray:
    """零空间幅度估计 exp(K)，严格为正"""
    return np.exp(_decode_regions(o, cfg, w, "hmdm", workers)[0])


def hpdm_decode(o: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, workers: int = 1) -> np.ndarray:
    """相位估计 atan2(虚, 实)，取值 (−π, π]，两路同时为零时记为 0"""
    k = _decode_regions(o, cfg, w, "hpdm", workers)
    real, imag = k[0], k[1]
    phase = np.arctan2(imag, real)
    phase = np.where(phase <= -np.pi, np.pi, phase)
    return np.where((real == 0) & (imag == 0), 0.0, phase)
