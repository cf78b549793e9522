"""双路径块 (DPB)：跨带模块 CBM + 窄带模块 NBM"""

import numpy as np

from src.common.exceptions import ShapeMismatchError

from .config import GeneratorConfig
from .layers import (
    band_mix,
    conv_subbands,
    depthwise_time,
    gelu,
    global_response_norm,
    layer_norm,
    map_ordered,
    pointwise,
    prelu,
    silu,
)
from .weights import WeightBundle


def _check_features(x: np.ndarray, cfg: GeneratorConfig) -> None:
    if x.ndim != 3 or x.shape[:2] != (cfg.n_subbands, cfg.channels):
        raise ShapeMismatchError("features", f"({cfg.n_subbands}, {cfg.channels}, T)", x.shape)


def _neighbor_stage(
    x: np.ndarray,
    cfg: GeneratorConfig,
    w: WeightBundle,
    norm: str,
    conv: str,
    act: str,
) -> np.ndarray:
    """LN → 分组子带卷积 → PReLU，残差"""
    h = layer_norm(x, w.f64(f"{norm}.weight"), w.f64(f"{norm}.bias"), cfg.norm_eps)
    h = conv_subbands(h, w.f64(f"{conv}.weight"), w.f64(f"{conv}.bias"), cfg.cbm_groups)
    return x + prelu(h, w.f64(f"{act}.weight"))


def cbm_forward(x: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, block_idx: int) -> np.ndarray:
    """跨带模块

    相邻子带卷积 → 全局子带混合（压缩通道、BandMixer、恢复通道）→ 相邻子带卷积，
    三段均为残差。

    Raises:
        ShapeMismatchError: 特征形状或 BandMixer 尺寸与子带数不符
    """
    _check_features(x, cfg)
    p = f"dpb{block_idx}.cbm"
    mixer = w.f64(f"{p}.mixer.weight")
    if mixer.shape != (x.shape[0], x.shape[0]):
        raise ShapeMismatchError(f"{p}.mixer.weight", (x.shape[0], x.shape[0]), mixer.shape)

    y = _neighbor_stage(x, cfg, w, f"{p}.norm1", f"{p}.gconv1", f"{p}.prelu1")

    h = layer_norm(y, w.f64(f"{p}.norm2.weight"), w.f64(f"{p}.norm2.bias"), cfg.norm_eps)
    h = silu(pointwise(h, w.f64(f"{p}.squeeze.weight"), w.f64(f"{p}.squeeze.bias")))
    h = band_mix(h, mixer)
    h = silu(pointwise(h, w.f64(f"{p}.restore.weight"), w.f64(f"{p}.restore.bias")))
    y = y + h

    return _neighbor_stage(y, cfg, w, f"{p}.norm3", f"{p}.gconv2", f"{p}.prelu2")


def convnext_block(x: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, prefix: str) -> np.ndarray:
    """ConvNeXt-v2 块：逐通道时间卷积 → LN → 1×1 → GELU → GRN → 1×1，残差

    隐层宽度保持 C。
    """
    h = depthwise_time(x, w.f64(f"{prefix}.dwconv.weight"), w.f64(f"{prefix}.dwconv.bias"))
    h = layer_norm(h, w.f64(f"{prefix}.norm.weight"), w.f64(f"{prefix}.norm.bias"), cfg.norm_eps)
    h = gelu(pointwise(h, w.f64(f"{prefix}.pwconv1.weight"), w.f64(f"{prefix}.pwconv1.bias")))
    h = global_response_norm(h, w.f64(f"{prefix}.grn.gamma"), w.f64(f"{prefix}.grn.beta"))
    h = pointwise(h, w.f64(f"{prefix}.pwconv2.weight"), w.f64(f"{prefix}.pwconv2.bias"))
    return x + h


def nbm_forward(
    x: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, block_idx: int, workers: int = 1
) -> np.ndarray:
    """窄带模块：P 个 ConvNeXt-v2 块沿帧轴建模，所有子带共享权重

    子带之间互不影响，workers > 1 时按子带切块并行，结果与串行逐位一致。
    """
    _check_features(x, cfg)

    def run(chunk: np.ndarray) -> np.ndarray:
        for j in range(cfg.n_convnext):
            chunk = convnext_block(chunk, cfg, w, f"dpb{block_idx}.nbm.block{j}")
        return chunk

    if workers <= 1:
        return run(x)
    chunks = np.array_split(x, min(workers, x.shape[0]), axis=0)
    return np.concatenate(map_ordered(run, chunks, workers), axis=0)


def dpb_forward(
    x: np.ndarray, cfg: GeneratorConfig, w: WeightBundle, block_idx: int, workers: int = 1
) -> np.ndarray:
    """CBM → NBM"""
    return nbm_forward(cbm_forward(x, cfg, w, block_idx), cfg, w, block_idx, workers)
