"""生成器测试共用的小规模配置与随机权重"""

import numpy as np

from ..config import GeneratorConfig, RegionLayout
from ..weights import WeightBundle, build_manifest


def small_config(**overrides) -> GeneratorConfig:
    """n_fft=64 (F=33)，N=9 个子带，C=8"""
    params = {
        "n_bins": 33,
        "n_mels": 8,
        "channels": 8,
        "n_blocks": 2,
        "n_convnext": 2,
        "layout": RegionLayout(
            boundaries=(0, 8, 20, 33),
            freq_strides=(2, 4, 8),
            freq_kernels=(2, 4, 8),
            pad_per_region=(0, 0, 3),
        ),
    }
    params.update(overrides)
    return GeneratorConfig(**params)


def tiny_config(**overrides) -> GeneratorConfig:
    """N=3 个子带、C=4 通道，用于逐元素对照"""
    params = {
        "n_bins": 9,
        "n_mels": 4,
        "channels": 4,
        "n_blocks": 1,
        "n_convnext": 2,
        "cbm_groups": 2,
        "layout": RegionLayout(
            boundaries=(0, 2, 5, 9),
            freq_strides=(2, 3, 4),
            freq_kernels=(2, 3, 4),
            pad_per_region=(0, 0, 0),
        ),
    }
    params.update(overrides)
    return GeneratorConfig(**params)


def random_bundle(cfg: GeneratorConfig, seed: int = 0, scale: float = 0.5) -> WeightBundle:
    """所有张量取 U(−scale, scale)"""
    rng = np.random.default_rng(seed)
    return WeightBundle(
        {spec.name: rng.uniform(-scale, scale, spec.shape) for spec in build_manifest(cfg)}
    )
