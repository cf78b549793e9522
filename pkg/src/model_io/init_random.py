"""按种子生成权重包

生成器固定为 PCG64（numpy ``PCG64(seed)``），直接取 64 位原始字：

    u     = (word >> 11) · 2⁻⁵³           ∈ [0, 1)
    value = (2u − 1) · sqrt(1 / fan_in)

张量按清单顺序依次取字。归一化权重为 1、偏置为 0，PReLU 斜率为 0.25，
这三类不消耗随机字；BandMixer 为单位阵加 (2u − 1)·0.01。
可学习投影的 A/A† 取自给定滤波器组（未给定时为 0），同样不消耗随机字。
"""

import logging

import numpy as np

from src.common.exceptions import UsageError
from src.dsp.core import MelFilterbank
from src.generator.config import GeneratorConfig
from src.generator.weights import ParamSpec, WeightBundle, build_manifest

logger = logging.getLogger(__name__)

PRNG_NAME = "PCG64"
PRELU_INIT = 0.25
MIXER_JITTER = 0.01
_U64_MAX = 2**64 - 1


def _uniform(bits: np.random.PCG64, size: int) -> np.ndarray:
    """[0, 1) 上的 53 位均匀数"""
    words = np.asarray(bits.random_raw(size), dtype=np.uint64)
    return (words >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _draw(spec: ParamSpec, bits: np.random.PCG64, fb: MelFilterbank | None) -> np.ndarray:
    match spec.init:
        case "ones":
            return np.ones(spec.shape)
        case "zeros":
            return np.zeros(spec.shape)
        case "prelu":
            return np.full(spec.shape, PRELU_INIT)
        case "mixer":
            jitter = (2.0 * _uniform(bits, spec.size) - 1.0) * MIXER_JITTER
            return np.eye(spec.shape[0]) + jitter.reshape(spec.shape)
        case "mel_basis" | "mel_inverse":
            if fb is None:
                return np.zeros(spec.shape)
            matrix = fb.A if spec.init == "mel_basis" else fb.A_pinv
            if matrix.shape != spec.shape:
                raise UsageError(f"滤波器组形状 {matrix.shape} 与 {spec.shape} 不符", spec.name)
            return np.array(matrix)
        case _:
            bound = np.sqrt(1.0 / spec.fan_in)
            return ((2.0 * _uniform(bits, spec.size) - 1.0) * bound).reshape(spec.shape)


def init_random(cfg: GeneratorConfig, seed: int, fb: MelFilterbank | None = None) -> WeightBundle:
    """生成完整的随机权重包，同一 seed 在任何平台上结果一致

    Args:
        cfg: 生成器配置
        seed: 无符号 64 位种子
        fb: learned_projection 时用于初始化 A/A† 的滤波器组

    Raises:
        UsageError: seed 不是无符号 64 位整数，或滤波器组形状不符
    """
    if not 0 <= seed <= _U64_MAX:
        raise UsageError(f"seed 必须在 [0, 2^64) 内，实际 {seed}", "seed")
    if cfg.learned_projection and fb is None:
        logger.warning("learned_projection 未给定滤波器组，A/A† 初始化为 0")
    bits = np.random.PCG64(seed)
    tensors = {spec.name: _draw(spec, bits, fb) for spec in build_manifest(cfg)}
    bundle = WeightBundle(tensors)
    logger.info(f"{PRNG_NAME}(seed={seed}) 生成 {len(bundle)} 个张量，共 {bundle.n_scalars} 个参数")
    return bundle
