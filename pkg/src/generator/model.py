"""生成器前向传播

mel → 值域投影 → HSEM → B×DPB → HMDM/HPDM → 值域+零空间叠加 → iSTFT
"""

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from src.common.exceptions import DataError, ShapeMismatchError, VocoderError
from src.common.numerics import contract, max_abs
from src.dsp.core import AudioBuffer, MelFilterbank, StftConfig
from src.dsp.stft import istft
from src.rnd.pinv import PseudoInverseReport
from src.rnd.projection import (
    RangeSpectrum,
    assemble_spectrum,
    null_project,
    range_project,
)

from .config import GeneratorConfig
from .decoders import hmdm_decode, hpdm_decode
from .dual_path import dpb_forward
from .exceptions import GeneratorStageError
from .hsem import hsem_encode
from .weights import MEL_BASIS, MEL_INVERSE, WeightBundle, validate_bundle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorOutput:
    """一次前向传播的全部中间量与结果"""

    range_part: RangeSpectrum
    null_estimate: np.ndarray  # HMDM 输出 |S̃|_null
    null_component: np.ndarray  # (I − A†A)|S̃|_null
    magnitude_preclamp: np.ndarray
    magnitude: np.ndarray
    phase: np.ndarray
    audio: AudioBuffer


def learned_filterbank(w: WeightBundle) -> MelFilterbank:
    """由权重包中的 A/A† 构成的投影"""
    A, A_pinv = w.f64(MEL_BASIS), w.f64(MEL_INVERSE)
    reconstructed = contract("mf,ft->mt", contract("mf,fk->mk", A, A_pinv), A)
    report = PseudoInverseReport(
        rank=int(np.linalg.matrix_rank(A)),
        max_reconstruction_error=max_abs(reconstructed - A),
        singular_value_floor=0.0,
    )
    return MelFilterbank(A=A, A_pinv=A_pinv, report=report, learned=True)


@contextmanager
def _stage(name: str) -> Iterator[None]:
    """计时并把阶段内的异常包装为 GeneratorStageError"""
    start = time.perf_counter()
    try:
        yield
    except GeneratorStageError:
        raise
    except (VocoderError, ValueError, FloatingPointError) as e:
        raise GeneratorStageError(name, e) from e
    logger.debug(f"阶段 {name} 用时 {time.perf_counter() - start:.3f}s")


def generator_forward(
    x_mel: np.ndarray,
    fb: MelFilterbank,
    cfg: GeneratorConfig,
    w: WeightBundle,
    stft_cfg: StftConfig | None = None,
    sample_rate: int = 22050,
    workers: int = 1,
) -> GeneratorOutput:
    """完整前向传播

    Args:
        x_mel: F_m×T 对数梅尔谱
        fb: 梅尔滤波器组
        cfg: 生成器配置
        w: 权重包
        stft_cfg: 合成用 STFT 配置
        sample_rate: 输出采样率
        workers: 区域/子带级并行线程数，不影响结果

    Returns:
        GeneratorOutput，音频长度为 T·hop

    Raises:
        GeneratorStageError: 任一阶段失败，subject 为阶段名
    """
    stft_cfg = stft_cfg or StftConfig()

    with _stage("validate"):
        if x_mel.ndim != 2 or x_mel.shape[0] != cfg.n_mels or fb.n_mels != cfg.n_mels:
            raise ShapeMismatchError("mel", f"({cfg.n_mels}, T)", x_mel.shape)
        if fb.n_bins != cfg.n_bins or stft_cfg.n_bins != cfg.n_bins:
            raise ShapeMismatchError("mel_filterbank", f"(*, {cfg.n_bins})", fb.A.shape)
        if not np.all(np.isfinite(x_mel)):
            raise DataError("梅尔谱包含 NaN 或 Inf", "mel")
        validate_bundle(w, cfg)
        projection = learned_filterbank(w) if cfg.learned_projection else fb

    n_frames = x_mel.shape[1]

    with _stage("range_project"):
        range_part = range_project(x_mel, projection)

    with _stage("hsem"):
        features = hsem_encode(range_part.values, cfg, w, workers)

    for b in range(cfg.n_blocks):
        with _stage(f"dpb{b}"):
            features = dpb_forward(features, cfg, w, b, workers)

    with _stage("hmdm"):
        null_estimate = hmdm_decode(features, cfg, w, workers)

    with _stage("hpdm"):
        phase = hpdm_decode(features, cfg, w, workers)

    with _stage("assemble"):
        if cfg.rnd_mode:
            null_component = null_project(null_estimate, projection)
            preclamp = range_part.values + null_component
        else:
            # 消融设置：不做值域-零空间分解，直接使用网络幅度
            null_component = np.zeros_like(null_estimate)
            preclamp = null_estimate
        magnitude = np.maximum(preclamp, 0.0)
        spectrum = assemble_spectrum(magnitude, phase)

    with _stage("istft"):
        audio = istft(spectrum, stft_cfg, out_len=n_frames * stft_cfg.hop, sample_rate=sample_rate)

    logger.info(f"生成 {n_frames} 帧 → {len(audio)} 个采样点")
    return GeneratorOutput(
        range_part=range_part,
        null_estimate=null_estimate,
        null_component=null_component,
        magnitude_preclamp=preclamp,
        magnitude=magnitude,
        phase=phase,
        audio=audio,
    )
