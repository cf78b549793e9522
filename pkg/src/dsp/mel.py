"""梅尔滤波器组与对数梅尔退化

X^mel = log(max(A|S|, floor))，对数取自然对数，与 exp_mel 严格互逆。
"""

import logging

import librosa
import numpy as np

from src.common.exceptions import ShapeMismatchError
from src.common.numerics import contract
from src.rnd.pinv import DEFAULT_SV_FLOOR, compute_pinv

from .core import AudioBuffer, ComplexSpectrogram, MelConfig, MelFilterbank, StftConfig
from .exceptions import FilterbankRankError
from .stft import stft

logger = logging.getLogger(__name__)


def build_mel_filterbank(cfg: MelConfig, sv_floor: float = DEFAULT_SV_FLOOR) -> MelFilterbank:
    """构建三角梅尔滤波器组及其伪逆

    Args:
        cfg: 梅尔配置
        sv_floor: 伪逆奇异值相对截断阈值

    Returns:
        MelFilterbank

    Raises:
        FilterbankRankError: 出现空滤波器或矩阵秩亏
    """
    A = librosa.filters.mel(
        sr=cfg.sample_rate,
        n_fft=cfg.n_fft,
        n_mels=cfg.n_mels,
        fmin=cfg.f_min,
        fmax=cfg.f_max,
        htk=cfg.mel_scale == "htk",
        norm=cfg.norm,
        dtype=np.float64,
    )
    empty = np.flatnonzero(~np.any(A > 0, axis=1))
    if empty.size:
        raise FilterbankRankError(f"第 {empty.tolist()} 行没有正值")

    A_pinv, report = compute_pinv(A, sv_floor)
    if report.rank < cfg.n_mels:
        raise FilterbankRankError(f"秩 {report.rank} < {cfg.n_mels}")

    logger.info(
        f"梅尔滤波器组 {A.shape}: 秩={report.rank}, ‖AA†A−A‖_max={report.max_reconstruction_error:.3e}"
    )
    return MelFilterbank(A=A, A_pinv=A_pinv, report=report)


def mel_spectrogram(
    spec: ComplexSpectrogram, fb: MelFilterbank, log_floor: float = 1e-5
) -> np.ndarray:
    """对数梅尔谱 X^mel = log(max(A|S|, floor))

    Raises:
        ShapeMismatchError: 谱的频点数与滤波器组列数不一致
    """
    if spec.shape[0] != fb.n_bins:
        raise ShapeMismatchError("spectrogram", f"({fb.n_bins}, T)", spec.shape)
    linear = contract("mf,ft->mt", fb.A, spec.magnitude)
    return np.log(np.maximum(linear, log_floor))


def exp_mel(x_mel: np.ndarray) -> np.ndarray:
    """吸收对数：X̄^mel = exp(X^mel) = A|S|"""
    return np.exp(x_mel)


def log_mel_from_audio(
    audio: AudioBuffer, stft_cfg: StftConfig, fb: MelFilterbank, log_floor: float = 1e-5
) -> np.ndarray:
    """音频 → STFT → 对数梅尔谱"""
    return mel_spectrogram(stft(audio, stft_cfg), fb, log_floor)
