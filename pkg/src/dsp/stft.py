"""STFT / iSTFT

分析采用中心模式（两侧反射填充 n_fft/2），合成采用窗平方和归一化的重叠相加。
正变换不做归一化，1/N 折叠在逆变换中。
"""

import librosa
import numpy as np

from src.common.exceptions import DataError, ShapeMismatchError

from .core import AudioBuffer, ComplexSpectrogram, StftConfig
from .exceptions import InputTooShortError


def min_input_length(cfg: StftConfig) -> int:
    """一帧所需的最少采样点数"""
    return cfg.n_fft // 2 + 1 if cfg.center else cfg.n_fft


def num_frames(n_samples: int, cfg: StftConfig) -> int:
    """给定采样点数时的帧数 T"""
    if cfg.center:
        return 1 + n_samples // cfg.hop
    return 1 + (n_samples - cfg.n_fft) // cfg.hop


def max_synthesis_length(n_frames: int, cfg: StftConfig) -> int:
    """T 帧谱可合成的最大采样点数"""
    tail = cfg.n_fft - cfg.n_fft // 2 if cfg.center else cfg.n_fft
    return (n_frames - 1) * cfg.hop + tail


def stft(audio: AudioBuffer, cfg: StftConfig) -> ComplexSpectrogram:
    """加窗短时傅里叶变换

    Args:
        audio: 单声道音频
        cfg: STFT 配置

    Returns:
        F×T 单边复数谱

    Raises:
        InputTooShortError: 填充后不足一帧
    """
    required = min_input_length(cfg)
    if len(audio) < required:
        raise InputTooShortError(len(audio), required)

    z = librosa.stft(
        audio.samples,
        n_fft=cfg.n_fft,
        hop_length=cfg.hop,
        win_length=cfg.n_fft,
        window=cfg.window,
        center=cfg.center,
        pad_mode=cfg.pad_mode,
    )
    return ComplexSpectrogram.from_complex(z)


def istft(
    spec: ComplexSpectrogram,
    cfg: StftConfig,
    out_len: int,
    sample_rate: int = 22050,
) -> AudioBuffer:
    """重叠相加逆变换

    Args:
        spec: F×T 单边复数谱，F 必须等于 n_fft/2+1
        cfg: STFT 配置
        out_len: 输出采样点数
        sample_rate: 输出采样率

    Returns:
        合成的音频

    Raises:
        ShapeMismatchError: 频点数与 n_fft 不符
        DataError: out_len 超出可合成长度
    """
    n_bins, n_frames = spec.shape
    if n_bins != cfg.n_bins:
        raise ShapeMismatchError("spectrogram", f"({cfg.n_bins}, T)", spec.shape)
    limit = max_synthesis_length(n_frames, cfg)
    if not 0 < out_len <= limit:
        raise DataError(f"输出长度 {out_len} 超出可合成范围 (0, {limit}]", "istft.out_len")

    samples = librosa.istft(
        spec.to_complex(),
        hop_length=cfg.hop,
        win_length=cfg.n_fft,
        n_fft=cfg.n_fft,
        window=cfg.window,
        center=cfg.center,
        length=out_len,
    )
    return AudioBuffer(np.asarray(samples, dtype=np.float64), sample_rate)
