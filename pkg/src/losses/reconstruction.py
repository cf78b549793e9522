"""重建损失：对数幅度、实虚部、梅尔、一致性"""

import numpy as np

from src.common.exceptions import ShapeMismatchError
from src.dsp.core import AudioBuffer, ComplexSpectrogram, MelFilterbank, StftConfig
from src.dsp.mel import log_mel_from_audio
from src.dsp.stft import istft, max_synthesis_length, stft


def _check_same(name: str, a: tuple[int, ...], b: tuple[int, ...]) -> None:
    if a != b:
        raise ShapeMismatchError(name, a, b)


def loss_log_amplitude(mag_true: np.ndarray, mag_est: np.ndarray, floor: float = 1e-5) -> float:
    """mean |log max(|S|, floor) − log max(|S̃|, floor)|"""
    _check_same("mag_est", mag_true.shape, mag_est.shape)
    diff = np.log(np.maximum(mag_true, floor)) - np.log(np.maximum(mag_est, floor))
    return float(np.abs(diff).mean())


def loss_ri(spec_true: ComplexSpectrogram, spec_est: ComplexSpectrogram) -> float:
    """实部与虚部拼接后的平均绝对误差"""
    _check_same("spec_est", spec_true.shape, spec_est.shape)
    diff = np.concatenate([spec_true.real - spec_est.real, spec_true.imag - spec_est.imag])
    return float(np.abs(diff).mean())


def loss_mel(
    audio_true: AudioBuffer,
    audio_est: AudioBuffer,
    stft_cfg: StftConfig,
    fb: MelFilterbank,
    log_floor: float = 1e-5,
) -> float:
    """两段波形对数梅尔谱的平均绝对误差"""
    _check_same("audio_est", (len(audio_true),), (len(audio_est),))
    mel_true = log_mel_from_audio(audio_true, stft_cfg, fb, log_floor)
    mel_est = log_mel_from_audio(audio_est, stft_cfg, fb, log_floor)
    return float(np.abs(mel_true - mel_est).mean())


def consistent_projection(
    spec: ComplexSpectrogram, stft_cfg: StftConfig, sample_rate: int = 22050
) -> ComplexSpectrogram:
    """stft(istft(S))：投影到一致谱集合，保留前 T 帧

    合成长度取 T 帧可合成的最大值，真实音频的 STFT 因此是不动点。
    """
    n_frames = spec.shape[1]
    audio = istft(spec, stft_cfg, max_synthesis_length(n_frames, stft_cfg), sample_rate)
    projected = stft(audio, stft_cfg)
    return ComplexSpectrogram(projected.real[:, :n_frames], projected.imag[:, :n_frames])


def loss_consistency(spec_est: ComplexSpectrogram, stft_cfg: StftConfig) -> float:
    """S̃ 与其一致投影之间实部/虚部的均方误差"""
    projected = consistent_projection(spec_est, stft_cfg)
    diff = np.concatenate([spec_est.real - projected.real, spec_est.imag - projected.imag])
    return float((diff**2).mean())
