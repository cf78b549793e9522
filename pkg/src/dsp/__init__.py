"""前端信号处理模块 - 波形与时频表示之间的转换

提供 STFT/iSTFT、梅尔滤波器组、对数梅尔退化以及 WAV 读写。
"""

from .core import (
    PRESET_SAMPLE_RATES,
    AudioBuffer,
    ComplexSpectrogram,
    MelConfig,
    MelFilterbank,
    StftConfig,
)
from .exceptions import AudioFormatError, FilterbankRankError, InputTooShortError
from .mel import build_mel_filterbank, exp_mel, log_mel_from_audio, mel_spectrogram
from .stft import istft, max_synthesis_length, min_input_length, num_frames, stft
from .wav_io import read_wav, write_wav

__all__ = [
    "PRESET_SAMPLE_RATES",
    "AudioBuffer",
    "ComplexSpectrogram",
    "MelConfig",
    "MelFilterbank",
    "StftConfig",
    "AudioFormatError",
    "FilterbankRankError",
    "InputTooShortError",
    "build_mel_filterbank",
    "exp_mel",
    "log_mel_from_audio",
    "mel_spectrogram",
    "istft",
    "max_synthesis_length",
    "min_input_length",
    "num_frames",
    "stft",
    "read_wav",
    "write_wav",
]

__version__ = "1.0.0"
