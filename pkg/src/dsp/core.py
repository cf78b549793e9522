"""前端核心数据类型

包含音频缓冲、STFT/梅尔配置、复数谱与梅尔滤波器组的定义。
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import librosa
import numpy as np
import scipy.signal
from pydantic import BaseModel, ConfigDict, model_validator

from src.common.exceptions import DataError, ShapeMismatchError

if TYPE_CHECKING:
    from src.rnd.pinv import PseudoInverseReport

logger = logging.getLogger(__name__)

# 两个基准数据集的采样率
PRESET_SAMPLE_RATES = (22050, 24000)


@dataclass(frozen=True)
class AudioBuffer:
    """单声道音频缓冲"""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ShapeMismatchError("audio.samples", "(n,)", samples.shape)
        if not np.all(np.isfinite(samples)):
            raise DataError("音频包含 NaN 或 Inf", "audio.samples")
        if self.sample_rate <= 0:
            raise DataError(f"采样率必须为正: {self.sample_rate}", "audio.sample_rate")
        if self.sample_rate not in PRESET_SAMPLE_RATES:
            logger.warning(f"采样率 {self.sample_rate} Hz 不属于预设 {PRESET_SAMPLE_RATES}")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        """时长（秒）"""
        return len(self) / self.sample_rate


class StftConfig(BaseModel):
    """STFT 分析/合成配置"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_fft: int = 1024
    hop: int = 256
    window: str = "hann"
    center: bool = True
    pad_mode: Literal["reflect", "constant"] = "reflect"

    @model_validator(mode="after")
    def _check_window(self) -> "StftConfig":
        if not self.n_fft >= self.hop > 0:
            raise ValueError(f"需要 n_fft >= hop > 0，实际 n_fft={self.n_fft}, hop={self.hop}")
        if not scipy.signal.check_COLA(self.window_vector, self.n_fft, self.n_fft - self.hop):
            raise ValueError(f"窗口 {self.window} 在 hop={self.hop} 下不满足 COLA")
        return self

    @property
    def n_bins(self) -> int:
        """单边谱频点数 F"""
        return self.n_fft // 2 + 1

    @property
    def window_vector(self) -> np.ndarray:
        """长度为 n_fft 的周期窗"""
        return librosa.filters.get_window(self.window, self.n_fft, fftbins=True).astype(
            np.float64
        )

    def cola_deviation(self, n_frames: int = 16) -> float:
        """平方窗叠加和在有效区间内的相对波动"""
        wss = librosa.filters.window_sumsquare(
            window=self.window,
            n_frames=n_frames,
            hop_length=self.hop,
            win_length=self.n_fft,
            n_fft=self.n_fft,
            dtype=np.float64,
        )
        valid = wss[self.n_fft : (n_frames - 1) * self.hop]
        return float((valid.max() - valid.min()) / valid.mean())


class MelConfig(BaseModel):
    """梅尔特征配置"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_mels: int = 80
    f_min: float = 0.0
    f_max: float = 8000.0
    sample_rate: int = 22050
    n_fft: int = 1024
    log_floor: float = 1e-5
    mel_scale: Literal["htk", "slaney"] = "htk"
    norm: Literal["slaney"] | None = "slaney"

    @model_validator(mode="after")
    def _check_ranges(self) -> "MelConfig":
        if not 0 <= self.f_min < self.f_max <= self.sample_rate / 2:
            raise ValueError(
                f"需要 0 <= f_min < f_max <= sr/2，实际 f_min={self.f_min}, f_max={self.f_max}"
            )
        if not 0 < self.n_mels < self.n_bins:
            raise ValueError(f"n_mels 必须小于频点数 {self.n_bins}，实际 {self.n_mels}")
        if self.log_floor <= 0:
            raise ValueError("log_floor 必须为正")
        return self

    @property
    def n_bins(self) -> int:
        """线性谱频点数 F"""
        return self.n_fft // 2 + 1


@dataclass(frozen=True)
class ComplexSpectrogram:
    """F×T 单边复数谱，实部与虚部分开存储"""

    real: np.ndarray
    imag: np.ndarray

    def __post_init__(self):
        real = np.asarray(self.real, dtype=np.float64)
        imag = np.asarray(self.imag, dtype=np.float64)
        if real.ndim != 2:
            raise ShapeMismatchError("spectrogram.real", "(F, T)", real.shape)
        if real.shape != imag.shape:
            raise ShapeMismatchError("spectrogram.imag", real.shape, imag.shape)
        object.__setattr__(self, "real", real)
        object.__setattr__(self, "imag", imag)

    @classmethod
    def from_complex(cls, z: np.ndarray) -> "ComplexSpectrogram":
        """由复数矩阵构造"""
        return cls(real=np.real(z), imag=np.imag(z))

    def to_complex(self) -> np.ndarray:
        """转换为复数矩阵"""
        return self.real + 1j * self.imag

    @property
    def shape(self) -> tuple[int, int]:
        return self.real.shape

    @property
    def magnitude(self) -> np.ndarray:
        """幅度谱 |S|"""
        return np.hypot(self.real, self.imag)

    @property
    def phase(self) -> np.ndarray:
        """相位谱 Φ，取值 (−π, π]"""
        phase = np.arctan2(self.imag, self.real)
        return np.where(phase <= -np.pi, np.pi, phase)


@dataclass(frozen=True)
class MelFilterbank:
    """梅尔退化矩阵 A (F_m×F) 及其伪逆 A† (F×F_m)"""

    A: np.ndarray
    A_pinv: np.ndarray
    report: "PseudoInverseReport"
    # 取自权重包的可学习投影：A 可含负值，A† 不保证是伪逆
    learned: bool = False

    def __post_init__(self):
        n_mels, n_bins = self.A.shape
        if self.A_pinv.shape != (n_bins, n_mels):
            raise ShapeMismatchError("mel_filterbank.A_pinv", (n_bins, n_mels), self.A_pinv.shape)
        if not self.learned and np.any(self.A < 0):
            raise DataError("滤波器组存在负值", "mel_filterbank.A")
        self.A.setflags(write=False)
        self.A_pinv.setflags(write=False)

    @property
    def n_mels(self) -> int:
        return int(self.A.shape[0])

    @property
    def n_bins(self) -> int:
        return int(self.A.shape[1])
