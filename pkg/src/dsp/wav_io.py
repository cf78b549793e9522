"""WAV 读写（单声道，PCM 16 位或 32 位浮点）"""

import logging
from pathlib import Path
from typing import Literal

import numpy as np
import soundfile as sf

from .core import AudioBuffer
from .exceptions import AudioFormatError

logger = logging.getLogger(__name__)

SUPPORTED_SUBTYPES = ("PCM_16", "FLOAT")
# WAVEX 为 WAVE_FORMAT_EXTENSIBLE 头
SUPPORTED_FORMATS = ("WAV", "WAVEX")


def read_wav(path: str | Path) -> AudioBuffer:
    """读取单声道 WAV

    Raises:
        AudioFormatError: 文件无法解析、非 WAV、多声道或采样格式不受支持
    """
    path = str(path)
    try:
        info = sf.info(path)
    except (RuntimeError, OSError) as e:
        raise AudioFormatError(path, f"无法解析: {e}") from e

    if info.format not in SUPPORTED_FORMATS:
        raise AudioFormatError(path, f"容器格式 {info.format} 不是 WAV")
    if info.channels != 1:
        raise AudioFormatError(path, f"仅支持单声道，实际 {info.channels} 声道 (multichannel rejected)")
    if info.subtype not in SUPPORTED_SUBTYPES:
        raise AudioFormatError(path, f"采样格式 {info.subtype} 不受支持")

    samples, sample_rate = sf.read(path, dtype="float64", always_2d=False)
    logger.debug(f"读取 {path}: {samples.size} 个采样点 @ {sample_rate} Hz")
    return AudioBuffer(samples, int(sample_rate))


def write_wav(
    path: str | Path,
    audio: AudioBuffer,
    subtype: Literal["PCM_16", "FLOAT"] = "FLOAT",
) -> None:
    """写入单声道 WAV

    PCM_16 输出先截断到 [-1, 1]。
    """
    if subtype not in SUPPORTED_SUBTYPES:
        raise AudioFormatError(str(path), f"采样格式 {subtype} 不受支持")

    samples = audio.samples
    if subtype == "PCM_16":
        clipped = np.clip(samples, -1.0, 1.0)
        if np.any(clipped != samples):
            logger.warning(f"写入 {path} 时有采样点超出 [-1, 1]，已截断")
        samples = clipped
    else:
        samples = samples.astype(np.float32)

    try:
        sf.write(str(path), samples, audio.sample_rate, subtype=subtype, format="WAV")
    except (RuntimeError, OSError) as e:
        raise AudioFormatError(str(path), f"写入失败: {e}") from e
