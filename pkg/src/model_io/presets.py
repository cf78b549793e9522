"""内置预设

两个数据集各一套前端参数（LJSpeech 22.05 kHz / 80 mel / f_max 8 kHz，
LibriTTS 24 kHz / 100 mel / f_max 12 kHz），网络规模分完整版、Lite、UltraLite。
targets 记录公开的参数量与 5 秒乘加次数，未公布的项为 None。
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict

from src.dsp.core import MelConfig, StftConfig
from src.generator.config import GeneratorConfig

from .exceptions import PresetNotFoundError

Dataset = Literal["ljspeech", "libritts"]


class PublishedTargets(BaseModel):
    """公开的模型规模"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    params_m: float
    macs_g: float | None = None


class Preset(BaseModel):
    """一组可直接运行的完整配置"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    dataset: Dataset
    sample_rate: int
    mel: MelConfig
    stft: StftConfig
    generator: GeneratorConfig
    targets: PublishedTargets


_FRONTENDS: dict[str, tuple[int, MelConfig]] = {
    "ljspeech": (22050, MelConfig(n_mels=80, f_max=8000.0, sample_rate=22050)),
    "libritts": (24000, MelConfig(n_mels=100, f_max=12000.0, sample_rate=24000)),
}

# 网络规模：(channels, n_blocks)
_SIZES = {"full": (256, 6), "lite": (128, 4), "ultralite": (32, 4)}


def _make(name: str, dataset: Dataset, size: str, params_m: float, macs_g: float | None) -> Preset:
    sample_rate, mel = _FRONTENDS[dataset]
    channels, n_blocks = _SIZES[size]
    return Preset(
        name=name,
        dataset=dataset,
        sample_rate=sample_rate,
        mel=mel,
        stft=StftConfig(),
        generator=GeneratorConfig(n_mels=mel.n_mels, channels=channels, n_blocks=n_blocks),
        targets=PublishedTargets(params_m=params_m, macs_g=macs_g),
    )


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        _make("ljspeech", "ljspeech", "full", 3.14, 34.10),
        _make("libritts", "libritts", "full", 3.14, None),
        _make("lite", "ljspeech", "lite", 0.71, 9.54),
        _make("ultralite", "ljspeech", "ultralite", 0.08, 1.66),
        _make("lite-libritts", "libritts", "lite", 0.71, 10.39),
        _make("ultralite-libritts", "libritts", "ultralite", 0.08, 1.81),
    )
}

PRESET_NAMES = tuple(PRESETS)


def get_preset(name: str) -> Preset:
    """按名称取预设

    Raises:
        PresetNotFoundError: 名称不存在
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise PresetNotFoundError(name, list(PRESET_NAMES)) from None
