"""配置文件读写

文件是扁平的点分键 JSON 文档，例如 ``{"preset": "lite", "generator.n_blocks": 2}``。
读取流程：JSON 解析（失败时退回 yaml.safe_load，兼容 YAML 写法）→ JSON Schema 校验 → 以预设为底合并 →
pydantic 校验。写出时列出全部键并按键名排序，读写往返不变。
"""

import json
import logging
from functools import cache
from pathlib import Path
from typing import Any

import jsonschema
import yaml
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from src.common.exceptions import ConfigError
from src.dsp.core import MelConfig, StftConfig
from src.generator.config import GeneratorConfig
from src.losses.aggregate import LossWeights

from .presets import Preset, get_preset

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).parent / "schemas" / "vocoder-config.schema.json"


class VocoderConfig(BaseModel):
    """一次运行所需的全部配置"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    preset: str
    sample_rate: int
    mel: MelConfig
    stft: StftConfig
    generator: GeneratorConfig
    loss_weights: LossWeights = LossWeights()

    @model_validator(mode="after")
    def _check_consistent(self) -> "VocoderConfig":
        if self.mel.sample_rate != self.sample_rate:
            raise ValueError(f"mel.sample_rate={self.mel.sample_rate} 与 sample_rate={self.sample_rate} 不一致")
        if self.mel.n_fft != self.stft.n_fft:
            raise ValueError(f"mel.n_fft={self.mel.n_fft} 与 stft.n_fft={self.stft.n_fft} 不一致")
        if self.generator.n_mels != self.mel.n_mels:
            raise ValueError(f"generator.n_mels={self.generator.n_mels} 与 mel.n_mels={self.mel.n_mels} 不一致")
        if self.generator.n_bins != self.stft.n_bins:
            raise ValueError(f"generator.n_bins={self.generator.n_bins} 与 STFT 频点数 {self.stft.n_bins} 不一致")
        return self

    @classmethod
    def from_preset(cls, preset: Preset | str) -> "VocoderConfig":
        if isinstance(preset, str):
            preset = get_preset(preset)
        return cls(
            preset=preset.name,
            sample_rate=preset.sample_rate,
            mel=preset.mel,
            stft=preset.stft,
            generator=preset.generator,
        )


def flatten(tree: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    """嵌套字典 → 点分键"""
    flat: dict[str, Any] = {}
    for key, value in tree.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def unflatten(flat: dict[str, Any]) -> dict[str, Any]:
    """点分键 → 嵌套字典"""
    tree: dict[str, Any] = {}
    for key, value in flat.items():
        node = tree
        *parents, leaf = key.split(".")
        for part in parents:
            node = node.setdefault(part, {})
        node[leaf] = value
    return tree


@cache
def _validator() -> jsonschema.Draft7Validator:
    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    return jsonschema.Draft7Validator(schema)


def _check_schema(document: Any, source: str) -> None:
    errors = sorted(_validator().iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = ".".join(str(p) for p in first.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {first.message}", source)


def parse_document(text: str, source: str = "<text>") -> Any:
    """JSON 优先，失败时按 YAML 解析

    YAML 1.1 会把 1e-05 这类没有小数点的指数写法读成字符串。

    Raises:
        ConfigError: 两种语法都无法解析
    """
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(f"无法解析: {e}", source) from e


def parse_config(text: str, source: str = "<text>") -> VocoderConfig:
    """解析配置文本

    Raises:
        ConfigError: 语法错误、不符合 Schema、未知预设或字段间不一致
    """
    document = parse_document(text, source)
    _check_schema(document, source)

    base = flatten(VocoderConfig.from_preset(document["preset"]).model_dump(mode="json"))
    base.update(document)
    try:
        return VocoderConfig.model_validate(unflatten(base))
    except ValidationError as e:
        raise ConfigError.from_validation(e, source) from e


def emit_config(cfg: VocoderConfig) -> str:
    """输出完整的扁平 JSON，键按字典序"""
    return json.dumps(flatten(cfg.model_dump(mode="json")), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_config(path: str | Path) -> VocoderConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"读取失败: {e}", str(path)) from e
    cfg = parse_config(text, str(path))
    logger.info(f"读取配置 {path} (预设 {cfg.preset})")
    return cfg


def save_config(cfg: VocoderConfig, path: str | Path) -> None:
    try:
        Path(path).write_text(emit_config(cfg), encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"写入失败: {e}", str(path)) from e
