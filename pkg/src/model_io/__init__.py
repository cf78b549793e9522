"""模型读写模块 - 权重文件、配置文件、预设与按种子初始化

权重与单张量文件共用一种二进制格式，配置文件为扁平点分键 JSON。
"""

from .config_file import (
    VocoderConfig,
    emit_config,
    parse_document,
    load_config,
    parse_config,
    save_config,
)
from .exceptions import PresetNotFoundError, WeightFileError
from .init_random import PRNG_NAME, init_random
from .presets import PRESET_NAMES, PRESETS, Preset, PublishedTargets, get_preset
from .weight_file import (
    MAGIC,
    decode_tensors,
    encode_tensors,
    load_tensor,
    load_tensors,
    load_weights,
    save_tensor,
    save_tensors,
    save_weights,
)

__all__ = [
    "VocoderConfig",
    "emit_config",
    "parse_document",
    "load_config",
    "parse_config",
    "save_config",
    "PresetNotFoundError",
    "WeightFileError",
    "PRNG_NAME",
    "init_random",
    "PRESET_NAMES",
    "PRESETS",
    "PublishedTargets",
    "Preset",
    "get_preset",
    "MAGIC",
    "decode_tensors",
    "encode_tensors",
    "load_tensor",
    "load_tensors",
    "load_weights",
    "save_tensor",
    "save_tensors",
    "save_weights",
]

__version__ = "1.0.0"
