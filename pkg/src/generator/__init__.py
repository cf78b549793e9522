"""
零空间生成器包

网络结构：
- HSEM (分层谱编码)
- DPB × B
  ├── CBM (跨带模块)
  └── NBM (窄带模块, ConvNeXt-v2)
- HMDM (幅度解码) / HPDM (相位解码)
"""

# 配置
from .accounting import (
    CostBreakdown,
    count_macs,
    count_params,
    frames_for,
    mac_breakdown,
    macs_per_frame,
    param_breakdown,
)
from .config import GeneratorConfig, RegionLayout

# 网络模块
from .decoders import hmdm_decode, hpdm_decode
from .dual_path import cbm_forward, convnext_block, dpb_forward, nbm_forward

# 异常
from .exceptions import GeneratorStageError, WeightManifestError
from .hsem import hsem_encode, split_regions

# 前向传播
from .model import GeneratorOutput, generator_forward, learned_filterbank

# 权重清单
from .weights import (
    MEL_BASIS,
    MEL_INVERSE,
    ParamSpec,
    WeightBundle,
    build_manifest,
    validate_bundle,
)

__all__ = [
    "GeneratorConfig",
    "RegionLayout",
    "MEL_BASIS",
    "MEL_INVERSE",
    "ParamSpec",
    "WeightBundle",
    "build_manifest",
    "validate_bundle",
    "hsem_encode",
    "split_regions",
    "cbm_forward",
    "convnext_block",
    "nbm_forward",
    "dpb_forward",
    "hmdm_decode",
    "hpdm_decode",
    "GeneratorOutput",
    "generator_forward",
    "learned_filterbank",
    "CostBreakdown",
    "count_params",
    "count_macs",
    "frames_for",
    "mac_breakdown",
    "macs_per_frame",
    "param_breakdown",
    "GeneratorStageError",
    "WeightManifestError",
]

__version__ = "1.0.0"
