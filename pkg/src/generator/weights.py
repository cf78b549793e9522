"""权重清单与权重包

清单由 GeneratorConfig 唯一确定，是权重文件序列化与随机初始化共同遵循的契约：
张量名、形状、初始化方式和 fan_in 按固定顺序排列。
"""

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .config import GeneratorConfig
from .exceptions import WeightManifestError

InitKind = Literal["uniform", "ones", "zeros", "prelu", "mixer", "mel_basis", "mel_inverse"]

MEL_BASIS = "rnd.mel_basis"
MEL_INVERSE = "rnd.mel_inverse"


@dataclass(frozen=True)
class ParamSpec:
    """清单中的一项"""

    name: str
    shape: tuple[int, ...]
    init: InitKind = "uniform"
    fan_in: int = 1

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))


def _norm(prefix: str, c: int) -> list[ParamSpec]:
    return [
        ParamSpec(f"{prefix}.weight", (c,), "ones"),
        ParamSpec(f"{prefix}.bias", (c,), "zeros"),
    ]


def _affine(prefix: str, shape: tuple[int, ...], bias: tuple[int, ...], fan_in: int) -> list[ParamSpec]:
    return [
        ParamSpec(f"{prefix}.weight", shape, "uniform", fan_in),
        ParamSpec(f"{prefix}.bias", bias, "uniform", fan_in),
    ]


def _hsem_specs(cfg: GeneratorConfig) -> list[ParamSpec]:
    c, kt = cfg.channels, cfg.encoder_time_kernel
    specs: list[ParamSpec] = []
    for i, s in enumerate(cfg.layout.freq_strides):
        specs += _affine(f"hsem.region{i}.conv", (c, 1, s, kt), (c,), s * kt)
        specs += _norm(f"hsem.region{i}.norm", c)
    return specs


def _cbm_specs(cfg: GeneratorConfig, b: int) -> list[ParamSpec]:
    c, cs, k = cfg.channels, cfg.squeeze_channels, cfg.cbm_kernel
    cg = c // cfg.cbm_groups
    p = f"dpb{b}.cbm"
    return [
        *_norm(f"{p}.norm1", c),
        *_affine(f"{p}.gconv1", (c, cg, k), (c,), cg * k),
        ParamSpec(f"{p}.prelu1.weight", (c,), "prelu"),
        *_norm(f"{p}.norm2", c),
        *_affine(f"{p}.squeeze", (cs, c), (cs,), c),
        ParamSpec(f"{p}.mixer.weight", (cfg.n_subbands, cfg.n_subbands), "mixer"),
        *_affine(f"{p}.restore", (c, cs), (c,), cs),
        *_norm(f"{p}.norm3", c),
        *_affine(f"{p}.gconv2", (c, cg, k), (c,), cg * k),
        ParamSpec(f"{p}.prelu2.weight", (c,), "prelu"),
    ]


def _nbm_specs(cfg: GeneratorConfig, b: int) -> list[ParamSpec]:
    c, k = cfg.channels, cfg.nbm_time_kernel
    specs: list[ParamSpec] = []
    for j in range(cfg.n_convnext):
        p = f"dpb{b}.nbm.block{j}"
        specs += _affine(f"{p}.dwconv", (c, 1, k), (c,), k)
        specs += _norm(f"{p}.norm", c)
        specs += _affine(f"{p}.pwconv1", (c, c), (c,), c)
        specs += [
            ParamSpec(f"{p}.grn.gamma", (c,), "uniform", c),
            ParamSpec(f"{p}.grn.beta", (c,), "uniform", c),
        ]
        specs += _affine(f"{p}.pwconv2", (c, c), (c,), c)
    return specs


def _decoder_specs(cfg: GeneratorConfig, head: str, out_channels: int) -> list[ParamSpec]:
    c, kt = cfg.channels, cfg.encoder_time_kernel
    specs: list[ParamSpec] = []
    for i, s in enumerate(cfg.layout.freq_strides):
        specs += _affine(f"{head}.region{i}.pwconv", (c, c), (c,), c)
        specs += _norm(f"{head}.region{i}.norm", c)
        # 频率方向无重叠，每个输出点只接收 C 个通道 × kt 个时间抽头
        specs += _affine(f"{head}.region{i}.trconv", (c, out_channels, s, kt), (out_channels,), c * kt)
    return specs


def build_manifest(cfg: GeneratorConfig) -> list[ParamSpec]:
    """按固定顺序列出全部可学习张量"""
    specs = _hsem_specs(cfg)
    for b in range(cfg.n_blocks):
        specs += _cbm_specs(cfg, b)
        specs += _nbm_specs(cfg, b)
    specs += _decoder_specs(cfg, "hmdm", 1)
    specs += _decoder_specs(cfg, "hpdm", 2)
    if cfg.learned_projection:
        # 放在末尾，不改变其余张量的随机字顺序
        specs += [
            ParamSpec(MEL_BASIS, (cfg.n_mels, cfg.n_bins), "mel_basis"),
            ParamSpec(MEL_INVERSE, (cfg.n_bins, cfg.n_mels), "mel_inverse"),
        ]
    return specs


class WeightBundle(Mapping[str, np.ndarray]):
    """不可变的命名张量集合

    存储为只读 float32，同时保存只读 float64 副本供前向计算使用，
    构造完成后不再修改，可在线程间共享。
    """

    def __init__(self, tensors: Mapping[str, np.ndarray]):
        frozen: dict[str, np.ndarray] = {}
        for name, value in tensors.items():
            array = np.array(value, dtype=np.float32, copy=True)
            array.setflags(write=False)
            frozen[name] = array
        self._tensors = frozen
        self._f64: dict[str, np.ndarray] = {}
        for name, array in frozen.items():
            promoted = array.astype(np.float64)
            promoted.setflags(write=False)
            self._f64[name] = promoted

    def __getitem__(self, name: str) -> np.ndarray:
        return self._tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._tensors)

    def __len__(self) -> int:
        return len(self._tensors)

    def f64(self, name: str) -> np.ndarray:
        """float64 形式的张量，构造时一次生成"""
        try:
            return self._f64[name]
        except KeyError:
            raise WeightManifestError(name, "缺少张量") from None

    @property
    def n_scalars(self) -> int:
        return sum(int(t.size) for t in self._tensors.values())

    def with_tensors(self, updates: Mapping[str, np.ndarray]) -> "WeightBundle":
        """按完整张量名替换"""
        merged = dict(self._tensors)
        merged.update(updates)
        return WeightBundle(merged)

    @classmethod
    def zeros(cls, cfg: GeneratorConfig) -> "WeightBundle":
        """全零权重包"""
        return cls({spec.name: np.zeros(spec.shape, dtype=np.float32) for spec in build_manifest(cfg)})


def validate_bundle(bundle: Mapping[str, np.ndarray], cfg: GeneratorConfig) -> None:
    """按清单校验权重包

    Raises:
        WeightManifestError: 缺失、多余或形状不符，subject 为第一个出错的张量名
    """
    manifest = build_manifest(cfg)
    expected = {spec.name for spec in manifest}
    for spec in manifest:
        if spec.name not in bundle:
            raise WeightManifestError(spec.name, "缺少张量")
        shape = tuple(np.shape(bundle[spec.name]))
        if shape != spec.shape:
            raise WeightManifestError(spec.name, f"形状应为 {spec.shape}，实际 {shape}")
    for name in bundle:
        if name not in expected:
            raise WeightManifestError(name, "清单中不存在该张量")
