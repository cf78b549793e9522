"""参数量与乘加次数统计

参数量直接对清单求和；乘加次数按逐层公式累加：
卷积为 输出元素数 × 核体积 × 每组输入通道数，全连接为 输入 × 输出 × 位置数。
归一化与激活不计入。
"""

import math
from dataclasses import dataclass

from .config import GeneratorConfig
from .weights import build_manifest

COMPONENTS = ("rnd", "hsem", "cbm", "nbm", "hmdm", "hpdm")


@dataclass(frozen=True)
class CostBreakdown:
    """按组件拆分的统计结果"""

    total: int
    by_component: dict[str, int]


def _component_of(name: str) -> str:
    head = name.split(".", 1)[0]
    if head.startswith("dpb"):
        return name.split(".")[1]
    return head


def param_breakdown(cfg: GeneratorConfig) -> CostBreakdown:
    """按组件统计可学习标量个数"""
    counts = dict.fromkeys(COMPONENTS, 0)
    for spec in build_manifest(cfg):
        counts[_component_of(spec.name)] += spec.size
    return CostBreakdown(sum(counts.values()), counts)


def count_params(cfg: GeneratorConfig) -> int:
    return param_breakdown(cfg).total


def macs_per_frame(cfg: GeneratorConfig) -> dict[str, int]:
    """单帧乘加次数（按组件）"""
    c, cs, n = cfg.channels, cfg.squeeze_channels, cfg.n_subbands
    layout = cfg.layout
    padded_bins = sum(w + p for w, p in zip(layout.widths, layout.pad_per_region))
    kt = cfg.encoder_time_kernel

    # 值域投影 A†x 与零空间投影的 A·M、A†·(AM) 三次矩阵乘
    rnd_products = 3 if cfg.rnd_mode else 1
    rnd = rnd_products * cfg.n_bins * cfg.n_mels

    hsem = c * kt * padded_bins

    gconv = n * c * (c // cfg.cbm_groups) * cfg.cbm_kernel
    cbm = 2 * gconv + n * cs * c + n * n * cs + n * c * cs

    convnext = n * c * cfg.nbm_time_kernel + 2 * n * c * c
    nbm = cfg.n_convnext * convnext

    def decoder(out_channels: int) -> int:
        return n * c * c + c * out_channels * kt * padded_bins

    return {
        "rnd": rnd,
        "hsem": hsem,
        "cbm": cfg.n_blocks * cbm,
        "nbm": cfg.n_blocks * nbm,
        "hmdm": decoder(1),
        "hpdm": decoder(2),
    }


def frames_for(seconds: float, sample_rate: int, hop: int) -> int:
    """给定时长对应的帧数 ceil(seconds·sr/hop)"""
    return math.ceil(seconds * sample_rate / hop)


def mac_breakdown(
    cfg: GeneratorConfig, seconds: float = 5.0, sample_rate: int = 22050, hop: int = 256
) -> CostBreakdown:
    frames = frames_for(seconds, sample_rate, hop)
    per_frame = macs_per_frame(cfg)
    by_component = {name: value * frames for name, value in per_frame.items()}
    return CostBreakdown(sum(by_component.values()), by_component)


def count_macs(
    cfg: GeneratorConfig, seconds: float = 5.0, sample_rate: int = 22050, hop: int = 256
) -> int:
    """一次前向传播在给定时长上的乘加次数"""
    return mac_breakdown(cfg, seconds, sample_rate, hop).total
