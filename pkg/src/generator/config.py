"""生成器配置

RegionLayout 描述 HSEM/HMDM/HPDM 共用的频带划分，GeneratorConfig 描述网络规模。
"""

from pydantic import BaseModel, ConfigDict, model_validator


class RegionLayout(BaseModel):
    """频率区域划分

    区域 i 覆盖频点 [boundaries[i], boundaries[i+1])，右侧补 pad_per_region[i] 个零
    后按 freq_strides[i] 无重叠切块，每块折叠为一个子带。
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    boundaries: tuple[int, ...] = (0, 96, 288, 513)
    freq_strides: tuple[int, ...] = (8, 24, 64)
    freq_kernels: tuple[int, ...] = (8, 24, 64)
    pad_per_region: tuple[int, ...] = (0, 0, 31)

    @model_validator(mode="after")
    def _check_layout(self) -> "RegionLayout":
        n_regions = len(self.freq_strides)
        if n_regions == 0:
            raise ValueError("至少需要一个区域")
        if len(self.boundaries) != n_regions + 1:
            raise ValueError(f"boundaries 需要 {n_regions + 1} 个值，实际 {len(self.boundaries)}")
        if len(self.freq_kernels) != n_regions or len(self.pad_per_region) != n_regions:
            raise ValueError("freq_kernels / pad_per_region 长度必须与区域数一致")
        if self.boundaries[0] != 0:
            raise ValueError("boundaries 必须从 0 开始")
        if any(b >= e for b, e in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError(f"boundaries 必须严格递增: {self.boundaries}")
        if any(s <= 0 for s in self.freq_strides):
            raise ValueError("freq_strides 必须为正")
        if any(p < 0 for p in self.pad_per_region):
            raise ValueError("pad_per_region 不能为负")
        # 无重叠切块，转置卷积才能逐点还原
        if self.freq_kernels != self.freq_strides:
            raise ValueError("freq_kernels 必须等于 freq_strides")
        for i, (width, pad, stride) in enumerate(
            zip(self.widths, self.pad_per_region, self.freq_strides)
        ):
            if (width + pad) % stride:
                raise ValueError(f"区域 {i}: 宽度 {width}+{pad} 不能被步长 {stride} 整除")
            if pad >= stride:
                raise ValueError(f"区域 {i}: 填充 {pad} 不应达到步长 {stride}")
        if any(a > b for a, b in zip(self.freq_strides, self.freq_strides[1:])):
            raise ValueError(f"步长必须由细到粗非递减: {self.freq_strides}")
        return self

    @property
    def n_regions(self) -> int:
        return len(self.freq_strides)

    @property
    def widths(self) -> tuple[int, ...]:
        """各区域原始宽度 F_i"""
        return tuple(e - b for b, e in zip(self.boundaries, self.boundaries[1:]))

    @property
    def subband_counts(self) -> tuple[int, ...]:
        """各区域子带数 N_i"""
        return tuple(
            (w + p) // s for w, p, s in zip(self.widths, self.pad_per_region, self.freq_strides)
        )

    @property
    def n_subbands(self) -> int:
        """子带总数 N"""
        return sum(self.subband_counts)

    @property
    def n_bins(self) -> int:
        return self.boundaries[-1]

    def subband_offsets(self) -> tuple[int, ...]:
        """各区域在子带轴上的起始位置（长度 I+1）"""
        offsets = [0]
        for n in self.subband_counts:
            offsets.append(offsets[-1] + n)
        return tuple(offsets)


class GeneratorConfig(BaseModel):
    """零空间网络配置"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_bins: int = 513
    n_mels: int = 80
    channels: int = 256
    n_blocks: int = 6
    n_convnext: int = 2
    layout: RegionLayout = RegionLayout()
    nbm_time_kernel: int = 7
    encoder_time_kernel: int = 3
    cbm_kernel: int = 3
    cbm_groups: int = 4
    squeeze_ratio: int = 4
    norm_eps: float = 1e-6
    rnd_mode: bool = True
    # A 与 A† 取自权重包而不是解析滤波器组
    learned_projection: bool = False

    @model_validator(mode="after")
    def _check_sizes(self) -> "GeneratorConfig":
        if self.layout.n_bins != self.n_bins:
            raise ValueError(f"区域边界终点 {self.layout.n_bins} 与频点数 {self.n_bins} 不一致")
        if not 0 < self.n_mels <= self.n_bins:
            raise ValueError(f"n_mels 必须在 (0, {self.n_bins}] 内")
        if self.channels <= 0 or self.channels % self.squeeze_ratio:
            raise ValueError(f"channels={self.channels} 必须能被 {self.squeeze_ratio} 整除")
        if self.channels % self.cbm_groups:
            raise ValueError(f"channels={self.channels} 必须能被 cbm_groups={self.cbm_groups} 整除")
        if self.n_blocks < 1 or self.n_convnext < 1:
            raise ValueError("n_blocks 与 n_convnext 至少为 1")
        for name in ("nbm_time_kernel", "encoder_time_kernel", "cbm_kernel"):
            k = getattr(self, name)
            if k <= 0 or k % 2 == 0:
                raise ValueError(f"{name} 必须是正奇数，实际 {k}")
        if self.norm_eps <= 0:
            raise ValueError("norm_eps 必须为正")
        if self.learned_projection and not self.rnd_mode:
            raise ValueError("learned_projection 需要 rnd_mode=true")
        return self

    @property
    def squeeze_channels(self) -> int:
        """CBM 压缩后的通道数 C′"""
        return self.channels // self.squeeze_ratio

    @property
    def n_subbands(self) -> int:
        return self.layout.n_subbands
