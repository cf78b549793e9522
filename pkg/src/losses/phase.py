"""全向相位损失

九个固定 3×3 卷积核对相位谱做差分：第 5 个核（栅格序下标 4）是中心抽头，
返回瞬时相位本身；其余 8 个核中心为 +1、某一邻点为 −1，
对应 Δφ = φ_中心 − φ_邻点。边界采用复制填充。
"""

from dataclasses import dataclass, field

import numpy as np

from src.common.exceptions import DataError, ShapeMismatchError

CENTER_INDEX = 4
TWO_PI = 2.0 * np.pi


def _default_kernels() -> np.ndarray:
    kernels = np.zeros((9, 3, 3))
    for j in range(9):
        kernels[j, 1, 1] = 1.0
        if j != CENTER_INDEX:
            kernels[j, j // 3, j % 3] = -1.0
    return kernels


@dataclass(frozen=True)
class PhaseKernelBank:
    """九个 3×3 固定核，行对应频率偏移 −1..1，列对应帧偏移 −1..1"""

    kernels: np.ndarray = field(default_factory=_default_kernels)

    def __post_init__(self):
        if self.kernels.shape != (9, 3, 3):
            raise ShapeMismatchError("phase_kernels", (9, 3, 3), self.kernels.shape)
        self.kernels.setflags(write=False)

    @property
    def neighbor_offsets(self) -> list[tuple[int, int]]:
        """非中心核的邻点 (频率偏移, 帧偏移)"""
        offsets = []
        for j in range(9):
            if j == CENTER_INDEX:
                continue
            rows, cols = np.nonzero(self.kernels[j] < 0)
            offsets.append((int(rows[0]) - 1, int(cols[0]) - 1))
        return offsets


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError("phase_est", a.shape, b.shape)


def omni_phase_diff(phase: np.ndarray, bank: PhaseKernelBank | None = None) -> np.ndarray:
    """F×T 相位 → 9×F×T 全向差分

    Raises:
        DataError: 相位包含 NaN 或 Inf
    """
    bank = bank or PhaseKernelBank()
    if phase.ndim != 2:
        raise ShapeMismatchError("phase", "(F, T)", phase.shape)
    if not np.all(np.isfinite(phase)):
        raise DataError("相位包含 NaN 或 Inf", "phase")

    n_f, n_t = phase.shape
    padded = np.pad(phase, 1, mode="edge")
    out = np.zeros((9, n_f, n_t))
    for j in range(9):
        for a in range(3):
            for b in range(3):
                tap = bank.kernels[j, a, b]
                if tap != 0.0:
                    out[j] += tap * padded[a : a + n_f, b : b + n_t]
    return out


def anti_wrap(x: np.ndarray) -> np.ndarray:
    """|x − 2π·round(x/2π)|，取值 [0, π]"""
    return np.abs(x - TWO_PI * np.round(x / TWO_PI))


def loss_phase(
    phase_true: np.ndarray, phase_est: np.ndarray, bank: PhaseKernelBank | None = None
) -> float:
    """九个方向差分之差经反卷绕后的均值"""
    _check_pair(phase_true, phase_est)
    bank = bank or PhaseKernelBank()
    diff = omni_phase_diff(phase_true, bank) - omni_phase_diff(phase_est, bank)
    return float(anti_wrap(diff).mean())


def loss_phase_directional(phase_true: np.ndarray, phase_est: np.ndarray) -> float:
    """两方向反卷绕相位损失：瞬时相位 + 群延迟（频率差分）+ 瞬时角频率（帧差分）"""
    _check_pair(phase_true, phase_est)
    ip = _mean_or_zero(anti_wrap(phase_true - phase_est))
    gd = _mean_or_zero(anti_wrap(np.diff(phase_true, axis=0) - np.diff(phase_est, axis=0)))
    iaf = _mean_or_zero(anti_wrap(np.diff(phase_true, axis=1) - np.diff(phase_est, axis=1)))
    return ip + gd + iaf


def _mean_or_zero(x: np.ndarray) -> float:
    # 只有一行或一帧时差分为空
    return float(x.mean()) if x.size else 0.0
