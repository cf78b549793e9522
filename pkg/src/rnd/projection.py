"""值域投影、零空间投影与谱组装

零空间投影按 M − A†(AM) 计算，不显式构造 F×F 投影矩阵。
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from src.common.exceptions import DataError, ShapeMismatchError
from src.common.numerics import contract, relative_max_error
from src.dsp.core import ComplexSpectrogram

if TYPE_CHECKING:
    from src.dsp.core import MelFilterbank


@dataclass(frozen=True)
class RangeSpectrum:
    """值域幅度谱 |S̃|_range = A†X̄^mel，可含负值"""

    values: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _check_rows(name: str, x: np.ndarray, rows: int) -> None:
    if x.ndim != 2 or x.shape[0] != rows:
        raise ShapeMismatchError(name, f"({rows}, T)", x.shape)


def range_project(x_mel: np.ndarray, fb: "MelFilterbank") -> RangeSpectrum:
    """值域投影 A†·exp(X^mel)"""
    _check_rows("mel", x_mel, fb.n_mels)
    return RangeSpectrum(contract("fm,mt->ft", fb.A_pinv, np.exp(x_mel)))


def range_component(u: np.ndarray, fb: "MelFilterbank") -> np.ndarray:
    """值域分量 A†A·u"""
    _check_rows("u", u, fb.n_bins)
    return contract("fm,mt->ft", fb.A_pinv, contract("mf,ft->mt", fb.A, u))


def null_project(m: np.ndarray, fb: "MelFilterbank") -> np.ndarray:
    """零空间投影 (I − A†A)·M"""
    return m - range_component(m, fb)


def superpose_magnitude(
    range_part: RangeSpectrum, null_estimate: np.ndarray, fb: "MelFilterbank"
) -> np.ndarray:
    """截断前的叠加幅度 |S̃|_range + (I − A†A)|S̃|_null"""
    if null_estimate.shape != range_part.shape:
        raise ShapeMismatchError("null_estimate", range_part.shape, null_estimate.shape)
    return range_part.values + null_project(null_estimate, fb)


def assemble_magnitude(
    range_part: RangeSpectrum, null_estimate: np.ndarray, fb: "MelFilterbank"
) -> np.ndarray:
    """叠加后在 0 处截断的幅度谱"""
    return np.maximum(superpose_magnitude(range_part, null_estimate, fb), 0.0)


def assemble_spectrum(magnitude: np.ndarray, phase: np.ndarray) -> ComplexSpectrogram:
    """|S̃|·e^{jΦ̃}

    Raises:
        DataError: 幅度为负或相位非有限
    """
    if magnitude.shape != phase.shape:
        raise ShapeMismatchError("phase", magnitude.shape, phase.shape)
    if np.any(magnitude < 0):
        raise DataError("幅度谱存在负值", "magnitude")
    if not np.all(np.isfinite(phase)):
        raise DataError("相位谱包含 NaN 或 Inf", "phase")
    return ComplexSpectrogram(real=magnitude * np.cos(phase), imag=magnitude * np.sin(phase))


def degradation_error(magnitude: np.ndarray, x_mel: np.ndarray, fb: "MelFilterbank") -> float:
    """退化一致性误差 ‖A|S̃| − X̄^mel‖_max / ‖X̄^mel‖_max"""
    _check_rows("magnitude", magnitude, fb.n_bins)
    return relative_max_error(contract("mf,ft->mt", fb.A, magnitude), np.exp(x_mel))
