"""值域-零空间分解模块

伪逆计算、值域投影、零空间投影与叠加，以及幅度/相位到复数谱的组装。
"""

# pinv 必须先于 projection 导入，dsp.mel 在导入期间依赖它
from .pinv import DEFAULT_SV_FLOOR, PseudoInverseReport, compute_pinv  # isort: skip
from .exceptions import RankDeficientError
from .projection import (
    RangeSpectrum,
    assemble_magnitude,
    assemble_spectrum,
    degradation_error,
    null_project,
    range_component,
    range_project,
    superpose_magnitude,
)

__all__ = [
    "DEFAULT_SV_FLOOR",
    "PseudoInverseReport",
    "compute_pinv",
    "RankDeficientError",
    "RangeSpectrum",
    "assemble_magnitude",
    "assemble_spectrum",
    "degradation_error",
    "null_project",
    "range_component",
    "range_project",
    "superpose_magnitude",
]

__version__ = "1.0.0"
