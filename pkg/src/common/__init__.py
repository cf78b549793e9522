"""公共模块 - 异常基类与定序数值工具

各子包的领域异常都派生自这里的基类，CLI 依据异常上的 exit_code 决定退出码。
"""

from .exceptions import (
    ConfigError,
    DataError,
    InvariantViolationError,
    ShapeMismatchError,
    UsageError,
    VocoderError,
)
from .numerics import contract, max_abs, relative_max_error

__all__ = [
    "VocoderError",
    "UsageError",
    "DataError",
    "ConfigError",
    "ShapeMismatchError",
    "InvariantViolationError",
    "contract",
    "max_abs",
    "relative_max_error",
]

__version__ = "1.0.0"
