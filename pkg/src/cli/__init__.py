"""命令行模块 - mel-extract / range-vocode / vocode / count / loss-eval / gen-weights / verify"""

from .main import build_parser, main
from .report import Report, format_value
from .verify import CheckResult, run_verify

__all__ = ["build_parser", "main", "Report", "format_value", "CheckResult", "run_verify"]

__version__ = "1.0.0"
