"""模型读写模块异常定义"""

from src.common.exceptions import DataError


class WeightFileError(DataError):
    """权重/张量文件损坏或不符合格式"""

    def __init__(self, path: str, reason: str):
        super().__init__(f"权重文件错误: {reason}", path)
        self.reason = reason


class PresetNotFoundError(DataError):
    """未知的预设名"""

    def __init__(self, name: str, available: list[str]):
        super().__init__(f"未知预设，可选: {', '.join(available)}", name)
        self.available = available
