"""生成器模块异常定义"""

from src.common.exceptions import DataError, VocoderError


class WeightManifestError(DataError):
    """权重与清单不一致，subject 为出错的张量名"""

    def __init__(self, tensor: str, reason: str):
        super().__init__(f"权重清单不匹配: {reason}", tensor)
        self.tensor = tensor


class GeneratorStageError(VocoderError):
    """前向传播某一阶段失败

    保留原始异常的退出码，subject 为阶段名。
    """

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"生成器阶段失败: {cause}", stage)
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 3)
