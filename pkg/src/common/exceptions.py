"""声码器公共异常定义"""


class VocoderError(Exception):
    """声码器基础异常

    Attributes:
        message: 错误描述
        subject: 出错对象（张量名、文件路径或处理阶段），可为空
        exit_code: CLI 退出码
    """

    exit_code = 2

    def __init__(self, message: str, subject: str | None = None):
        super().__init__(message)
        self.message = message
        self.subject = subject

    def __str__(self) -> str:
        if self.subject:
            return f"{self.message} (对象: {self.subject})"
        return self.message


class UsageError(VocoderError):
    """命令行用法错误"""

    exit_code = 1


class DataError(VocoderError):
    """输入数据或校验错误"""

    exit_code = 2


class ShapeMismatchError(DataError):
    """张量形状不匹配"""

    def __init__(
        self,
        subject: str,
        expected: tuple[int, ...] | str,
        actual: tuple[int, ...] | str,
    ):
        super().__init__(f"形状不匹配: 期望 {expected}，实际 {actual}", subject)
        self.expected = expected
        self.actual = actual


class InvariantViolationError(VocoderError):
    """内部不变量被破坏"""

    exit_code = 3


class ConfigError(DataError):
    """配置不合法"""

    def __init__(self, message: str, subject: str | None = "config"):
        super().__init__(f"配置错误: {message}", subject)

    @classmethod
    def from_validation(cls, error: Exception, subject: str | None = "config") -> "ConfigError":
        """把 pydantic 校验错误转换为 ConfigError，只保留每条错误的位置与原因"""
        errors = getattr(error, "errors", None)
        if callable(errors):
            parts = [
                f"{'.'.join(str(p) for p in item['loc']) or '<root>'}: {item['msg']}"
                for item in errors()
            ]
            return cls("; ".join(parts), subject)
        return cls(str(error), subject)
