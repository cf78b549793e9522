"""前端信号处理模块异常定义"""

from src.common.exceptions import DataError


class InputTooShortError(DataError):
    """音频短于一帧"""

    def __init__(self, n_samples: int, required: int):
        super().__init__(
            f"输入过短 (input too short): {n_samples} 个采样点，至少需要 {required}",
            "audio",
        )
        self.n_samples = n_samples
        self.required = required


class AudioFormatError(DataError):
    """不支持的音频格式"""

    def __init__(self, path: str, reason: str):
        super().__init__(f"不支持的 WAV 文件: {reason}", path)
        self.reason = reason


class FilterbankRankError(DataError):
    """梅尔滤波器组秩亏"""

    def __init__(self, reason: str):
        super().__init__(f"滤波器组秩亏 (filterbank rank deficient): {reason}", "mel_filterbank")
