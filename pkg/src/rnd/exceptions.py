"""值域-零空间模块异常定义"""

from src.common.exceptions import DataError


class RankDeficientError(DataError):
    """退化矩阵存在全零行"""

    def __init__(self, rows: list[int]):
        super().__init__(f"秩亏滤波器组 (rank deficient filterbank): 第 {rows} 行全为零", "A")
        self.rows = rows
