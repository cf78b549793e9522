"""key=value 报告行"""

import sys
from collections.abc import Iterable
from typing import Any, TextIO


def format_value(value: Any) -> str:
    """按固定格式渲染单个值"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, tuple | list):
        return "x".join(format_value(v) for v in value)
    if value is None:
        return "none"
    return str(value)


class Report:
    """按插入顺序收集报告行，键不允许重复"""

    def __init__(self):
        self._items: dict[str, str] = {}

    def add(self, key: str, value: Any) -> None:
        if key in self._items:
            raise KeyError(f"报告键重复: {key}")
        self._items[key] = format_value(value)

    def extend(self, prefix: str, values: Iterable[tuple[str, Any]]) -> None:
        for key, value in values:
            self.add(f"{prefix}.{key}", value)

    def __getitem__(self, key: str) -> str:
        return self._items[key]

    def __contains__(self, key: str) -> bool:
        return key in self._items

    def lines(self) -> list[str]:
        return [f"{key}={value}" for key, value in self._items.items()]

    def emit(self, stream: TextIO | None = None) -> None:
        stream = stream or sys.stdout
        for line in self.lines():
            print(line, file=stream)
