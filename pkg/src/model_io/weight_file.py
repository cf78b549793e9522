"""张量文件格式（v1）

布局，全部小端：

    magic      8 字节  b"RNDVOC01"
    count      u32     张量个数
    记录 × count:
        name_len   u32
        name       UTF-8
        rank       u8
        dims       u32 × rank
        dtype      u8      0 = float32
        offset     u64     载荷在文件中的绝对偏移
    载荷：按记录顺序连续存放

单张量文件（梅尔谱、中间谱）沿用同一格式，只含一条记录。
"""

import logging
import struct
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from src.generator.config import GeneratorConfig
from src.generator.weights import WeightBundle, validate_bundle

from .exceptions import WeightFileError

logger = logging.getLogger(__name__)

MAGIC = b"RNDVOC01"
DTYPE_F32 = 0
_DTYPES = {DTYPE_F32: np.dtype("<f4")}


def _header_size(tensors: Mapping[str, np.ndarray]) -> int:
    size = len(MAGIC) + 4
    for name, value in tensors.items():
        size += 4 + len(name.encode("utf-8")) + 1 + 4 * np.ndim(value) + 1 + 8
    return size


def encode_tensors(tensors: Mapping[str, np.ndarray]) -> bytes:
    """把命名张量编码为字节串（float32 小端）"""
    header = bytearray(MAGIC)
    header += struct.pack("<I", len(tensors))
    payloads: list[bytes] = []
    offset = _header_size(tensors)
    for name, value in tensors.items():
        array = np.asarray(value, dtype="<f4")
        if array.ndim > 255:
            raise WeightFileError(name, f"秩 {array.ndim} 超出上限")
        name_bytes = name.encode("utf-8")
        header += struct.pack("<I", len(name_bytes)) + name_bytes
        header += struct.pack("<B", array.ndim)
        header += struct.pack(f"<{array.ndim}I", *array.shape)
        header += struct.pack("<BQ", DTYPE_F32, offset)
        payload = array.tobytes()
        payloads.append(payload)
        offset += len(payload)
    return bytes(header) + b"".join(payloads)


class _Reader:
    def __init__(self, data: bytes, path: str):
        self.data = data
        self.path = path
        self.pos = 0

    def take(self, fmt: str) -> tuple:
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise WeightFileError(self.path, f"文件在偏移 {self.pos} 处截断")
        values = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return values

    def take_bytes(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise WeightFileError(self.path, f"文件在偏移 {self.pos} 处截断")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk


def decode_tensors(data: bytes, path: str = "<memory>") -> dict[str, np.ndarray]:
    """解析字节串，校验魔数、名称唯一、偏移不越界且互不重叠

    Raises:
        WeightFileError: 格式错误
    """
    reader = _Reader(data, path)
    if reader.take_bytes(len(MAGIC)) != MAGIC:
        raise WeightFileError(path, "魔数不匹配")
    (count,) = reader.take("<I")

    records: list[tuple[str, tuple[int, ...], np.dtype, int]] = []
    for _ in range(count):
        (name_len,) = reader.take("<I")
        try:
            name = reader.take_bytes(name_len).decode("utf-8")
        except UnicodeDecodeError as e:
            raise WeightFileError(path, f"张量名不是合法 UTF-8: {e}") from e
        (rank,) = reader.take("<B")
        dims = reader.take(f"<{rank}I")
        dtype_tag, offset = reader.take("<BQ")
        if dtype_tag not in _DTYPES:
            raise WeightFileError(path, f"{name}: 不支持的数据类型标记 {dtype_tag}")
        if any(r[0] == name for r in records):
            raise WeightFileError(path, f"张量名重复: {name}")
        records.append((name, tuple(dims), _DTYPES[dtype_tag], offset))

    header_end = reader.pos
    tensors: dict[str, np.ndarray] = {}
    spans: list[tuple[int, int, str]] = []
    for name, shape, dtype, offset in records:
        n_bytes = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
        end = offset + n_bytes
        if offset < header_end or end > len(data):
            raise WeightFileError(path, f"{name}: 载荷 [{offset}, {end}) 越界")
        spans.append((offset, end, name))
        tensors[name] = np.frombuffer(data, dtype=dtype, count=n_bytes // dtype.itemsize, offset=offset).reshape(shape)

    spans.sort()
    for (_, prev_end, prev), (start, _, name) in zip(spans, spans[1:]):
        if start < prev_end:
            raise WeightFileError(path, f"{prev} 与 {name} 的载荷重叠")
    return tensors


def save_tensors(tensors: Mapping[str, np.ndarray], path: str | Path) -> None:
    try:
        Path(path).write_bytes(encode_tensors(tensors))
    except OSError as e:
        raise WeightFileError(str(path), f"写入失败: {e}") from e


def load_tensors(path: str | Path) -> dict[str, np.ndarray]:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise WeightFileError(str(path), f"读取失败: {e}") from e
    return decode_tensors(data, str(path))


def save_weights(bundle: WeightBundle, path: str | Path) -> None:
    """写出权重包，load_weights 读回后逐位相同"""
    save_tensors(bundle, path)
    logger.info(f"写出 {len(bundle)} 个张量 ({bundle.n_scalars} 个参数) → {path}")


def load_weights(path: str | Path, cfg: GeneratorConfig) -> WeightBundle:
    """读取权重并按 cfg 的清单校验

    Raises:
        WeightFileError: 文件格式错误
        WeightManifestError: 缺失、多余或形状不符的张量
    """
    tensors = load_tensors(path)
    validate_bundle(tensors, cfg)
    bundle = WeightBundle(tensors)
    logger.info(f"读取 {path}: {len(bundle)} 个张量")
    return bundle


def save_tensor(name: str, value: np.ndarray, path: str | Path) -> None:
    """单张量文件"""
    save_tensors({name: value}, path)


def load_tensor(path: str | Path, name: str | None = None) -> np.ndarray:
    """读取单张量文件，name 给定时校验张量名"""
    tensors = load_tensors(path)
    if len(tensors) != 1:
        raise WeightFileError(str(path), f"应只含一个张量，实际 {len(tensors)} 个")
    [(found, value)] = tensors.items()
    if name is not None and found != name:
        raise WeightFileError(str(path), f"张量名应为 {name}，实际 {found}")
    return value
