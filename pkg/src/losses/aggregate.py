"""生成器总损失

L_G = λ_a·L_a + λ_p·L_p + λ_ri·L_ri + λ_mel·L_mel + λ_c·L_c + λ_g·L_g + λ_fm·L_fm
"""

import math
from dataclasses import asdict, dataclass
from typing import ClassVar

from pydantic import BaseModel, ConfigDict, field_validator

TERMS = ("a", "p", "ri", "mel", "c", "g", "fm")


class LossWeights(BaseModel):
    """各损失项权重

    默认值未经核实，仅作为可运行的起点。
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    STATUS: ClassVar[str] = "unverified-defaults"

    lambda_a: float = 45.0
    lambda_p: float = 100.0
    lambda_ri: float = 45.0
    lambda_mel: float = 45.0
    lambda_c: float = 1.0
    lambda_g: float = 1.0
    lambda_fm: float = 2.0

    @field_validator("*")
    @classmethod
    def _non_negative(cls, value: float) -> float:
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"权重必须为有限非负数，实际 {value}")
        return value

    def as_dict(self) -> dict[str, float]:
        return {term: getattr(self, f"lambda_{term}") for term in TERMS}


@dataclass(frozen=True)
class LossComponents:
    """未加权的各项损失"""

    a: float = 0.0
    p: float = 0.0
    ri: float = 0.0
    mel: float = 0.0
    c: float = 0.0
    g: float = 0.0
    fm: float = 0.0


@dataclass(frozen=True)
class LossReport:
    """加权总损失与逐项明细"""

    total: float
    components: dict[str, float]
    weighted: dict[str, float]


def total_generator_loss(components: LossComponents, weights: LossWeights | None = None) -> LossReport:
    """按固定顺序加权求和"""
    weights = weights or LossWeights()
    raw = asdict(components)
    lambdas = weights.as_dict()
    weighted = {term: lambdas[term] * raw[term] for term in TERMS}
    total = 0.0
    for term in TERMS:
        total += weighted[term]
    return LossReport(total=total, components=raw, weighted=weighted)
