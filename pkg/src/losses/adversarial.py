"""铰链对抗损失与特征匹配损失

判别器网络本身不在范围内，这里只对其输出（得分图与中间特征）求值。
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from src.common.exceptions import DataError, ShapeMismatchError


@dataclass(frozen=True)
class DiscriminatorView:
    """一个子判别器的输出：得分（标量或得分图）与各层特征"""

    score: np.ndarray
    features: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        object.__setattr__(self, "score", np.asarray(self.score, dtype=np.float64))
        object.__setattr__(
            self, "features", [np.asarray(f, dtype=np.float64) for f in self.features]
        )


def _check_views(real: Sequence[DiscriminatorView], fake: Sequence[DiscriminatorView]) -> None:
    if len(real) != len(fake):
        raise ShapeMismatchError("discriminator_views", len(real), len(fake))
    if not real:
        raise DataError("至少需要一个子判别器", "discriminator_views")
    for m, (r, f) in enumerate(zip(real, fake)):
        if len(r.features) != len(f.features):
            raise ShapeMismatchError(f"view{m}.features", len(r.features), len(f.features))
        for layer, (a, b) in enumerate(zip(r.features, f.features)):
            if a.shape != b.shape:
                raise ShapeMismatchError(f"view{m}.features[{layer}]", a.shape, b.shape)


def hinge_real(score: np.ndarray) -> float:
    return float(np.maximum(0.0, 1.0 - score).mean())


def hinge_fake(score: np.ndarray) -> float:
    return float(np.maximum(0.0, 1.0 + score).mean())


def hinge_discriminator(
    real_views: Sequence[DiscriminatorView], fake_views: Sequence[DiscriminatorView]
) -> float:
    """(1/M)·Σ_m [max(0, 1 − D_m(s)) + max(0, 1 + D_m(s̃))]，得分图先逐元素再取均值"""
    if len(real_views) != len(fake_views) or not real_views:
        raise ShapeMismatchError("discriminator_views", len(real_views), len(fake_views))
    total = sum(hinge_real(r.score) + hinge_fake(f.score) for r, f in zip(real_views, fake_views))
    return total / len(real_views)


def hinge_generator(fake_views: Sequence[DiscriminatorView]) -> float:
    """(1/M)·Σ_m max(0, 1 − D_m(s̃))"""
    if not fake_views:
        raise DataError("至少需要一个子判别器", "discriminator_views")
    return sum(hinge_real(f.score) for f in fake_views) / len(fake_views)


def feature_match(
    real_views: Sequence[DiscriminatorView], fake_views: Sequence[DiscriminatorView]
) -> float:
    """各特征张量平均绝对差之和除以特征张量总数"""
    _check_views(real_views, fake_views)
    terms = [
        float(np.abs(f - r).mean())
        for rv, fv in zip(real_views, fake_views)
        for r, f in zip(rv.features, fv.features)
    ]
    if not terms:
        return 0.0
    return sum(terms) / len(terms)
