"""损失模块 - 重建、全向相位、铰链对抗与特征匹配损失的纯函数求值"""

from .adversarial import (
    DiscriminatorView,
    feature_match,
    hinge_discriminator,
    hinge_fake,
    hinge_generator,
    hinge_real,
)
from .aggregate import TERMS, LossComponents, LossReport, LossWeights, total_generator_loss
from .phase import (
    CENTER_INDEX,
    PhaseKernelBank,
    anti_wrap,
    loss_phase,
    loss_phase_directional,
    omni_phase_diff,
)
from .reconstruction import (
    consistent_projection,
    loss_consistency,
    loss_log_amplitude,
    loss_mel,
    loss_ri,
)

__all__ = [
    "DiscriminatorView",
    "feature_match",
    "hinge_discriminator",
    "hinge_fake",
    "hinge_generator",
    "hinge_real",
    "TERMS",
    "LossComponents",
    "LossReport",
    "LossWeights",
    "total_generator_loss",
    "CENTER_INDEX",
    "PhaseKernelBank",
    "anti_wrap",
    "loss_phase",
    "loss_phase_directional",
    "omni_phase_diff",
    "consistent_projection",
    "loss_consistency",
    "loss_log_amplitude",
    "loss_mel",
    "loss_ri",
]

__version__ = "1.0.0"
