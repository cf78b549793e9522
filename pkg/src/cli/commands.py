"""各子命令的实现

每个函数接收解析后的参数与报告对象，返回退出码；领域错误直接抛出，由入口统一处理。
"""

import argparse
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from src.common.exceptions import ConfigError, DataError, ShapeMismatchError
from src.dsp import (
    AudioBuffer,
    build_mel_filterbank,
    istft,
    log_mel_from_audio,
    read_wav,
    stft,
    write_wav,
)
from src.generator import generator_forward, mac_breakdown, param_breakdown
from src.losses import (
    DiscriminatorView,
    LossComponents,
    LossWeights,
    feature_match,
    hinge_discriminator,
    hinge_generator,
    loss_consistency,
    loss_log_amplitude,
    loss_mel,
    loss_phase,
    loss_phase_directional,
    loss_ri,
    total_generator_loss,
)
from src.model_io import (
    PRNG_NAME,
    VocoderConfig,
    get_preset,
    init_random,
    load_config,
    load_tensor,
    load_weights,
    parse_document,
    save_config,
    save_tensor,
    save_weights,
)
from src.rnd import assemble_spectrum, degradation_error, range_project

from .report import Report
from .verify import run_verify

logger = logging.getLogger(__name__)

MEL_TENSOR = "mel"
DUMP_NAMES = ("range", "null_estimate", "null_component", "magnitude_preclamp", "magnitude", "phase")


def resolve_config(args: argparse.Namespace) -> VocoderConfig:
    """--config 优先，否则取 --preset"""
    if args.config:
        return load_config(args.config)
    return VocoderConfig.from_preset(args.preset)


def _read_audio(path: str, cfg: VocoderConfig) -> AudioBuffer:
    audio = read_wav(path)
    if audio.sample_rate != cfg.sample_rate:
        raise DataError(f"采样率 {audio.sample_rate} Hz 与配置 {cfg.sample_rate} Hz 不一致", path)
    return audio


def _read_mel(path: str, cfg: VocoderConfig) -> np.ndarray:
    x_mel = np.asarray(load_tensor(path, MEL_TENSOR), dtype=np.float64)
    if x_mel.ndim != 2 or x_mel.shape[0] != cfg.mel.n_mels:
        raise ShapeMismatchError(path, f"({cfg.mel.n_mels}, T)", x_mel.shape)
    return x_mel


def mel_extract(args: argparse.Namespace, report: Report) -> int:
    """WAV → 对数梅尔谱文件"""
    cfg = resolve_config(args)
    audio = _read_audio(args.input, cfg)
    fb = build_mel_filterbank(cfg.mel)
    x_mel = log_mel_from_audio(audio, cfg.stft, fb, cfg.mel.log_floor)
    save_tensor(MEL_TENSOR, x_mel, args.output)

    report.add("preset", cfg.preset)
    report.add("mel.shape", x_mel.shape)
    report.add("mel.path", args.output)
    return 0


def range_vocode(args: argparse.Namespace, report: Report) -> int:
    """无网络基线：幅度取 max(A†X̄, 0)，相位取 0"""
    cfg = resolve_config(args)
    fb = build_mel_filterbank(cfg.mel)
    x_mel = _read_mel(args.input, cfg)
    preclamp = range_project(x_mel, fb).values
    magnitude = np.maximum(preclamp, 0.0)
    spectrum = assemble_spectrum(magnitude, np.zeros_like(magnitude))
    n_frames = x_mel.shape[1]
    audio = istft(spectrum, cfg.stft, n_frames * cfg.stft.hop, cfg.sample_rate)
    write_wav(args.output, audio)

    report.add("frames", n_frames)
    report.add("samples", len(audio))
    report.add("consistency_error", degradation_error(preclamp, x_mel, fb))
    report.add("consistency_error_clamped", degradation_error(magnitude, x_mel, fb))
    report.add("wav.path", args.output)
    return 0


def vocode(args: argparse.Namespace, report: Report) -> int:
    """完整生成器前向"""
    cfg = resolve_config(args)
    fb = build_mel_filterbank(cfg.mel)
    x_mel = _read_mel(args.input, cfg)
    if args.weights:
        weights = load_weights(args.weights, cfg.generator)
        source = args.weights
    else:
        weights = init_random(cfg.generator, args.seed, fb)
        source = f"{PRNG_NAME}(seed={args.seed})"

    out = generator_forward(x_mel, fb, cfg.generator, weights, cfg.stft, cfg.sample_rate, args.threads)
    write_wav(args.output, out.audio)

    report.add("weights", source)
    report.add("frames", x_mel.shape[1])
    report.add("samples", len(out.audio))
    if cfg.generator.rnd_mode:
        report.add("consistency_error", degradation_error(out.magnitude_preclamp, x_mel, fb))
    report.add("wav.path", args.output)

    if args.dump_spectra:
        dump_dir = Path(args.dump_spectra)
        try:
            dump_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise DataError(f"无法创建目录: {e}", str(dump_dir)) from e
        tensors = {
            "range": out.range_part.values,
            "null_estimate": out.null_estimate,
            "null_component": out.null_component,
            "magnitude_preclamp": out.magnitude_preclamp,
            "magnitude": out.magnitude,
            "phase": out.phase,
        }
        for name in DUMP_NAMES:
            save_tensor(name, tensors[name], dump_dir / f"{name}.bin")
        report.add("dump.dir", str(dump_dir))
        report.add("dump.tensors", ",".join(DUMP_NAMES))
    return 0


def _pct(actual: float, target: float | None) -> float | None:
    if target is None:
        return None
    return 100.0 * (actual - target) / target


def count(args: argparse.Namespace, report: Report) -> int:
    """参数量、乘加次数与公开值的偏差"""
    cfg = resolve_config(args)
    targets = get_preset(cfg.preset).targets
    params = param_breakdown(cfg.generator)
    macs = mac_breakdown(cfg.generator, args.seconds, cfg.sample_rate, cfg.stft.hop)
    # 公开值按 5 秒计
    macs_5s = mac_breakdown(cfg.generator, 5.0, cfg.sample_rate, cfg.stft.hop).total
    macs_target = None if targets.macs_g is None else targets.macs_g * 1e9

    report.add("preset", cfg.preset)
    report.add("params", params.total)
    report.add("params.target", round(targets.params_m * 1e6))
    report.add("params.deviation_pct", _pct(params.total, targets.params_m * 1e6))
    report.add("seconds", args.seconds)
    report.add("macs", macs.total)
    report.add("macs.giga", macs.total / 1e9)
    report.add("macs.target_5s", None if macs_target is None else round(macs_target))
    report.add("macs.deviation_pct", _pct(macs_5s, macs_target))
    report.extend("params", params.by_component.items())
    report.extend("macs", macs.by_component.items())
    return 0


class _ViewEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    score: Any
    features: list[Any] = []


class _ViewsFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    real: list[_ViewEntry]
    fake: list[_ViewEntry]


def load_views(path: str) -> tuple[list[DiscriminatorView], list[DiscriminatorView]]:
    """读取判别器输出文件（JSON/YAML）

    格式：{"real": [{"score": ..., "features": [...]}, ...], "fake": [...]}

    Raises:
        ConfigError: 文件无法解析或结构不符
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"读取失败: {e}", path) from e
    try:
        parsed = _ViewsFile.model_validate(parse_document(text, path))
    except ValidationError as e:
        raise ConfigError.from_validation(e, path) from e

    def convert(entries: list[_ViewEntry]) -> list[DiscriminatorView]:
        try:
            return [DiscriminatorView(np.asarray(v.score, dtype=np.float64), v.features) for v in entries]
        except (TypeError, ValueError) as e:
            raise ConfigError(f"得分或特征不是规则的数值数组: {e}", path) from e

    return convert(parsed.real), convert(parsed.fake)


def loss_eval(args: argparse.Namespace, report: Report) -> int:
    """参考音频与生成音频之间的逐项损失"""
    cfg = resolve_config(args)
    ref = _read_audio(args.reference, cfg)
    est = _read_audio(args.estimate, cfg)
    if len(ref) != len(est):
        raise ShapeMismatchError(args.estimate, (len(ref),), (len(est),))
    fb = build_mel_filterbank(cfg.mel)
    spec_ref = stft(ref, cfg.stft)
    spec_est = stft(est, cfg.stft)

    adversarial: dict[str, float] = {}
    if args.views:
        real, fake = load_views(args.views)
        adversarial = {
            "g": hinge_generator(fake),
            "fm": feature_match(real, fake),
            "d": hinge_discriminator(real, fake),
        }

    components = LossComponents(
        a=loss_log_amplitude(spec_ref.magnitude, spec_est.magnitude, cfg.mel.log_floor),
        p=loss_phase(spec_ref.phase, spec_est.phase),
        ri=loss_ri(spec_ref, spec_est),
        mel=loss_mel(ref, est, cfg.stft, fb, cfg.mel.log_floor),
        c=loss_consistency(spec_est, cfg.stft),
        g=adversarial.get("g", 0.0),
        fm=adversarial.get("fm", 0.0),
    )
    result = total_generator_loss(components, cfg.loss_weights)

    report.add("loss_weights.status", LossWeights.STATUS)
    report.extend("loss", result.components.items())
    report.extend("weighted", result.weighted.items())
    report.add("loss.total", result.total)
    report.add("loss.phase_directional", loss_phase_directional(spec_ref.phase, spec_est.phase))
    report.add("views", bool(args.views))
    if args.views:
        report.add("loss.discriminator", adversarial["d"])
    return 0


def gen_weights(args: argparse.Namespace, report: Report) -> int:
    """按种子生成权重文件"""
    cfg = resolve_config(args)
    fb = build_mel_filterbank(cfg.mel) if cfg.generator.learned_projection else None
    bundle = init_random(cfg.generator, args.seed, fb)
    save_weights(bundle, args.output)
    if args.save_config:
        save_config(cfg, args.save_config)

    report.add("prng", PRNG_NAME)
    report.add("seed", args.seed)
    report.add("tensors", len(bundle))
    report.add("params", bundle.n_scalars)
    report.add("weights.path", args.output)
    return 0


def verify(args: argparse.Namespace, report: Report) -> int:
    """不变量检查；没有失败项返回 0（已知偏差不算失败），权重文件不合格返回 2，其余失败返回 3"""
    cfg = resolve_config(args)
    results = run_verify(
        cfg,
        seed=args.seed,
        weights_path=args.weights,
        frames=args.frames,
        workers=args.threads,
        tolerance_scale=args.tolerance_scale,
        passes=args.passes,
    )

    report.add("preset", cfg.preset)
    report.add("seed", args.seed)
    report.add("tolerance_scale", args.tolerance_scale)
    for r in results:
        prefix = f"check.{r.name}"
        report.add(f"{prefix}.status", r.status)
        report.add(f"{prefix}.value", r.value)
        if not r.skipped:
            report.add(f"{prefix}.limit", r.limit)
            report.add(f"{prefix}.margin", r.margin)
        if r.detail:
            report.add(f"{prefix}.detail", r.detail)

    failed = [r for r in results if r.status == "fail"]
    report.add("verify.checks", len(results))
    report.add("verify.failed", len(failed))
    report.add("verify.deviations", sum(r.status == "deviation" for r in results))
    if not failed:
        return 0
    if any(r.name == "weights.manifest" for r in failed):
        return DataError.exit_code
    return 3
