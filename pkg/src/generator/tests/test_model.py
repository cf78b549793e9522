"""生成器前向传播测试"""

import numpy as np
import pytest

from src.dsp import MelConfig, StftConfig, build_mel_filterbank
from src.model_io import init_random
from src.rnd import degradation_error, null_project, range_project

from ..config import GeneratorConfig
from ..exceptions import GeneratorStageError, WeightManifestError
from ..model import generator_forward
from ..weights import MEL_BASIS, MEL_INVERSE, WeightBundle
from .fixtures import random_bundle, small_config

STFT = StftConfig(n_fft=64, hop=16)


@pytest.mark.unit
class TestGeneratorForward:
    """端到端前向传播测试"""

    def setup_method(self):
        self.cfg = small_config()
        self.fb = build_mel_filterbank(MelConfig(n_mels=8, sample_rate=8000, n_fft=64, f_max=4000.0))
        self.x_mel = np.random.default_rng(0).uniform(-4.0, 1.0, (8, 20))

    def forward(self, w, **kwargs):
        return generator_forward(self.x_mel, self.fb, self.cfg, w, STFT, sample_rate=8000, **kwargs)

    def test_shapes(self):
        """测试 F_m×T 输入得到 F×T 幅度/相位和 T·hop 个采样点"""
        out = self.forward(random_bundle(self.cfg, seed=1, scale=0.2))

        assert out.magnitude.shape == (33, 20)
        assert out.phase.shape == (33, 20)
        assert len(out.audio) == 20 * 16
        assert out.audio.sample_rate == 8000

    def test_degradation_consistency(self):
        """测试随机权重下叠加幅度与梅尔观测一致"""
        for seed in range(5):
            out = self.forward(random_bundle(self.cfg, seed=seed, scale=0.2))
            assert degradation_error(out.magnitude_preclamp, self.x_mel, self.fb) < 1e-4

    def test_zero_weights_closed_form(self):
        """测试零权重：幅度 max(range + 零空间投影(1), 0)，相位 0"""
        out = self.forward(WeightBundle.zeros(self.cfg))
        range_part = range_project(self.x_mel, self.fb)
        expected = np.maximum(range_part.values + null_project(np.ones((33, 20)), self.fb), 0.0)

        assert np.array_equal(out.null_estimate, np.ones((33, 20)))
        assert np.allclose(out.magnitude, expected, atol=1e-12)
        assert np.all(out.phase == 0)

    def test_magnitude_non_negative(self):
        """测试最终幅度非负"""
        out = self.forward(random_bundle(self.cfg, seed=2))

        assert np.all(out.magnitude >= 0)
        assert np.all(out.null_estimate > 0)

    def test_deterministic(self):
        """测试相同输入两次运行逐字节一致"""
        w = random_bundle(self.cfg, seed=3, scale=0.2)

        first = self.forward(w)
        second = self.forward(w)
        assert first.audio.samples.tobytes() == second.audio.samples.tobytes()

    def test_thread_count_invariant(self):
        """测试多线程与单线程逐位一致"""
        w = random_bundle(self.cfg, seed=4, scale=0.2)

        serial = self.forward(w, workers=1)
        parallel = self.forward(w, workers=4)
        assert np.array_equal(serial.magnitude, parallel.magnitude)
        assert np.array_equal(serial.phase, parallel.phase)
        assert serial.audio.samples.tobytes() == parallel.audio.samples.tobytes()

    def test_ablation_uses_network_magnitude(self):
        """测试关闭分解时直接使用网络幅度"""
        cfg = small_config(rnd_mode=False)
        w = random_bundle(cfg, seed=5, scale=0.2)
        out = generator_forward(self.x_mel, self.fb, cfg, w, STFT, sample_rate=8000)

        assert np.array_equal(out.magnitude, out.null_estimate)
        assert np.all(out.null_component == 0)

    def test_learned_projection_matches_analytic(self):
        """测试权重包中的 A/A† 取解析值时与解析投影前向一致"""
        cfg = small_config(learned_projection=True)
        plain = random_bundle(self.cfg, seed=7, scale=0.2)
        w = plain.with_tensors({MEL_BASIS: self.fb.A, MEL_INVERSE: self.fb.A_pinv})

        learned = generator_forward(self.x_mel, self.fb, cfg, w, STFT, sample_rate=8000)
        analytic = self.forward(plain)

        assert np.allclose(learned.magnitude, analytic.magnitude, atol=1e-3)
        assert degradation_error(learned.magnitude_preclamp, self.x_mel, self.fb) < 1e-4

    def test_learned_projection_uses_bundle(self):
        """测试可学习投影下值域分量由权重包中的 A† 给出"""
        cfg = small_config(learned_projection=True)
        w = WeightBundle.zeros(cfg).with_tensors({MEL_BASIS: self.fb.A, MEL_INVERSE: 2.0 * self.fb.A_pinv})

        out = generator_forward(self.x_mel, self.fb, cfg, w, STFT, sample_rate=8000)

        expected = 2.0 * range_project(self.x_mel, self.fb).values
        assert np.allclose(out.range_part.values, expected, rtol=1e-5, atol=1e-6)

    def test_mel_shape_error_names_stage(self):
        """测试梅尔维数错误报告阶段名"""
        with pytest.raises(GeneratorStageError) as exc_info:
            generator_forward(np.zeros((10, 5)), self.fb, self.cfg, WeightBundle.zeros(self.cfg), STFT)

        assert exc_info.value.stage == "validate"
        assert exc_info.value.exit_code == 2

    def test_manifest_error_names_tensor(self):
        """测试权重缺失时异常链中指明张量名"""
        tensors = dict(WeightBundle.zeros(self.cfg))
        del tensors["hpdm.region1.norm.weight"]

        with pytest.raises(GeneratorStageError) as exc_info:
            self.forward(WeightBundle(tensors))
        cause = exc_info.value.cause
        assert isinstance(cause, WeightManifestError)
        assert cause.tensor == "hpdm.region1.norm.weight"

    def test_non_finite_mel(self):
        """测试梅尔谱含 NaN"""
        x_mel = self.x_mel.copy()
        x_mel[0, 0] = np.nan

        with pytest.raises(GeneratorStageError):
            generator_forward(x_mel, self.fb, self.cfg, WeightBundle.zeros(self.cfg), STFT)


@pytest.mark.integration
class TestPresetShapes:
    """默认 22.05 kHz STFT 与 80 维梅尔下的形状约定"""

    def test_ultralite_shapes(self):
        """测试 80×100 梅尔得到 513×100 幅度/相位与 25600 个采样点"""
        cfg = GeneratorConfig(channels=32, n_blocks=4)
        fb = build_mel_filterbank(MelConfig())
        x_mel = np.random.default_rng(6).uniform(-6.0, 1.0, (80, 100))

        out = generator_forward(x_mel, fb, cfg, random_bundle(cfg, seed=6, scale=0.1), StftConfig())

        assert out.magnitude.shape == (513, 100)
        assert out.phase.shape == (513, 100)
        assert len(out.audio) == 25600


@pytest.mark.slow
@pytest.mark.integration
class TestDegradationAtPresetScale:
    """UltraLite 规模、2 秒随机梅尔谱、种子初始化权重上的退化一致性"""

    cfg = GeneratorConfig(channels=32, n_blocks=4)
    fb = build_mel_filterbank(MelConfig())
    stft = StftConfig()
    n_frames = round(2 * 22050 / 256)

    @pytest.mark.parametrize("seed", range(100))
    def test_seeded_pass(self, seed):
        """测试每个种子下叠加幅度的相对一致性误差低于 1e-4"""
        x_mel = np.random.default_rng(seed).uniform(-6.0, 1.0, (self.cfg.n_mels, self.n_frames))
        w = init_random(self.cfg, seed, self.fb)

        out = generator_forward(x_mel, self.fb, self.cfg, w, self.stft, sample_rate=22050)

        assert self.n_frames == 172
        assert out.magnitude.shape == (513, 172)
        assert degradation_error(out.magnitude_preclamp, x_mel, self.fb) < 1e-4
