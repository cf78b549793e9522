"""值域-零空间分解测试"""

import numpy as np
import pytest

from src.common.exceptions import DataError, ShapeMismatchError
from src.dsp import AudioBuffer, MelConfig, StftConfig, build_mel_filterbank, istft, mel_spectrogram, stft

from ..projection import (
    assemble_magnitude,
    assemble_spectrum,
    degradation_error,
    null_project,
    range_component,
    range_project,
    superpose_magnitude,
)


def lsd_db(reference: np.ndarray, estimate: np.ndarray) -> float:
    """对数谱距离（dB）"""
    eps = 1e-12
    diff = 20 * np.log10(reference + eps) - 20 * np.log10(estimate + eps)
    return float(np.mean(np.sqrt(np.mean(diff**2, axis=0))))


@pytest.mark.unit
class TestProjections:
    """投影算子测试"""

    def setup_method(self):
        self.fb = build_mel_filterbank(MelConfig(n_mels=8, sample_rate=8000, n_fft=64, f_max=4000.0))
        self.rng = np.random.default_rng(7)

    def test_null_annihilated_by_A(self):
        """测试零空间分量经 A 映射为零"""
        m = self.rng.uniform(0, 1, (33, 10))

        assert np.max(np.abs(self.fb.A @ null_project(m, self.fb))) < 1e-10

    def test_null_idempotent(self):
        """测试零空间投影幂等"""
        m = self.rng.standard_normal((33, 4))
        once = null_project(m, self.fb)

        assert np.allclose(null_project(once, self.fb), once, atol=1e-10)

    def test_matches_dense_projector(self):
        """测试与显式 F×F 投影矩阵一致"""
        m = self.rng.standard_normal((33, 6))
        dense = (np.eye(33) - self.fb.A_pinv @ self.fb.A) @ m

        assert np.max(np.abs(null_project(m, self.fb) - dense)) < 1e-6

    def test_orthogonal_components(self):
        """测试值域分量与零空间分量正交"""
        u = self.rng.standard_normal((33, 1))
        v = self.rng.standard_normal((33, 1))

        inner = float(np.sum(range_component(u, self.fb) * null_project(v, self.fb)))
        assert abs(inner) < 1e-10

    def test_degradation_exact_for_any_null_estimate(self):
        """测试任意零空间估计下 A·叠加幅度 等于梅尔能量"""
        magnitude = self.rng.uniform(0.1, 1.0, (33, 5))
        x_mel = np.log(self.fb.A @ magnitude)
        range_part = range_project(x_mel, self.fb)
        combined = superpose_magnitude(range_part, self.rng.standard_normal((33, 5)), self.fb)

        assert degradation_error(combined, x_mel, self.fb) < 1e-10

    def test_assembled_magnitude_non_negative(self):
        """测试截断后幅度非负"""
        x_mel = self.rng.standard_normal((8, 3))
        range_part = range_project(x_mel, self.fb)
        magnitude = assemble_magnitude(range_part, -10 * np.ones((33, 3)), self.fb)

        assert np.all(magnitude >= 0)

    def test_wrong_mel_rows(self):
        """测试梅尔维数不符"""
        with pytest.raises(ShapeMismatchError):
            range_project(np.zeros((5, 3)), self.fb)

    def test_copy_synthesis(self):
        """测试以真实幅度为零空间估计时精确复原"""
        audio = AudioBuffer(self.rng.uniform(-0.5, 0.5, 4000), 8000)
        spec = stft(audio, StftConfig(n_fft=64, hop=16))
        x_mel = mel_spectrogram(spec, self.fb)
        magnitude = assemble_magnitude(range_project(x_mel, self.fb), spec.magnitude, self.fb)

        assert lsd_db(spec.magnitude, magnitude) < 0.1


@pytest.mark.slow
@pytest.mark.integration
class TestCopySynthesisAtPresetScale:
    """22.05 kHz、80 维梅尔下的拷贝合成"""

    fb = build_mel_filterbank(MelConfig())
    stft_cfg = StftConfig()

    @pytest.mark.parametrize("seed", range(10))
    def test_clip(self, seed):
        """测试 1 到 2 秒片段以真实幅度和相位合成后重分析的对数谱距离低于 0.1 dB"""
        rng = np.random.default_rng(500 + seed)
        audio = AudioBuffer(rng.uniform(-0.5, 0.5, int(rng.uniform(1.0, 2.0) * 22050)), 22050)
        spec = stft(audio, self.stft_cfg)
        x_mel = mel_spectrogram(spec, self.fb)
        magnitude = assemble_magnitude(range_project(x_mel, self.fb), spec.magnitude, self.fb)
        rebuilt = istft(assemble_spectrum(magnitude, spec.phase), self.stft_cfg, len(audio), 22050)

        assert lsd_db(spec.magnitude, magnitude) < 0.1
        assert lsd_db(spec.magnitude, stft(rebuilt, self.stft_cfg).magnitude) < 0.1

@pytest.mark.unit
class TestAssembleSpectrum:
    """极坐标组装测试"""

    def test_polar(self):
        """测试 |S|e^{jΦ}"""
        spec = assemble_spectrum(np.array([[2.0]]), np.array([[np.pi / 2]]))

        assert spec.real[0, 0] == pytest.approx(0.0, abs=1e-15)
        assert spec.imag[0, 0] == pytest.approx(2.0)

    def test_negative_magnitude(self):
        """测试负幅度被拒绝"""
        with pytest.raises(DataError):
            assemble_spectrum(np.array([[-1.0]]), np.array([[0.0]]))

    def test_shape_mismatch(self):
        """测试幅度与相位形状不一致"""
        with pytest.raises(ShapeMismatchError):
            assemble_spectrum(np.zeros((2, 2)), np.zeros((2, 3)))
