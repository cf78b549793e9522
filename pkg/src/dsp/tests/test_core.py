"""前端数据类型测试"""

import numpy as np
import pytest

from src.common.exceptions import DataError, ShapeMismatchError

from ..core import AudioBuffer, ComplexSpectrogram


@pytest.mark.unit
class TestAudioBuffer:
    """音频缓冲测试"""

    def test_basic(self):
        """测试基本属性"""
        audio = AudioBuffer(np.zeros(22050), 22050)

        assert len(audio) == 22050
        assert audio.duration == pytest.approx(1.0)
        assert audio.samples.dtype == np.float64

    def test_non_finite_rejected(self):
        """测试 NaN 被拒绝"""
        with pytest.raises(DataError):
            AudioBuffer(np.array([0.0, np.nan]), 22050)

    def test_multichannel_rejected(self):
        """测试二维采样数组被拒绝"""
        with pytest.raises(ShapeMismatchError):
            AudioBuffer(np.zeros((2, 100)), 22050)

    def test_unusual_rate_flagged(self, caplog):
        """测试非预设采样率会记录警告"""
        with caplog.at_level("WARNING"):
            AudioBuffer(np.zeros(10), 16000)

        assert "16000" in caplog.text


@pytest.mark.unit
class TestComplexSpectrogram:
    """复数谱测试"""

    def test_polar_properties(self):
        """测试幅度与相位派生属性"""
        spec = ComplexSpectrogram(np.array([[0.0, -1.0]]), np.array([[2.0, 0.0]]))

        assert np.allclose(spec.magnitude, [[2.0, 1.0]])
        assert np.allclose(spec.phase, [[np.pi / 2, np.pi]])

    def test_phase_range(self):
        """测试相位落在 (−π, π]"""
        spec = ComplexSpectrogram(np.array([[-1.0]]), np.array([[-0.0]]))

        assert spec.phase[0, 0] == np.pi

    def test_shape_mismatch(self):
        """测试实部虚部形状不一致"""
        with pytest.raises(ShapeMismatchError):
            ComplexSpectrogram(np.zeros((3, 2)), np.zeros((3, 3)))
