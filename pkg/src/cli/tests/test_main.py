"""命令行端到端测试"""

import json

import numpy as np
import pytest
import soundfile as sf

from src.dsp import AudioBuffer, write_wav
from src.generator import count_params
from src.model_io import VocoderConfig, get_preset, load_config, load_tensor, load_weights, save_tensor

from ..main import main

SR = 22050


def run(capsys, *argv: str) -> tuple[int, dict[str, str]]:
    """执行命令并解析 key=value 输出"""
    code = main(list(argv))
    out = capsys.readouterr().out
    report = dict(line.split("=", 1) for line in out.splitlines() if "=" in line)
    return code, report


def write_tone(path, freq: float = 1000.0, seconds: float = 1.0, amplitude: float = 0.5, sr: int = SR):
    t = np.arange(int(seconds * sr)) / sr
    write_wav(path, AudioBuffer(amplitude * np.sin(2 * np.pi * freq * t), sr))


@pytest.mark.unit
class TestUsage:
    """用法错误测试"""

    def test_no_command(self, capsys):
        """测试缺少子命令时退出码为 1"""
        assert main([]) == 1

    def test_unknown_command(self, capsys):
        """测试未知子命令"""
        assert main(["synthesize"]) == 1

    def test_vocode_needs_weights_or_seed(self, capsys, tmp_path):
        """测试 vocode 必须给出权重文件或种子"""
        assert main(["vocode", "--in", "m.bin", "--out", str(tmp_path / "o.wav")]) == 1

    def test_bad_seed(self, capsys, tmp_path):
        """测试负数种子"""
        assert main(["gen-weights", "--seed", "-1", "--out", str(tmp_path / "w.bin")]) == 1

    def test_unknown_preset(self, capsys):
        """测试未知预设"""
        assert main(["count", "--preset", "bigvgan"]) == 1

    def test_help(self, capsys):
        """测试 --help 正常退出"""
        assert main(["--help"]) == 0


@pytest.mark.integration
class TestMelExtract:
    """mel-extract 测试"""

    def test_one_second(self, capsys, tmp_path):
        """测试 1 秒 22.05 kHz 音频得到 80×87 梅尔谱"""
        write_tone(tmp_path / "a.wav")

        code, report = run(capsys, "mel-extract", "--in", str(tmp_path / "a.wav"), "--out", str(tmp_path / "m.bin"))

        assert code == 0
        assert report["mel.shape"] == "80x87"
        assert report["status"] == "ok"
        assert load_tensor(tmp_path / "m.bin", "mel").shape == (80, 87)

    def test_silence(self, capsys, tmp_path):
        """测试静音得到全 log(floor)"""
        write_wav(tmp_path / "s.wav", AudioBuffer(np.zeros(SR), SR))

        code, _ = run(capsys, "mel-extract", "--in", str(tmp_path / "s.wav"), "--out", str(tmp_path / "m.bin"))

        assert code == 0
        mel = load_tensor(tmp_path / "m.bin", "mel")
        assert np.all(mel == np.float32(np.log(1e-5)))

    def test_stereo_rejected(self, capsys, tmp_path):
        """测试立体声输入退出码为 2"""
        sf.write(str(tmp_path / "st.wav"), np.zeros((SR, 2)), SR, subtype="FLOAT")

        code, report = run(capsys, "mel-extract", "--in", str(tmp_path / "st.wav"), "--out", str(tmp_path / "m.bin"))

        assert code == 2
        assert report["error.type"] == "AudioFormatError"

    def test_sample_rate_mismatch(self, capsys, tmp_path):
        """测试采样率与预设不符"""
        write_tone(tmp_path / "a.wav", sr=24000)

        code, _ = run(capsys, "mel-extract", "--in", str(tmp_path / "a.wav"), "--out", str(tmp_path / "m.bin"))

        assert code == 2

    def test_libritts_preset(self, capsys, tmp_path):
        """测试 LibriTTS 预设得到 100 维梅尔谱"""
        write_tone(tmp_path / "a.wav", sr=24000)

        code, report = run(
            capsys,
            "mel-extract",
            "--preset",
            "libritts",
            "--in",
            str(tmp_path / "a.wav"),
            "--out",
            str(tmp_path / "m.bin"),
        )

        assert code == 0
        assert report["mel.shape"] == f"100x{1 + 24000 // 256}"


@pytest.mark.integration
class TestRangeVocode:
    """range-vocode 测试"""

    def extract(self, capsys, tmp_path, wav):
        run(capsys, "mel-extract", "--in", str(wav), "--out", str(tmp_path / "m.bin"))
        return tmp_path / "m.bin"

    def test_tone_energy_localized(self, capsys, tmp_path):
        """测试纯音的基线输出能量集中在音调附近"""
        write_tone(tmp_path / "a.wav", freq=1000.0)
        mel = self.extract(capsys, tmp_path, tmp_path / "a.wav")

        code, report = run(capsys, "range-vocode", "--in", str(mel), "--out", str(tmp_path / "r.wav"))

        assert code == 0
        assert float(report["consistency_error"]) < 1e-4
        samples, sr = sf.read(str(tmp_path / "r.wav"))
        spectrum = np.abs(np.fft.rfft(samples))
        freqs = np.fft.rfftfreq(samples.size, 1 / sr)
        assert 700.0 < freqs[np.argmax(spectrum)] < 1300.0

    def test_silence_near_silent(self, capsys, tmp_path):
        """测试静音梅尔谱得到接近静音的输出"""
        write_wav(tmp_path / "s.wav", AudioBuffer(np.zeros(SR), SR))
        mel = self.extract(capsys, tmp_path, tmp_path / "s.wav")

        code, report = run(capsys, "range-vocode", "--in", str(mel), "--out", str(tmp_path / "r.wav"))

        assert code == 0
        assert report["samples"] == str(87 * 256)
        samples, _ = sf.read(str(tmp_path / "r.wav"))
        assert np.max(np.abs(samples)) < 1e-3

    def test_mel_rows_mismatch(self, capsys, tmp_path):
        """测试梅尔维数与预设不符"""
        save_tensor("mel", np.zeros((100, 10)), tmp_path / "m.bin")

        code, report = run(capsys, "range-vocode", "--in", str(tmp_path / "m.bin"), "--out", str(tmp_path / "r.wav"))

        assert code == 2
        assert report["error.type"] == "ShapeMismatchError"


@pytest.mark.integration
class TestVocode:
    """vocode 测试（UltraLite 规模）"""

    def setup_method(self):
        self.mel = np.random.default_rng(0).uniform(-6.0, 0.0, (80, 16))

    def vocode(self, capsys, tmp_path, out_name, *extra):
        save_tensor("mel", self.mel, tmp_path / "m.bin")
        return run(
            capsys,
            "vocode",
            "--preset",
            "ultralite",
            "--in",
            str(tmp_path / "m.bin"),
            "--out",
            str(tmp_path / out_name),
            *extra,
        )

    def test_random_weights(self, capsys, tmp_path):
        """测试随机权重完成合成并满足退化一致性"""
        code, report = self.vocode(capsys, tmp_path, "o.wav", "--seed", "7")

        assert code == 0
        assert report["samples"] == str(16 * 256)
        assert float(report["consistency_error"]) < 1e-4

    def test_byte_identical(self, capsys, tmp_path):
        """测试同一种子两次运行、单线程与多线程输出逐字节相同"""
        self.vocode(capsys, tmp_path, "a.wav", "--seed", "7")
        self.vocode(capsys, tmp_path, "b.wav", "--seed", "7")
        self.vocode(capsys, tmp_path, "c.wav", "--seed", "7", "--threads", "3")

        first = (tmp_path / "a.wav").read_bytes()
        assert (tmp_path / "b.wav").read_bytes() == first
        assert (tmp_path / "c.wav").read_bytes() == first

    def test_dump_spectra(self, capsys, tmp_path):
        """测试写出分解谱"""
        code, report = self.vocode(capsys, tmp_path, "o.wav", "--seed", "1", "--dump-spectra", str(tmp_path / "dump"))

        assert code == 0
        for name in report["dump.tensors"].split(","):
            assert load_tensor(tmp_path / "dump" / f"{name}.bin", name).shape == (513, 16)
        magnitude = load_tensor(tmp_path / "dump" / "magnitude.bin")
        assert np.all(magnitude >= 0)

    def test_weights_file(self, capsys, tmp_path):
        """测试使用 gen-weights 生成的权重文件"""
        run(capsys, "gen-weights", "--preset", "ultralite", "--seed", "7", "--out", str(tmp_path / "w.bin"))
        self.vocode(capsys, tmp_path, "seeded.wav", "--seed", "7")
        code, _ = self.vocode(capsys, tmp_path, "file.wav", "--weights", str(tmp_path / "w.bin"))

        assert code == 0
        assert (tmp_path / "file.wav").read_bytes() == (tmp_path / "seeded.wav").read_bytes()

    def test_manifest_mismatch_names_tensor(self, capsys, tmp_path):
        """测试权重与预设不符时指出张量名"""
        run(capsys, "gen-weights", "--preset", "lite", "--out", str(tmp_path / "lite.bin"))

        code, report = self.vocode(capsys, tmp_path, "o.wav", "--weights", str(tmp_path / "lite.bin"))

        assert code == 2
        assert report["error.subject"] == "hsem.region0.conv.weight"


@pytest.mark.unit
class TestCount:
    """count 测试"""

    def test_full(self, capsys):
        """测试完整模型的统计与公开值"""
        code, report = run(capsys, "count", "--preset", "ljspeech")

        assert code == 0
        assert report["params"] == "3118089"
        assert report["params.target"] == "3140000"
        assert report["macs.target_5s"] == "34100000000"
        assert report["macs"] == str(62_300_400 * 431)
        assert abs(float(report["macs.deviation_pct"])) < 30

    @pytest.mark.parametrize(
        "preset, params_target, macs_target",
        [("lite", "710000", "9540000000"), ("ultralite", "80000", "1660000000")],
    )
    def test_light_weight_targets(self, capsys, preset, params_target, macs_target):
        """测试轻量模型的公开值"""
        code, report = run(capsys, "count", "--preset", preset)

        assert code == 0
        assert report["params.target"] == params_target
        assert report["macs.target_5s"] == macs_target

    def test_unpublished_target(self, capsys):
        """测试未公布的 MACs 显示为 none"""
        _, report = run(capsys, "count", "--preset", "libritts")

        assert report["macs.target_5s"] == "none"
        assert report["macs.deviation_pct"] == "none"

    def test_seconds(self, capsys):
        """测试指定时长"""
        _, report = run(capsys, "count", "--preset", "ultralite", "--seconds", "10")

        assert report["seconds"] == "10"
        assert int(report["macs.nbm"]) > 0


@pytest.mark.integration
class TestLossEval:
    """loss-eval 测试"""

    def test_identical(self, capsys, tmp_path):
        """测试相同音频各项为零"""
        write_tone(tmp_path / "a.wav", seconds=0.5)

        code, report = run(capsys, "loss-eval", "--ref", str(tmp_path / "a.wav"), "--est", str(tmp_path / "a.wav"))

        assert code == 0
        for term in ("a", "p", "ri", "mel", "g", "fm"):
            assert float(report[f"loss.{term}"]) == 0.0
        assert float(report["loss.c"]) < 1e-10
        assert report["loss_weights.status"] == "unverified-defaults"

    def test_views(self, capsys, tmp_path):
        """测试判别器输出文件"""
        write_tone(tmp_path / "a.wav", seconds=0.5)
        write_tone(tmp_path / "b.wav", seconds=0.5, freq=1200.0)
        views = {
            "real": [{"score": 2.0, "features": [[0.0, 1.0]]}, {"score": 3.0, "features": [[2.0]]}],
            "fake": [{"score": 0.5, "features": [[1.0, 2.0]]}, {"score": -0.5, "features": [[3.0]]}],
        }
        (tmp_path / "views.json").write_text(json.dumps(views))

        code, report = run(
            capsys,
            "loss-eval",
            "--ref",
            str(tmp_path / "a.wav"),
            "--est",
            str(tmp_path / "b.wav"),
            "--views",
            str(tmp_path / "views.json"),
        )

        assert code == 0
        assert float(report["loss.discriminator"]) == pytest.approx(1.0)
        assert float(report["loss.g"]) == pytest.approx(1.0)
        assert float(report["loss.fm"]) == pytest.approx(1.0)
        assert float(report["loss.a"]) > 0

    def test_bad_views(self, capsys, tmp_path):
        """测试判别器文件结构不符"""
        write_tone(tmp_path / "a.wav", seconds=0.5)
        (tmp_path / "views.json").write_text('{"real": []}')

        code, _ = run(
            capsys,
            "loss-eval",
            "--ref",
            str(tmp_path / "a.wav"),
            "--est",
            str(tmp_path / "a.wav"),
            "--views",
            str(tmp_path / "views.json"),
        )

        assert code == 2

    def test_length_mismatch(self, capsys, tmp_path):
        """测试长度不一致"""
        write_tone(tmp_path / "a.wav", seconds=0.5)
        write_tone(tmp_path / "b.wav", seconds=0.6)

        code, _ = run(capsys, "loss-eval", "--ref", str(tmp_path / "a.wav"), "--est", str(tmp_path / "b.wav"))

        assert code == 2


@pytest.mark.unit
class TestGenWeights:
    """gen-weights 测试"""

    def test_weights_and_config(self, capsys, tmp_path):
        """测试写出权重与配置文件"""
        code, report = run(
            capsys,
            "gen-weights",
            "--preset",
            "ultralite",
            "--seed",
            "3",
            "--out",
            str(tmp_path / "w.bin"),
            "--save-config",
            str(tmp_path / "cfg.json"),
        )

        assert code == 0
        cfg = load_config(tmp_path / "cfg.json")
        assert cfg == VocoderConfig.from_preset("ultralite")
        bundle = load_weights(tmp_path / "w.bin", cfg.generator)
        assert bundle.n_scalars == count_params(get_preset("ultralite").generator)
        assert report["params"] == str(bundle.n_scalars)

    def test_config_file_overrides_preset(self, capsys, tmp_path):
        """测试 --config 覆盖 --preset"""
        (tmp_path / "cfg.json").write_text('{"preset": "ultralite", "generator.n_blocks": 1}')

        code, report = run(capsys, "count", "--config", str(tmp_path / "cfg.json"))

        assert code == 0
        assert report["preset"] == "ultralite"
        assert int(report["params"]) < count_params(get_preset("ultralite").generator)

    def test_bad_config(self, capsys, tmp_path):
        """测试配置文件错误"""
        (tmp_path / "cfg.json").write_text('{"preset": "ultralite", "generator.channels": 30}')

        code, report = run(capsys, "count", "--config", str(tmp_path / "cfg.json"))

        assert code == 2
        assert report["error.type"] == "ConfigError"
