"""rndvoc 命令行入口

退出码：0 成功，1 用法错误，2 数据/校验错误，3 内部不变量被破坏。
标准输出只写 key=value 报告，日志走标准错误。
"""

import argparse
import logging
import sys
from collections.abc import Sequence

from src.common.exceptions import InvariantViolationError, UsageError, VocoderError
from src.model_io import PRESET_NAMES

from . import commands
from .report import Report
from .verify import DEGRADATION_PASSES

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class _Parser(argparse.ArgumentParser):
    """用法错误抛出 UsageError，而不是以 2 退出"""

    def error(self, message: str):
        raise UsageError(message, self.prog)


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed 必须在 [0, 2^64) 内: {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"需要正整数: {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"需要正数: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--preset", default="ljspeech", choices=PRESET_NAMES, help="内置预设")
    common.add_argument("--config", help="配置文件，给定时覆盖 --preset")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="标准错误上的日志级别",
    )
    common.add_argument("--threads", type=_positive_int, default=1, help="区域/子带级并行线程数")

    parser = _Parser(prog="rndvoc", description="RNDVoC 声码器信号链")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mel-extract", parents=[common], help="WAV → 对数梅尔谱")
    p.add_argument("--in", dest="input", required=True, help="单声道 WAV")
    p.add_argument("--out", dest="output", required=True, help="梅尔谱张量文件")
    p.set_defaults(handler=commands.mel_extract)

    p = sub.add_parser("range-vocode", parents=[common], help="仅值域投影的基线合成")
    p.add_argument("--in", dest="input", required=True, help="梅尔谱张量文件")
    p.add_argument("--out", dest="output", required=True, help="输出 WAV")
    p.set_defaults(handler=commands.range_vocode)

    p = sub.add_parser("vocode", parents=[common], help="完整生成器合成")
    p.add_argument("--in", dest="input", required=True, help="梅尔谱张量文件")
    p.add_argument("--out", dest="output", required=True, help="输出 WAV")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--weights", help="权重文件")
    source.add_argument("--seed", type=_seed, help="不给权重文件时按种子随机初始化")
    p.add_argument("--dump-spectra", metavar="DIR", help="写出值域/零空间/最终幅度与相位")
    p.set_defaults(handler=commands.vocode)

    p = sub.add_parser("count", parents=[common], help="参数量与乘加次数")
    p.add_argument("--seconds", type=_positive_float, default=5.0, help="音频时长")
    p.set_defaults(handler=commands.count)

    p = sub.add_parser("loss-eval", parents=[common], help="逐项损失")
    p.add_argument("--ref", dest="reference", required=True, help="参考 WAV")
    p.add_argument("--est", dest="estimate", required=True, help="生成 WAV")
    p.add_argument("--views", help="判别器得分与特征（JSON/YAML）")
    p.set_defaults(handler=commands.loss_eval)

    p = sub.add_parser("gen-weights", parents=[common], help="按种子生成权重文件")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", dest="output", required=True, help="权重文件")
    p.add_argument("--save-config", help="同时写出完整配置文件")
    p.set_defaults(handler=commands.gen_weights)

    p = sub.add_parser("verify", parents=[common], help="运行全部不变量检查")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--weights", help="检查指定权重文件而不是随机权重")
    p.add_argument("--frames", type=_positive_int, help="网络检查所用的帧数，缺省为 2 秒")
    p.add_argument(
        "--passes", type=_positive_int, default=DEGRADATION_PASSES, help="退化一致性检查的随机前向次数"
    )
    p.add_argument("--tolerance-scale", type=_positive_float, default=1.0, help="全部上限乘以该系数")
    p.set_defaults(handler=commands.verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"用法错误: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    logging.basicConfig(level=args.log_level, stream=sys.stderr, format=LOG_FORMAT, force=True)
    report = Report()
    try:
        code = args.handler(args, report)
    except VocoderError as e:
        logger.error(str(e))
        report.add("status", "error")
        report.add("error.type", type(e).__name__)
        report.add("error.subject", e.subject)
        report.add("error.message", e.message)
        report.emit()
        return e.exit_code
    except Exception:
        logger.exception("未预期的内部错误")
        return InvariantViolationError.exit_code

    report.add("status", "ok" if code == 0 else "fail")
    report.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
