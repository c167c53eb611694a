"""
Global constants for paxos-mc.
This module should NOT import any other internal modules to avoid circular dependencies.
"""

from datetime import datetime
from enum import IntEnum, StrEnum
from pathlib import Path
from typing import Final

from platformdirs import PlatformDirs

# ---------------------------------------------------------
# 1. 基础元数据 (Basic Metadata)
# ---------------------------------------------------------
PROJECT_NAME: Final[str] = "paxos-mc"
__version__: Final[str] = "0.1.0"

# ---------------------------------------------------------
# 2. 默认值 (Defaults)
# 模型参数的默认值，用户可以通过 CLI / config profile 覆盖
# ---------------------------------------------------------
DEFAULT_ENCODING: Final[str] = "utf-8"
DEFAULT_LOG_LEVEL_INFO: Final[str] = "INFO"
DEFAULT_PROPOSERS: Final[int] = 2
DEFAULT_ACCEPTORS: Final[int] = 3
DEFAULT_CONCRETE_LEARNERS: Final[int] = 2
DEFAULT_JOBS: Final[int] = 1

# 0 = unbounded
DEFAULT_MAX_STATES: Final[int] = 0
DEFAULT_MAX_DEPTH: Final[int] = 0
DEFAULT_TIME_BUDGET: Final[float] = 0.0

# Encoded states store every field in one signed byte.
MAX_PROCESSES: Final[int] = 16
MAX_CHANNEL_CAP: Final[int] = 127

# "undefined" for hr / hval / vrnd / vval / lastval
UNDEFINED: Final[int] = -1

# ---------------------------------------------------------
# 3. 文件系统与路径 (Files & Paths)
# ---------------------------------------------------------
PKG_ROOT = Path(__file__).resolve().parent
DEV_ROOT: Final[Path] = PKG_ROOT.parent.parent

PLATFORM_DIRS: Final[PlatformDirs] = PlatformDirs(
    appname=PROJECT_NAME, appauthor=PROJECT_NAME, version=__version__
)

USER_CONFIG_DIR: Final[Path] = Path(PLATFORM_DIRS.user_config_dir)
USER_LOG_DIR: Final[Path] = Path(PLATFORM_DIRS.user_log_dir)

ENV_FILENAME: Final[str] = ".env"
CONFIG_FILENAME: Final[str] = "config.yaml"
LOG_FILENAME: Final[str] = datetime.now().strftime("%Y/%m/%d/%H-%M.log")

# CSV schema of `run --csv` and `sweep`; fixed, see docs/cli.md
CSV_COLUMNS: Final[tuple[str, ...]] = (
    "proposers",
    "acceptors",
    "channel_cap",
    "maj",
    "variant",
    "receive_mode",
    "verdict",
    "states",
    "transitions",
    "max_depth",
    "time_ms",
)


# ---------------------------------------------------------
# 4. 枚举值 (Enums)
# ---------------------------------------------------------
class ExitCode(IntEnum):
    """CLI 退出码"""

    SUCCESS = 0  # Safe / all checks pass
    UNSAFE = 1  # Unsafe / a check failed
    LIMIT_EXCEEDED = 2
    INCONCLUSIVE = 3
    USAGE = 64
    USER_CANCEL = 130  # Ctrl+C


class Variant(StrEnum):
    """Which protocol model is explored."""

    BASELINE = "baseline"
    OPTIMIZED = "optimized"


class ReceiveMode(StrEnum):
    """How `??` picks among matching messages."""

    FIRST = "first"
    ANY = "any"


class ChannelMode(StrEnum):
    """Sorted (`!!`) or FIFO (`!`) channel insertion."""

    SORTED = "sorted"
    FIFO = "fifo"


class LearnerMode(StrEnum):
    ABSTRACT = "abstract"
    CONCRETE = "concrete"


class Verdict(StrEnum):
    SAFE = "safe"
    UNSAFE = "unsafe"
    LIMIT_EXCEEDED = "limit-exceeded"


class CheckStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


VERDICT_EXIT_CODES: Final[dict[Verdict, ExitCode]] = {
    Verdict.SAFE: ExitCode.SUCCESS,
    Verdict.UNSAFE: ExitCode.UNSAFE,
    Verdict.LIMIT_EXCEEDED: ExitCode.LIMIT_EXCEEDED,
}


class Suite(StrEnum):
    """Property suites of `paxos-mc check`."""

    LEARNER_REDUCTION = "learner-reduction"
    PROPOSER_REDUCTION = "proposer-reduction"
    VARIANT_EQUIVALENCE = "variant-equivalence"
    RECEIVE_ROBUSTNESS = "receive-robustness"
    CANONICAL_REDUCTION = "canonical-reduction"
    QUORUM_PRECONDITION = "quorum-precondition"
    MAJORITY_MONOTONICITY = "majority-monotonicity"
    ACCEPTOR_BOUND = "acceptor-bound"  # exploratory, not in the default set


DEFAULT_SUITES: Final[tuple[Suite, ...]] = tuple(s for s in Suite if s != Suite.ACCEPTOR_BOUND)
