"""
Global configuration settings
Priority:
0. cli settings
1. config profile
2. export environment variables
3. .env file (on dev mode)

Per-run protocol parameters live in flat key=value files (see `load_run_file`).
"""

import copy
import logging.config
from pathlib import Path
from typing import Any, Optional

import yaml
from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from paxos_mc.constants import (
    CONFIG_FILENAME,
    DEFAULT_JOBS,
    DEFAULT_LOG_LEVEL_INFO,
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_STATES,
    DEFAULT_TIME_BUDGET,
    DEV_ROOT,
    ENV_FILENAME,
    LOG_FILENAME,
    PROJECT_NAME,
    USER_CONFIG_DIR,
    USER_LOG_DIR,
    ChannelMode,
)
from paxos_mc.utils import ui


def _load_dotenv(override: bool = False):
    # Load environment variables from .env file
    env_path = DEV_ROOT / ENV_FILENAME
    load_dotenv(
        dotenv_path=env_path,
        override=override,
    )


# 日志配置模板；setup_logging 每次使用它的副本
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "[%(asctime)s] [%(levelname)s] [%(module)s:%(funcName)s:%(lineno)d] %(message)s",
            "datefmt": "%Y-%m-%d %H:%M:%S",
        },
        "simple": {
            "format": "%(message)s",  # Rich 会自动加时间
        },
    },
    "handlers": {
        "console": {
            "class": "rich.logging.RichHandler",
            "level": "INFO",
            "formatter": "simple",
            "rich_tracebacks": True,
            "show_path": False,
            "console": "ext://paxos_mc.utils.ui.err_console",
        },
        "file": {
            "class": "logging.FileHandler",
            "level": "DEBUG",
            "formatter": "standard",
            "filename": str(USER_LOG_DIR / LOG_FILENAME),
            "encoding": "utf-8",
        },
    },
    "loggers": {
        PROJECT_NAME: {
            "handlers": ["console", "file"],
            "level": "DEBUG",  # overridden in setup_logging
            "propagate": False,
        },
        "root": {
            "handlers": ["console"],
            "level": "WARNING",
        },
    },
}


def setup_logging(log_level: str, enabled_console: bool = False, log_file: Optional[Path] = None):
    """Setup logging. Log goes to `log_file` only unless enabled_console; no file when log_file is None."""
    logging_config = copy.deepcopy(LOGGING_CONFIG)
    handlers = logging_config["loggers"][PROJECT_NAME]["handlers"]

    if not enabled_console:
        handlers.remove("console")
    if log_file is None:
        handlers.remove("file")
        del logging_config["handlers"]["file"]
    else:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logging_config["handlers"]["file"]["filename"] = str(log_file)

    logging_config["loggers"][PROJECT_NAME]["level"] = log_level.upper()
    logging.config.dictConfig(logging_config)
    ui.debug(f"Logging initialized with level {log_level}")
    if log_file is not None:
        ui.debug(f"Log file: {log_file}")


class DirConfigs(BaseModel):
    """Directory configurations."""

    config_dir: Path = USER_CONFIG_DIR
    log_dir: Path = USER_LOG_DIR

    @property
    def log_file(self) -> Path:
        return self.log_dir / LOG_FILENAME

    @property
    def config_file(self) -> Path:
        return self.config_dir / CONFIG_FILENAME


class Settings(BaseSettings):
    """Checker-wide defaults using Pydantic Settings."""

    # 日志配置
    LOG_LEVEL: str = Field(default=DEFAULT_LOG_LEVEL_INFO, description="Logging level")
    LOG_TO_FILE: bool = Field(default=True, description="Write the log file under the user log dir")

    # 搜索限制 (0 = unbounded)
    MAX_STATES: int = Field(default=DEFAULT_MAX_STATES, ge=0, description="Visited-set bound")
    MAX_DEPTH: int = Field(default=DEFAULT_MAX_DEPTH, ge=0, description="BFS depth bound")
    TIME_BUDGET: float = Field(default=DEFAULT_TIME_BUDGET, ge=0, description="Seconds per exploration")

    JOBS: int = Field(default=DEFAULT_JOBS, ge=1, description="Worker processes")
    CHANNEL_MODE: ChannelMode = Field(
        default=ChannelMode.SORTED, description="Default channel representation"
    )

    dir_configs: DirConfigs = Field(default_factory=DirConfigs)

    model_config = SettingsConfigDict(
        env_file=None,
        env_file_encoding="utf-8",
        env_prefix="PAXOS_MC_",
        env_nested_delimiter="__",
        extra="ignore",
        validate_assignment=True,
    )


# ---------------------------------------------------------
# 配置管理器 (The Config Manager)
# ---------------------------------------------------------
class ConfigService:
    def __init__(self):
        # 懒加载：实例化时才去读取环境变量
        self._settings: Optional[Settings] = None

    def load_config(self, *, dev_mode: bool = False, verbose: bool = False, **kwargs):
        """
        加载配置
        Priority: cli settings > config profile > export environment variables > .env file (on dev mode)
        """
        if dev_mode:
            _load_dotenv(override=False)

        self._settings = Settings()
        dirs = self._settings.dir_configs

        config_file = dirs.config_file
        if config_file.exists():
            try:
                with config_file.open("r", encoding="utf-8") as f:
                    data = yaml.safe_load(f) or {}
                profile = Settings.model_validate(data)
                for key in profile.model_fields_set - {"dir_configs"}:
                    setattr(self._settings, key, getattr(profile, key))
                    ui.debug(f"Loaded config {key} from {config_file}")
            except Exception as e:
                ui.error(f"Failed to load config file {config_file}: {e}")
                raise

        # 覆盖配置
        for key, value in kwargs.items():
            key = key.upper()
            if value is not None and key in Settings.model_fields:
                setattr(self._settings, key, value)
                ui.debug(f"Overridden config {key} from cli")

        setup_logging(
            self._settings.LOG_LEVEL,
            enabled_console=verbose,
            log_file=dirs.log_file if self._settings.LOG_TO_FILE else None,
        )

    @property
    def config(self) -> Settings:
        """对外暴露静态配置"""
        if self._settings is None:
            ui.debug("Configuration accessed before initialization; using defaults")
            self._settings = Settings()
        return self._settings

    def save_config(self):
        """保存当前配置到文件 (YAML 格式)"""
        dump_settings = self.config.model_dump(mode="json", exclude={"dir_configs"})

        config_path = self.config.dir_configs.config_file
        config_path.parent.mkdir(parents=True, exist_ok=True)
        with config_path.open("w", encoding="utf-8") as f:
            yaml.safe_dump(dump_settings, f)


def load_run_file(path: Path) -> dict[str, Any]:
    """Read a flat key=value run file; keys use CLI flag names (`max-states` or `max_states`)."""
    if not path.exists():
        raise FileNotFoundError(f"Run file not found: {path}")
    values = dotenv_values(path)
    return {
        key.strip().lower().replace("-", "_"): value
        for key, value in values.items()
        if value is not None and value != ""
    }


# ---------------------------------------------------------
# 单例导出 (Singleton Export)
# ---------------------------------------------------------
config_service = ConfigService()
