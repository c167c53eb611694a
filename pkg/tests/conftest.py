"""Shared fixtures: keep every test away from the real user profile and log dir."""

import pytest

from paxos_mc.config import config_service


@pytest.fixture(autouse=True)
def isolated_profile(tmp_path, monkeypatch):
    """Point the profile at a temporary directory and switch file logging off."""
    monkeypatch.setenv("PAXOS_MC_LOG_TO_FILE", "false")
    monkeypatch.setenv("PAXOS_MC_DIR_CONFIGS__CONFIG_DIR", str(tmp_path / "config"))
    monkeypatch.setenv("PAXOS_MC_DIR_CONFIGS__LOG_DIR", str(tmp_path / "logs"))
    for name in ("MAX_STATES", "MAX_DEPTH", "TIME_BUDGET", "JOBS", "CHANNEL_MODE", "LOG_LEVEL"):
        monkeypatch.delenv(f"PAXOS_MC_{name}", raising=False)
    config_service._settings = None
    yield tmp_path
    config_service._settings = None
