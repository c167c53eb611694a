import pytest
import yaml
from pydantic import ValidationError

from paxos_mc.config import ConfigService, Settings, load_run_file
from paxos_mc.constants import ChannelMode, LearnerMode, Variant, Verdict
from paxos_mc.schema import (
    OutcomeSet,
    ProtocolConfig,
    Report,
    ResultRow,
    TraceStep,
    parse_learners,
)


class TestSettings:
    def test_defaults(self):
        """Search bounds default to unbounded."""
        settings = Settings()
        assert settings.MAX_STATES == 0
        assert settings.JOBS == 1
        assert settings.CHANNEL_MODE == ChannelMode.SORTED

    def test_environment(self, monkeypatch):
        """PAXOS_MC_ variables override the defaults."""
        monkeypatch.setenv("PAXOS_MC_MAX_STATES", "500")
        monkeypatch.setenv("PAXOS_MC_CHANNEL_MODE", "fifo")
        settings = Settings()
        assert settings.MAX_STATES == 500
        assert settings.CHANNEL_MODE == ChannelMode.FIFO

    def test_profile_beats_environment_and_cli_beats_profile(self, monkeypatch, isolated_profile):
        """cli > profile > environment."""
        monkeypatch.setenv("PAXOS_MC_MAX_STATES", "500")
        monkeypatch.setenv("PAXOS_MC_JOBS", "3")
        profile = isolated_profile / "config" / "config.yaml"
        profile.parent.mkdir(parents=True)
        profile.write_text(yaml.safe_dump({"MAX_STATES": 700, "MAX_DEPTH": 9}))

        service = ConfigService()
        service.load_config(max_depth=12)
        assert service.config.MAX_STATES == 700
        assert service.config.MAX_DEPTH == 12
        assert service.config.JOBS == 3

    def test_save_config(self, isolated_profile):
        """save_config writes the YAML profile."""
        service = ConfigService()
        service.load_config(max_states=42)
        service.save_config()
        data = yaml.safe_load((isolated_profile / "config" / "config.yaml").read_text())
        assert data["MAX_STATES"] == 42
        assert "dir_configs" not in data

    def test_bad_override(self):
        """Invalid CLI overrides are validation errors."""
        with pytest.raises(ValidationError):
            ConfigService().load_config(jobs=0)


class TestRunFile:
    def test_keys_are_normalized(self, tmp_path):
        """Flag spellings and comments are accepted."""
        path = tmp_path / "run.conf"
        path.write_text("# instance\nmax-states=10\nPROPOSERS=2\nvariant=optimized\n")
        assert load_run_file(path) == {
            "max_states": "10",
            "proposers": "2",
            "variant": "optimized",
        }

    def test_missing_file(self, tmp_path):
        """A missing run file is reported."""
        with pytest.raises(FileNotFoundError):
            load_run_file(tmp_path / "none.conf")


class TestProtocolConfig:
    def test_defaults_follow_acceptors(self):
        """MAJ and capacity default from A and P."""
        cfg = ProtocolConfig(proposers=2, acceptors=4)
        assert cfg.maj == 3
        assert cfg.channel_cap == 8
        assert cfg.learners == 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"acceptors": 2, "maj": 3},
            {"acceptors": 3, "channel_cap": 2},
            {"proposers": 0},
            {"acceptors": 200},
        ],
    )
    def test_rejected(self, kwargs):
        """Out-of-range parameters are rejected."""
        with pytest.raises(ValidationError):
            ProtocolConfig(**kwargs)

    def test_pairs_round_trip(self):
        """to_pairs and from_pairs are inverse."""
        cfg = ProtocolConfig(
            proposers=3,
            acceptors=2,
            maj=1,
            variant=Variant.OPTIMIZED,
            learner_mode=LearnerMode.CONCRETE,
            learners=2,
            channel_mode=ChannelMode.FIFO,
        )
        assert ProtocolConfig.from_pairs(cfg.to_pairs()) == cfg

    def test_label(self):
        """Labels show the non-default options only."""
        assert ProtocolConfig(proposers=2, acceptors=3).label() == "P=2 A=3 MAJ=2 cap=6 baseline"

    def test_parse_learners(self):
        """Learner specs are 'abstract' or 'concrete:N'."""
        assert parse_learners("abstract") == (LearnerMode.ABSTRACT, 1)
        assert parse_learners("Concrete:3") == (LearnerMode.CONCRETE, 3)
        with pytest.raises(ValueError):
            parse_learners("concrete:0")


class TestResults:
    def report(self, **kwargs) -> Report:
        data = {
            "verdict": Verdict.SAFE,
            "states_explored": 10,
            "transitions_fired": 12,
            "max_depth": 4,
            "wall_time_ms": 1.5,
            "config": ProtocolConfig(proposers=2, acceptors=2),
        }
        return Report(**{**data, **kwargs})

    def test_unsafe_needs_trace(self):
        """Unsafe reports carry a trace and safe ones do not."""
        with pytest.raises(ValidationError):
            self.report(verdict=Verdict.UNSAFE)
        step = TraceStep(index=1, role="proposer", actor_index=0, rule="send_prepare")
        with pytest.raises(ValidationError):
            self.report(trace=[step])
        assert self.report(verdict=Verdict.UNSAFE, trace=[step]).trace == [step]

    def test_result_row(self):
        """A CSV row keeps the configuration and statistics."""
        report = self.report()
        row = ResultRow.from_report(report)
        assert row.config() == report.config
        assert row.stats() == report.stats()
        assert row.to_csv_dict()["verdict"] == "safe"

    def test_outcome_set(self):
        """Outcomes of different executions may share a round."""
        outcomes = OutcomeSet(pairs=frozenset({(1, 1), (2, 1), (2, 2)}))
        assert outcomes.values == {1, 2}
        assert outcomes == OutcomeSet(pairs=frozenset({(2, 2), (2, 1), (1, 1)}))
