"""Data models and schemas for paxos-mc."""

from typing import Any, Iterator, Literal, Optional, Self

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from paxos_mc.constants import (
    DEFAULT_ACCEPTORS,
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_STATES,
    DEFAULT_PROPOSERS,
    DEFAULT_SUITES,
    DEFAULT_TIME_BUDGET,
    MAX_CHANNEL_CAP,
    MAX_PROCESSES,
    ChannelMode,
    CheckStatus,
    LearnerMode,
    ReceiveMode,
    Suite,
    Variant,
    Verdict,
)

# ============================================================================
# Protocol configuration
# ============================================================================


def default_majority(acceptors: int) -> int:
    """MAJ = ACCEPTORS/2 + 1"""
    return acceptors // 2 + 1


def describe_error(e: Exception) -> str:
    """One-line message for validation errors."""
    if isinstance(e, ValidationError):
        return "; ".join(err["msg"].removeprefix("Value error, ") for err in e.errors())
    return str(e)


def parse_learners(text: str) -> tuple[LearnerMode, int]:
    """Parse `abstract` or `concrete:N`."""
    text = text.strip().lower()
    if text == LearnerMode.ABSTRACT:
        return LearnerMode.ABSTRACT, 1
    mode, _, count = text.partition(":")
    if mode != LearnerMode.CONCRETE or not count.isdigit() or int(count) < 1:
        raise ValueError(f"Invalid learners spec {text!r}; expected 'abstract' or 'concrete:N'")
    return LearnerMode.CONCRETE, int(count)


class ProtocolConfig(BaseModel):
    """One finite protocol instance: process counts, quorum, channels and model variant."""

    model_config = ConfigDict(frozen=True)

    proposers: int = Field(default=DEFAULT_PROPOSERS, ge=1, le=MAX_PROCESSES)
    acceptors: int = Field(default=DEFAULT_ACCEPTORS, ge=1, le=MAX_PROCESSES)
    maj: int = Field(description="Quorum size; defaults to ACCEPTORS/2+1")
    channel_cap: int = Field(le=MAX_CHANNEL_CAP, description="Channel capacity; defaults to A*P")
    variant: Variant = Variant.BASELINE
    learner_mode: LearnerMode = LearnerMode.ABSTRACT
    learners: int = Field(default=1, ge=1, le=MAX_PROCESSES, description="Concrete learner count")
    receive_mode: ReceiveMode = ReceiveMode.FIRST
    channel_mode: ChannelMode = ChannelMode.SORTED
    faithful_optimized_acceptor: bool = False

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        acceptors = int(data.get("acceptors") or DEFAULT_ACCEPTORS)
        proposers = int(data.get("proposers") or DEFAULT_PROPOSERS)
        if data.get("maj") is None:
            data["maj"] = default_majority(acceptors)
        if data.get("channel_cap") is None:
            data["channel_cap"] = acceptors * proposers
        if data.get("learner_mode", LearnerMode.ABSTRACT) == LearnerMode.ABSTRACT:
            data["learners"] = 1
        return data

    @model_validator(mode="after")
    def _check_ranges(self) -> Self:
        if not 1 <= self.maj <= self.acceptors:
            raise ValueError(f"maj must be in [1, {self.acceptors}], got {self.maj}")
        if self.channel_cap < self.acceptors:
            raise ValueError(
                f"channel_cap {self.channel_cap} < acceptors {self.acceptors}: a broadcast must fit"
            )
        return self

    @property
    def learners_spec(self) -> str:
        if self.learner_mode == LearnerMode.ABSTRACT:
            return LearnerMode.ABSTRACT.value
        return f"{LearnerMode.CONCRETE}:{self.learners}"

    def label(self) -> str:
        """Short human label, e.g. `P=2 A=3 MAJ=2 cap=6 baseline`."""
        parts = [
            f"P={self.proposers}",
            f"A={self.acceptors}",
            f"MAJ={self.maj}",
            f"cap={self.channel_cap}",
            self.variant.value,
        ]
        if self.receive_mode != ReceiveMode.FIRST:
            parts.append(f"receive={self.receive_mode}")
        if self.channel_mode != ChannelMode.SORTED:
            parts.append(self.channel_mode.value)
        if self.learner_mode != LearnerMode.ABSTRACT:
            parts.append(f"learners={self.learners_spec}")
        if self.faithful_optimized_acceptor:
            parts.append("faithful-acceptor")
        return " ".join(parts)

    def to_pairs(self) -> dict[str, str]:
        """Flat key=value form used by trace headers and run files."""
        return {
            "proposers": str(self.proposers),
            "acceptors": str(self.acceptors),
            "maj": str(self.maj),
            "channel_cap": str(self.channel_cap),
            "variant": self.variant.value,
            "learners": self.learners_spec,
            "receive_mode": self.receive_mode.value,
            "channel_mode": self.channel_mode.value,
            "faithful_optimized_acceptor": str(self.faithful_optimized_acceptor).lower(),
        }

    @classmethod
    def from_pairs(cls, pairs: dict[str, str]) -> "ProtocolConfig":
        data: dict[str, Any] = dict(pairs)
        if "learners" in data:
            mode, count = parse_learners(data.pop("learners"))
            data["learner_mode"] = mode
            data["learners"] = count
        return cls.model_validate(data)


class Limits(BaseModel):
    """Search bounds; 0 means unbounded. Exceeding any of them yields LimitExceeded."""

    model_config = ConfigDict(frozen=True)

    max_states: int = Field(default=DEFAULT_MAX_STATES, ge=0)
    max_depth: int = Field(default=DEFAULT_MAX_DEPTH, ge=0)
    time_budget: float = Field(default=DEFAULT_TIME_BUDGET, ge=0, description="Seconds")


# ============================================================================
# Results
# ============================================================================


class TraceStep(BaseModel):
    """One fired transition of a counterexample."""

    index: int
    role: str
    actor_index: int
    rule: str
    message: str = Field(default="-", description="Kind(field=value, ...) or '-'")
    changes: str = Field(default="-", description="field: old->new, ... or '-'")

    @property
    def actor(self) -> str:
        return f"{self.role}[{self.actor_index}]"


class RunStats(BaseModel):
    """Verdict and search statistics of one exploration."""

    verdict: Verdict
    states_explored: int = Field(ge=0)
    transitions_fired: int = Field(ge=0)
    max_depth: int = Field(ge=0)
    wall_time_ms: float = Field(ge=0)
    violating_states: int = Field(default=0, ge=0)


class Report(RunStats):
    """Full exploration result; Unsafe iff a trace is attached."""

    config: ProtocolConfig
    trace: Optional[list[TraceStep]] = None
    outcomes: list[tuple[int, int]] = Field(
        default_factory=list, description="(round, value) pairs that reached a learner majority"
    )
    complete: bool = Field(default=True, description="False when a search bound cut the run short")

    @model_validator(mode="after")
    def _trace_iff_unsafe(self) -> Self:
        if (self.verdict == Verdict.UNSAFE) != (self.trace is not None):
            raise ValueError("a trace must be present exactly when the verdict is unsafe")
        return self

    def stats(self) -> RunStats:
        return RunStats.model_validate(self.model_dump(include=set(RunStats.model_fields)))


class OutcomeSet(BaseModel):
    """
    (round, value) pairs that reach learner majority in some execution.

    Pairs come from every execution, so one round may show up with several values.
    """

    model_config = ConfigDict(frozen=True)

    pairs: frozenset[tuple[int, int]] = frozenset()

    @property
    def values(self) -> set[int]:
        return {v for _, v in self.pairs}


class ResultRow(BaseModel):
    """One CSV row: the fixed sweep schema (see constants.CSV_COLUMNS)."""

    proposers: int
    acceptors: int
    channel_cap: int
    maj: int
    variant: Variant
    receive_mode: ReceiveMode
    verdict: Verdict
    states: int
    transitions: int
    max_depth: int
    time_ms: float

    @classmethod
    def from_report(cls, report: Report) -> "ResultRow":
        cfg = report.config
        return cls(
            proposers=cfg.proposers,
            acceptors=cfg.acceptors,
            channel_cap=cfg.channel_cap,
            maj=cfg.maj,
            variant=cfg.variant,
            receive_mode=cfg.receive_mode,
            verdict=report.verdict,
            states=report.states_explored,
            transitions=report.transitions_fired,
            max_depth=report.max_depth,
            time_ms=round(report.wall_time_ms, 1),
        )

    def to_csv_dict(self) -> dict[str, str]:
        return {key: str(value) for key, value in self.model_dump(mode="json").items()}

    def config(self, channel_mode: ChannelMode = ChannelMode.SORTED) -> ProtocolConfig:
        return ProtocolConfig(
            proposers=self.proposers,
            acceptors=self.acceptors,
            maj=self.maj,
            channel_cap=self.channel_cap,
            variant=self.variant,
            receive_mode=self.receive_mode,
            channel_mode=channel_mode,
        )

    def stats(self) -> RunStats:
        return RunStats(
            verdict=self.verdict,
            states_explored=self.states,
            transitions_fired=self.transitions,
            max_depth=self.max_depth,
            wall_time_ms=self.time_ms,
        )


# ============================================================================
# Sweeps and checks
# ============================================================================


class SweepSpec(BaseModel):
    """Parameter grid of a sweep. `maj` is 'default', 'all' (1..A) or explicit values."""

    proposers: list[int] = Field(default_factory=lambda: [DEFAULT_PROPOSERS])
    acceptors: list[int] = Field(default_factory=lambda: [DEFAULT_ACCEPTORS])
    maj: Literal["default", "all"] | list[int] = "all"
    caps: Optional[list[int]] = Field(default=None, description="None = auto (A*P)")
    variants: list[Variant] = Field(default_factory=lambda: [Variant.BASELINE])
    receive_modes: list[ReceiveMode] = Field(default_factory=lambda: [ReceiveMode.FIRST])
    channel_mode: ChannelMode = ChannelMode.SORTED
    limits: Limits = Field(default_factory=Limits)

    def majorities(self, acceptors: int) -> list[int]:
        if self.maj == "default":
            return [default_majority(acceptors)]
        if self.maj == "all":
            return list(range(1, acceptors + 1))
        return list(self.maj)

    def expand(self) -> Iterator[tuple[dict[str, Any], Optional[ProtocolConfig], Optional[str]]]:
        """Yield (params, config, error) for every grid point; invalid points carry the error."""
        for p in self.proposers:
            for a in self.acceptors:
                for cap in self.caps or [None]:
                    for m in self.majorities(a):
                        for variant in self.variants:
                            for receive in self.receive_modes:
                                params = {
                                    "proposers": p,
                                    "acceptors": a,
                                    "maj": m,
                                    "channel_cap": cap,
                                    "variant": variant,
                                    "receive_mode": receive,
                                    "channel_mode": self.channel_mode,
                                }
                                try:
                                    yield params, ProtocolConfig(**params), None
                                except ValueError as e:
                                    yield params, None, describe_error(e)


class CheckResult(BaseModel):
    """Outcome of one property suite."""

    name: str
    status: CheckStatus
    configs: list[str] = Field(default_factory=list)
    detail: str = ""
    trace: Optional[list[TraceStep]] = None

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS


class CheckPlan(BaseModel):
    """Which property suites to run and the configuration grids they cover."""

    suites: list[Suite] = Field(default_factory=lambda: list(DEFAULT_SUITES))
    acceptors: list[int] = Field(
        default_factory=lambda: [2, 3], description="A values of the two-proposer suites"
    )
    quorum_acceptors: list[int] = Field(
        default_factory=lambda: [2, 3, 4], description="A values of the quorum suites"
    )
    bound_acceptors: list[int] = Field(
        default_factory=lambda: [2, 3, 4, 5], description="A values of the acceptor-bound sweep"
    )
    max_proposers: int = Field(default=3, ge=2, le=MAX_PROCESSES)
    variant: Optional[Variant] = Field(default=None, description="Override each suite's variant")
    limits: Limits = Field(default_factory=Limits)
