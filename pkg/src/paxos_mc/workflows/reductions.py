"""
Executable checks of the reduction results at desk scale.

Every check explores small configurations exhaustively and returns a
CheckResult: PASS, FAIL, or INCONCLUSIVE when a search bound stopped a run.
"""

from typing import Any, Iterable, Optional

from paxos_mc.constants import (
    ChannelMode,
    CheckStatus,
    LearnerMode,
    ReceiveMode,
    Suite,
    Variant,
    Verdict,
)
from paxos_mc.explorer import explore
from paxos_mc.schema import (
    CheckPlan,
    CheckResult,
    Limits,
    OutcomeSet,
    ProtocolConfig,
    Report,
    default_majority,
)
from paxos_mc.utils import ui


class ExplorationLimitError(Exception):
    """Raised when a result needs a complete exploration and a bound cut it short."""

    def __init__(self, report: Report):
        super().__init__(f"{report.config.label()}: search bound hit before the run completed")
        self.report = report


def with_changes(cfg: ProtocolConfig, **changes: Any) -> ProtocolConfig:
    """Validated copy of `cfg` with some fields replaced."""
    return ProtocolConfig.model_validate({**cfg.model_dump(), **changes})


def combine(name: str, results: Iterable[CheckResult]) -> CheckResult:
    """Fold per-configuration results into one suite result."""
    results = list(results)
    statuses = {r.status for r in results}
    if CheckStatus.FAIL in statuses:
        status = CheckStatus.FAIL
    elif CheckStatus.INCONCLUSIVE in statuses:
        status = CheckStatus.INCONCLUSIVE
    else:
        status = CheckStatus.PASS

    notable = [r for r in results if r.status != CheckStatus.PASS] or results
    return CheckResult(
        name=name,
        status=status,
        configs=[c for r in results for c in r.configs],
        detail="; ".join(r.detail for r in notable if r.detail),
        trace=next((r.trace for r in results if r.trace is not None), None),
    )


class ReductionChecker:
    """
    Runs the property suites. Explorations are memoized per configuration,
    so suites sharing a grid do not explore it twice.

    Args:
        limits: search bounds applied to every exploration
        workers: worker processes per exploration
    """

    def __init__(self, limits: Optional[Limits] = None, workers: int = 1):
        self.limits = limits or Limits()
        self.workers = workers
        self._reports: dict[tuple[ProtocolConfig, bool], Report] = {}

    def explore(self, cfg: ProtocolConfig, exhaustive: bool = False) -> Report:
        """Verdict run; `exhaustive` keeps going past violations and collects outcomes."""
        cached = self._reports.get((cfg, True))
        if cached is None and not exhaustive:
            cached = self._reports.get((cfg, False))
        if cached is not None:
            return cached

        report = explore(
            cfg,
            self.limits,
            workers=self.workers,
            exhaustive_violations=exhaustive,
            collect_outcomes=exhaustive,
        )
        ui.debug(f"{cfg.label()}: {report.verdict} ({report.states_explored} states)")
        self._reports[(cfg, exhaustive)] = report
        return report

    def observable_outcomes(self, cfg: ProtocolConfig) -> OutcomeSet:
        """(round, value) pairs that reach a learner majority in some execution."""
        report = self.explore(cfg, exhaustive=True)
        if not report.complete:
            raise ExplorationLimitError(report)
        return OutcomeSet(pairs=frozenset(report.outcomes))

    def _verdict(self, cfg: ProtocolConfig) -> Optional[Verdict]:
        """Safe or Unsafe; None when a bound hit first."""
        report = self.explore(cfg)
        return None if report.verdict == Verdict.LIMIT_EXCEEDED else report.verdict

    @staticmethod
    def _inconclusive(name: str, cfg: ProtocolConfig) -> CheckResult:
        return CheckResult(
            name=name,
            status=CheckStatus.INCONCLUSIVE,
            configs=[cfg.label()],
            detail=f"{cfg.label()}: search bound hit",
        )

    # ---------------------------------------------------------
    # Single-configuration checks
    # ---------------------------------------------------------

    def check_learner_reduction(self, cfg: ProtocolConfig) -> CheckResult:
        """A single abstract learner finds a violation iff two concrete learners disagree."""
        name = Suite.LEARNER_REDUCTION.value
        abstract = with_changes(cfg, learner_mode=LearnerMode.ABSTRACT, learners=1)
        concrete = with_changes(cfg, learner_mode=LearnerMode.CONCRETE, learners=2)

        verdicts = {}
        for variant_cfg in (abstract, concrete):
            verdict = self._verdict(variant_cfg)
            if verdict is None:
                return self._inconclusive(name, variant_cfg)
            verdicts[variant_cfg.learners_spec] = verdict

        agree = len(set(verdicts.values())) == 1
        detail = " ".join(f"{spec}={verdict}" for spec, verdict in verdicts.items())
        return CheckResult(
            name=name,
            status=CheckStatus.PASS if agree else CheckStatus.FAIL,
            configs=[abstract.label()],
            detail=f"{abstract.label()}: {detail}",
        )

    def check_proposer_reduction(
        self,
        acceptors: int,
        maj: int,
        max_proposers: int,
        variant: Variant = Variant.OPTIMIZED,
    ) -> CheckResult:
        """Safe with two proposers implies Safe with up to `max_proposers`."""
        name = Suite.PROPOSER_REDUCTION.value
        base = ProtocolConfig(proposers=2, acceptors=acceptors, maj=maj, variant=variant)
        label = f"A={acceptors} MAJ={maj} P=2..{max_proposers} {variant}"

        verdict = self._verdict(base)
        if verdict is None:
            return self._inconclusive(name, base)
        if verdict == Verdict.UNSAFE:
            return CheckResult(
                name=name,
                status=CheckStatus.PASS,
                configs=[label],
                detail=f"{label}: unsafe at P=2 (vacuous)",
            )

        for proposers in range(3, max_proposers + 1):
            cfg = ProtocolConfig(proposers=proposers, acceptors=acceptors, maj=maj, variant=variant)
            report = self.explore(cfg)
            if report.verdict == Verdict.LIMIT_EXCEEDED:
                return self._inconclusive(name, cfg)
            if report.verdict == Verdict.UNSAFE:
                return CheckResult(
                    name=name,
                    status=CheckStatus.FAIL,
                    configs=[label],
                    detail=f"{label}: safe at P=2 but unsafe at P={proposers}",
                    trace=report.trace,
                )
        return CheckResult(
            name=name, status=CheckStatus.PASS, configs=[label], detail=f"{label}: safe throughout"
        )

    def check_variant_equivalence(self, cfg: ProtocolConfig) -> CheckResult:
        """Baseline and optimized models reach the same outcome sets and verdicts."""
        name = Suite.VARIANT_EQUIVALENCE.value
        baseline = with_changes(cfg, variant=Variant.BASELINE)
        optimized = with_changes(cfg, variant=Variant.OPTIMIZED)
        try:
            outcomes = [self.observable_outcomes(c) for c in (baseline, optimized)]
        except ExplorationLimitError as e:
            return self._inconclusive(name, e.report.config)

        verdicts = [self.explore(c, exhaustive=True).verdict for c in (baseline, optimized)]
        same = outcomes[0] == outcomes[1] and verdicts[0] == verdicts[1]
        label = baseline.label().removesuffix(f" {Variant.BASELINE}")
        pairs = ", ".join(f"({r},{v})" for r, v in sorted(outcomes[0].pairs))
        detail = f"{label}: outcomes {{{pairs}}}, {verdicts[0]}"
        if not same:
            detail = (
                f"{label}: baseline {sorted(outcomes[0].pairs)} {verdicts[0]} vs "
                f"optimized {sorted(outcomes[1].pairs)} {verdicts[1]}"
            )
        return CheckResult(
            name=name,
            status=CheckStatus.PASS if same else CheckStatus.FAIL,
            configs=[label],
            detail=detail,
        )

    def check_receive_robustness(self, cfg: ProtocolConfig) -> CheckResult:
        """First-match and any-match receives give the same verdict."""
        name = Suite.RECEIVE_ROBUSTNESS.value
        verdicts = {}
        for mode in (ReceiveMode.FIRST, ReceiveMode.ANY):
            mode_cfg = with_changes(cfg, receive_mode=mode)
            verdict = self._verdict(mode_cfg)
            if verdict is None:
                return self._inconclusive(name, mode_cfg)
            verdicts[mode] = verdict

        label = with_changes(cfg, receive_mode=ReceiveMode.FIRST).label()
        agree = verdicts[ReceiveMode.FIRST] == verdicts[ReceiveMode.ANY]
        return CheckResult(
            name=name,
            status=CheckStatus.PASS if agree else CheckStatus.FAIL,
            configs=[label],
            detail=f"{label}: first={verdicts[ReceiveMode.FIRST]} any={verdicts[ReceiveMode.ANY]}",
        )

    def check_canonical_reduction(self, cfg: ProtocolConfig) -> CheckResult:
        """Sorted channels yield strictly fewer distinct states than FIFO channels."""
        name = Suite.CANONICAL_REDUCTION.value
        counts = {}
        for mode in (ChannelMode.SORTED, ChannelMode.FIFO):
            mode_cfg = with_changes(cfg, channel_mode=mode)
            report = self.explore(mode_cfg, exhaustive=True)
            if not report.complete:
                return self._inconclusive(name, mode_cfg)
            counts[mode] = report.states_explored

        sorted_states, fifo_states = counts[ChannelMode.SORTED], counts[ChannelMode.FIFO]
        label = with_changes(cfg, channel_mode=ChannelMode.SORTED).label()
        return CheckResult(
            name=name,
            status=CheckStatus.PASS if sorted_states < fifo_states else CheckStatus.FAIL,
            configs=[label],
            detail=(
                f"{label}: sorted={sorted_states} fifo={fifo_states} "
                f"ratio={fifo_states / sorted_states:.2f}"
            ),
        )

    # ---------------------------------------------------------
    # Checks over the quorum size
    # ---------------------------------------------------------

    def verdicts_by_majority(
        self, proposers: int, acceptors: int, variant: Variant
    ) -> dict[int, Optional[Verdict]]:
        return {
            maj: self._verdict(
                ProtocolConfig(proposers=proposers, acceptors=acceptors, maj=maj, variant=variant)
            )
            for maj in range(1, acceptors + 1)
        }

    def minimal_safe_majority(
        self, proposers: int, acceptors: int, variant: Variant
    ) -> Optional[int]:
        """Smallest Safe MAJ; raises ExplorationLimitError if an earlier MAJ was cut short."""
        for maj in range(1, acceptors + 1):
            cfg = ProtocolConfig(proposers=proposers, acceptors=acceptors, maj=maj, variant=variant)
            report = self.explore(cfg)
            if report.verdict == Verdict.LIMIT_EXCEEDED:
                raise ExplorationLimitError(report)
            if report.verdict == Verdict.SAFE:
                return maj
        return None

    def check_quorum_precondition(
        self, proposers: int, acceptors: int, variant: Variant = Variant.OPTIMIZED
    ) -> CheckResult:
        """The smallest safe MAJ is ACCEPTORS/2+1."""
        name = Suite.QUORUM_PRECONDITION.value
        label = f"P={proposers} A={acceptors} {variant}"
        try:
            minimal = self.minimal_safe_majority(proposers, acceptors, variant)
        except ExplorationLimitError as e:
            return self._inconclusive(name, e.report.config)

        expected = default_majority(acceptors)
        return CheckResult(
            name=name,
            status=CheckStatus.PASS if minimal == expected else CheckStatus.FAIL,
            configs=[label],
            detail=f"{label}: minimal safe MAJ {minimal}, expected {expected}",
        )

    def check_majority_monotonicity(
        self, proposers: int, acceptors: int, variant: Variant = Variant.OPTIMIZED
    ) -> CheckResult:
        """Unsafe at some MAJ implies Unsafe at every smaller MAJ."""
        name = Suite.MAJORITY_MONOTONICITY.value
        label = f"P={proposers} A={acceptors} {variant}"
        verdicts = self.verdicts_by_majority(proposers, acceptors, variant)
        if any(v is None for v in verdicts.values()):
            maj = min(m for m, v in verdicts.items() if v is None)
            return self._inconclusive(
                name,
                ProtocolConfig(proposers=proposers, acceptors=acceptors, maj=maj, variant=variant),
            )

        broken = [
            (smaller, maj)
            for maj, verdict in verdicts.items()
            if verdict == Verdict.UNSAFE
            for smaller in range(1, maj)
            if verdicts[smaller] == Verdict.SAFE
        ]
        row = " ".join(f"{m}:{'U' if v == Verdict.UNSAFE else 'S'}" for m, v in verdicts.items())
        detail = f"{label}: {row}"
        if broken:
            detail += f"; safe at MAJ={broken[0][0]} but unsafe at MAJ={broken[0][1]}"
        return CheckResult(
            name=name,
            status=CheckStatus.FAIL if broken else CheckStatus.PASS,
            configs=[label],
            detail=detail,
        )

    def explore_acceptor_bound(
        self, proposers: int, acceptors: Iterable[int], variant: Variant = Variant.OPTIMIZED
    ) -> CheckResult:
        """
        Exploratory sweep over A at fixed P: does the minimal safe MAJ keep
        following ACCEPTORS/2+1? Evidence only; it proves nothing about larger A,
        so a deviation is reported as inconclusive, never as a failure.
        """
        name = Suite.ACCEPTOR_BOUND.value
        rows, configs = [], []
        status = CheckStatus.PASS
        for a in acceptors:
            configs.append(f"P={proposers} A={a} {variant}")
            try:
                minimal = self.minimal_safe_majority(proposers, a, variant)
            except ExplorationLimitError:
                rows.append(f"A={a}: bound hit")
                status = CheckStatus.INCONCLUSIVE
                continue
            rows.append(f"A={a}: {minimal}")
            if minimal != default_majority(a):
                status = CheckStatus.INCONCLUSIVE
        return CheckResult(
            name=name,
            status=status,
            configs=configs,
            detail="evidence only; minimal safe MAJ " + ", ".join(rows),
        )

    # ---------------------------------------------------------
    # Suites
    # ---------------------------------------------------------

    def run_suite(self, suite: Suite, plan: CheckPlan) -> CheckResult:
        def variant(default: Variant) -> Variant:
            return plan.variant or default

        def config(acceptors: int, maj: int, v: Variant) -> ProtocolConfig:
            return ProtocolConfig(proposers=2, acceptors=acceptors, maj=maj, variant=v)

        ui.step(f"Checking {suite}")
        match suite:
            case Suite.LEARNER_REDUCTION:
                v = variant(Variant.OPTIMIZED)
                results = [
                    self.check_learner_reduction(config(a, m, v))
                    for a in plan.acceptors
                    for m in range(1, a + 1)
                ]
            case Suite.PROPOSER_REDUCTION:
                v = variant(Variant.OPTIMIZED)
                results = [
                    self.check_proposer_reduction(a, m, plan.max_proposers, v)
                    for a in plan.acceptors
                    for m in range(1, a + 1)
                ]
            case Suite.VARIANT_EQUIVALENCE:
                results = [
                    self.check_variant_equivalence(config(a, m, Variant.BASELINE))
                    for a in plan.acceptors
                    for m in (1, 2)
                    if m <= a
                ]
            case Suite.RECEIVE_ROBUSTNESS:
                v = variant(Variant.BASELINE)
                results = [
                    self.check_receive_robustness(config(a, m, v))
                    for a in plan.acceptors
                    for m in sorted({1, default_majority(a)})
                ]
            case Suite.CANONICAL_REDUCTION:
                v = variant(Variant.BASELINE)
                results = [
                    self.check_canonical_reduction(config(a, default_majority(a), v))
                    for a in plan.acceptors
                ]
            case Suite.QUORUM_PRECONDITION:
                v = variant(Variant.OPTIMIZED)
                results = [self.check_quorum_precondition(2, a, v) for a in plan.quorum_acceptors]
            case Suite.MAJORITY_MONOTONICITY:
                v = variant(Variant.OPTIMIZED)
                results = [
                    self.check_majority_monotonicity(2, a, v) for a in plan.quorum_acceptors
                ]
            case Suite.ACCEPTOR_BOUND:
                return self.explore_acceptor_bound(
                    2, plan.bound_acceptors, variant(Variant.OPTIMIZED)
                )
            case _:
                raise ValueError(f"Unknown suite: {suite}")
        return combine(suite.value, results)

    def run(self, plan: CheckPlan) -> list[CheckResult]:
        return [self.run_suite(suite, plan) for suite in plan.suites]


def observable_outcomes(cfg: ProtocolConfig, limits: Optional[Limits] = None) -> OutcomeSet:
    return ReductionChecker(limits).observable_outcomes(cfg)


def check_learner_reduction(cfg: ProtocolConfig, limits: Optional[Limits] = None) -> bool:
    return ReductionChecker(limits).check_learner_reduction(cfg).passed


def check_proposer_reduction(
    acceptors: int, maj: int, max_proposers: int, limits: Optional[Limits] = None
) -> CheckResult:
    """PASS, FAIL (with the offending trace) or INCONCLUSIVE when a bound was hit."""
    return ReductionChecker(limits).check_proposer_reduction(acceptors, maj, max_proposers)
