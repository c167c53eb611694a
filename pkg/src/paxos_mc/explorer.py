"""Explorer module - exhaustive breadth-first reachability over the Paxos model."""

import time
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple, Optional

from paxos_mc.constants import Verdict
from paxos_mc.encoding import decode, encode
from paxos_mc.model import GlobalState, PaxosModel, TransitionId
from paxos_mc.schema import Limits, ProtocolConfig, Report
from paxos_mc.trace import TraceError, build_steps
from paxos_mc.utils import ui

# encoding -> (parent encoding, transition) ; None for the initial state
Parents = dict[bytes, Optional[tuple[bytes, TransitionId]]]

_TIME_CHECK_INTERVAL = 256
_CHUNKS_PER_WORKER = 4


class Successor(NamedTuple):
    transition: TransitionId
    key: bytes
    violated: bool
    chosen: Optional[tuple[int, int]]
    state: Optional[GlobalState] = None  # dropped when crossing process boundaries


def expand(
    model: PaxosModel, state: GlobalState, key: bytes, check_invariants: bool = False
) -> list[Successor]:
    """Successors of one state, self-loops removed."""
    result: list[Successor] = []
    for t, succ in model.successors(state):
        succ_key = encode(succ)
        if succ_key == key:
            continue
        if check_invariants:
            model.check_monotone(state, succ)
            model.check_round_values(succ)
        result.append(Successor(t, succ_key, succ.violated, model.chosen_pair(t, succ), succ))
    return result


# ---------------------------------------------------------
# Worker process side
# ---------------------------------------------------------
_worker_model: Optional[PaxosModel] = None
_worker_check_invariants = False


def _init_worker(cfg: ProtocolConfig, check_invariants: bool) -> None:
    global _worker_model, _worker_check_invariants
    _worker_model = PaxosModel(cfg)
    _worker_check_invariants = check_invariants


def _expand_chunk(keys: list[bytes]) -> list[list[Successor]]:
    model = _worker_model
    assert model is not None, "worker not initialized"
    return [
        [
            s._replace(state=None)
            for s in expand(model, decode(key, model.cfg), key, _worker_check_invariants)
        ]
        for key in keys
    ]


# ---------------------------------------------------------
# Trace reconstruction
# ---------------------------------------------------------


def reconstruct_trace(parents: Parents, end: bytes) -> list[TransitionId]:
    """Transitions from the initial state to `end`, following predecessor links."""
    path: list[TransitionId] = []
    key = end
    for _ in range(len(parents) + 1):
        if key not in parents:
            raise TraceError(f"missing predecessor link after {len(path)} steps")
        link = parents[key]
        if link is None:
            path.reverse()
            return path
        key, t = link
        path.append(t)
    raise TraceError("predecessor links form a cycle")


# ---------------------------------------------------------
# Explorer
# ---------------------------------------------------------


class LimitReached(Exception):
    """Internal signal: a search bound was hit."""

    pass


class Explorer:
    """
    Level-synchronous BFS over canonical state encodings.

    With `workers > 1` every level is expanded in a process pool and merged in
    frontier order, so the verdict, the counts and the trace match a single-worker run.
    """

    def __init__(
        self,
        cfg: ProtocolConfig,
        limits: Optional[Limits] = None,
        *,
        workers: int = 1,
        exhaustive_violations: bool = False,
        collect_outcomes: bool = False,
        check_invariants: bool = False,
    ):
        self.cfg = cfg
        self.limits = limits or Limits()
        self.workers = max(1, workers)
        self.exhaustive_violations = exhaustive_violations
        self.collect_outcomes = collect_outcomes
        self.check_invariants = check_invariants
        self.model = PaxosModel(cfg)

        self.parents: Parents = {}
        self.transitions_fired = 0
        self.depth_reached = 0
        self.violating_states = 0
        self.first_violation: Optional[bytes] = None
        self.outcomes: set[tuple[int, int]] = set()
        self._interned: dict[TransitionId, TransitionId] = {}
        self._started = 0.0
        self._expanded = 0

    # -- bookkeeping ------------------------------------------------------

    def _check_time(self) -> None:
        budget = self.limits.time_budget
        if budget and time.perf_counter() - self._started > budget:
            raise LimitReached(f"time budget of {budget}s")

    def _admit(self, parent: bytes, succ: Successor, depth: int) -> bool:
        """Record one successor; True when it is new and should be expanded."""
        self.transitions_fired += 1
        if self.collect_outcomes and succ.chosen is not None:
            self.outcomes.add(succ.chosen)
        if succ.key in self.parents:
            return False

        limits = self.limits
        if limits.max_depth and depth > limits.max_depth:
            raise LimitReached(f"max depth {limits.max_depth}")
        if limits.max_states and len(self.parents) >= limits.max_states:
            raise LimitReached(f"max states {limits.max_states}")

        t = self._interned.setdefault(succ.transition, succ.transition)
        self.parents[succ.key] = (parent, t)
        self.depth_reached = max(self.depth_reached, depth)
        if succ.violated:
            self.violating_states += 1
            if self.first_violation is None:
                self.first_violation = succ.key
                ui.debug(f"Violation found at depth {depth}")
        return True

    def _stop(self) -> bool:
        return self.first_violation is not None and not self.exhaustive_violations

    # -- search -----------------------------------------------------------

    def _level_serial(
        self, frontier: list[tuple[bytes, Optional[GlobalState]]], depth: int
    ) -> list[tuple[bytes, Optional[GlobalState]]]:
        next_frontier: list[tuple[bytes, Optional[GlobalState]]] = []
        for key, state in frontier:
            if state is None:
                state = decode(key, self.cfg)
            for succ in expand(self.model, state, key, self.check_invariants):
                if self._admit(key, succ, depth):
                    next_frontier.append((succ.key, succ.state))
                    if self._stop():
                        return next_frontier
            self._expanded += 1
            if self._expanded % _TIME_CHECK_INTERVAL == 0:
                self._check_time()
        return next_frontier

    def _level_parallel(
        self,
        pool: ProcessPoolExecutor,
        frontier: list[tuple[bytes, Optional[GlobalState]]],
        depth: int,
    ) -> list[tuple[bytes, Optional[GlobalState]]]:
        keys = [key for key, _ in frontier]
        size = max(1, -(-len(keys) // (self.workers * _CHUNKS_PER_WORKER)))
        chunks = [keys[i : i + size] for i in range(0, len(keys), size)]

        next_frontier: list[tuple[bytes, Optional[GlobalState]]] = []
        for chunk, expansions in zip(chunks, pool.map(_expand_chunk, chunks)):
            for key, successors in zip(chunk, expansions):
                for succ in successors:
                    if self._admit(key, succ, depth):
                        next_frontier.append((succ.key, None))
                        if self._stop():
                            return next_frontier
            self._check_time()
        return next_frontier

    def _search(self, pool: Optional[ProcessPoolExecutor]) -> Optional[str]:
        """Run the BFS; returns the name of the bound that stopped it, if any."""
        initial = self.model.initial_state()
        initial_key = encode(initial)
        self.parents[initial_key] = None
        frontier: list[tuple[bytes, Optional[GlobalState]]] = [(initial_key, initial)]

        depth = 0
        try:
            while frontier and not self._stop():
                depth += 1
                if pool is None:
                    frontier = self._level_serial(frontier, depth)
                else:
                    frontier = self._level_parallel(pool, frontier, depth)
                ui.debug(
                    f"depth {depth}: {len(frontier)} new states, {len(self.parents)} visited"
                )
        except LimitReached as e:
            return str(e)
        return None

    def run(self) -> Report:
        ui.debug(f"Exploring {self.cfg.label()} with {self.workers} worker(s)")
        self._started = time.perf_counter()
        if self.workers == 1:
            limit = self._search(None)
        else:
            with ProcessPoolExecutor(
                max_workers=self.workers,
                initializer=_init_worker,
                initargs=(self.cfg, self.check_invariants),
            ) as pool:
                limit = self._search(pool)
        elapsed_ms = (time.perf_counter() - self._started) * 1000

        trace = None
        if self.first_violation is not None:
            verdict = Verdict.UNSAFE
            trace = build_steps(self.cfg, reconstruct_trace(self.parents, self.first_violation))
        elif limit is not None:
            verdict = Verdict.LIMIT_EXCEEDED
            ui.debug(f"Search stopped by {limit}")
        else:
            verdict = Verdict.SAFE

        return Report(
            verdict=verdict,
            states_explored=len(self.parents),
            transitions_fired=self.transitions_fired,
            max_depth=self.depth_reached,
            wall_time_ms=elapsed_ms,
            violating_states=self.violating_states,
            config=self.cfg,
            trace=trace,
            outcomes=sorted(self.outcomes),
            complete=limit is None,
        )


def explore(
    cfg: ProtocolConfig,
    limits: Optional[Limits] = None,
    *,
    workers: int = 1,
    exhaustive_violations: bool = False,
    collect_outcomes: bool = False,
    check_invariants: bool = False,
) -> Report:
    """
    Explore every reachable state of `cfg`.

    Stops at the first violation (Unsafe, with a shortest trace), when the frontier
    is exhausted (Safe) or when a bound in `limits` is hit (LimitExceeded).
    """
    return Explorer(
        cfg,
        limits,
        workers=workers,
        exhaustive_violations=exhaustive_violations,
        collect_outcomes=collect_outcomes,
        check_invariants=check_invariants,
    ).run()
