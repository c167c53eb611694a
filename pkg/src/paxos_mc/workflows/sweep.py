"""Parameter sweeps: grid expansion, CSV rows and the minimal-safe-majority summary."""

import csv
import re
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Iterable, Literal, Optional, TextIO

from paxos_mc.constants import CSV_COLUMNS, Verdict
from paxos_mc.explorer import explore
from paxos_mc.schema import ProtocolConfig, Report, ResultRow, SweepSpec
from paxos_mc.utils import ui

_RANGE_RE = re.compile(r"^(?P<start>\d+)\s*-\s*(?P<end>\d+)$")
SUMMARY_PREFIX = "# minimal_safe_maj"


# ---------------------------------------------------------
# Range syntax: `2`, `2,3,4`, `2-4`, `2,4-6`
# ---------------------------------------------------------


def parse_range(text: str) -> list[int]:
    values: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        match = _RANGE_RE.match(part)
        if match:
            start, end = int(match["start"]), int(match["end"])
            if start > end:
                raise ValueError(f"Empty range {part!r}")
            values.extend(range(start, end + 1))
        elif part.isdigit():
            values.append(int(part))
        else:
            raise ValueError(f"Invalid range {part!r}; expected N, N,M or N-M")
    return list(dict.fromkeys(values))


def parse_majorities(text: str) -> Literal["default", "all"] | list[int]:
    text = text.strip().lower()
    if text == "default":
        return "default"
    if text == "all":
        return "all"
    return parse_range(text)


def parse_caps(text: str) -> Optional[list[int]]:
    """`auto` (A*P) or explicit capacities."""
    text = text.strip().lower()
    return None if text == "auto" else parse_range(text)


# ---------------------------------------------------------
# CSV
# ---------------------------------------------------------


def csv_writer(out: TextIO) -> csv.DictWriter:
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    return writer


def read_rows(lines: Iterable[str]) -> list[ResultRow]:
    """Parse sweep output back into rows; summary comment lines are skipped."""
    reader = csv.DictReader(line for line in lines if not line.startswith("#"))
    return [ResultRow.model_validate(row) for row in reader]


def minimal_safe_majorities(rows: Iterable[ResultRow]) -> dict[tuple, Optional[int]]:
    """(proposers, acceptors, variant, receive_mode) -> smallest Safe maj, None if none."""
    groups: dict[tuple, Optional[int]] = defaultdict(lambda: None)
    for row in rows:
        key = (row.proposers, row.acceptors, row.variant, row.receive_mode)
        best = groups[key]
        if row.verdict == Verdict.SAFE and (best is None or row.maj < best):
            groups[key] = row.maj
    return dict(groups)


def summary_lines(rows: Iterable[ResultRow]) -> list[str]:
    lines = []
    for (p, a, variant, receive), maj in sorted(minimal_safe_majorities(rows).items()):
        lines.append(
            f"{SUMMARY_PREFIX},proposers={p},acceptors={a},variant={variant},"
            f"receive_mode={receive},maj={'none' if maj is None else maj}"
        )
    return lines


# ---------------------------------------------------------
# Runner
# ---------------------------------------------------------


class SweepRunner:
    """
    Explores every grid point of a SweepSpec and streams CSV rows as they complete.

    Invalid grid points are reported and skipped. With `jobs > 1` grid points run in
    separate processes; row order then follows completion.
    """

    def __init__(self, spec: SweepSpec, jobs: int = 1):
        self.spec = spec
        self.jobs = max(1, jobs)

    def configs(self) -> list[ProtocolConfig]:
        configs = []
        for params, cfg, error in self.spec.expand():
            if cfg is None:
                shown = ", ".join(f"{k}={v}" for k, v in params.items() if v is not None)
                ui.warning(f"Skipping {shown}: {error}")
                continue
            configs.append(cfg)
        return configs

    def _reports(self, configs: list[ProtocolConfig]) -> Iterable[Report]:
        limits = self.spec.limits
        if self.jobs == 1:
            for cfg in configs:
                yield explore(cfg, limits)
            return
        with ProcessPoolExecutor(max_workers=self.jobs) as pool:
            futures = [pool.submit(explore, cfg, limits) for cfg in configs]
            for future in as_completed(futures):
                yield future.result()

    def run(self, out: TextIO) -> list[ResultRow]:
        writer = csv_writer(out)
        configs = self.configs()
        ui.info(f"Sweeping {len(configs)} configuration(s) with {self.jobs} job(s)")

        rows: list[ResultRow] = []
        for report in self._reports(configs):
            row = ResultRow.from_report(report)
            writer.writerow(row.to_csv_dict())
            out.flush()
            rows.append(row)
            ui.debug(f"{report.config.label()}: {report.verdict}")

        for line in summary_lines(rows):
            out.write(line + "\n")
        out.flush()
        return rows


def run_sweep(spec: SweepSpec, out: TextIO, jobs: int = 1) -> list[ResultRow]:
    return SweepRunner(spec, jobs).run(out)
