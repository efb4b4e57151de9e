"""Experimental event tables and witness reports.

Count file format::

    # n = 3
    # modes = 4
    # run = AAA-delay0
    # excluded_multipair = 61
    2,0,1,0, 137
    1,1,1,0, 12
    2,1,1,0, 4, mp

Header lines are ``# key = value`` (``n`` and ``modes`` required; several
pairs may share a line, comma-separated, and ``m`` is accepted for
``modes``).  Every
other non-blank line is a comma-separated occupation vector followed by an
integer count.  A trailing ``mp`` field marks a multi-pair event: its
pattern must carry more than ``n`` photons and its count is added to
``excluded_multipair`` instead of the table.  Lines starting with ``#``
that are not ``key = value`` are comments.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import witness
from .circuitry import CircuitConfig
from .errors import ParameterError, ParseError, ValidationError
from .interference import OutputDistribution, bs_conditional_weights, is_bunched

REPORT_SCHEMA = "nwitness.witness-report/1"
_HEADER_KEYS = {"n", "modes", "run", "excluded_multipair"}
_HEADER_ALIASES = {"m": "modes"}


@dataclass
class EventTable:
    counts: dict
    n: int
    mode_count: int
    run_label: str = ""
    excluded_multipair: int = 0

    def __post_init__(self):
        for pat, c in self.counts.items():
            if len(pat) != self.mode_count:
                raise ValidationError(f"pattern {pat} does not have {self.mode_count} modes")
            if sum(pat) != self.n or any(x < 0 for x in pat):
                raise ValidationError(f"pattern {pat} does not carry n = {self.n} photons")
            if int(c) != c or c < 0:
                raise ValidationError(f"count for {pat} must be a non-negative integer, got {c!r}")
        if self.excluded_multipair < 0:
            raise ValidationError("excluded_multipair must be non-negative")

    @property
    def kept(self) -> int:
        return int(sum(self.counts.values()))

    @property
    def multipair_fraction(self) -> float:
        total = self.kept + self.excluded_multipair
        return self.excluded_multipair / total if total else 0.0

    def bunching_totals(self) -> tuple[int, int]:
        """``(N_b, N_nb)``."""
        nb = sum(c for pat, c in self.counts.items() if is_bunched(pat))
        return int(nb), int(self.kept - nb)

    def to_text(self) -> str:
        lines = [
            f"# n = {self.n}",
            f"# modes = {self.mode_count}",
            f"# run = {self.run_label}",
            f"# excluded_multipair = {self.excluded_multipair}",
        ]
        for pat in sorted(self.counts):
            lines.append(f"{','.join(map(str, pat))}, {self.counts[pat]}")
        return "\n".join(lines) + "\n"


def parse_counts(text: str, source=None) -> EventTable:
    header = {}
    rows = []
    mp_extra = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            parts = body.split(",")
            if not all("=" in part for part in parts):
                parts = [body]
            for part in parts:
                if "=" not in part:
                    continue
                key, value = (p.strip() for p in part.split("=", 1))
                key = _HEADER_ALIASES.get(key, key)
                if key in _HEADER_KEYS:
                    header[key] = (lineno, value)
            continue
        fields = [f.strip() for f in line.split(",")]
        flagged = fields[-1].lower() == "mp"
        if flagged:
            fields = fields[:-1]
        if len(fields) < 2:
            raise ParseError("expected occupations followed by a count", line=lineno, source=source)
        try:
            pattern = tuple(int(f) for f in fields[:-1])
            count = int(fields[-1])
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", line=lineno, source=source)
        if count < 0 or any(x < 0 for x in pattern):
            raise ParseError("counts and occupations must be non-negative", line=lineno, source=source)
        rows.append((lineno, pattern, count, flagged))

    values = {}
    for key in ("n", "modes", "excluded_multipair"):
        if key in header:
            lineno, raw = header[key]
            try:
                values[key] = int(raw)
            except ValueError:
                raise ParseError(f"expected an integer, got {raw!r}", line=lineno, key=key, source=source)
    for key in ("n", "modes"):
        if key not in values:
            raise ValidationError(f"{source or 'count table'}: missing header '# {key} = ...'")
    n, modes = values["n"], values["modes"]
    if not rows:
        raise ValidationError(f"{source or 'count table'}: no event rows")

    counts = {}
    for lineno, pattern, count, flagged in rows:
        if len(pattern) != modes:
            raise ValidationError(
                f"line {lineno}: pattern {pattern} has {len(pattern)} modes, header says {modes}"
            )
        photons = sum(pattern)
        if flagged:
            if photons <= n:
                raise ValidationError(
                    f"line {lineno}: pattern {pattern} flagged multi-pair but carries only {photons} photons"
                )
            mp_extra += count
            continue
        if photons != n:
            raise ValidationError(
                f"line {lineno}: pattern {pattern} carries {photons} photons, expected n = {n}"
            )
        counts[pattern] = counts.get(pattern, 0) + count
    run = header.get("run", (None, ""))[1]
    return EventTable(counts, n, modes, run, values.get("excluded_multipair", 0) + mp_extra)


def load_counts(path) -> EventTable:
    path = Path(path)
    return parse_counts(path.read_text(), source=path)


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    events: int

    def as_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "events": self.events}


def binomial_estimate(successes, total) -> Estimate:
    if total <= 0:
        raise ParameterError("binomial estimate needs a positive number of events")
    p = successes / total
    return Estimate(p, math.sqrt(p * (1.0 - p) / total), int(total))


def multipair_corrected_pb(N_b: int, N_nb: int) -> Estimate:
    """``P'_b = 1 - N_nb/(N_b + N_nb)`` with its binomial standard error."""
    total = N_b + N_nb
    if total <= 0:
        raise ParameterError("no bunching or non-bunching events to estimate from")
    est = binomial_estimate(N_b, total)
    return Estimate(1.0 - N_nb / total, est.stderr, est.events)


@dataclass
class WitnessReport:
    run_label: str
    n: int
    p_b: Estimate
    per_bs: list  # Estimate or None per beam splitter
    ideal_threshold: float
    nonideal: witness.NonidealThreshold
    c1: witness.C1Interval
    tighter_upper: float | None
    verdict_ideal: witness.Verdict
    verdict_nonideal: witness.Verdict
    multipair_fraction: float
    events_kept: int
    events_excluded: int
    schema: str = field(default=REPORT_SCHEMA)

    def as_dict(self) -> dict:
        return {
            "schema": self.schema,
            "run": self.run_label,
            "n": self.n,
            "p_b": self.p_b.as_dict(),
            "per_bs": [None if e is None else e.as_dict() for e in self.per_bs],
            "ideal_threshold": self.ideal_threshold,
            "nonideal_threshold": self.nonideal.as_dict(),
            "violation": self.verdict_ideal.violation,
            "c1_interval": self.c1.as_dict(),
            "tighter_c1_upper": self.tighter_upper,
            "verdict": {
                "ideal": self.verdict_ideal.as_dict(),
                "nonideal": self.verdict_nonideal.as_dict(),
            },
            "events": {
                "kept": self.events_kept,
                "excluded_multipair": self.events_excluded,
                "multipair_fraction": self.multipair_fraction,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def summary(self) -> str:
        rows = [
            f"witness report ({self.schema})",
            f"  run                    {self.run_label or '-'}",
            f"  events kept/excluded   {self.events_kept} / {self.events_excluded}"
            f" ({100 * self.multipair_fraction:.1f}% multi-pair)",
            f"  p_b                    {self.p_b.value:.4f} +- {self.p_b.stderr:.4f}",
        ]
        for k, e in enumerate(self.per_bs, start=1):
            txt = "undefined" if e is None else f"{e.value:.4f} +- {e.stderr:.4f} ({e.events} events)"
            rows.append(f"  p_b(BS{k})               {txt}")
        rows += [
            f"  threshold ideal        {self.ideal_threshold:.4f}",
            f"  threshold non-ideal    {self.nonideal.value:.4f} (worst case {self.nonideal.worst_case:.4f})",
            f"  c1 interval            [{self.c1.lower:.4f}, {self.c1.upper:.4f}]",
            "  tighter c1 upper       "
            + ("-" if self.tighter_upper is None else f"{self.tighter_upper:.4f}"),
            f"  verdict (ideal)        {self.verdict_ideal.describe()}",
            f"  verdict (non-ideal)    {self.verdict_nonideal.describe()}",
        ]
        return "\n".join(rows) + "\n"


def analyze(table: EventTable, cfg: CircuitConfig) -> WitnessReport:
    if table.n != cfg.n:
        raise ValidationError(f"count table has n = {table.n} but circuit has n = {cfg.n}")
    if table.mode_count != cfg.mode_count:
        raise ValidationError(
            f"count table has {table.mode_count} modes but circuit has {cfg.mode_count}"
        )
    N_b, N_nb = table.bunching_totals()
    p_b = multipair_corrected_pb(N_b, N_nb)

    per_bs = []
    for k in range(1, cfg.d + 1):
        bunched, total = bs_conditional_weights(table.counts, table.mode_count, k)
        per_bs.append(binomial_estimate(bunched, total) if total > 0 else None)
    defined = [e.value for e in per_bs if e is not None]

    p_star = witness.ideal_threshold(cfg.n)
    nonideal = witness.nonideal_threshold(cfg)
    return WitnessReport(
        run_label=table.run_label,
        n=cfg.n,
        p_b=p_b,
        per_bs=per_bs,
        ideal_threshold=p_star,
        nonideal=nonideal,
        c1=witness.c1_bounds(p_b.value, cfg.n),
        tighter_upper=witness.tighter_c1_upper(defined) if defined else None,
        verdict_ideal=witness.verdict(p_b.value, p_star, p_b.stderr),
        verdict_nonideal=witness.verdict(p_b.value, nonideal.value, p_b.stderr),
        multipair_fraction=table.multipair_fraction,
        events_kept=table.kept,
        events_excluded=table.excluded_multipair,
    )


def sample_event_table(dist: OutputDistribution, events: int, seed, run_label: str = "") -> EventTable:
    """Multinomial draw of ``events`` outcomes from ``dist`` (seeded)."""
    patterns = dist.patterns()
    p = np.clip(np.array([dist.probabilities[pat] for pat in patterns]), 0.0, None)
    p = p / p.sum()
    draws = np.random.default_rng(seed).multinomial(events, p)
    counts = {pat: int(c) for pat, c in zip(patterns, draws) if c}
    return EventTable(counts, dist.photon_count, dist.mode_count, run_label)


def distribution_to_table(dist: OutputDistribution, scale: float = 1e12, run_label: str = "") -> EventTable:
    """Integer counts proportional to ``dist`` (rounded ``p * scale``)."""
    counts = {pat: int(round(p * scale)) for pat, p in dist.probabilities.items()}
    counts = {pat: c for pat, c in counts.items() if c > 0}
    return EventTable(counts, dist.photon_count, dist.mode_count, run_label)
