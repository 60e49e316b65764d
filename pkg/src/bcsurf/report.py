"""Structured check reports with deterministic emission.

Every verification run produces a ``Report``: an echo of the configuration
plus an ordered list of ``CheckRecord`` rows, one per verified fact.  Each
record carries the name of the check, the anchor naming the mathematical
statement it verifies (drawn from the static ``ANCHORS`` registry), the
computed and expected values as canonical strings, and the elapsed time.

Emission is byte-stable for a fixed configuration and seed: record order is
fixed by the check registry (never by completion order), values are
formatted canonically, and elapsed times are normalized to zero unless
timings are explicitly requested (wall-clock times are the one
run-dependent field, so they are opt-in).
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

# ---------------------------------------------------------------------------
# anchor registry: which mathematical statement each check group verifies
# ---------------------------------------------------------------------------

ANCHORS = {
    "dims": "graded-dimension-binomial",
    "relations": "two-term-letter-identities",
    "presentation": "quadratic-presentation-kernel",
    "resolution": "length-four-complex-exactness",
    "euler": "complex-euler-characteristic",
    "syzygy": "two-generator-kernel-spans",
    "ext": "trivial-module-ext-window",
    "quotient": "two-generator-quotient-growth",
    "orbit": "orbit-point-congruences",
    "critdens": "orbit-determinant-nonvanishing",
    "baselocus": "curve-pair-base-scheme",
    "sheaf": "fat-point-section-count",
    "amonomial": "collapsed-monomial-sections",
    "fibercoh": "fat-fiber-cech-cohomology",
    "mu_t": "degree-shift-bijectivity",
    "filtration": "point-module-flag",
    "r1p": "derived-pushforward-length",
    "pushforward": "pushforward-splitting",
    "leray": "two-route-cohomology-balance",
    "witness": "ascending-ideal-witness",
    "diamond": "rewrite-confluence-count",
    "config": "run-configuration",
}


def _fmt(value) -> str:
    """Canonical single-line rendering of a computed or expected value."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, list)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        items = sorted(value.items(), key=lambda kv: _fmt(kv[0]))
        return "{" + ", ".join(f"{_fmt(k)}: {_fmt(v)}" for k, v in items) + "}"
    if value is None:
        return "-"
    return str(value)


@dataclass(frozen=True)
class CheckRecord:
    """One verified fact: pass/fail with the values that decided it."""

    name: str
    anchor: str
    status: str  # "PASS" or "FAIL"
    computed: str
    expected: str
    ms: int

    def __post_init__(self):
        if self.status not in ("PASS", "FAIL"):
            raise ValueError(f"status must be PASS or FAIL, got {self.status!r}")
        if self.anchor not in ANCHORS.values():
            raise ValueError(f"anchor {self.anchor!r} is not in the registry")


def record(group: str, name: str, computed, expected,
           started: float | None = None) -> CheckRecord:
    """Build a record for check ``group.name``; PASS iff the canonical
    renderings of computed and expected agree."""
    c, e = _fmt(computed), _fmt(expected)
    ms = int((time.monotonic() - started) * 1000) if started is not None else 0
    return CheckRecord(
        name=f"{group}.{name}",
        anchor=ANCHORS[group],
        status="PASS" if c == e else "FAIL",
        computed=c,
        expected=e,
        ms=ms,
    )


def failure(group: str, name: str, message: str,
            started: float | None = None) -> CheckRecord:
    """Record for a check that raised instead of returning a value."""
    ms = int((time.monotonic() - started) * 1000) if started is not None else 0
    return CheckRecord(
        name=f"{group}.{name}",
        anchor=ANCHORS[group],
        status="FAIL",
        computed=f"error: {message}",
        expected="-",
        ms=ms,
    )


@dataclass
class Report:
    """Ordered collection of check records, plus the configuration echo."""

    command: str
    config: dict
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "PASS" for c in self.checks)

    @property
    def counts(self) -> tuple[int, int]:
        passed = sum(1 for c in self.checks if c.status == "PASS")
        return passed, len(self.checks) - passed

    def extend(self, records) -> None:
        self.checks.extend(records)


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------


def _rows(report: Report, timings: bool):
    for c in report.checks:
        yield {
            "name": c.name,
            "anchor": c.anchor,
            "status": c.status,
            "computed": c.computed,
            "expected": c.expected,
            "ms": c.ms if timings else 0,
        }


def to_json(report: Report, timings: bool = False) -> str:
    obj = {
        "command": report.command,
        "config": report.config,
        "checks": list(_rows(report, timings)),
    }
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def to_csv(report: Report, timings: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf,
        fieldnames=["name", "anchor", "status", "computed", "expected", "ms"],
        lineterminator="\n",
    )
    writer.writeheader()
    for row in _rows(report, timings):
        writer.writerow(row)
    return buf.getvalue()


def to_table(report: Report, timings: bool = False) -> str:
    rows = list(_rows(report, timings))
    header = ["name", "status", "computed", "expected"]
    if timings:
        header.append("ms")
    widths = {
        h: max([len(h)] + [len(str(r[h])) for r in rows]) for h in header
    }
    lines = [
        f"command: {report.command}",
        "config: " + " ".join(f"{k}={_fmt(v)}" for k, v in report.config.items()),
        "",
        "  ".join(h.upper().ljust(widths[h]) for h in header).rstrip(),
    ]
    for r in rows:
        lines.append(
            "  ".join(str(r[h]).ljust(widths[h]) for h in header).rstrip()
        )
    passed, failed = report.counts
    lines.append("")
    lines.append(f"{len(rows)} checks: {passed} passed, {failed} failed")
    return "\n".join(lines) + "\n"


EMITTERS = {"json": to_json, "csv": to_csv, "table": to_table}
