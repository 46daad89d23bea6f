"""
Report types and their two renderings.

The structured rendering is JSON with a fixed key order; its schema is
documented in docs/report-schema.md and versioned by REPORT_SCHEMA_VERSION.
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction

from app.orbifold_ht.constants import (
    FAIL, MAX_WITNESSES, PASS, REPORT_SCHEMA_VERSION, STRUCTURED, TABLE, TOOL_VERSION,
)
from app.orbifold_ht.utils import format_rational


@dataclass(frozen=True)
class CheckResult:
    id: str
    status: str
    checked: int = 0
    failures: int = 0
    witnesses: tuple = ()
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == PASS

    def as_dict(self):
        return {
            "id": self.id,
            "status": self.status,
            "checked": self.checked,
            "failures": self.failures,
            "detail": dict(self.detail),
            "witnesses": [dict(w) for w in self.witnesses],
        }


class Check(object):
    """Accumulates one check's outcome; keeps at most MAX_WITNESSES counterexamples."""

    def __init__(self, check_id, max_witnesses=MAX_WITNESSES):
        self.id = check_id
        self.max_witnesses = max_witnesses
        self.checked = 0
        self.failures = 0
        self.witnesses = []
        self.detail = {}

    def count(self, amount=1):
        self.checked += amount

    def fail(self, witness):
        self.failures += 1
        if len(self.witnesses) < self.max_witnesses:
            self.witnesses.append(witness)

    def expect(self, condition, witness):
        self.count()
        if not condition:
            self.fail(witness() if callable(witness) else witness)
        return condition

    def result(self):
        return CheckResult(id=self.id, status=FAIL if self.failures else PASS, checked=self.checked,
                           failures=self.failures, witnesses=tuple(self.witnesses), detail=dict(self.detail))


@dataclass
class VerificationReport:
    scenario: str
    suite: str
    options: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    tool_version: str = TOOL_VERSION
    timing: float = None

    def add(self, check):
        self.checks.append(check)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, check_id):
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    def as_dict(self, include_timing=False):
        body = {
            "schemaVersion": REPORT_SCHEMA_VERSION,
            "kind": "verification",
            "toolVersion": self.tool_version,
            "scenario": self.scenario,
            "suite": self.suite,
            "options": dict(self.options),
            "status": PASS if self.passed else FAIL,
            "checks": [c.as_dict() for c in self.checks],
        }
        if include_timing and self.timing is not None:
            body["timing"] = round(self.timing, 6)
        return body

    def render(self):
        lines = ["scenario: {}".format(self.scenario), "suite: {}".format(self.suite),
                 "status: {}".format(PASS if self.passed else FAIL)]
        if self.checks:
            width = max(len(c.id) for c in self.checks)
            lines.append("{:<{w}}  {:<6}  {:>8}  {:>8}".format("check", "status", "checked", "failures", w=width))
            for c in self.checks:
                lines.append("{:<{w}}  {:<6}  {:>8}  {:>8}".format(c.id, c.status, c.checked, c.failures, w=width))
            for c in self.checks:
                for witness in c.witnesses:
                    lines.append("  {}: {}".format(c.id, _render_witness(witness)))
        return "\n".join(lines) + "\n"


def _render_witness(witness):
    return ", ".join("{}={}".format(k, witness[k]) for k in sorted(witness))



@dataclass
class BigradedTable:
    """Dimensions of bigraded pieces; bidegrees may be rational."""
    scenario: str
    title: str
    convention: str
    entries: dict = field(default_factory=dict)

    def add(self, bidegree, amount=1):
        key = (Fraction(bidegree[0]), Fraction(bidegree[1]))
        self.entries[key] = self.entries.get(key, 0) + amount

    def __getitem__(self, bidegree):
        return self.entries.get((Fraction(bidegree[0]), Fraction(bidegree[1])), 0)

    def bidegrees(self):
        return sorted(k for k, v in self.entries.items() if v)

    def totals_by_degree(self):
        totals = {}
        for (p, q), dimension in self.entries.items():
            if dimension:
                totals[p + q] = totals.get(p + q, 0) + dimension
        return dict(sorted(totals.items()))

    def degree_vector(self):
        """Totals for degrees 0, 1, ..., max; rational degrees are left out."""
        totals = self.totals_by_degree()
        integral = [d for d in totals if d.denominator == 1]
        if not integral:
            return ()
        return tuple(totals.get(Fraction(d), 0) for d in range(int(max(integral)) + 1))

    def as_dict(self):
        return {
            "schemaVersion": REPORT_SCHEMA_VERSION,
            "kind": "bigraded-table",
            "toolVersion": TOOL_VERSION,
            "scenario": self.scenario,
            "title": self.title,
            "convention": self.convention,
            "entries": [{"p": format_rational(p), "q": format_rational(q), "dimension": self.entries[(p, q)]}
                        for p, q in self.bidegrees()],
            "totals": [{"degree": format_rational(d), "dimension": n} for d, n in self.totals_by_degree().items()],
        }

    def render(self):
        lines = ["scenario: {}".format(self.scenario), "{} ({} bigrading)".format(self.title, self.convention)]
        lines.append("{:>6} {:>6} {:>10}".format("p", "q", "dimension"))
        for p, q in self.bidegrees():
            lines.append("{:>6} {:>6} {:>10}".format(format_rational(p), format_rational(q), self.entries[(p, q)]))
        lines.append("{:>13} {:>10}".format("degree", "total"))
        for degree, total in self.totals_by_degree().items():
            lines.append("{:>13} {:>10}".format(format_rational(degree), total))
        return "\n".join(lines) + "\n"


@dataclass
class RowsReport:
    """Per-element or per-class listings: sectors, ages, fixed loci, products."""
    scenario: str
    kind: str
    columns: tuple
    rows: list = field(default_factory=list)

    def as_dict(self):
        return {
            "schemaVersion": REPORT_SCHEMA_VERSION,
            "kind": self.kind,
            "toolVersion": TOOL_VERSION,
            "scenario": self.scenario,
            "rows": [{c: row[c] for c in self.columns} for row in self.rows],
        }

    def render(self):
        cells = [[str(c) for c in self.columns]] + [[str(row[c]) for c in self.columns] for row in self.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(self.columns))]
        lines = ["scenario: {}".format(self.scenario), "{}".format(self.kind)]
        for r in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"


def emit_report(report, output_format=TABLE, include_timing=False):
    """Render any report; table output never carries timing."""
    if output_format == STRUCTURED:
        if isinstance(report, VerificationReport):
            body = report.as_dict(include_timing=include_timing)
        else:
            body = report.as_dict()
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    if output_format == TABLE:
        return report.render()
    raise ValueError("unknown output format %r" % output_format)
