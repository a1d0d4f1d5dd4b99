"""Report containers and deterministic serialization.

A report is a named bundle of parameters, summary statistics, and
individual checks.  Serialization is byte-stable: given the same name,
parameters, and seed, the JSON and CSV artifacts are identical across
runs.  Rationals are serialized as {"num": ..., "den": ...} with string
payloads so arbitrary-precision values survive JSON round trips.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import json


def _unbox(v):
    # numpy scalars (shape-() arrays included) masquerade as numbers but
    # confuse repr() and json; convert them to plain Python scalars.
    if getattr(v, "shape", None) == () and hasattr(v, "item"):
        return v.item()
    return v


def value_to_json(v):
    """Encode a scalar for JSON output; Fractions become num/den string pairs."""
    v = _unbox(v)
    if isinstance(v, bool):
        return v
    if isinstance(v, Fraction):
        return {"num": str(v.numerator), "den": str(v.denominator)}
    if isinstance(v, float):
        return v
    if isinstance(v, int):
        return v
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (list, tuple)):
        return [value_to_json(x) for x in v]
    if isinstance(v, dict):
        return {str(k): value_to_json(x) for k, x in v.items()}
    return str(v)


def value_from_json(v):
    """Inverse of value_to_json for scalars (num/den dicts become Fractions)."""
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return Fraction(int(v["num"]), int(v["den"]))
    return v


def value_to_text(v):
    """Flat text form used in CSV cells and one-line summaries."""
    v = _unbox(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return "%d/%d" % (v.numerator, v.denominator)
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass(frozen=True)
class CheckResult:
    """One verified identity or threshold: an id, both sides, and the verdict."""

    check_id: str
    lhs: object
    rhs: object
    passed: bool

    def summary_line(self):
        tag = "PASS" if self.passed else "FAIL"
        return "[%s] %s lhs=%s rhs=%s" % (
            tag, self.check_id, value_to_text(self.lhs), value_to_text(self.rhs))


@dataclass
class ExperimentReport:
    """Outcome of one experiment or verification run.

    data holds named numeric series (lists of tuples) for figure and
    gnuplot output; it is not part of the JSON artifact.
    """

    name: str
    params: dict
    seed: object = None
    sample_count: object = None
    statistics: dict = field(default_factory=dict)
    distances: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add_check(self, check_id, lhs, rhs, passed):
        self.checks.append(CheckResult(check_id, lhs, rhs, bool(passed)))

    def to_json_dict(self):
        stats = dict(self.statistics)
        if self.distances:
            stats.update(self.distances)
        if self.sample_count is not None:
            stats["sample_count"] = self.sample_count
        return {
            "name": self.name,
            "params": {k: value_to_json(v) for k, v in sorted(self.params.items())},
            "seed": self.seed,
            "checks": [
                {
                    "id": c.check_id,
                    "lhs": value_to_json(c.lhs),
                    "rhs": value_to_json(c.rhs),
                    "pass": c.passed,
                }
                for c in self.checks
            ],
            "stats": {k: value_to_json(v) for k, v in sorted(stats.items())},
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True,
                          separators=(",", ":")) + "\n"

    def to_csv(self):
        lines = ["check_id,lhs,rhs,pass"]
        for c in self.checks:
            lines.append("%s,%s,%s,%s" % (
                c.check_id, value_to_text(c.lhs), value_to_text(c.rhs),
                "true" if c.passed else "false"))
        return "\n".join(lines) + "\n"

    def summary_lines(self):
        return [c.summary_line() for c in self.checks]


def merge_reports(name, reports, params=None, seed=None):
    """Concatenate the checks of several reports under one composite name."""
    merged = ExperimentReport(name=name, params=params or {}, seed=seed)
    for rep in reports:
        prefix = rep.name
        for c in rep.checks:
            merged.checks.append(CheckResult(
                "%s.%s" % (prefix, c.check_id), c.lhs, c.rhs, c.passed))
        for k, v in rep.statistics.items():
            merged.statistics["%s.%s" % (prefix, k)] = v
        for k, v in rep.distances.items():
            merged.distances["%s.%s" % (prefix, k)] = v
    return merged
