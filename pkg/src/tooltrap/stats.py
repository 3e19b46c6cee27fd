"""Campaign accounting: rates, Wilson intervals, effect sizes, reports.

The normal quantile comes from Wichura's AS241 rational approximation
(absolute error well below 1e-8 across the open unit interval), so the
package needs no statistics dependency.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import DomainError, EmptyInput, UndefinedConditional, ZeroSample
from .types import Layer, TrialRecord

# --- normal quantile (AS241, PPND16) ----------------------------------------

_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_B = (
    1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
    5.3941960214247511077e3, 2.1213794301586595867e4, 3.9307895800092710610e4,
    2.8729085735721942674e4, 5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_D = (
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1,
    1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2,
    1.24266094738807843860e-3, 2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4,
    1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF on the open interval (0, 1)."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"normal_quantile needs 0 < p < 1, got {p}")
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = p if q < 0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = _poly(_C, r) / _poly(_D, r)
    else:
        r -= 5.0
        val = _poly(_E, r) / _poly(_F, r)
    return -val if q < 0 else val


# --- interval and effect size ------------------------------------------------


def wilson_interval(
    successes: int, n: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Endpoints are exact at the boundary counts: 0 successes pins the lower
    bound to 0.0 and n successes pins the upper bound to 1.0.
    """
    if n <= 0:
        raise ZeroSample("interval over zero trials is undefined")
    if not 0 <= successes <= n:
        raise DomainError(f"successes {successes} outside [0, {n}]")
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")

    z = normal_quantile(1.0 - (1.0 - confidence) / 2.0)
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    margin = (z / denom) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    low = 0.0 if successes == 0 else max(0.0, center - margin)
    high = 1.0 if successes == n else min(1.0, center + margin)
    return low, high


def cohens_h(p1: float, p2: float) -> float:
    """Absolute difference of arcsine-transformed proportions."""
    for p in (p1, p2):
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"proportion {p} outside [0, 1]")
    return abs(2.0 * math.asin(math.sqrt(p1)) - 2.0 * math.asin(math.sqrt(p2)))


def conditional_rate(numerator: int, denominator: int) -> float:
    """Plain ratio that refuses a zero denominator."""
    if denominator == 0:
        raise UndefinedConditional("conditional rate over zero trials")
    return numerator / denominator


# --- campaign summaries --------------------------------------------------------


@dataclass(frozen=True)
class RateWithCI:
    value: float
    low: float
    high: float
    numerator: int
    denominator: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "ci_low": self.low,
            "ci_high": self.high,
            "numerator": self.numerator,
            "denominator": self.denominator,
        }


def _rate(num: int, den: int, confidence: float) -> RateWithCI | None:
    if den == 0:
        return None
    low, high = wilson_interval(num, den, confidence)
    return RateWithCI(num / den, low, high, num, den)


@dataclass(frozen=True)
class CampaignSummary:
    """Aggregated outcomes for one group of trial records."""

    group: tuple[tuple[str, str], ...]
    n_runs: int
    n_attacked: int
    n_benign: int
    n_succeeded: int
    n_detected_any: int
    n_detected_given_success: int
    n_evaded: int
    n_false_alarms: int
    asr: RateWithCI | None
    detection_given_success: RateWithCI | None
    evasion_rate: RateWithCI | None
    fpr: RateWithCI | None
    layer_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_evaded != self.n_succeeded - self.n_detected_given_success:
            raise ValueError("evaded count must equal succeeded minus detected")

    def to_dict(self) -> dict[str, Any]:
        return {
            "group": dict(self.group),
            "n_runs": self.n_runs,
            "n_attacked": self.n_attacked,
            "n_benign": self.n_benign,
            "n_succeeded": self.n_succeeded,
            "n_detected_any": self.n_detected_any,
            "n_detected_given_success": self.n_detected_given_success,
            "n_evaded": self.n_evaded,
            "n_false_alarms": self.n_false_alarms,
            "asr": self.asr.to_dict() if self.asr else None,
            "detection_given_success": (
                self.detection_given_success.to_dict()
                if self.detection_given_success
                else None
            ),
            "evasion_rate": self.evasion_rate.to_dict() if self.evasion_rate else None,
            "fpr": self.fpr.to_dict() if self.fpr else None,
            "layer_counts": dict(self.layer_counts),
        }


def _group_key(record: TrialRecord, keys: Sequence[str]) -> tuple[tuple[str, str], ...]:
    out = []
    for key in keys:
        value = getattr(record, key)
        out.append((key, "" if value is None else str(value)))
    return tuple(out)


def summarize(
    records: Iterable[TrialRecord | dict[str, Any]],
    group_by: Sequence[str] = (),
    confidence: float = 0.95,
) -> list[CampaignSummary]:
    """Aggregate trial records, optionally split by record fields.

    Conditional rates with a zero denominator are carried as None and
    rendered "n/a"; they are never silent NaNs.
    """
    normalized: list[TrialRecord] = []
    for rec in records:
        normalized.append(
            rec if isinstance(rec, TrialRecord) else TrialRecord.from_dict(rec)
        )
    if not normalized:
        raise EmptyInput("summarize needs at least one record")

    groups: dict[tuple[tuple[str, str], ...], list[TrialRecord]] = {}
    for rec in normalized:
        groups.setdefault(_group_key(rec, group_by), []).append(rec)

    summaries = []
    for key in sorted(groups):
        rows = groups[key]
        attacked = [r for r in rows if r.attack_id is not None]
        benign = [r for r in rows if r.attack_id is None]
        succeeded = [r for r in attacked if r.attack_succeeded]
        det_gs = [r for r in succeeded if r.detected]
        evaded = [r for r in succeeded if r.evaded]
        false_alarms = [r for r in benign if r.detected]
        layer_counts: dict[str, int] = {layer.value: 0 for layer in Layer}
        for r in rows:
            for layer in r.layers_fired:
                layer_counts[layer] = layer_counts.get(layer, 0) + 1

        summaries.append(
            CampaignSummary(
                group=key,
                n_runs=len(rows),
                n_attacked=len(attacked),
                n_benign=len(benign),
                n_succeeded=len(succeeded),
                n_detected_any=sum(1 for r in rows if r.detected),
                n_detected_given_success=len(det_gs),
                n_evaded=len(evaded),
                n_false_alarms=len(false_alarms),
                asr=_rate(len(succeeded), len(attacked), confidence),
                detection_given_success=_rate(
                    len(det_gs), len(succeeded), confidence
                ),
                evasion_rate=_rate(len(evaded), len(succeeded), confidence),
                fpr=_rate(len(false_alarms), len(benign), confidence),
                layer_counts=layer_counts,
            )
        )
    return summaries


# --- rendering -----------------------------------------------------------------


def _pct(x: float, decimals: int = 1) -> str:
    return f"{x * 100:.{decimals}f}%"


def _ci_str(rate: RateWithCI) -> str:
    return f"[{_pct(rate.low, 2)}, {_pct(rate.high, 2)}]"


def _rate_cell(rate: RateWithCI | None, reason: str) -> str:
    if rate is None:
        return f"n/a ({reason})"
    return f"{rate.numerator}/{rate.denominator} = {_pct(rate.value)} {_ci_str(rate)}"


def render_report(summaries: Sequence[CampaignSummary], fmt: str = "text") -> str:
    """Render summaries as an aligned text table or as JSON lines.

    Text output is deterministic for identical inputs. When grouped by
    language, a trailing row reports the detection-rate spread between
    languages in percentage points.
    """
    if fmt == "jsonl":
        return "\n".join(
            json.dumps(s.to_dict(), separators=(",", ":")) for s in summaries
        )

    headers = ["group", "runs", "succeeded", "asr", "detected|success",
               "evasion", "fpr(benign)"]
    rows: list[list[str]] = []
    for s in summaries:
        label = ",".join(f"{k}={v}" for k, v in s.group) or "all"
        rows.append([
            label,
            str(s.n_runs),
            str(s.n_succeeded),
            _rate_cell(s.asr, "no attacked runs"),
            _rate_cell(s.detection_given_success, "0 succeeded"),
            _rate_cell(s.evasion_rate, "0 succeeded"),
            _rate_cell(s.fpr, "no benign runs"),
        ])

    # Language spread row: gap between best and worst detection rates, pp.
    lang_rates = {
        dict(s.group)["language"]: s.detection_given_success
        for s in summaries
        if dict(s.group).get("language") and s.detection_given_success is not None
    }
    if len(lang_rates) >= 2:
        values = [r.value for r in lang_rates.values()]
        gap_pp = (max(values) - min(values)) * 100
        rows.append([
            "language gap", "", "",
            "", f"{gap_pp:.1f} pp spread", "", "",
        ])

    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
    return "\n".join(lines)
