import json
import math
from io import StringIO
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from config.config import SCHEMA_VERSION
from src.predicates import CASE_LABELS, Interpretation, Predicate
from src.probability.engines import obtuse_acute_ratio
from src.probability.models import Method, ProbabilityEstimate
from src.probability.validation import CrossValidationReport

PREFERENCE = (Method.CLOSED_FORM, Method.QUADRATURE, Method.MONTE_CARLO)

ROW_NOTES: Dict[Interpretation, str] = {
    Interpretation.CIRCUMCENTER_DISTANCES:
        'every triple also gives an obtuse triangle; the published table counts it and prints 1',
}


@dataclass
class SummaryRow:
    interpretation: Interpretation
    p_exists: Optional[float] = None
    p_acute: Optional[float] = None
    values: Dict[str, float] = field(default_factory=dict)
    agree: bool = True

    @property
    def note(self) -> str:
        return ROW_NOTES.get(self.interpretation, '')

    @property
    def case(self) -> str:
        return CASE_LABELS[self.interpretation]

    @property
    def ratio(self) -> Optional[float]:
        if self.p_exists is None or self.p_acute is None:
            return None
        return obtuse_acute_ratio(self.interpretation, self.p_exists, self.p_acute)

    def to_dict(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {
            'schema_version': SCHEMA_VERSION,
            'case': self.interpretation.value,
            'label': self.case,
            'p_exists': self.p_exists,
            'p_acute': self.p_acute,
            'ratio': self.ratio,
        }
        row.update(self.values)
        row['agree'] = self.agree
        row['note'] = self.note
        return row


def _preferred(estimates: List[ProbabilityEstimate]) -> Optional[ProbabilityEstimate]:
    for method in PREFERENCE:
        for item in estimates:
            if item.method is method:
                return item
    return None


def summarise(reports: List[CrossValidationReport]) -> List[SummaryRow]:
    """
    Aggregate cross-validation reports into one row per interpretation.

    Args:
        reports: Reports for any mix of events

    Returns:
        List of SummaryRow in table order
    """
    rows: Dict[Interpretation, SummaryRow] = {}
    for report in reports:
        interpretation = report.event.interpretation
        row = rows.setdefault(interpretation, SummaryRow(interpretation))
        best = _preferred(report.estimates)
        prefix = report.event.predicate.value
        if best is not None:
            if report.event.predicate is Predicate.EXISTS:
                row.p_exists = best.value
            else:
                row.p_acute = best.value
        for item in report.estimates:
            column = f"{prefix}_{item.method.value.replace('-', '_')}"
            row.values[column] = item.value
            row.values[f"{column}_uncertainty"] = item.uncertainty
        row.agree = row.agree and report.passed

    order = list(Interpretation)
    return sorted(rows.values(), key=lambda r: order.index(r.interpretation))


def records(reports: List[CrossValidationReport]) -> List[Dict[str, Any]]:
    """One flat record per (event, method)."""
    flat = []
    for report in reports:
        for item in report.estimates:
            record = {'schema_version': SCHEMA_VERSION}
            record.update(item.to_record())
            flat.append(record)
    return flat


def summary_frame(rows: List[SummaryRow]) -> pd.DataFrame:
    frame = pd.DataFrame([row.to_dict() for row in rows])
    if frame.empty:
        return frame
    # method columns vary by row; the flags stay last
    tail = ['agree', 'note']
    return frame[[c for c in frame.columns if c not in tail] + tail]


def _clean(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def format_json(reports: List[CrossValidationReport]) -> str:
    rows = summarise(reports)
    document = {
        'schema_version': SCHEMA_VERSION,
        'records': [{k: _clean(v) for k, v in r.items()} for r in records(reports)],
        'summary': [{k: _clean(v) for k, v in row.to_dict().items()} for row in rows],
    }
    return json.dumps(document, indent=2)


def format_csv(reports: List[CrossValidationReport]) -> str:
    return summary_frame(summarise(reports)).to_csv(index=False)


def format_text(reports: List[CrossValidationReport]) -> str:
    """Summary table in the layout of the published one, plus engine notes."""
    frame = summary_frame(summarise(reports))
    if frame.empty:
        return 'No results\n'
    table = frame[['label', 'p_exists', 'p_acute', 'ratio', 'agree']].rename(columns={
        'label': 'Case', 'p_exists': 'Probability', 'p_acute': 'Acute',
        'ratio': 'Ratio Obtuse/Acute', 'agree': 'Agree'})
    lines = [table.to_string(index=False, float_format=lambda v: f"{v:.10g}")]
    for row in summarise(reports):
        if row.note:
            lines.append(f"  {row.case}: {row.note}")
    for report in reports:
        for note in report.notes:
            lines.append(f"  {report.event}: {note}")
    return '\n'.join(lines) + '\n'


def parse_csv_summary(text: str) -> pd.DataFrame:
    return pd.read_csv(StringIO(text))


def format_integer_solutions(solutions: List[tuple]) -> str:
    frame = pd.DataFrame(solutions, columns=['u', 'v', 'w', 'R'])
    if frame.empty:
        return 'u v w R\n'
    return frame.to_string(index=False) + '\n'
