"""Text, JSON and XML presenters, corpus statistics and lint documentation."""
import json
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .commons import Severity
from .lint_engine import LintResult, LintStore, Report

NO_RATIO = '—'
SCHEMA_PATH = Path(__file__).parent / 'resources' / 'report.schema.json'
XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>\n'

Reports = Union[Report, Sequence[Report]]


def _as_list(reports: Reports) -> List[Report]:
    return [reports] if isinstance(reports, Report) else list(reports)


def _zero_severities() -> Dict[Severity, int]:
    return {severity: 0 for severity in Severity}


@dataclass
class CorpusStats:
    """Lint counts over a set of reports

    Shares are percentages of the total lint count; `lines_per_lint` is the
    SLOC per triggered lint and `None` when nothing triggered.
    """

    per_lint: Dict[str, int] = field(default_factory=dict)
    per_severity: Dict[Severity, int] = field(default_factory=_zero_severities)
    sloc: int = 0
    files: int = 0
    latencies: Tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        self.per_lint = dict(sorted(self.per_lint.items()))
        self.per_severity = {s: self.per_severity.get(s, 0) for s in Severity}

    @property
    def total(self) -> int:
        return sum(self.per_severity.values())

    @property
    def shares(self) -> Dict[Severity, float]:
        counts = np.array([self.per_severity[s] for s in Severity], dtype=np.float64)
        if not self.total:
            return {s: 0.0 for s in Severity}
        percent = counts / counts.sum() * 100.0
        return {s: float(p) for s, p in zip(Severity, percent)}

    @property
    def lines_per_lint(self) -> Optional[float]:
        if not self.total:
            return None
        return float(np.divide(self.sloc, self.total))

    @property
    def median_latency(self) -> Optional[float]:
        return float(np.median(self.latencies)) if self.latencies else None

    @property
    def mean_latency(self) -> Optional[float]:
        return float(np.mean(self.latencies)) if self.latencies else None


def aggregate_stats(reports: Reports) -> CorpusStats:
    """Sum lint and severity counts and SLOC over reports"""
    reports = _as_list(reports)
    per_lint: Counter = Counter()
    per_severity = _zero_severities()
    for report in reports:
        for result in report.results:
            per_lint[result.lint_name] += 1
            per_severity[result.severity] += 1
    return CorpusStats(
        dict(per_lint),
        per_severity,
        sloc=sum(r.sloc for r in reports),
        files=len(reports),
        latencies=tuple(r.elapsed for r in reports),
    )


def merge_stats(a: CorpusStats, b: CorpusStats) -> CorpusStats:
    per_lint = Counter(a.per_lint)
    per_lint.update(b.per_lint)
    return CorpusStats(
        dict(per_lint),
        {s: a.per_severity[s] + b.per_severity[s] for s in Severity},
        sloc=a.sloc + b.sloc,
        files=a.files + b.files,
        latencies=a.latencies + b.latencies,
    )


def _one_decimal(value: float) -> float:
    return round(value, 1)


def format_ratio(stats: CorpusStats) -> str:
    ratio = stats.lines_per_lint
    return NO_RATIO if ratio is None else f'{ratio:.1f}'


# Text


def format_result(path: str, result: LintResult) -> str:
    r = result.range
    return (
        f'{path}:{r.start_line}:{r.start_col}: {result.severity}: '
        f'{result.message} [{result.lint_name}]'
    )


def _text_stats(stats: CorpusStats) -> List[str]:
    lines = [
        f'files: {stats.files}, sloc: {stats.sloc}, '
        f'lines per lint: {format_ratio(stats)}'
    ]
    shares = stats.shares
    for severity in sorted(Severity, reverse=True):
        lines.append(
            f'  {str(severity):<5} {stats.per_severity[severity]:>6} '
            f'({shares[severity]:.1f}%)'
        )
    width = max((len(name) for name in stats.per_lint), default=0)
    for name, count in stats.per_lint.items():
        lines.append(f'  {name:<{width}} {count:>6}')
    return lines


def present_text(reports: Reports, with_stats: bool = False) -> str:
    """One line per result, `path:line:col: severity: message [lint]`, then a
    summary line with the per-severity counts

    :param reports: one report or several, presented in the given order
    :param with_stats: add the corpus statistics block after the summary
    """
    reports = _as_list(reports)
    stats = aggregate_stats(reports)
    lines = [format_result(report.path, result) for report in reports for result in report]
    counts = ', '.join(
        f'{stats.per_severity[s]} {s}' for s in sorted(Severity, reverse=True)
    )
    lines.append(f'{stats.total} lints ({counts})')
    if with_stats:
        lines.extend(_text_stats(stats))
    return '\n'.join(lines) + '\n'


# JSON


def _range_fields(r) -> Dict[str, int]:
    return {
        'start_line': r.start_line,
        'start_col': r.start_col,
        'end_line': r.end_line,
        'end_col': r.end_col,
    }


def _result_dict(result: LintResult) -> Dict:
    edit = None
    if result.edit is not None:
        edit = {**_range_fields(result.edit.range), 'replacement': result.edit.replacement}
    return {
        'name': result.lint_name,
        'severity': str(result.severity),
        **_range_fields(result.range),
        'message': result.message,
        'edit': edit,
    }


def _summary_dict(stats: CorpusStats) -> Dict:
    shares = stats.shares
    ratio = stats.lines_per_lint
    return {
        'files': stats.files,
        'sloc': stats.sloc,
        'total': stats.total,
        'lines_per_lint': None if ratio is None else _one_decimal(ratio),
        'severities': {
            str(s): {'count': stats.per_severity[s], 'share': _one_decimal(shares[s])}
            for s in Severity
        },
        'lints': dict(stats.per_lint),
    }


def report_dict(reports: Reports) -> Dict:
    reports = _as_list(reports)
    return {
        'files': [
            {
                'path': report.path,
                'sloc': report.sloc,
                'lints': [_result_dict(r) for r in report],
            }
            for report in reports
        ],
        'summary': _summary_dict(aggregate_stats(reports)),
    }


def present_json(reports: Reports) -> str:
    return json.dumps(report_dict(reports), indent=2, ensure_ascii=False) + '\n'


# XML


def _element(parent: ET.Element, tag: str, values: Mapping, text_key: str = '') -> ET.Element:
    """A child element with the scalar `values` as attributes, `None` left out.
    The value under `text_key` becomes the element text."""
    element = ET.SubElement(parent, tag)
    for key, value in values.items():
        if key == text_key:
            element.text = value
        elif value is not None and not isinstance(value, (dict, list)):
            element.set(key, str(value))
    return element


def present_xml(reports: Reports) -> str:
    """XML with the element structure of the JSON output"""
    data = report_dict(reports)
    root = ET.Element('report')
    files = ET.SubElement(root, 'files')
    for entry in data['files']:
        lints = ET.SubElement(_element(files, 'file', entry), 'lints')
        for lint in entry['lints']:
            attributes = {k: v for k, v in lint.items() if k != 'message'}
            element = _element(lints, 'lint', attributes)
            ET.SubElement(element, 'message').text = lint['message']
            if lint['edit'] is not None:
                _element(element, 'edit', lint['edit'], text_key='replacement')
    summary = data['summary']
    element = _element(root, 'summary', summary)
    severities = ET.SubElement(element, 'severities')
    for name, values in summary['severities'].items():
        _element(severities, 'severity', {'name': name, **values})
    lints = ET.SubElement(element, 'lints')
    for name, count in summary['lints'].items():
        _element(lints, 'lint', {'name': name, 'count': count})
    ET.indent(root)
    return XML_DECLARATION + ET.tostring(root, encoding='unicode') + '\n'


PRESENTERS = {'text': present_text, 'json': present_json, 'xml': present_xml}


# Documentation


def generate_docs(store: LintStore) -> str:
    """Markdown documentation with one section per lint and one table per bundle"""
    lines = ['# Isabelle lints', '']
    for descriptor in store.descriptors:
        bundles = ', '.join(store.bundles_of(descriptor.name)) or 'none'
        lines += [
            f'## {descriptor.name}',
            '',
            f'- severity: {descriptor.severity}',
            f'- abstraction: {descriptor.abstraction}',
            f'- bundles: {bundles}',
            '',
            descriptor.short_description,
            '',
        ]
        if descriptor.long_description:
            lines += [descriptor.long_description, '']
    if store.bundles:
        lines += ['# Bundles', '']
    for bundle in store.bundles.values():
        kind = ' (add-on)' if bundle.add_on else ''
        lines += [f'## {bundle.name}{kind}', '', '| lint | severity |', '|---|---|']
        for name in sorted(bundle.lints):
            descriptor, _ = store.get(name)
            lines.append(f'| {name} | {descriptor.severity} |')
        lines.append('')
    return '\n'.join(lines).rstrip('\n') + '\n'


def list_lints(store: LintStore) -> str:
    """One line per lint: name, severity, abstraction, bundles"""
    descriptors = store.descriptors
    width = max((len(d.name) for d in descriptors), default=0)
    lines = [
        f'{d.name:<{width}}  {str(d.severity):<5}  {str(d.abstraction):<15}  '
        f'{",".join(store.bundles_of(d.name)) or "-"}'
        for d in descriptors
    ]
    return ''.join(f'{line.rstrip()}\n' for line in lines)
