import json
import xml.etree.ElementTree as ET

import jsonschema
import pytest
from isarlint.commons import Severity, SourceRange
from isarlint.lint_engine import LintResult, LintStore, Report
from isarlint.lint_rules import ImplicitRule
from isarlint.presenters import (
    NO_RATIO,
    SCHEMA_PATH,
    CorpusStats,
    aggregate_stats,
    format_ratio,
    generate_docs,
    list_lints,
    merge_stats,
    present_json,
    present_text,
    present_xml,
)

# lint counts per corpus: (info, warn, error)
CORPORA = {
    'hol': ((12, 223, 245), 91199),
    'distribution': ((1081, 2996, 9939), 701539),
    'afp': ((3117, 23202, 33254), 3048665),
}


def _stats(corpus):
    (info, warn, error), sloc = CORPORA[corpus]
    return CorpusStats(
        per_severity={Severity.INFO: info, Severity.WARN: warn, Severity.ERROR: error},
        sloc=sloc,
    )


def _result(name, severity, line, col=1):
    return LintResult(name, severity, f'{name} here', SourceRange(line, col, line, col + 4, 0, 4), 0)


def _reports():
    return [
        Report(
            'a.thy',
            [_result('implicit_rule', Severity.WARN, 3), _result('smt_oracle', Severity.ERROR, 1)],
            sloc=10,
        ),
        Report('b.thy', [_result('proof_finder', Severity.INFO, 2, 5)], sloc=4),
        Report('c.thy', [], sloc=7),
    ]


@pytest.mark.parametrize('corpus, total', [('hol', 480), ('distribution', 14016), ('afp', 59573)])
def test_totals(corpus, total):
    assert _stats(corpus).total == total


def test_hol_shares():
    shares = _stats('hol').shares
    assert shares[Severity.ERROR] == pytest.approx(51.041667, abs=1e-5)
    assert shares[Severity.WARN] == pytest.approx(46.458333, abs=1e-5)
    assert round(shares[Severity.INFO], 1) == 2.5


def test_distribution_error_share():
    share = _stats('distribution').shares[Severity.ERROR]
    assert share > 70.0
    assert round(share, 1) == 70.9


def test_afp_shares():
    shares = _stats('afp').shares
    assert round(shares[Severity.ERROR], 1) == 55.8
    assert round(shares[Severity.WARN], 1) == 38.9
    assert sum(shares.values()) == pytest.approx(100.0)


@pytest.mark.parametrize('corpus, ratio', [('hol', '190.0'), ('distribution', '50.1'), ('afp', '51.2')])
def test_lines_per_lint(corpus, ratio):
    assert format_ratio(_stats(corpus)) == ratio


def test_empty_stats():
    stats = aggregate_stats([])
    assert stats.total == 0 and stats.files == 0 and stats.sloc == 0
    assert stats.lines_per_lint is None
    assert format_ratio(stats) == NO_RATIO
    assert set(stats.shares.values()) == {0.0}
    assert stats.median_latency is None


def test_aggregate_stats():
    stats = aggregate_stats(_reports())
    assert stats.files == 3 and stats.sloc == 21 and stats.total == 3
    assert stats.per_lint == {'implicit_rule': 1, 'proof_finder': 1, 'smt_oracle': 1}
    assert stats.lines_per_lint == 7.0


def test_merge_is_associative():
    a, b, c = ([r] for r in _reports())
    assert aggregate_stats(a + b + c) == merge_stats(
        merge_stats(aggregate_stats(a), aggregate_stats(b)), aggregate_stats(c)
    )
    assert merge_stats(aggregate_stats(a), merge_stats(aggregate_stats(b), aggregate_stats(c))) == aggregate_stats(a + b + c)


def test_latency():
    reports = _reports()
    for report, elapsed in zip(reports, (0.01, 0.03, 0.05)):
        report.elapsed = elapsed
    stats = aggregate_stats(reports)
    assert stats.median_latency == pytest.approx(0.03)
    assert stats.mean_latency == pytest.approx(0.03)


def test_text_empty():
    assert present_text([]) == '0 lints (0 error, 0 warn, 0 info)\n'


def test_text_single_result():
    report = Report('x.thy', [_result('implicit_rule', Severity.WARN, 2, 3)])
    assert present_text(report) == (
        'x.thy:2:3: warn: implicit_rule here [implicit_rule]\n'
        '1 lints (0 error, 1 warn, 0 info)\n'
    )


def test_text_orders_results():
    lines = present_text(_reports()).splitlines()
    assert lines[:3] == [
        'a.thy:1:1: error: smt_oracle here [smt_oracle]',
        'a.thy:3:1: warn: implicit_rule here [implicit_rule]',
        'b.thy:2:5: info: proof_finder here [proof_finder]',
    ]


def test_text_stats():
    lines = present_text(_reports(), with_stats=True).splitlines()
    assert lines[4] == 'files: 3, sloc: 21, lines per lint: 7.0'
    assert lines[5].split() == ['error', '1', '(33.3%)']


def test_json_empty():
    data = json.loads(present_json([]))
    assert data['files'] == []
    assert data['summary']['lines_per_lint'] is None
    assert data['summary']['severities']['error'] == {'count': 0, 'share': 0.0}


def test_json_matches_schema():
    schema = json.loads(SCHEMA_PATH.read_text(encoding='utf-8'))
    for reports in ([], _reports(), _reports()[0]):
        jsonschema.validate(json.loads(present_json(reports)), schema)


def test_json_fields():
    data = json.loads(present_json(_reports()))
    assert [f['path'] for f in data['files']] == ['a.thy', 'b.thy', 'c.thy']
    first = data['files'][0]['lints'][0]
    assert list(first) == [
        'name', 'severity', 'start_line', 'start_col', 'end_line', 'end_col', 'message', 'edit'
    ]
    assert data['summary']['severities']['error']['share'] == 33.3


def test_xml_empty():
    root = ET.fromstring(present_xml([]))
    assert root.tag == 'report'
    assert list(root.find('files')) == []
    assert root.find('summary').get('lines_per_lint') is None


def test_xml_structure():
    text = present_xml(_reports())
    assert text.startswith('<?xml version="1.0" encoding="UTF-8"?>\n')
    root = ET.fromstring(text)
    files = root.findall('files/file')
    assert [f.get('path') for f in files] == ['a.thy', 'b.thy', 'c.thy']
    lint = files[0].find('lints/lint')
    assert (lint.get('name'), lint.get('severity'), lint.get('start_line')) == ('smt_oracle', 'error', '1')
    assert lint.find('message').text == 'smt_oracle here'
    assert lint.find('edit') is None
    severities = {s.get('name'): s.get('count') for s in root.findall('summary/severities/severity')}
    assert severities == {'info': '1', 'warn': '1', 'error': '1'}


def test_docs_cover_every_lint_and_bundle(store):
    docs = generate_docs(store)
    for descriptor in store.descriptors:
        assert docs.count(f'## {descriptor.name}\n') == 1
    for bundle in store.bundles:
        assert f'## {bundle}' in docs
    assert '## pedantic (add-on)' in docs
    assert '| use_by | info |' in docs


def test_docs_empty_store():
    assert generate_docs(LintStore()) == '# Isabelle lints\n'


def test_docs_lint_without_bundle():
    docs = generate_docs(LintStore().register(ImplicitRule()))
    assert '- bundles: none' in docs
    assert '# Bundles' not in docs


def test_list_lints(store):
    lines = list_lints(store).splitlines()
    assert len(lines) == len(store)
    smt = next(line for line in lines if line.startswith('smt_oracle '))
    assert smt.split() == ['smt_oracle', 'error', 'parser', 'afp_mandatory']
