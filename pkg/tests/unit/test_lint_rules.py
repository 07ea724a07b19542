from collections import Counter
from dataclasses import replace

import numpy as np
import pytest
from isarlint.commons import Severity
from isarlint.isar_model import split_commands
from isarlint.keywords import BUILTIN_KEYWORDS
from isarlint.lint_engine import Selection, lint_document
from isarlint.lint_rules import (
    BUILTIN_BUNDLES,
    DEFAULT_RULE_SETS,
    FOUNDATIONAL,
    RuleSets,
    builtin_store,
)
from isarlint.outer_lexer import TokenKind, tokenize


def applies(n, method='(rule conjI)'):
    return ''.join(f'  apply {method}\n' for _ in range(n))


SNIPPETS = [
    # apply_isar_switch
    ('apply_isar_switch', 'lemma ‹P›\n  apply (simp only: foo)\n  apply safe\nproof -\nqed\n', 1),
    ('apply_isar_switch', 'lemma ‹P›\nproof -\nqed\n', 0),
    (
        'apply_isar_switch',
        'lemma ‹P›\n  apply simp\nproof -\nqed\nlemma ‹Q›\n  apply auto\nproof (rule x)\nqed\n',
        2,
    ),
    # auto_structural_composition
    ('auto_structural_composition', 'apply (auto; simp)', 1),
    ('auto_structural_composition', 'apply (simp; auto)', 0),
    ('auto_structural_composition', 'apply (auto, simp)', 0),
    # bad_style_command
    ('bad_style_command', 'back', 1),
    ('bad_style_command', 'apply_end simp', 1),
    ('bad_style_command', 'apply simp', 0),
    # complex_isar_initial_method
    ('complex_isar_initial_method', 'proof (simp add: foo)', 1),
    ('complex_isar_initial_method', 'proof (cases n)', 0),
    ('complex_isar_initial_method', 'proof (rule conjI, simp)', 1),
    ('complex_isar_initial_method', 'proof -', 0),
    ('complex_isar_initial_method', 'proof (induct xs)+', 1),
    # complex_method
    ('complex_method', 'by (simp; auto; force)', 1),
    ('complex_method', 'by (simp add: xs)', 0),
    ('complex_method', 'apply ((simp | auto)+)', 1),
    ('complex_method', 'apply (simp, auto)', 0),
    # counter_example_finder
    ('counter_example_finder', 'nitpick', 1),
    ('counter_example_finder', 'nitpick [expect = genuine]', 0),
    ('counter_example_finder', 'nitpick [satisfy]', 0),
    ('counter_example_finder', 'quickcheck [satisfy]', 1),
    ('counter_example_finder', 'quickcheck [random, expect = counterexample]', 0),
    # global_attribute_changes
    ('global_attribute_changes', 'declare foo[simp]\ndeclare foo[simp del]\n', 1),
    ('global_attribute_changes', 'declare foo[simp]\n', 0),
    ('global_attribute_changes', 'declare foo[simp]\ndeclare foo[intro del]\n', 0),
    ('global_attribute_changes', 'declare foo[simp del]\ndeclare bar[simp] foo[simp]\n', 1),
    # global_attribute_on_unnamed_lemma
    ('global_attribute_on_unnamed_lemma', 'lemma [simp]: ‹x = x›', 1),
    ('global_attribute_on_unnamed_lemma', 'lemma foo[simp]: ‹x = x›', 0),
    ('global_attribute_on_unnamed_lemma', 'lemma ‹x = x›', 0),
    ('global_attribute_on_unnamed_lemma', 'corollary (in grp) [intro]: ‹P›', 1),
    # implicit_rule
    ('implicit_rule', 'apply rule', 1),
    ('implicit_rule', 'apply (rule conjI)', 0),
    ('implicit_rule', 'proof rule', 1),
    ('implicit_rule', 'by (rule, simp)', 1),
    # lemma_transforming_attribute
    ('lemma_transforming_attribute', "lemmas foo' = foo[simplified]", 1),
    ('lemma_transforming_attribute', 'lemma foo[simp]: ‹x = x›', 0),
    ('lemma_transforming_attribute', 'lemma bar[OF assms]: ‹x = x›', 1),
    ('lemma_transforming_attribute', 'declare foo[simplified]', 0),
    # low_level_apply_chain
    ('low_level_apply_chain', 'lemma ‹P›\n' + applies(5) + '  done\n', 1),
    ('low_level_apply_chain', 'lemma ‹P›\n' + applies(4) + '  done\n', 0),
    ('low_level_apply_chain', 'lemma ‹P›\n' + applies(10) + '  done\n', 1),
    ('low_level_apply_chain', 'lemma ‹P›\n' + applies(3) + applies(1, 'simp') + applies(3) + '  done\n', 0),
    # tactic_proofs
    ('tactic_proofs', 'apply (subgoal_tac ‹P x›)', 1),
    ('tactic_proofs', 'apply (rule_tac x=‹y› in exI)', 1),
    ('tactic_proofs', 'apply (rule exI)', 0),
    ('tactic_proofs', 'by (simp, (insert foo; erule_tac bar))', 1),
    # unrestricted_auto
    ('unrestricted_auto', 'apply auto\napply simp\ndone\n', 1),
    ('unrestricted_auto', 'apply auto\ndone\n', 0),
    ('unrestricted_auto', 'apply (auto)[1]\napply simp\ndone\n', 0),
    ('unrestricted_auto', 'apply (auto, simp)\napply simp\ndone\n', 0),
    ('unrestricted_auto', 'lemma ‹P›\n  apply auto\n  using foo by blast\n', 1),
    ('unrestricted_auto', 'lemma ‹P›\n  apply auto\n  unfolding bar_def\n  apply simp\n  done\n', 1),
    ('unrestricted_auto', 'lemma ‹P›\n  apply auto\n  qed\n', 0),
    # smt_oracle
    ('smt_oracle', 'declare [[smt_oracle]]', 1),
    ('smt_oracle', 'declare [[smt_oracle = false]]', 0),
    ('smt_oracle', 'declare [[show_types]]', 0),
    ('smt_oracle', 'lemma ‹P›\n  using [[smt_oracle = true]] by smt\n', 1),
    # axiomatization_with_where
    ('axiomatization_with_where', 'axiomatization c where ax: ‹P c›', 1),
    ('axiomatization_with_where', 'axiomatization c :: ‹nat›', 0),
    ('axiomatization_with_where', 'definition c :: ‹nat› where ‹c = 0›', 0),
    # proof_finder
    ('proof_finder', 'sledgehammer', 1),
    ('proof_finder', 'try0', 1),
    ('proof_finder', 'by simp', 0),
    # diagnostic_command
    ('diagnostic_command', 'find_theorems ‹_ + _›', 1),
    ('diagnostic_command', 'find_consts ‹nat ⇒ nat›', 1),
    ('diagnostic_command', 'thm foo', 0),
    # use_by
    ('use_by', 'apply simp\ndone\n', 1),
    ('use_by', 'apply simp\napply auto\ndone\n', 1),
    ('use_by', 'lemma ‹P›\n  apply simp\n  done\n', 1),
    ('use_by', 'lemma ‹P›\n  apply simp\n  apply auto\n  done\n', 1),
    ('use_by', 'lemma ‹P›\n' + applies(3, 'simp') + '  done\n', 0),
    ('use_by', 'lemma ‹P›\n  apply (rule conjI)\n  prefer 2\n  apply simp\n  apply simp\n  done\n', 0),
    ('use_by', 'lemma ‹P›\n  apply (rule conjI)\n  defer\n  apply simp\n  done\n', 0),
    ('use_by', 'lemma ‹P›\n  apply (rule conjI)\n  using bar\n  apply simp\n  done\n', 0),
    ('use_by', 'lemma ‹P›\n  using bar\n  apply simp\n  done\n', 0),
    ('use_by', 'proof -\n  have ‹Q›\n    apply simp\n    done\nqed\n', 1),
]


@pytest.mark.parametrize('lint, text, expected', SNIPPETS)
def test_snippet(lint_snippet, store, lint, text, expected):
    report = lint_snippet(text, lint)
    assert len(report) == expected
    severity = store.get(lint)[0].severity
    assert all(r.severity is severity and r.message for r in report)


def test_every_lint_has_snippets(store):
    triggered = Counter(lint for lint, _, n in SNIPPETS if n)
    quiet = Counter(lint for lint, _, n in SNIPPETS if not n)
    for descriptor in store.descriptors:
        assert triggered[descriptor.name] >= 1
        assert quiet[descriptor.name] >= 1


@pytest.mark.parametrize(
    'lint, severity',
    [
        ('auto_structural_composition', Severity.INFO),
        ('global_attribute_changes', Severity.INFO),
        ('low_level_apply_chain', Severity.INFO),
        ('apply_isar_switch', Severity.WARN),
        ('complex_isar_initial_method', Severity.WARN),
        ('complex_method', Severity.WARN),
        ('implicit_rule', Severity.WARN),
        ('lemma_transforming_attribute', Severity.WARN),
        ('bad_style_command', Severity.ERROR),
        ('global_attribute_on_unnamed_lemma', Severity.ERROR),
        ('tactic_proofs', Severity.ERROR),
        ('unrestricted_auto', Severity.ERROR),
        ('counter_example_finder', Severity.ERROR),
        ('smt_oracle', Severity.ERROR),
    ],
)
def test_severities(store, lint, severity):
    assert store.get(lint)[0].severity is severity


def test_result_positions(lint_snippet):
    [switch] = lint_snippet('lemma ‹P›\n  apply simp\nproof -\nqed\n', 'apply_isar_switch')
    assert (switch.range.start_line, switch.range.start_col) == (3, 1)
    [auto] = lint_snippet('lemma ‹P›\n  apply auto\n  apply simp\n  done\n', 'unrestricted_auto')
    assert auto.range.start_line == 2 and auto.command_index == 1
    [change] = lint_snippet('declare foo[simp]\ndeclare foo[simp del]\n', 'global_attribute_changes')
    assert change.range.start_line == 2
    assert change.message == 'simp of foo is removed again'


def test_apply_chain_spans_run(lint_snippet):
    [chain] = lint_snippet('lemma ‹P›\n' + applies(6) + '  done\n', 'low_level_apply_chain')
    assert (chain.range.start_line, chain.range.end_line) == (2, 7)
    assert chain.message == '6 consecutive low-level apply steps'


@pytest.mark.parametrize(
    'text, replacement',
    [
        ('lemma ‹P›\n  apply simp\n  done\n', 'by simp'),
        ('lemma ‹P›\n  apply simp\n  apply auto\n  done\n', 'by simp auto'),
        ('lemma ‹P›\n  apply (rule conjI)\n  apply (simp add: foo)+\n  done\n', 'by (rule conjI) (simp add: foo)+'),
        ('lemma ‹P›\n  apply simp add: foo\n  done\n', 'by (simp add: foo)'),
    ],
)
def test_use_by_edit(lint_snippet, text, replacement):
    [result] = lint_snippet(text, 'use_by')
    assert result.edit.replacement == replacement
    assert result.message == f'Use "{replacement}"'
    data = text.encode('utf-8')
    r = result.edit.range
    edited = (
        data[: r.byte_offset_start] + replacement.encode('utf-8') + data[r.byte_offset_end :]
    ).decode('utf-8')
    assert edited == f'lemma ‹P›\n  {replacement}\n'
    assert not [t for t in tokenize(edited) if t.kind is TokenKind.ERROR]


def test_only_use_by_edits(lint_snippet):
    text = (
        'lemma [simp]: ‹P›\n  apply (rule_tac x=1 in exI)\n  apply auto\n  apply rule\n'
        '  apply (simp; auto; blast)\nproof -\nqed\nnitpick\nsledgehammer\n'
    )
    report = lint_snippet(text)
    assert len(report) > 5
    assert all(r.edit is None for r in report if r.lint_name != 'use_by')


def test_insert_is_tactic_and_low_level(lint_snippet):
    report = lint_snippet('lemma ‹P›\n' + applies(5, '(insert foo)') + '  done\n')
    names = Counter(r.lint_name for r in report)
    assert names['tactic_proofs'] == 5
    assert names['low_level_apply_chain'] == 1


def test_malformed_commands_are_skipped(lint_snippet):
    report = lint_snippet('lemma ‹P›\n  apply (rule conjI\n  apply rule\n  done\n')
    assert [r.lint_name for r in report] == ['implicit_rule']


SINGLE_COMMAND_LINTS = (
    'bad_style_command',
    'counter_example_finder',
    'diagnostic_command',
    'global_attribute_on_unnamed_lemma',
    'implicit_rule',
    'proof_finder',
    'smt_oracle',
    'tactic_proofs',
    'complex_method',
)

SINGLE_LINES = [
    'back',
    'nitpick',
    'lemma [simp]: ‹P›',
    'declare [[smt_oracle]]',
    'find_theorems ‹x›',
    'sledgehammer',
    'apply (subgoal_tac ‹P›)',
    'apply rule',
    'by (simp; auto, blast)',
    'lemma foo: ‹Q›',
]


def test_single_command_lints_are_local(store):
    rng = np.random.default_rng(3)
    selection = Selection(frozenset(SINGLE_COMMAND_LINTS))

    def located(lines):
        report = lint_document(
            split_commands(tokenize('\n'.join(lines) + '\n')), selection, store
        )
        return Counter((r.lint_name, lines[r.range.start_line - 1]) for r in report)

    expected = located(SINGLE_LINES)
    assert sum(expected.values()) == 9
    for _ in range(20):
        shuffled = [SINGLE_LINES[i] for i in rng.permutation(len(SINGLE_LINES))]
        assert located(shuffled) == expected


def test_rule_sets_validate():
    assert DEFAULT_RULE_SETS.validate(BUILTIN_KEYWORDS) is DEFAULT_RULE_SETS
    with pytest.raises(ValueError):
        RuleSets(apply_chain_threshold=1).validate(BUILTIN_KEYWORDS)
    with pytest.raises(ValueError):
        RuleSets(bad_style_commands=frozenset({'frobnicate'})).validate(BUILTIN_KEYWORDS)


def test_rule_sets_keys():
    assert RuleSets.keys() == [
        'tactic_methods',
        'low_level_methods',
        'simplifier_methods',
        'bad_style_commands',
        'counterexample_commands',
        'proof_finder_commands',
        'diagnostic_commands',
        'transforming_attributes',
        'apply_chain_threshold',
    ]


def test_custom_rule_sets(commands_of):
    rule_sets = replace(
        DEFAULT_RULE_SETS,
        apply_chain_threshold=2,
        diagnostic_commands=frozenset({'thm'}),
    )
    store = builtin_store(rule_sets)
    selection = Selection(frozenset({'low_level_apply_chain', 'diagnostic_command'}))
    text = 'thm foo\nlemma ‹P›\n' + applies(2) + '  done\nfind_theorems ‹x›\n'
    report = lint_document(commands_of(text), selection, store)
    assert [r.lint_name for r in report] == ['diagnostic_command', 'low_level_apply_chain']


def test_bundle_members():
    assert BUILTIN_BUNDLES['foundational'] == (FOUNDATIONAL, False)
    assert len(FOUNDATIONAL) == 12
    assert set(BUILTIN_BUNDLES['default'][0]) == set(FOUNDATIONAL) | {'axiomatization_with_where'}
