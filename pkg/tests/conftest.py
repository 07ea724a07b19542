import os

import pytest
from isarlint.isar_model import split_commands
from isarlint.keywords import BUILTIN_KEYWORDS
from isarlint.lint_engine import Selection, lint_document
from isarlint.lint_rules import builtin_store
from isarlint.outer_lexer import tokenize

cur_dir = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture(scope='session')
def keywords():
    return BUILTIN_KEYWORDS


@pytest.fixture(scope='session')
def store():
    return builtin_store()


@pytest.fixture(scope='session')
def fixtures_dir():
    return os.path.join(cur_dir, 'fixtures')


@pytest.fixture(scope='session')
def golden_dir():
    return os.path.join(cur_dir, 'golden')


@pytest.fixture()
def commands_of():
    def commands_of_inner(text):
        return split_commands(tokenize(text))

    return commands_of_inner


@pytest.fixture()
def lint_snippet(store):
    def lint_snippet_inner(text, *lints, path='snippet.thy'):
        # all registered lints when none are named
        names = lints or tuple(d.name for d in store.descriptors)
        return lint_document(
            split_commands(tokenize(text)), Selection(frozenset(names)), store, path
        )

    return lint_snippet_inner
