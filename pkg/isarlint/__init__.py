from .isarlint import IsarLinter
