from setuptools import find_packages, setup

setup(
    name='isar-lint',
    version='0.1.0',
    description='A standalone linter for Isabelle/Isar theory files',
    packages=find_packages(include=['isarlint', 'isarlint.*']),
    package_data={'isarlint': ['resources/*.json']},
    python_requires='>=3.9',
    install_requires=['jina>=3.0', 'numpy', 'bidict', 'tqdm', 'funcparserlib>=1.0.0'],
    extras_require={'test': ['pytest', 'pytest-mock', 'jsonschema']},
    entry_points={'console_scripts': ['isar-lint=isarlint.cli:main']},
)
