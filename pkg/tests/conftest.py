import json
import pathlib
import sys

import pytest

HERE = pathlib.Path(__file__).parent
FIXTURES = HERE / "fixtures"
DUMPS = FIXTURES / "dumps"

sys.path.insert(0, str(HERE))  # for the oracles module

from screentest.learn import kstar_train  # noqa: E402
from screentest.lexicon import default_lexicon  # noqa: E402
from screentest.runner.dataset_gen import bundled_dataset  # noqa: E402
from screentest.simdevice import bundled_app  # noqa: E402


def dump_paths() -> list[pathlib.Path]:
    return sorted(p for p in DUMPS.rglob("*") if p.suffix in (".xml", ".json"))


def golden_vectors() -> dict[str, list[int]]:
    return json.loads((FIXTURES / "golden_vectors.json").read_text())


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def dataset():
    return bundled_dataset()


@pytest.fixture(scope="session")
def model(dataset):
    return kstar_train(dataset, 20.0)


@pytest.fixture
def k9():
    return bundled_app("k9replica")


@pytest.fixture
def crimetalk():
    return bundled_app("crimetalk_replica")


@pytest.fixture
def kitchensink():
    return bundled_app("kitchensink")


# acceptance verdicts, printed once at the end of the run
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
