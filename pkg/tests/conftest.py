import pathlib

import pytest

from soliscope.pipeline import analyze_source

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def analyze():
    def _analyze(source: str, filename: str = "<test>"):
        return analyze_source(source, filename)

    return _analyze


def fixture_path(*parts: str) -> pathlib.Path:
    return FIXTURES.joinpath(*parts)


def read_fixture(*parts: str) -> str:
    return fixture_path(*parts).read_text(encoding="utf-8")


def all_fixture_files() -> list[pathlib.Path]:
    return sorted(FIXTURES.rglob("*.sol"))
