import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from glwedge.equivariant import analysis, fixtures  # noqa: E402

CORPUS_SIZE = 50
CORPUS_BETTI_DEGREE = 6
CORPUS_I_MAX = 4
STRUCTURAL_DEGREE = 5
STRUCTURAL_RANK = 4
TORSION_RANK = 3


@pytest.fixture(scope="session")
def corpus():
    return fixtures.corpus(CORPUS_SIZE, seed=0, primes=(2, 3))


@pytest.fixture(scope="session")
def corpus_betti(corpus):
    return {P.name: analysis.equivariant_betti(P, CORPUS_I_MAX, CORPUS_BETTI_DEGREE) for P in corpus}


@pytest.fixture(scope="session")
def corpus_structural(corpus):
    return {P.name: analysis.structural_checks(P, STRUCTURAL_DEGREE, STRUCTURAL_RANK) for P in corpus}


@pytest.fixture(scope="session")
def corpus_torsion(corpus):
    return {P.name: analysis.torsion_submodule(P, TORSION_RANK, analysis.DEFAULT_KILL_EXPONENT) for P in corpus}


@pytest.fixture(scope="session")
def curated():
    return fixtures.curated(2)


@pytest.fixture(scope="session")
def curated_shift(curated):
    return {P.name: analysis.shift_theorem_experiment(P, 6, 4) for P in curated}


@pytest.fixture(scope="session")
def curated_resolution(curated):
    return {P.name: analysis.resolution_experiment(P, 4) for P in curated}


# ---------------------------------------------------------------------------
# Acceptance summary: one line per numbered criterion
# ---------------------------------------------------------------------------

CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when not in ("setup", "call"):
        return
    number, title = mark.args
    entry = CRITERIA.setdefault(number, {"title": title, "ok": True, "ran": False})
    if call.excinfo is not None:
        entry["ok"] = False
    if call.when == "call":
        entry["ran"] = True


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        entry = CRITERIA[number]
        verdict = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}  {verdict}  {entry['title']}")
