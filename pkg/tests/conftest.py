from __future__ import annotations

import pytest

from fftamagawa.galois_form import QuasiSplitDatum, parse_cycles
from fftamagawa.rootsys import CartanDatum, cartan_matrix

_ACCEPTANCE: dict[int, tuple[str, bool, float]] = {}


def make(series: str, rank: int, auto: str = "id", res: int = 1, q: int = 5, genus: int = 0, numerator=(1,)) -> QuasiSplitDatum:
    absolute = CartanDatum(series, rank, cartan_matrix(series, rank))
    return QuasiSplitDatum(absolute, parse_cycles(auto, rank), res, q, genus, tuple(numerator))


@pytest.fixture
def datum():
    return make


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _ACCEPTANCE[number] = (title, report.passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, secs = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f} s)")
