"""Collects acceptance outcomes and prints one line per criterion after the run."""

from __future__ import annotations

import pytest

_OUTCOMES: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    number = props.get("criterion")
    if number is None:
        return
    entry = _OUTCOMES.setdefault(number, {"title": props.get("title", ""), "passed": True, "notes": []})
    if report.outcome != "passed":
        entry["passed"] = False
    if "measured" in props:
        entry["notes"].append(props["measured"])


@pytest.fixture(autouse=True)
def _acceptance_properties(request):
    marker = request.node.get_closest_marker("acceptance")
    if marker is not None:
        number, title = marker.args
        request.node.user_properties.append(("criterion", number))
        request.node.user_properties.append(("title", title))


@pytest.fixture
def measured(request):
    """Record a short measurement string shown in the acceptance summary."""

    def record(text: str) -> None:
        request.node.user_properties.append(("measured", text))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        entry = _OUTCOMES[number]
        status = "PASS" if entry["passed"] else "FAIL"
        notes = "; ".join(entry["notes"])
        line = f"criterion {number:>2} {status}  {entry['title']}"
        terminalreporter.write_line(line + (f"  [{notes}]" if notes else ""))
