from collections import defaultdict

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# outcome of every test carrying a criterion(n) marker, for the summary lines
_criteria: dict[int, list[tuple[str, str, str]]] = defaultdict(list)


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    if call.excinfo is None:
        outcome = "passed"
    elif item.get_closest_marker("xfail") is not None:
        outcome = "xfailed"
    else:
        outcome = "failed"
    _criteria[mark.args[0]].append((item.name, outcome, getattr(item, "criterion_detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        parts = _criteria[n]
        ok = all(outcome == "passed" for _, outcome, _ in parts)
        notes = [f"{name} {outcome}" for name, outcome, _ in parts if outcome != "passed"]
        details = [d for _, _, d in parts if d]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}"
        if details:
            line += "  " + "; ".join(details)
        if notes:
            line += "  [" + ", ".join(notes) + "]"
        tr.write_line(line)
