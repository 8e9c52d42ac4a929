import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    entry = _results.setdefault(n, {"title": title, "ok": True, "ran": False, "notes": []})
    if report.when == "call":
        entry["ran"] = True
        for key, value in report.user_properties:
            if key == "note":
                entry["notes"].append(value)
    if report.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        e = _results[n]
        status = "PASS" if e["ok"] and e["ran"] else ("FAIL" if not e["ok"] else "NOT RUN")
        note = f"  [{'; '.join(e['notes'])}]" if e["notes"] else ""
        terminalreporter.write_line(f"criterion {n}: {status} - {e['title']}{note}")
