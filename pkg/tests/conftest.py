import pytest

_RESULTS = {}


class AcceptanceLog:
    """Collects per-criterion outcomes; a criterion passes only if every part passed."""

    def record(self, number: int, title: str, ok: bool, detail: str):
        entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "details": []})
        entry["ok"] = entry["ok"] and bool(ok)
        entry["details"].append(("ok" if ok else "FAILED") + ": " + detail)
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
        print(line)


@pytest.fixture
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {entry['title']} -- " + "; ".join(entry["details"]))
