import pytest

# criterion id -> list of (passed, detail) gathered from the acceptance tests
_ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}
_TITLES: dict[str, str] = {}


@pytest.fixture
def acceptance():
    def record(key: str, title: str, passed: bool, detail: str) -> None:
        _TITLES[key] = title
        _ACCEPTANCE.setdefault(key, []).append((bool(passed), detail))
        print(f"[{key}] {'PASS' if passed else 'FAIL'} {title}: {detail}")
    return record


def _order(key):
    head, _, tail = key.partition("-")
    return (int(head), tail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=_order):
        parts = _ACCEPTANCE[key]
        ok = all(p for p, _ in parts)
        shown = [d for p, d in parts if not p] or [d for _, d in parts]
        label = f"criterion {key}"
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'} {label} {_TITLES[key]} "
            f"[{sum(p for p, _ in parts)}/{len(parts)} sub-cases]: {'; '.join(shown)}")
