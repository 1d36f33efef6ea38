from hypothesis import settings

# reproducible property runs: the same examples on every invocation
settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")

import pytest

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record (criterion, part, passed, detail) for the end-of-run summary."""
    store = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(criterion: int, part: str, ok: bool, detail: str) -> bool:
        store.setdefault(criterion, []).append((part, bool(ok), detail))
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(_ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(store):
        parts = store[criterion]
        ok = all(p[1] for p in parts)
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}")
        for part, passed, detail in parts:
            terminalreporter.write_line(f"    {'pass' if passed else 'FAIL'}  {part}: {detail}")
