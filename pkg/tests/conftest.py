import pytest
from hypothesis import HealthCheck, settings

from fogsplit import DEFAULT_CATALOG, build

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def catalog():
    return dict(DEFAULT_CATALOG)


@pytest.fixture
def tiny():
    """Two sites of two cameras and a single core hop."""
    return build(2, 2, 1)


@pytest.fixture
def standard():
    return build(4, 5, 4)


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record and print one acceptance line: verdict(tag, ok, detail)."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(tag, ok, detail, soft=False):
        word = "PASS" if ok else ("FLAG" if soft else "FAIL")
        line = f"{tag:<28} {word}  {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
