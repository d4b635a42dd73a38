import pytest

from dcpsim import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run a test once per available kernel backend."""
    previous = kernels.BACKEND
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[number, name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {name} ({detail})")
