from __future__ import annotations

import pytest

from lorenz_renorm.certify import CertInput, certify, dt_images
from lorenz_renorm.funcball import Config


@pytest.fixture(scope="session")
def cert_run():
    """One default certification run shared by every test that needs ``F0``."""
    inp = CertInput()
    res, f0, g = certify(inp)
    return inp, res, f0, g


@pytest.fixture(scope="session")
def images(cert_run):
    inp, _, f0, _ = cert_run
    return dt_images(f0, inp.radius, Config())


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the end-of-run summary."""
    results = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(key: str, ok: bool, detail: str) -> None:
        results[key] = (ok, detail)
        assert ok, f"criterion {key}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
