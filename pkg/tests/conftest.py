import numpy as np
import pytest

from axxz import cli, core
from axxz.model import ModelParams


@pytest.fixture(scope="session")
def params4():
    return ModelParams(n_sites=4)


@pytest.fixture(scope="session")
def params6():
    return ModelParams(n_sites=6)


@pytest.fixture(scope="session")
def ed4(params4):
    return core.diagonalize_symmetric(core.build_hamiltonian(params4))


@pytest.fixture(scope="session")
def ed6(params6):
    return core.diagonalize_symmetric(core.build_hamiltonian(params6))


@pytest.fixture(scope="session")
def joint6(params6):
    """(energies, eigenvector columns) in the common H / transfer basis."""
    return core.joint_eigenstates(params6)


@pytest.fixture(scope="session")
def joint4(params4):
    return core.joint_eigenstates(params4)


@pytest.fixture(scope="session")
def table_rows():
    """The bundled N = 6 reference table, parsed."""
    return cli._load_fixture(cli._bundled_fixture())


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260819)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One visible line per acceptance criterion, whatever else ran."""
    import re

    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", "call") != "call":
                continue
            m = re.search(r"test_criterion_(\d+)_(\w+)", rep.nodeid)
            if m:
                rows.append((int(m.group(1)), m.group(2), status == "passed"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for k, name, ok in sorted(rows):
            terminalreporter.write_line(
                f"criterion {k} ({name}): {'PASS' if ok else 'FAIL'}"
            )
