import shutil
import subprocess
from pathlib import Path

import pytest

NATIVE = Path(__file__).parent / "native" / "mini_ipasir.c"
CORPUS_DIR = Path(__file__).parent.parent / "corpus"


def _compile(out: Path, *defines: str) -> Path:
    cc = shutil.which("cc") or shutil.which("gcc") or shutil.which("clang")
    if cc is None:
        pytest.skip("no C compiler available")
    subprocess.run([cc, "-O2", "-shared", "-fPIC", *defines, "-o", str(out), str(NATIVE)], check=True)
    return out


@pytest.fixture(scope="session")
def mini_ipasir(tmp_path_factory) -> str:
    """Path of a small DPLL library that exports the IPASIR interface."""
    return str(_compile(tmp_path_factory.mktemp("ipasir") / "libmini_ipasir.so"))


@pytest.fixture(scope="session")
def mini_ipasir_nosolve(tmp_path_factory) -> str:
    """Same library without ``ipasir_solve``."""
    return str(_compile(tmp_path_factory.mktemp("ipasir_broken") / "libmini_nosolve.so", "-DOMIT_SOLVE"))


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
