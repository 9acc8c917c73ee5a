import os

import pytest

from devqe.integrals import load_fcidump

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, name)


@pytest.fixture(scope="session")
def h2_integrals():
    return load_fcidump(fixture_path("h2_sto3g.fcidump"))


@pytest.fixture(scope="session")
def h4_integrals():
    return load_fcidump(fixture_path("h4_sto3g.fcidump"))


@pytest.fixture(scope="session")
def lih_integrals():
    return load_fcidump(fixture_path("lih_sto3g.fcidump"))


@pytest.fixture(scope="session")
def h2_scan_dir():
    return fixture_path("h2_scan")
