import logging
import pathlib

import pytest

from netfile import load_net, parse_net

SAMPLES_DIR = pathlib.Path(__file__).resolve().parent.parent / "net_samples"

# small schedules keep the solver fast on the sample nets
SMALL_CAPS = [4, 8]


@pytest.fixture(scope="session")
def counting_net():
    return load_net(SAMPLES_DIR / "counting.net")


@pytest.fixture(scope="session")
def deterministic_net():
    return load_net(SAMPLES_DIR / "deterministic.net")


@pytest.fixture(scope="session")
def succinct_net():
    return load_net(SAMPLES_DIR / "succinct.net")


@pytest.fixture(scope="session")
def fork_net():
    return load_net(SAMPLES_DIR / "fork.net")


@pytest.fixture(scope="session")
def example_hd_net():
    return load_net(SAMPLES_DIR / "example_hd.net")


@pytest.fixture(scope="session")
def two_blocks_net():
    return load_net(SAMPLES_DIR / "two_blocks.net")


@pytest.fixture(scope="session")
def mod7_fork_net():
    return load_net(SAMPLES_DIR / "mod7_fork.net")


@pytest.fixture(scope="session")
def mod7_suits_net():
    return load_net(SAMPLES_DIR / "mod7_suits.net")


@pytest.fixture(scope="session")
def countdown_net():
    """p reads b while decrementing and leaves for the final f on c."""
    return parse_net(
        "ocn\n"
        "alphabet b c\n"
        "state p init\n"
        "state f final\n"
        "trans p b -1 p\n"
        "trans p c 0 f\n"
    )


@pytest.fixture
def net_text():
    """Factory for small nets in the text format."""

    def _factory(*lines, kind="ocn"):
        return parse_net("\n".join([kind, *lines]) + "\n")

    return _factory


@pytest.fixture(autouse=True)
def reenable_logging():
    # the CLI disables logging globally when OCNHD_DEBUG is off
    yield
    logging.disable(logging.NOTSET)
