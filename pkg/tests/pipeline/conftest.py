import pytest

from dtncomm import read_save
from dtncomm.synthetic import synthetic_session_log


@pytest.fixture(scope="module")
def session_log(tmp_path_factory):
    filename = tmp_path_factory.mktemp("logs") / "sessions.csv"
    read_save.save_sessions(filename, synthetic_session_log(30, 4, 2, seed=1))
    return filename
