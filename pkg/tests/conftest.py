import pytest

import src.utils.logger_utils as logger_utils
from src.cli_io.config import CONFIG_ENV_VAR


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    """main() toggles the module-level logging switches; restore them after every test."""
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
    monkeypatch.setattr(logger_utils, "LOG_ENABLED", logger_utils.LOG_ENABLED)
    monkeypatch.setattr(logger_utils, "LOG_TO_FILE", logger_utils.LOG_TO_FILE)
    monkeypatch.setattr(logger_utils, "LOG_FILE_PATH", logger_utils.LOG_FILE_PATH)
