import logging

import pytest

from src.core.config import settings


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive runs over the whole scheme or many samples")


@pytest.fixture(autouse=True)
def restore_settings():
    """Undo any settings change a test (or a CLI run) makes."""
    snapshot = settings.model_dump()
    yield
    for key, value in snapshot.items():
        if getattr(settings, key) != value:
            setattr(settings, key, value)


@pytest.fixture(autouse=True)
def restore_logging():
    """CLI runs reconfigure the root logger against the captured stderr."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
