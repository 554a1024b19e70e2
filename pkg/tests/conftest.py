from pathlib import Path

import pytest

from humanscene.config import EngineConfig
from humanscene.motion import load_motion
from humanscene.scene import load_scene

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def demo_scene():
    return load_scene(DATA_DIR / "demo_scene.json")


@pytest.fixture(scope="session")
def demo_motion():
    return load_motion(DATA_DIR / "demo_motion.json")


@pytest.fixture(scope="session")
def default_config() -> EngineConfig:
    return EngineConfig()
