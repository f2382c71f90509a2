import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes oracles importable

from wcopt import DesignSpec, NoiseSpec, generate_instance


@pytest.fixture(scope="session")
def small_instance():
    """Noiseless well-conditioned instance at desk scale."""
    return generate_instance(50, 8, DesignSpec("UR", 1.0), NoiseSpec.noiseless(), seed=11)


@pytest.fixture(scope="session")
def medium_instance():
    return generate_instance(100, 20, DesignSpec("UR", 1.0), NoiseSpec.noiseless(), seed=5)
