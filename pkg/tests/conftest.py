import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "application"))

SAMPLES = os.path.join(ROOT, "samples")

from core_model import CommTopology, GradientDescentModel, HardwareSpec  # noqa: E402


def sample(name):
    return os.path.join(SAMPLES, name)


@pytest.fixture(autouse=True)
def no_env_seed(monkeypatch):
    monkeypatch.delenv("SCALEMODEL_SEED", raising=False)


@pytest.fixture
def spark_hw():
    return HardwareSpec(peak_ops_per_sec=105.6e9, efficiency=0.8, bandwidth_bits_per_sec=1e9)


@pytest.fixture
def spark_model():
    return GradientDescentModel(cost_per_point_ops=6 * 12e6, batch_size=60000, num_params=12e6)


@pytest.fixture
def spark_topo():
    return CommTopology(variant="spark_hybrid", bits_per_param=64)


@pytest.fixture
def gpu_hw():
    return HardwareSpec(peak_ops_per_sec=4.28e12, efficiency=0.5, bandwidth_bits_per_sec=1e9)


@pytest.fixture
def conv_model():
    return GradientDescentModel(cost_per_point_ops=15e9, batch_size=128, num_params=25e6)


@pytest.fixture
def tree_topo():
    return CommTopology(variant="log_tree", stages=2, bits_per_param=32)
