import os
import sys

import pytest

# Make 'src' importable the same way run.py does
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.potentials import Homogeneity  # noqa: E402


@pytest.fixture
def newton():
    return Homogeneity(1.0)


@pytest.fixture(params=[0.5, 1.0, 1.5])
def homogeneity(request):
    return Homogeneity(request.param)
