import numpy as np
import pytest


@pytest.fixture
def qubit_state():
    """The worked 2x2 example used across modules."""
    return np.diag([0.75, 0.25]).astype(complex)


@pytest.fixture
def flip():
    """Off-diagonal Hermitian observable, centered for any diagonal state."""
    return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
