import numpy as np
import pytest

from framescale.frame import Frame, mercedes_benz


@pytest.fixture
def mb():
    return mercedes_benz()


@pytest.fixture
def identity2():
    return Frame(np.eye(2))


@pytest.fixture
def not_scalable():
    # F(Phi) = [[1, 0], [0, 1/2]] is invertible, so its kernel is {0}
    h = np.sqrt(2.0) / 2.0
    return Frame.from_columns([[1.0, 0.0], [h, h]])


@pytest.fixture
def e1e2e1():
    return Frame.from_columns([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
