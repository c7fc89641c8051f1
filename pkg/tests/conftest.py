from __future__ import annotations

import pytest

from pittlab.geometry import make_space
from pittlab.harish_chandra import make_model
from pittlab.spherical import default_evaluator

SPACES = [(1, 0), (2, 0), (2, 1), (4, 3)]


@pytest.fixture(scope="session")
def h3():
    space = make_space(2, 0)
    return space, default_evaluator(space), make_model(space)


@pytest.fixture(scope="session", params=SPACES, ids=lambda m: f"m{m[0]}{m[1]}")
def any_space(request):
    space = make_space(*request.param)
    return space, default_evaluator(space), make_model(space)
