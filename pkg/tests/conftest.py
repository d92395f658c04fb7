from __future__ import annotations

import pytest

from dimgroup.examples import EXAMPLES, example


@pytest.fixture(params=sorted(EXAMPLES))
def named_map(request):
    return example(request.param)


@pytest.fixture
def full_tent():
    return example("full_tent")


@pytest.fixture
def tent_sqrt2():
    return example("restricted_tent_sqrt2")


@pytest.fixture
def tent_3_2():
    return example("tent_3_2")


@pytest.fixture
def three_fold():
    return example("three_fold")
