"""Shared fixtures: the expensive constructions are built once per session."""

import pytest

from fracproj.constructions.gridsq import Main2Params, construct_main2


@pytest.fixture(scope="session")
def main2_depth3():
    """Depth-3 square/arc construction with the acceptance-grade sample
    budgets (32 directions, 16 dyadic scales per level)."""
    return construct_main2(Main2Params(direction_budget=32, scale_budget=16))
