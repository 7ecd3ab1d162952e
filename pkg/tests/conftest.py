import numpy as np
import pytest

from diracbvp import (BoundaryCondition, Grid1D, ModelSpec, SpinorField,
                      assemble, decompose)


@pytest.fixture(scope="session")
def anti_spec():
    grid = Grid1D(1.0, 256)
    return ModelSpec(grid, "scalar_derivative", BoundaryCondition("antiperiodic"))


@pytest.fixture(scope="session")
def anti_sd(anti_spec):
    return decompose(assemble(anti_spec))


@pytest.fixture(scope="session")
def anti_spec_128():
    grid = Grid1D(1.0, 128)
    return ModelSpec(grid, "scalar_derivative", BoundaryCondition("antiperiodic"))


@pytest.fixture(scope="session")
def anti_sd_128(anti_spec_128):
    return decompose(assemble(anti_spec_128))


@pytest.fixture(scope="session")
def bag_spec():
    grid = Grid1D(1.0, 128)
    return ModelSpec(grid, "dirac_2spinor", BoundaryCondition("bag1d"))


@pytest.fixture(scope="session")
def bag_sd(bag_spec):
    return decompose(assemble(bag_spec))


@pytest.fixture(scope="session")
def periodic_spec():
    grid = Grid1D(2.0 * np.pi, 64, "circle")
    return ModelSpec(grid, "scalar_derivative", BoundaryCondition("periodic"))


@pytest.fixture(scope="session")
def periodic_sd(periodic_spec):
    return decompose(assemble(periodic_spec))


def mode_field(grid, k=1, scale=1.0):
    """scale * exp(i k pi x / L) as a scalar field."""
    x = grid.points()
    return SpinorField(grid, scale * np.exp(1j * k * np.pi * x / grid.length))
