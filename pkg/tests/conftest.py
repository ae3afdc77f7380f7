import numpy as np
import pytest

from epimatch.model import ModelParams

from helpers import ACCEPTANCE_LINES


@pytest.fixture
def ex1():
    return ModelParams(alpha_H=0.5, alpha_L=0.5, Y_H=0.6, Y_L=0.1, theta_H=0.46, theta_L=0.45, psi=0.1)


@pytest.fixture
def ex2():
    return ModelParams(alpha_H=0.5, alpha_L=0.5, Y_H=0.3, Y_L=0.1, theta_H=0.31, theta_L=0.30, psi=0.1)


@pytest.fixture
def unique_econ():
    return ModelParams(alpha_H=0.5, alpha_L=0.5, Y_H=0.2, Y_L=0.1, theta_H=0.4, theta_L=0.3, psi=0.5)


@pytest.fixture
def l_inactive_econ():
    # Y_H > theta_L and b < 0: only the L-inactive corner, with H active
    return ModelParams(alpha_H=0.5, alpha_L=0.5, Y_H=0.6, Y_L=0.1, theta_H=0.7, theta_L=0.45, psi=0.4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
