import pytest

from cklef.endo import build_endomorphism, identity_endomorphism
from cklef.sft_core import TransitionMatrix, validate_matrix

# The running 3x3 example used throughout the tests.
MAIN_ROWS = ((1, 1, 0), (1, 1, 1), (0, 1, 1))

# Presentation pairs (nu, mu) of its three generator images.
MAIN_PAIRS = [
    [
        ((1, 1), (2, 1)),
        ((1, 2), (2, 2)),
        ((2, 3, 3), (2, 3)),
        ((2, 3, 2), (3, 2)),
        ((2,), (1,)),
    ],
    [((3, 2), ())],
    [((3, 3), (3,))],
]

MAIN_DOCUMENT = """\
# running example
n = 3
A = 110 111 011

[t1]
1,1 <- 2,1
1,2 <- 2,2
2,3,3 <- 2,3
2,3,2 <- 3,2
2 <- 1

[t2]
3,2 <- e

[t3]
3,3 <- 3
"""


@pytest.fixture(scope="session")
def main_matrix():
    return validate_matrix(MAIN_ROWS)


@pytest.fixture(scope="session")
def main_endo(main_matrix):
    return build_endomorphism(main_matrix, MAIN_PAIRS)


@pytest.fixture(scope="session")
def main_identity(main_matrix):
    return identity_endomorphism(main_matrix)


def small_matrices():
    """A spread of desk-scale matrices: the running example, a one-letter
    full shift, complete graphs, and the golden-mean shift."""
    return [
        validate_matrix(MAIN_ROWS),
        validate_matrix([[1]]),
        validate_matrix([[1, 1], [1, 1]]),
        validate_matrix([[1, 1], [1, 0]]),
        validate_matrix([[1, 1, 1], [1, 1, 1], [1, 1, 1]]),
    ]
