import json
import random
from fractions import Fraction

import pytest

from conerank import ExactMatrix, GridSpec, robbins_matrix, sample_kernel
from conerank.cli import main as cli_main


@pytest.fixture
def robbins():
    return robbins_matrix()


@pytest.fixture
def kernel():
    def make(n, offset=0.0):
        g = GridSpec(n, offset)
        return sample_kernel(g, g)

    return make


def random_rational(rng, max_num=9, max_den=5):
    return Fraction(rng.randint(0, max_num), rng.randint(1, max_den))


def random_nonneg_exact(rng, m, n):
    return ExactMatrix(m, n, [random_rational(rng) for _ in range(m * n)])


def random_nonneg_product(rng, m, n, k):
    """Nonnegative m x n matrix built as a rank <= k product, with its factors."""
    L = random_nonneg_exact(rng, m, k)
    R = random_nonneg_exact(rng, k, n)
    return L @ R, L, R


def seeded_rng(seed):
    return random.Random(seed)


@pytest.fixture
def run_cli(capsys):
    """Invoke the CLI in-process; returns (exit_code, parsed_json, raw_stdout)."""

    def run(*argv):
        code = cli_main(list(argv))
        out = capsys.readouterr().out
        parsed = json.loads(out) if out.strip() else None
        return code, parsed, out

    return run
