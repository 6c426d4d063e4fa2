"""The compiled kernel and the pure-Python twin must agree bit for bit."""

import os
import random
import subprocess
import sys

import pytest

from cuntzmc import _kernels_py, kernels


def _random_case(rng):
    n = rng.randint(1, 7)
    m = rng.randint(1, 7)
    a = [[rng.randint(-6, 6) for _ in range(m)] for _ in range(n)]
    return n, m, a


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="extension not built")
class TestParity:
    def test_snf_outputs_identical(self):
        from cuntzmc import _kernels_cy

        rng = random.Random(2024)
        for _ in range(3000):
            n, m, a = _random_case(rng)
            keep_u = rng.random() < 0.5
            keep_v = rng.random() < 0.5
            py = _kernels_py.snf_kernel([row[:] for row in a], n, m, keep_u, keep_v)
            cy = _kernels_cy.snf_kernel([row[:] for row in a], n, m, keep_u, keep_v)
            assert py == cy

    def test_det_outputs_identical(self):
        from cuntzmc import _kernels_cy

        rng = random.Random(77)
        for _ in range(3000):
            n = rng.randint(1, 7)
            a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
            assert _kernels_py.det_kernel([r[:] for r in a], n) == _kernels_cy.det_kernel(
                [r[:] for r in a], n
            )


def test_pure_python_override():
    code = (
        "from cuntzmc import kernels; "
        "print(kernels.BACKEND)"
    )
    env = dict(os.environ, CUNTZMC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_default_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
