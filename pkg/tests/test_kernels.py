import random
from fractions import Fraction

import pytest

from q2 import _kernels, kernels


def rows(seed, n, m):
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.6 else Fraction(0) for _ in range(m)] for _ in range(n)]


@pytest.mark.skipif(not kernels.COMPILED, reason="compiled kernels not built")
@pytest.mark.parametrize("seed", range(5))
def test_compiled_matches_python(seed):
    from q2 import _ckernels

    a, b = rows(seed, 7, 9), rows(seed + 100, 9, 6)
    assert _ckernels.matmul(a, b) == _kernels.matmul(a, b)
    assert _ckernels.rref([r[:] for r in a]) == _kernels.rref([r[:] for r in a])
    pa, pc = {}, {}
    for r in a:
        sparse = {j: v for j, v in enumerate(r) if v}
        assert _ckernels.sparse_insert(sparse, pc) == _kernels.sparse_insert(sparse, pa)
    assert pa == pc
    assert _ckernels.sparse_nullspace(pc, 9) == _kernels.sparse_nullspace(pa, 9)


@pytest.mark.parametrize("seed", range(5))
def test_nullspace_is_kernel(seed):
    a = rows(seed, 5, 8)
    piv = {}
    for r in a:
        kernels.sparse_insert({j: v for j, v in enumerate(r) if v}, piv)
    null = kernels.sparse_nullspace(piv, 8)
    assert len(null) == 8 - len(piv)
    for v in null:
        assert all(kernels.dot(r, v) == 0 for r in a)
