"""Kernel selection: the compiled ``_ckernels`` when present, else ``_kernels``.

Set ``Q2_PURE_PYTHON=1`` to force the Python implementation.
"""

import os

if os.environ.get("Q2_PURE_PYTHON") == "1":
    from . import _kernels as impl
else:
    try:
        from . import _ckernels as impl
    except ImportError:
        from . import _kernels as impl

COMPILED = impl.__name__.endswith("_ckernels")

dot = impl.dot
matmul = impl.matmul
rref = impl.rref
sparse_reduce = impl.sparse_reduce
sparse_insert = impl.sparse_insert
sparse_nullspace = impl.sparse_nullspace

__all__ = ["COMPILED", "dot", "matmul", "rref", "sparse_reduce", "sparse_insert", "sparse_nullspace"]
