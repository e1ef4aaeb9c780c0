"""Hot-loop kernels with a compiled core and a pure-Python twin.

``_fast`` (Cython) is preferred when it compiled; ``_ref`` (numpy/scipy) is
the fallback. Set ``BLINDNET_PURE_PYTHON=1`` to force the fallback. The
active backend is reported by ``BACKEND``. Both backends implement the same
control flow; results can differ in the last floating-point ulp because of
accumulation order, so reproducibility guarantees hold per backend.
"""

from __future__ import annotations

import os

import numpy as np

from . import _ref

if os.environ.get("BLINDNET_PURE_PYTHON", "") == "1":
    _backend = _ref
    BACKEND = "python"
else:
    try:
        from . import _fast as _backend

        BACKEND = "compiled"
    except ImportError:
        _backend = _ref
        BACKEND = "python"


def csr_matmul_dense(matrix, x):
    """Return ``matrix @ x`` for a scipy CSR matrix and a dense block."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    indptr = np.ascontiguousarray(matrix.indptr, dtype=np.int64)
    indices = np.ascontiguousarray(matrix.indices, dtype=np.int64)
    data = np.ascontiguousarray(matrix.data, dtype=np.float64)
    if x.ndim == 1:
        return _backend.csr_matmul_dense(indptr, indices, data, x[:, None])[:, 0]
    return _backend.csr_matmul_dense(indptr, indices, data, x)


def lloyd(points, centroids, max_iter):
    """Run Lloyd iterations from the given centroids.

    Returns ``(labels, centroids, n_iter)``; the returned centroids are the
    cluster means of the returned labels, so the objective can be recomputed
    from the pair exactly.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    centroids = np.ascontiguousarray(centroids, dtype=np.float64)
    return _backend.lloyd(points, centroids, int(max_iter))
