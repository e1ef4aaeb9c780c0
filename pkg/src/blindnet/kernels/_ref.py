"""Pure numpy/scipy implementations of the hot kernels.

Selected when the compiled extension is unavailable or when
``BLINDNET_PURE_PYTHON=1``. Control flow mirrors ``_fast.pyx`` exactly so
the two backends agree on labels and tie-breaks, not just on tolerances.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def csr_matmul_dense(indptr, indices, data, x):
    """Multiply a CSR matrix (given by its arrays) with a dense block."""
    n_rows = indptr.shape[0] - 1
    mat = sp.csr_matrix((data, indices, indptr), shape=(n_rows, x.shape[0]))
    return np.ascontiguousarray(mat @ x)


def lloyd(points, centroids, max_iter):
    """Lloyd iterations until the assignment stops changing.

    Empty clusters are repaired in index order by re-seeding from the point
    currently farthest from its assigned centroid. Returns
    ``(labels, centroids, n_iter)`` with centroids equal to the means of the
    returned labels.
    """
    centroids = centroids.copy()
    labels = None
    n_iter = 0
    for _ in range(max_iter):
        n_iter += 1
        diff = points[:, None, :] - centroids[None, :, :]
        dist = np.einsum("ikd,ikd->ik", diff, diff)
        new_labels = dist.argmin(axis=1)
        assigned = dist[np.arange(points.shape[0]), new_labels]
        counts = np.bincount(new_labels, minlength=centroids.shape[0])
        for c in range(centroids.shape[0]):
            if counts[c] == 0:
                far = int(assigned.argmax())
                counts[new_labels[far]] -= 1
                counts[c] += 1
                new_labels[far] = c
                assigned[far] = 0.0
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(centroids.shape[0]):
            if counts[c] > 0:
                centroids[c] = points[labels == c].mean(axis=0)
    return labels.astype(np.int64), centroids, n_iter
