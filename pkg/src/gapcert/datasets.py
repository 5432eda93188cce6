"""Seeded synthetic datasets and the tiny bundled LIBSVM files.

Generators use the counter-based Philox engine so a (shape, seed) pair
always produces the same data, on any platform.  The bundled micro
datasets shipped with the package are regenerated by ``generate_bundled``;
a test asserts the committed files match the generator byte for byte.
"""

from importlib import resources

import numpy as np

from .data import LabeledDataset, SparseMatrix, save_libsvm, transpose

BUNDLED = ("lasso_micro", "svm_micro")


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def make_regression(d=10, n=20, seed=0, density=1.0, noise=0.1,
                    support=None, unit_columns=True):
    """Random design with a sparse ground truth; labels on the row side.

    Returns a LabeledDataset whose matrix is d x n (rows = observations,
    columns = coordinates) and whose labels are the d targets.
    """
    rng = _rng(seed)
    M = rng.normal(size=(d, n))
    if density < 1.0:
        mask = rng.random(size=(d, n)) < density
        for j in range(n):           # keep every column nonempty
            if not mask[:, j].any():
                mask[rng.integers(0, d), j] = True
        M = np.where(mask, M, 0.0)
    if unit_columns:
        norms = np.linalg.norm(M, axis=0)
        norms[norms == 0] = 1.0
        M = M / norms
    support = max(1, n // 4) if support is None else support
    coef = np.zeros(n)
    idx = rng.choice(n, size=support, replace=False)
    coef[idx] = rng.normal(size=support)
    b = M @ coef + noise * rng.normal(size=d)
    return LabeledDataset(SparseMatrix.from_dense(M), b)


def make_classification(d=5, n=40, seed=0, unit_columns=True):
    """Linearly separable-ish +/-1 data; one example per column."""
    rng = _rng(seed)
    M = rng.normal(size=(d, n))
    if unit_columns:
        norms = np.linalg.norm(M, axis=0)
        norms[norms == 0] = 1.0
        M = M / norms
    w = rng.normal(size=d)
    margins = M.T @ w + 0.1 * rng.normal(size=n)
    y = np.where(margins >= 0, 1.0, -1.0)
    return LabeledDataset(SparseMatrix.from_dense(M), y)


def generate_bundled(dirpath):
    """Write the bundled micro datasets into ``dirpath`` (deterministic)."""
    import os

    reg = make_regression(d=20, n=10, seed=1234, noise=0.05)
    # regression labels live on the row side; LIBSVM stores one example
    # (= one row of the design) per line, i.e. examples as columns of A^T
    save_libsvm(os.path.join(dirpath, "lasso_micro.libsvm"),
                transpose(reg.matrix), reg.labels)
    cls = make_classification(d=5, n=30, seed=4321)
    save_libsvm(os.path.join(dirpath, "svm_micro.libsvm"),
                cls.matrix, cls.labels)


def bundled_path(name):
    """Filesystem path of a bundled dataset (see BUNDLED for names)."""
    if name not in BUNDLED:
        raise ValueError("unknown bundled dataset %r; have %s"
                         % (name, ", ".join(BUNDLED)))
    return str(resources.files("gapcert").joinpath("bundled",
                                                   name + ".libsvm"))
