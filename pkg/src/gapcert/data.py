"""Column-major sparse matrices, LIBSVM text I/O and operator constants.

The matrix container is deliberately small: compressed column storage over
three numpy arrays, with strict validation at construction time.  Columns
are the natural unit here because every solver in this package works one
column (one dual coordinate) at a time.
"""

from dataclasses import dataclass, field

import numpy as np

from ._kernels import sp_col_axpy, sp_matvec, sp_rmatvec


@dataclass
class SparseMatrix:
    """Sparse d x n matrix in compressed column form.

    Parameters
    ----------
    shape : (int, int)
        (d, n) = (rows, columns).
    indptr : array of int64, length n + 1
        Column pointers; column i owns entries ``indptr[i]:indptr[i+1]``.
    indices : array of int64
        Row indices, strictly increasing within each column.
    values : array of float64
        Entry values, all finite.
    """

    shape: tuple
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    _colsq: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        d, n = self.shape
        if d < 1 or n < 1:
            raise ValueError("matrix must have at least one row and one "
                             "column, got shape %r" % (self.shape,))
        self.shape = (int(d), int(n))
        self.indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.indptr.shape != (n + 1,):
            raise ValueError("indptr must have length n + 1")
        if self.indptr[0] != 0 or self.indptr[-1] != len(self.indices):
            raise ValueError("indptr must start at 0 and end at nnz")
        if np.any(np.diff(self.indptr) < 0):
            raise ValueError("indptr must be nondecreasing")
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values length mismatch")
        if len(self.indices):
            if self.indices.min() < 0 or self.indices.max() >= d:
                raise ValueError("row index out of range")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("matrix values must be finite")
        for i in range(n):
            col = self.indices[self.indptr[i]:self.indptr[i + 1]]
            if len(col) > 1 and np.any(np.diff(col) <= 0):
                raise ValueError(
                    "column %d has duplicate or unsorted row indices" % i)

    @classmethod
    def from_dense(cls, arr):
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        d, n = arr.shape
        indptr = [0]
        indices = []
        values = []
        for i in range(n):
            nz = np.nonzero(arr[:, i])[0]
            indices.append(nz)
            values.append(arr[nz, i])
            indptr.append(indptr[-1] + len(nz))
        indices = (np.concatenate(indices) if indices
                   else np.zeros(0, dtype=np.int64))
        values = (np.concatenate(values) if values
                  else np.zeros(0, dtype=np.float64))
        return cls((d, n), np.asarray(indptr, dtype=np.int64), indices, values)

    def to_dense(self):
        d, n = self.shape
        out = np.zeros((d, n))
        for i in range(n):
            sl = slice(self.indptr[i], self.indptr[i + 1])
            out[self.indices[sl], i] = self.values[sl]
        return out

    def column(self, i):
        """(row indices, values) of column i, as views."""
        sl = slice(self.indptr[i], self.indptr[i + 1])
        return self.indices[sl], self.values[sl]

    @property
    def nnz(self):
        return len(self.values)

    def column_norms_sq(self):
        """Squared Euclidean norm of every column (cached)."""
        if self._colsq is None:
            np_ptr = self.indptr
            sq = self.values * self.values
            csum = np.concatenate(([0.0], np.cumsum(sq)))
            self._colsq = csum[np_ptr[1:]] - csum[np_ptr[:-1]]
        return self._colsq


@dataclass
class LabeledDataset:
    """A sparse matrix plus a label/target vector.

    Depending on the problem the labels live on the row side (regression
    and classification losses, length d) or on the column side (the SVM
    dual, one label per example column, length n).
    """

    matrix: SparseMatrix
    labels: np.ndarray

    def __post_init__(self):
        self.labels = np.ascontiguousarray(self.labels, dtype=np.float64)
        if self.labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if not np.all(np.isfinite(self.labels)):
            raise ValueError("labels must be finite")
        d, n = self.matrix.shape
        if len(self.labels) not in (d, n):
            raise ValueError(
                "labels length %d matches neither rows (%d) nor columns (%d)"
                % (len(self.labels), d, n))


@dataclass
class MatrixConstants:
    """Operator constants of a data matrix used by the rate calculators."""

    sigma: float          # largest eigenvalue of A^T A (squared spectral norm)
    R: float              # max column Euclidean norm
    P: float              # max row Euclidean norm
    iterations: int       # power iterations actually spent
    converged: bool


def matvec(A, x):
    """A @ x with a fixed summation order (columns, then stored indices)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (A.shape[1],):
        raise ValueError("dimension mismatch")
    return sp_matvec(A.indptr, A.indices, A.values, x, A.shape[0])


def transpose_matvec(A, w):
    """A.T @ w with one sequential dot product per column."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    if w.shape != (A.shape[0],):
        raise ValueError("dimension mismatch")
    return sp_rmatvec(A.indptr, A.indices, A.values, w)


def add_scaled_column(A, i, c, v):
    """In place v += c * A[:, i] (the solver's incremental state update)."""
    if not 0 <= i < A.shape[1]:
        raise IndexError("column index out of range")
    sp_col_axpy(A.indptr, A.indices, A.values, int(i), float(c), v)


def normalize_columns(A):
    """Copy of A with every nonzero column scaled to unit Euclidean norm."""
    values = A.values.copy()
    for i in range(A.shape[1]):
        sl = slice(A.indptr[i], A.indptr[i + 1])
        nrm = float(np.linalg.norm(values[sl]))
        if nrm > 0:
            values[sl] /= nrm
    return SparseMatrix(A.shape, A.indptr.copy(), A.indices.copy(), values)


def transpose(A):
    """Return A.T as a new SparseMatrix (counting-sort construction)."""
    d, n = A.shape
    counts = np.zeros(d + 1, dtype=np.int64)
    for r in A.indices:
        counts[r + 1] += 1
    indptr = np.cumsum(counts)
    indices = np.empty(A.nnz, dtype=np.int64)
    values = np.empty(A.nnz, dtype=np.float64)
    fill = indptr[:-1].copy()
    for i in range(n):
        for k in range(A.indptr[i], A.indptr[i + 1]):
            r = A.indices[k]
            pos = fill[r]
            indices[pos] = i
            values[pos] = A.values[k]
            fill[r] += 1
    return SparseMatrix((n, d), indptr, indices, values)


def load_libsvm(path):
    """Read a LIBSVM/SVMlight text file.

    Each line is ``label idx:val idx:val ...`` with 1-based, strictly
    increasing feature indices.  Examples become *columns*: the returned
    matrix has shape (max feature index, number of lines) and the labels
    vector has one entry per line.

    Raises ValueError (with the offending line number) on malformed input
    and on empty files.
    """
    labels = []
    col_indices = []
    col_values = []
    d = 0
    with open(path, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            try:
                labels.append(float(parts[0]))
            except ValueError:
                raise ValueError(
                    "%s:%d: bad label %r" % (path, lineno, parts[0]))
            idxs = []
            vals = []
            prev = 0
            for tok in parts[1:]:
                try:
                    stridx, strval = tok.split(":", 1)
                    idx = int(stridx)
                    val = float(strval)
                except ValueError:
                    raise ValueError(
                        "%s:%d: bad feature token %r" % (path, lineno, tok))
                if idx <= 0:
                    raise ValueError(
                        "%s:%d: feature indices are 1-based, got %d"
                        % (path, lineno, idx))
                if idx <= prev:
                    raise ValueError(
                        "%s:%d: feature indices must be strictly increasing"
                        % (path, lineno))
                prev = idx
                idxs.append(idx - 1)
                vals.append(val)
            d = max(d, prev)
            col_indices.append(np.asarray(idxs, dtype=np.int64))
            col_values.append(np.asarray(vals, dtype=np.float64))
    if not labels:
        raise ValueError("%s: empty dataset" % path)
    indptr = np.zeros(len(labels) + 1, dtype=np.int64)
    for i, idxs in enumerate(col_indices):
        indptr[i + 1] = indptr[i] + len(idxs)
    indices = (np.concatenate(col_indices) if col_indices
               else np.zeros(0, dtype=np.int64))
    values = (np.concatenate(col_values) if col_values
              else np.zeros(0, dtype=np.float64))
    matrix = SparseMatrix((d, len(labels)), indptr, indices, values)
    return LabeledDataset(matrix, np.asarray(labels))


def save_libsvm(path, matrix, labels):
    """Write examples-as-columns data back to LIBSVM text.

    Values are written with shortest round-trip formatting, so
    load(save(ds)) reproduces the arrays bitwise.
    """
    labels = np.asarray(labels, dtype=np.float64)
    if len(labels) != matrix.shape[1]:
        raise ValueError("need one label per column")
    with open(path, "w") as fh:
        for i in range(matrix.shape[1]):
            idx, val = matrix.column(i)
            toks = ["%r" % float(labels[i])]
            toks.extend("%d:%r" % (int(j) + 1, float(x))
                        for j, x in zip(idx, val))
            fh.write(" ".join(toks) + "\n")


def _power_from(A, x, tol, max_iter):
    sigma = 0.0
    iters = 0
    converged = False
    nrm = float(np.linalg.norm(x))
    if nrm == 0.0:
        return 0.0, 0, True
    x = x / nrm
    for iters in range(1, max_iter + 1):
        y = matvec(A, x)
        z = transpose_matvec(A, y)
        sigma = float(x @ z)
        resid = float(np.linalg.norm(z - sigma * x))
        if resid <= tol * max(sigma, 1e-30):
            converged = True
            break
        nz = float(np.linalg.norm(z))
        if nz == 0.0:
            converged = True
            break
        x = z / nz
    return sigma, iters, converged


def matrix_constants(A, tol=1e-9, max_iter=10000):
    """Compute (sigma, R, P) for a sparse matrix.

    sigma is the largest eigenvalue of A^T A, found by deterministic power
    iteration started from the all-ones vector; convergence is declared
    when the eigen-residual ``||A^T A x - sigma x||`` drops below
    ``tol * sigma``.  R and P (max column / row norms) are exact.

    The all-ones start can be orthogonal to the leading eigenspace (for
    example a single column [1, -1]); since sigma >= R^2 always holds,
    a result below R^2 triggers a deterministic restart from each basis
    vector and the best estimate wins.
    """
    d, n = A.shape
    colsq = A.column_norms_sq()
    R = float(np.sqrt(colsq.max())) if n else 0.0
    if A.nnz:
        rowsq = np.zeros(d)
        np.add.at(rowsq, A.indices, A.values * A.values)
        P = float(np.sqrt(rowsq.max()))
    else:
        P = 0.0
    if A.nnz == 0 or n == 0:
        return MatrixConstants(0.0, R, P, 0, True)

    sigma, iters, converged = _power_from(A, np.ones(n), tol, max_iter)
    if sigma < (1.0 - 1e-9) * R * R:
        for j in range(n):
            if colsq[j] == 0.0:
                continue
            e = np.zeros(n)
            e[j] = 1.0
            s_j, it_j, conv_j = _power_from(A, e, tol, max_iter)
            iters += it_j
            if s_j > sigma:
                sigma, converged = s_j, conv_j
    return MatrixConstants(float(sigma), R, P, iters, converged)
