"""Matrix Market reading and writing, plus on-disk matrix sequences.

Sparse matrices use the ``coordinate`` format, right-hand sides the dense
``array`` format.  A sequence directory holds ``step_0000.mtx``,
``step_0001.mtx``, ... and optionally ``step_0000.rhs.mtx`` etc.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

import numpy as np

from .errors import MatrixMarketError, SequenceError
from .sparse import CsrMatrix, csr_from_triplets, transpose

GENERATOR = "amgreuse"

_FIELDS = ("real", "integer", "double")
_SYMMETRIES = ("general", "symmetric")


def _parse_header(line, path):
    tokens = line.split()
    if len(tokens) != 5 or tokens[0].lower() != "%%matrixmarket":
        raise MatrixMarketError("malformed header, expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
                                1, path)
    obj, fmt, fld, sym = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}", 1, path)
    if fmt not in ("coordinate", "array"):
        raise MatrixMarketError(f"unknown format {fmt!r}", 1, path)
    if fld in ("complex", "pattern"):
        raise MatrixMarketError(f"unsupported field {fld!r}", 1, path)
    if fld not in _FIELDS:
        raise MatrixMarketError(f"unknown field {fld!r}", 1, path)
    if sym not in _SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry {sym!r}", 1, path)
    return fmt, fld, sym


def _number(tok, fld, lineno, path):
    try:
        return float(int(tok)) if fld == "integer" else float(tok)
    except ValueError:
        raise MatrixMarketError(f"non-numeric value {tok!r}", lineno, path) from None


def _ints(tokens, count, lineno, path, what):
    if len(tokens) != count:
        raise MatrixMarketError(f"expected {count} fields in {what}, got {len(tokens)}", lineno, path)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MatrixMarketError(f"non-integer {what}: {' '.join(tokens)!r}", lineno, path) from None


def _read(path):
    """Parse a file into (format, field, symmetry, shape, data, comments)."""
    path = Path(path)
    comments = []
    with open(path, "r") as fh:
        header = fh.readline()
        if not header:
            raise MatrixMarketError("empty file", 1, path)
        fmt, fld, sym = _parse_header(header, path)
        lineno = 1
        size = None
        for line in fh:
            lineno += 1
            s = line.strip()
            if s.startswith("%"):
                comments.append(s[1:].lstrip() if not s.startswith("%%") else s)
                continue
            if s:
                size = s.split()
                break
        if size is None:
            raise MatrixMarketError("missing size line", lineno, path)

        if fmt == "coordinate":
            m, n, nnz = _ints(size, 3, lineno, path, "size line")
            rows = np.empty(nnz, dtype=np.int64)
            cols = np.empty(nnz, dtype=np.int64)
            vals = np.empty(nnz, dtype=np.float64)
            k = 0
            for line in fh:
                lineno += 1
                s = line.strip()
                if not s or s.startswith("%"):
                    continue
                if k >= nnz:
                    raise MatrixMarketError(f"more than the declared {nnz} entries", lineno, path)
                tok = s.split()
                if len(tok) != 3:
                    raise MatrixMarketError(f"expected 'row col value', got {s!r}", lineno, path)
                i, j = _ints(tok[:2], 2, lineno, path, "index")
                if not (1 <= i <= m and 1 <= j <= n):
                    raise MatrixMarketError(f"index ({i}, {j}) outside declared {m}x{n}", lineno, path)
                if sym == "symmetric" and j > i:
                    raise MatrixMarketError(
                        f"entry ({i}, {j}) above the diagonal in symmetric storage", lineno, path)
                rows[k], cols[k] = i - 1, j - 1
                vals[k] = _number(tok[2], fld, lineno, path)
                k += 1
            if k != nnz:
                raise MatrixMarketError(f"declared {nnz} entries, found {k}", lineno, path)
            return fmt, sym, (m, n), (rows, cols, vals), comments

        m, n = _ints(size, 2, lineno, path, "size line")
        if sym != "general":
            raise MatrixMarketError("only general array storage is supported", 1, path)
        vals = []
        for line in fh:
            lineno += 1
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            if len(vals) >= m * n:
                raise MatrixMarketError(f"more than the declared {m * n} values", lineno, path)
            tok = s.split()
            if len(tok) != 1:
                raise MatrixMarketError(f"expected a single value, got {s!r}", lineno, path)
            vals.append(_number(tok[0], fld, lineno, path))
        if len(vals) != m * n:
            raise MatrixMarketError(f"declared {m * n} values, found {len(vals)}", lineno, path)
        dense = np.array(vals, dtype=np.float64).reshape((n, m)).T   # column-major
        return fmt, sym, (m, n), dense, comments


def mm_read(path, return_comments=False):
    """Read a Matrix Market file into a :class:`CsrMatrix`.

    Symmetric storage is expanded to the full matrix.  With
    ``return_comments=True`` the ``%`` comment lines are returned as well.
    """
    fmt, sym, (m, n), data, comments = _read(path)
    if fmt == "array":
        A = CsrMatrix.from_dense(data, keep_zeros=True)
    else:
        rows, cols, vals = data
        if sym == "symmetric":
            off = rows != cols
            rows, cols, vals = (np.concatenate([rows, cols[off]]),
                                np.concatenate([cols, rows[off]]),
                                np.concatenate([vals, vals[off]]))
        A = csr_from_triplets(m, n, (rows, cols, vals))
    return (A, comments) if return_comments else A


def mm_read_vector(path):
    """Read a dense single-column ``array`` file as a 1-d vector."""
    fmt, sym, (m, n), data, _ = _read(path)
    if fmt == "array":
        if n != 1:
            raise MatrixMarketError(f"expected a column vector, got {m}x{n}", path=path)
        return data[:, 0].copy()
    rows, cols, vals = data
    if n != 1:
        raise MatrixMarketError(f"expected a column vector, got {m}x{n}", path=path)
    out = np.zeros(m)
    np.add.at(out, rows, vals)
    return out


def _header_lines(fmt, symmetric, comments):
    lines = [f"%%MatrixMarket matrix {fmt} real {'symmetric' if symmetric else 'general'}",
             f"% written by {GENERATOR}"]
    for c in comments:
        for part in str(c).splitlines():
            lines.append(f"% {part}")
    return lines


def mm_write(path, A: CsrMatrix, symmetric=False, comments=()):
    """Write ``A`` in coordinate format with 17 significant digits.

    ``symmetric=True`` stores only the lower triangle and requires ``A`` to
    be exactly symmetric.
    """
    if symmetric:
        if A.nrows != A.ncols or not transpose(A) == A:
            raise ValueError("symmetric storage requested for a matrix that is not symmetric")
    rows = A.row_indices()
    cols = A.col_idx
    vals = A.values
    if symmetric:
        keep = cols <= rows
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    lines = _header_lines("coordinate", symmetric, comments)
    lines.append(f"{A.nrows} {A.ncols} {rows.size}")
    body = "\n".join(f"{i + 1} {j + 1} {v:.17g}"
                     for i, j, v in zip(rows.tolist(), cols.tolist(), vals.tolist()))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
        if body:
            fh.write(body + "\n")


def mm_write_vector(path, x, comments=()):
    x = np.asarray(x, dtype=np.float64).ravel()
    lines = _header_lines("array", False, comments)
    lines.append(f"{x.size} 1")
    lines.extend(f"{v:.17g}" for v in x.tolist())
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


_STEP = re.compile(r"^step_(\d{4,})\.mtx$")


def _step_files(dir_path):
    dir_path = Path(dir_path)
    if not dir_path.is_dir():
        raise SequenceError(f"{dir_path} is not a directory")
    found = {}
    for name in os.listdir(dir_path):
        m = _STEP.match(name)
        if m:
            found[int(m.group(1))] = dir_path / name
    if not found:
        raise SequenceError(f"no step_NNNN.mtx files in {dir_path}")
    for k in range(max(found) + 1):
        if k not in found:
            raise SequenceError(f"sequence in {dir_path} has a gap: step_{k:04d}.mtx is missing")
    return [found[k] for k in sorted(found)]


def read_sequence(dir_path):
    """Iterate ``(A_k, f_k)`` over a sequence directory in step order.

    The directory listing is checked up front; files are read lazily.  A
    missing right-hand side defaults to a vector of ones.
    """
    files = _step_files(dir_path)

    def steps():
        for mat in files:
            A = mm_read(mat)
            rhs_path = mat.with_name(mat.name[:-len(".mtx")] + ".rhs.mtx")
            if rhs_path.exists():
                f = mm_read_vector(rhs_path)
                if f.shape != (A.nrows,):
                    raise SequenceError(
                        f"{rhs_path.name} has {f.size} entries but {mat.name} has {A.nrows} rows")
            else:
                f = np.ones(A.nrows)
            yield A, f

    return steps()


def write_sequence(dir_path, systems, symmetric=False, comments=()):
    """Store ``(A_k, f_k)`` pairs as a sequence directory; returns the step count."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    k = -1
    for k, (A, f) in enumerate(systems):
        mm_write(dir_path / f"step_{k:04d}.mtx", A, symmetric=symmetric, comments=comments)
        if f is not None:
            mm_write_vector(dir_path / f"step_{k:04d}.rhs.mtx", f)
    return k + 1
