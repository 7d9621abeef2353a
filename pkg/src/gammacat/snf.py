"""Smith normal form over the integers with overflow detection.

Elimination runs in exact Python integers, so intermediate growth cannot
wrap around. The results are returned as int64 arrays; if any entry of the
diagonal form or of a requested transform exceeds ``bound`` in absolute
value, ``SNFOverflow`` is raised instead. With the default bound every
row-sized dot product of a result with a small residue vector fits in 64
bits.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from gammacat.errors import SNFOverflow

DEFAULT_BOUND = 2**24


class SmithForm(NamedTuple):
    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


class _Elim:
    """Working state: A plus optional U, U^-1, V, V^-1 with U @ A0 @ V == A."""

    def __init__(self, m, want_u, want_v, want_inv, bound):
        A = np.array(m, dtype=np.int64)
        if A.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
        self.A = A.astype(object)
        r, c = A.shape
        self.bound = bound
        eye = lambda k: np.eye(k, dtype=np.int64).astype(object)
        self.U = eye(r) if want_u else None
        self.Ui = eye(r) if want_u and want_inv else None
        self.V = eye(c) if want_v else None
        self.Vi = eye(c) if want_v and want_inv else None

    def finish(self):
        """Check the bound and convert every array to int64."""
        for name in ("A", "U", "Ui", "V", "Vi"):
            arr = getattr(self, name)
            if arr is None:
                continue
            if arr.size and max(abs(int(v)) for v in arr.flat) > min(self.bound, 2**62):
                raise SNFOverflow(f"entry of {name} exceeds the bound {self.bound}")
            setattr(self, name, arr.astype(np.int64))
        return self

    def swap_rows(self, i, j):
        if i == j:
            return
        self.A[[i, j]] = self.A[[j, i]]
        if self.U is not None:
            self.U[[i, j]] = self.U[[j, i]]
        if self.Ui is not None:
            self.Ui[:, [i, j]] = self.Ui[:, [j, i]]

    def swap_cols(self, i, j):
        if i == j:
            return
        self.A[:, [i, j]] = self.A[:, [j, i]]
        if self.V is not None:
            self.V[:, [i, j]] = self.V[:, [j, i]]
        if self.Vi is not None:
            self.Vi[[i, j]] = self.Vi[[j, i]]

    def reduce_rows_below(self, t, q):
        """row_i -= q_i * row_t for i > t."""
        self.A[t + 1:] -= np.outer(q, self.A[t])
        if self.U is not None:
            self.U[t + 1:] -= np.outer(q, self.U[t])
        if self.Ui is not None:
            self.Ui[:, t] += self.Ui[:, t + 1:] @ q

    def reduce_cols_right(self, t, q):
        """col_j -= q_j * col_t for j > t."""
        self.A[:, t + 1:] -= np.outer(self.A[:, t], q)
        if self.V is not None:
            self.V[:, t + 1:] -= np.outer(self.V[:, t], q)
        if self.Vi is not None:
            self.Vi[t] += q @ self.Vi[t + 1:]

    def add_row(self, dst, src):
        self.A[dst] += self.A[src]
        if self.U is not None:
            self.U[dst] += self.U[src]
        if self.Ui is not None:
            self.Ui[:, src] -= self.Ui[:, dst]

    def negate_row(self, t):
        self.A[t] *= -1
        if self.U is not None:
            self.U[t] *= -1
        if self.Ui is not None:
            self.Ui[:, t] *= -1


def _nearest_quotient(v, piv):
    """Quotients rounding to nearest, leaving remainders of at most |piv|/2."""
    return (2 * v + abs(piv)) // (2 * piv) if piv > 0 else -((2 * v + abs(piv)) // (2 * -piv))


def _min_abs_position(block):
    nz = np.nonzero(block)
    if len(nz[0]) == 0:
        return None
    p = int(np.argmin([abs(int(v)) for v in block[nz]]))
    return int(nz[0][p]), int(nz[1][p])


def snf_full(m, *, want_u=True, want_v=True, want_inv=False, bound=DEFAULT_BOUND) -> _Elim:
    """Run the elimination and return the working state.

    The result has attributes ``A`` (the diagonal form), ``U``, ``V`` and,
    when ``want_inv`` is set, ``Ui`` and ``Vi``. Transforms that were not
    requested are ``None``.
    """
    e = _Elim(m, want_u, want_v, want_inv, bound)
    A = e.A
    r, c = A.shape
    for t in range(min(r, c)):
        pos = _min_abs_position(A[t:, t:])
        if pos is None:
            break
        e.swap_rows(t, t + pos[0])
        e.swap_cols(t, t + pos[1])
        while True:
            piv = A[t, t]
            q = _nearest_quotient(A[t + 1:, t], piv)
            if q.any():
                e.reduce_rows_below(t, q)
            q = _nearest_quotient(A[t, t + 1:], piv)
            if q.any():
                e.reduce_cols_right(t, q)
            col_rest, row_rest = A[t + 1:, t], A[t, t + 1:]
            if col_rest.any() or row_rest.any():
                # leftover remainders are smaller than the pivot: move the smallest in
                best = None
                for i in np.nonzero(col_rest)[0]:
                    if best is None or abs(col_rest[i]) < best[0]:
                        best = (abs(col_rest[i]), "row", t + 1 + int(i))
                for j in np.nonzero(row_rest)[0]:
                    if best is None or abs(row_rest[j]) < best[0]:
                        best = (abs(row_rest[j]), "col", t + 1 + int(j))
                if best[1] == "row":
                    e.swap_rows(t, best[2])
                else:
                    e.swap_cols(t, best[2])
                continue
            rest = A[t + 1:, t + 1:]
            bad = np.nonzero(rest % piv)
            if len(bad[0]):
                e.add_row(t, t + 1 + int(bad[0][0]))
                continue
            break
        if A[t, t] < 0:
            e.negate_row(t)
    return e.finish()


def smith_normal_form(m, *, bound=DEFAULT_BOUND) -> SmithForm:
    """Return (U, S, V) with U @ m @ V == S, U and V unimodular.

    S is diagonal with non-negative entries d1 | d2 | ... . Raises
    ``SNFOverflow`` if an entry of U, S or V exceeds ``bound``.

    >>> smith_normal_form([[2, 0], [0, 3]]).S.tolist()
    [[1, 0], [0, 6]]
    """
    e = snf_full(m, bound=bound)
    return SmithForm(e.U, e.A, e.V)


def diagonal(S) -> list:
    S = np.asarray(S)
    return [int(S[i, i]) for i in range(min(S.shape))]
