"""Exact integer linear algebra for finitely generated abelian groups.

Everything runs on Python's arbitrary-precision integers.  Small matrices
(presentations, action matrices, unimodular transforms) are dense; lattice
work on the large cochain groups (spans, kernels, subquotients) uses sparse
integer columns, i.e. ``dict[row_index, nonzero_value]``.

A finitely generated abelian group is a presentation: ``ngens`` generators
and a lattice of relations given by integer columns.  Its canonical form --
free rank plus the divisibility chain of invariant factors -- classifies it
up to isomorphism and is the only notion of equality used by callers.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from math import gcd


class AbelianError(Exception):
    pass


class CompositionNotZero(AbelianError):
    """g compose f is not the zero map, so ker(g)/im(f) is undefined."""


class NotContained(AbelianError):
    """A lattice inclusion required by a subquotient does not hold."""


# ---------------------------------------------------------------------------
# dense matrices


class IntMatrix:
    """Immutable dense integer matrix, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries) -> None:
        data = tuple(int(x) for x in entries)
        if len(data) != rows * cols:
            raise ValueError(f"need {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, cols, nrows: int) -> "IntMatrix":
        entries = []
        for i in range(nrows):
            for c in cols:
                entries.append(c.get(i, 0) if isinstance(c, dict) else c[i])
        return cls(nrows, len(cols), entries)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self._data[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self._data[j :: self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns_sparse(self) -> list[dict]:
        cols = [dict() for _ in range(self.cols)]
        for i in range(self.rows):
            base = i * self.cols
            for j in range(self.cols):
                v = self._data[base + j]
                if v:
                    cols[j][i] = v
        return cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            [self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def apply(self, vec) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(
            sum(self._data[i * self.cols + j] * vec[j] for j in range(self.cols))
            for i in range(self.rows)
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other._data[k * other.cols + j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [-a for a in self._data])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._data == other._data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def is_zero(self) -> bool:
        return not any(self._data)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols})"


# ---------------------------------------------------------------------------
# sparse columns


def col_addmul(dst: dict, src: dict, k: int, mod: int = 0, keep: int | None = None) -> None:
    """dst += k * src, dropping zeros; with ``mod`` the touched entries are
    reduced modulo it, except at the ``keep`` row."""
    if not k:
        return
    if mod:
        for r, v in src.items():
            w = dst.get(r, 0) + k * v
            if r != keep:
                w %= mod
            if w:
                dst[r] = w
            else:
                dst.pop(r, None)
        return
    for r, v in src.items():
        w = dst.get(r, 0) + k * v
        if w:
            dst[r] = w
        else:
            dst.pop(r, None)


def col_scale(col: dict, k: int) -> None:
    for r in col:
        col[r] *= k


def vec_to_col(vec) -> dict:
    return {i: v for i, v in enumerate(vec) if v}


def col_to_vec(col: dict, n: int) -> tuple:
    out = [0] * n
    for r, v in col.items():
        out[r] = v
    return tuple(out)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class Echelon:
    """Integer column echelon form of a lattice, one pivot column per row.

    Supports incremental insertion with optional combination tracking
    ("tails"), exact membership tests and forward-substitution solves.
    Column operations are unimodular, so at any point the pivots plus the
    vanished columns span exactly the lattice of everything inserted.

    A nonzero ``tail_mod`` reduces every tail coordinate modulo it.  This
    is sound only when tail_mod * e_j is known to lie in the tracked
    lattice for every tracked column j; callers must then include those
    multiples among the generators downstream.  A nonzero ``col_mod``
    likewise crushes column entries, sound when col_mod * e_r lies in the
    lattice for every row r (it kills the coefficient blow-up of naive
    integer echelon reduction).
    """

    __slots__ = ("cols", "tails", "tail_mod", "col_mod")

    def __init__(self, tail_mod: int = 0, col_mod: int = 0) -> None:
        self.cols: dict[int, dict] = {}
        self.tails: dict[int, dict] = {}
        self.tail_mod = tail_mod
        self.col_mod = col_mod

    def copy(self) -> "Echelon":
        e = Echelon(self.tail_mod, self.col_mod)
        e.cols = {r: dict(c) for r, c in self.cols.items()}
        e.tails = {r: dict(t) for r, t in self.tails.items()}
        return e

    def _trim(self, tail: dict) -> None:
        m = self.tail_mod
        if not m:
            return
        for k in list(tail):
            v = tail[k] % m
            if v:
                tail[k] = v
            else:
                del tail[k]

    def _crush(self, col: dict, keep: int | None = None) -> None:
        """Reduce entries mod col_mod, preserving the leading entry so
        lattice generators are never erased before becoming pivots."""
        m = self.col_mod
        if not m or not col:
            return
        if keep is None:
            keep = min(col)
        for r in list(col):
            if r == keep:
                continue
            v = col[r] % m
            if v:
                col[r] = v
            else:
                del col[r]

    def insert(self, col: dict, tail: dict | None = None):
        """Reduce ``col`` into the echelon.  Returns the tail if the column
        vanished (a combination certificate), else None (a new pivot)."""
        if tail is None:
            tail = {}
        cmod = self.col_mod
        tmod = self.tail_mod
        self._crush(col)
        while col:
            r = min(col)
            if r not in self.cols:
                if col[r] < 0:
                    col_scale(col, -1)
                    col_scale(tail, -1)
                self._trim(tail)
                self.cols[r] = col
                self.tails[r] = tail
                return None
            piv = self.cols[r]
            ptail = self.tails[r]
            a = piv[r]
            q = col[r] // a  # floor first: keeps every entry below the pivot
            if q:
                col_addmul(col, piv, -q, cmod, r)
                col_addmul(tail, ptail, -q, tmod)
            b = col.get(r, 0)
            if b:
                g, x, y = _xgcd(a, b)
                # new pivot = x*piv + y*col ; residual = (a/g)*col - (b/g)*piv
                newp: dict = {}
                col_addmul(newp, piv, x)
                col_addmul(newp, col, y)
                newt: dict = {}
                col_addmul(newt, ptail, x, tmod)
                col_addmul(newt, tail, y, tmod)
                self._crush(newp, r)
                ac, bc = a // g, b // g
                col_scale(col, ac)
                col_addmul(col, piv, -bc, cmod, r)
                col_scale(tail, ac)
                col_addmul(tail, ptail, -bc, tmod)
                self._crush(col)
                self._trim(tail)
                self.cols[r] = newp
                self.tails[r] = newt
        self._trim(tail)
        return tail if tail else None

    def contains(self, vec: dict) -> bool:
        col = dict(vec)
        while col:
            r = min(col)
            piv = self.cols.get(r)
            if piv is None or col[r] % piv[r] != 0:
                return False
            col_addmul(col, piv, -(col[r] // piv[r]))
        return True

    def reduce(self, vec: dict) -> dict:
        """Residue of vec after greedy reduction (empty iff vec in lattice)."""
        col = dict(vec)
        while col:
            r = min(col)
            piv = self.cols.get(r)
            if piv is None or col[r] % piv[r] != 0:
                return col
            col_addmul(col, piv, -(col[r] // piv[r]))
        return col

    def solve(self, vec: dict) -> dict | None:
        """Coefficients on pivot rows expressing vec, or None if outside."""
        col = dict(vec)
        coeffs: dict[int, int] = {}
        while col:
            r = min(col)
            piv = self.cols.get(r)
            if piv is None or col[r] % piv[r] != 0:
                return None
            q = col[r] // piv[r]
            coeffs[r] = q
            col_addmul(col, piv, -q)
        return coeffs

    def pivot_rows(self) -> list[int]:
        return sorted(self.cols)

    def basis(self) -> list[dict]:
        return [self.cols[r] for r in sorted(self.cols)]

    def rank(self) -> int:
        return len(self.cols)


def span_echelon(cols, seed: Echelon | None = None, col_mod: int = 0) -> Echelon:
    """Echelon of the spanned lattice.  A nonzero col_mod is sound only if
    col_mod * e_r is in the span for every row r; generators guaranteeing
    that (e.g. relation columns) must come first so the final pivots span
    the lattice exactly."""
    e = seed.copy() if seed is not None else Echelon()
    if col_mod > 1:
        e.col_mod = col_mod
    for c in cols:
        e.insert(dict(c))
    e.col_mod = 0
    return e


def lattice_kernel(cols, ntracked: int | None = None, seed: Echelon | None = None,
                   tail_mod: int = 0, col_mod: int = 0) -> list[dict]:
    """Integer kernel of the column family, as combination vectors over the
    first ``ntracked`` column indices (default: all).  Untracked columns may
    enter combinations freely without being recorded, which computes the
    projection of the kernel onto the tracked coordinates.

    With a nonzero ``tail_mod`` the result generates the kernel only up to
    tail_mod * Z^ntracked, which the caller must add.  A nonzero ``col_mod``
    requires col_mod * e_r to lie in the span of the inserted columns for
    every row r (e.g. the seed holds the relation lattice of a group with
    that exponent)."""
    e = seed.copy() if seed is not None else Echelon()
    e.tail_mod = tail_mod
    e.col_mod = col_mod
    kernel = []
    for j, c in enumerate(cols):
        tail = {j: 1} if (ntracked is None or j < ntracked) else {}
        t = e.insert(dict(c), tail)
        if t:
            kernel.append(t)
    return kernel


def preimage_lattice(map_cols, target: Echelon, nvars: int, tail_mod: int = 0,
                     col_mod: int = 0) -> list[dict]:
    """Generators of {v in Z^nvars : sum_j v_j * map_cols[j] lies in target},
    modulo tail_mod * Z^nvars when tail_mod is nonzero (see lattice_kernel)."""
    return lattice_kernel(list(map_cols), ntracked=nvars, seed=target,
                          tail_mod=tail_mod, col_mod=col_mod)


def lattice_intersection(cols_a, cols_b) -> list[dict]:
    """Generators of (span cols_a) ∩ (span cols_b)."""
    cols_a = list(cols_a)
    combos = lattice_kernel(cols_a + [dict(c) for c in cols_b], ntracked=len(cols_a))
    out = []
    for combo in combos:
        vec: dict = {}
        for j, k in combo.items():
            col_addmul(vec, cols_a[j], k)
        if vec:
            out.append(vec)
    return out


# ---------------------------------------------------------------------------
# Smith normal form (dense, with transforms)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Unimodular (U, S, V) with U @ m @ V == S, S diagonal with each entry
    dividing the next.  Pivot choice: smallest nonzero absolute value, ties
    broken by lowest (row, col), for reproducible transforms."""
    u, _, s, v = _snf_full(m)
    return u, s, v


def _snf_full(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """(U, U^{-1}, S, V); the inverse transform serves representative
    normalisation in presented groups."""
    rows, cols = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    uinv = IntMatrix.identity(rows).to_rows()
    v = IntMatrix.identity(cols).to_rows()

    def row_addmul(i, j, k):  # row_i += k*row_j
        ai, aj = a[i], a[j]
        for t in range(cols):
            ai[t] += k * aj[t]
        ui, uj = u[i], u[j]
        for t in range(rows):
            ui[t] += k * uj[t]
        for t in range(rows):
            uinv[t][j] -= k * uinv[t][i]

    def cop_addmul(i, j, k):  # col_i += k*col_j
        for t in range(rows):
            a[t][i] += k * a[t][j]
        for t in range(cols):
            v[t][i] += k * v[t][j]

    def row_swap(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for t in range(rows):
            uinv[t][i], uinv[t][j] = uinv[t][j], uinv[t][i]

    def col_swap(i, j):
        if i == j:
            return
        for t in range(rows):
            a[t][i], a[t][j] = a[t][j], a[t][i]
        for t in range(cols):
            v[t][i], v[t][j] = v[t][j], v[t][i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for t in range(rows):
            uinv[t][i] = -uinv[t][i]

    def clear_pivot(t):
        """Assuming a[t][t] != 0, clear row t and column t below/right."""
        while True:
            restart = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        row_addmul(i, t, -q)
                    if a[i][t]:  # remainder strictly smaller: promote it
                        row_swap(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        cop_addmul(j, t, -q)
                    if a[t][j]:
                        col_swap(t, j)
                        restart = True
                        break
            if restart:
                continue
            return

    nmin = min(rows, cols)
    t = 0
    while t < nmin:
        best = None
        for i in range(t, rows):
            ai = a[i]
            for j in range(t, cols):
                x = ai[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        clear_pivot(t)
        if a[t][t] < 0:
            row_negate(t)
        t += 1
    rank = t

    # divisibility chain: merge adjacent violations via a local 2x2 pass
    def local_fix(i, j):
        cop_addmul(j, i, 1)  # block is now [[x, x], [0, y]]
        while True:
            while True:  # rediagonalise the 2x2 block
                entries = [
                    (abs(a[r][c]), r, c) for r in (i, j) for c in (i, j) if a[r][c]
                ]
                _, pr, pc = min(entries)
                row_swap(i, pr)
                col_swap(i, pc)
                if a[j][i]:
                    q = a[j][i] // a[i][i]
                    if q:
                        row_addmul(j, i, -q)
                    if a[j][i]:
                        continue
                if a[i][j]:
                    q = a[i][j] // a[i][i]
                    if q:
                        cop_addmul(j, i, -q)
                    if a[i][j]:
                        continue
                break
            if a[j][j] % a[i][i] != 0:
                row_addmul(i, j, 1)  # pull the bad entry next to the pivot
                continue
            break
        if a[i][i] < 0:
            row_negate(i)
        if a[j][j] < 0:
            row_negate(j)

    while True:
        for i in range(rank - 1):
            if a[i + 1][i + 1] % a[i][i] != 0:
                local_fix(i, i + 1)
                break
        else:
            break

    return (
        IntMatrix.from_rows(u),
        IntMatrix.from_rows(uinv),
        IntMatrix.from_rows(a),
        IntMatrix.from_rows(v),
    )


def snf_invariants(cols, nrows: int) -> tuple[int, list[int]]:
    """(rank, invariant factors > 1) of the integer matrix given by sparse
    columns, without transform tracking.  Scales to large lattices."""
    mat: dict[int, dict] = {}
    rowix: dict[int, set] = {}
    for j, c in enumerate(cols):
        if c:
            mat[j] = dict(c)
            for r in c:
                rowix.setdefault(r, set()).add(j)

    def unlink(j, r):
        s = rowix.get(r)
        if s is not None:
            s.discard(j)
            if not s:
                del rowix[r]

    def set_entry(j, r, val):
        col = mat[j]
        if val:
            if r not in col:
                rowix.setdefault(r, set()).add(j)
            col[r] = val
        else:
            if r in col:
                del col[r]
                unlink(j, r)

    def drop_col(j):
        for r in list(mat[j]):
            unlink(j, r)
        del mat[j]

    diag = []
    while mat:
        best = None
        for j, col in mat.items():
            for r, val in col.items():
                key = (abs(val), r, j)
                if best is None or key < best:
                    best = key
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pr, pj = best
        while True:
            pcol = mat[pj]
            pv = pcol[pr]
            stolen = False
            for j in [jj for jj in rowix.get(pr, ()) if jj != pj]:
                b = mat[j].get(pr, 0)
                if not b:
                    continue
                q = b // pv
                if q:
                    for r, val in list(pcol.items()):
                        set_entry(j, r, mat[j].get(r, 0) - q * val)
                if mat[j].get(pr, 0):  # nonzero remainder: smaller pivot
                    pj = j
                    stolen = True
                    break
            if stolen or len(rowix.get(pr, ())) > 1:
                continue
            pcol = mat[pj]
            pv = pcol[pr]
            moved = False
            for r in [rr for rr in pcol if rr != pr]:
                b = pcol.get(r, 0)
                if not b:
                    continue
                q = b // pv
                if q:
                    for j in list(rowix.get(pr, ())):
                        set_entry(j, r, mat[j].get(r, 0) - q * mat[j].get(pr, 0))
                if mat[pj].get(r, 0):
                    pr = r
                    moved = True
                    break
            if moved or len(rowix.get(pr, ())) > 1 or len(mat[pj]) > 1:
                continue
            break
        diag.append(abs(mat[pj][pr]))
        drop_col(pj)

    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[j] % diag[i] != 0:
                    g = gcd(diag[i], diag[j])
                    diag[i], diag[j] = g, diag[i] // g * diag[j]
                    changed = True
    diag.sort()
    return len(diag), [d for d in diag if d > 1]


# ---------------------------------------------------------------------------
# presented groups


class FgAbelianGroup:
    """A finitely generated abelian group, presented by generators and
    relation columns.  Elements are integer coefficient tuples on the
    generators, understood modulo the relation lattice.

    >>> FgAbelianGroup.free(2).canonical
    (2, ())
    >>> FgAbelianGroup.from_invariants([2, 4]).canonical
    (0, (2, 4))
    """

    def __init__(self, ngens: int, relations=None) -> None:
        self.ngens = ngens
        if relations is None:
            self._rel_cols = []
        elif isinstance(relations, IntMatrix):
            if relations.rows != ngens:
                raise ValueError("relation columns must have one row per generator")
            self._rel_cols = relations.columns_sparse()
        else:
            self._rel_cols = [dict(c) for c in relations]
            for c in self._rel_cols:
                if any(not 0 <= r < ngens for r in c):
                    raise ValueError("relation entry outside the generator range")

    @classmethod
    def free(cls, rank: int) -> "FgAbelianGroup":
        return cls(rank)

    @classmethod
    def from_invariants(cls, torsion, free_rank: int = 0) -> "FgAbelianGroup":
        torsion = [int(d) for d in torsion]
        n = len(torsion) + free_rank
        return cls(n, [{i: d} for i, d in enumerate(torsion)])

    @classmethod
    def zero(cls) -> "FgAbelianGroup":
        return cls(0)

    @cached_property
    def relations(self) -> IntMatrix:
        return IntMatrix.from_columns(self._rel_cols, self.ngens)

    @cached_property
    def rel_echelon(self) -> Echelon:
        return span_echelon(self._rel_cols)

    @cached_property
    def canonical(self) -> tuple[int, tuple[int, ...]]:
        fast = self._prime_cover_canonical()
        if fast is not None:
            return fast
        rank, invs = snf_invariants(self._rel_cols, self.ngens)
        return (self.ngens - rank, tuple(invs))

    def _prime_cover_canonical(self):
        """When singleton relations with one prime value (or 1) kill every
        generator, the group is an F_p-space: a mod-p rank suffices."""
        if self.ngens == 0:
            return (0, ())
        best: dict[int, int] = {}
        for c in self._rel_cols:
            if len(c) == 1:
                ((k, v),) = c.items()
                av = abs(v)
                if av and (k not in best or av < best[k]):
                    best[k] = av
        if len(best) != self.ngens:
            return None
        vals = set(best.values())
        vals.discard(1)
        if not vals:
            return (0, ())
        if len(vals) != 1:
            return None
        p = vals.pop()
        if not _is_prime(p):
            return None
        rank = _rank_mod_p(self._rel_cols, p)
        return (0, (p,) * (self.ngens - rank))

    @property
    def free_rank(self) -> int:
        return self.canonical[0]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.canonical[1]

    def is_trivial(self) -> bool:
        return self.canonical == (0, ())

    def is_finite(self) -> bool:
        return self.canonical[0] == 0

    def order(self) -> int:
        free, invs = self.canonical
        if free:
            raise AbelianError("infinite group has no order")
        out = 1
        for d in invs:
            out *= d
        return out

    # -- element arithmetic (representatives are reduced coefficient tuples)

    @cached_property
    def _normal_form_data(self):
        u, uinv, s, _ = _snf_full(self.relations)
        diag = [s.at(i, i) for i in range(min(s.rows, s.cols))]
        diag += [0] * (self.ngens - len(diag))
        return u, uinv, diag

    def reduce(self, vec) -> tuple:
        """Canonical representative of vec modulo the relation lattice."""
        if self.ngens == 0:
            return ()
        u, uinv, diag = self._normal_form_data
        w = list(u.apply(tuple(vec)))
        for i, d in enumerate(diag):
            if d:
                w[i] %= d
        return uinv.apply(tuple(w))

    def zero_elem(self) -> tuple:
        return (0,) * self.ngens

    def add(self, x, y) -> tuple:
        return self.reduce(tuple(a + b for a, b in zip(x, y)))

    def sub(self, x, y) -> tuple:
        return self.reduce(tuple(a - b for a, b in zip(x, y)))

    def neg(self, x) -> tuple:
        return self.reduce(tuple(-a for a in x))

    def smul(self, k: int, x) -> tuple:
        return self.reduce(tuple(k * a for a in x))

    def equal(self, x, y) -> bool:
        return self.rel_echelon.contains(
            {i: a - b for i, (a, b) in enumerate(zip(x, y)) if a != b}
        )

    def is_zero_elem(self, x) -> bool:
        return self.rel_echelon.contains({i: a for i, a in enumerate(x) if a})

    @cached_property
    def elements(self) -> tuple:
        """All elements (finite groups only), in a fixed deterministic order."""
        if not self.is_finite():
            raise AbelianError("cannot enumerate an infinite group")
        _, uinv, diag = self._normal_form_data
        return tuple(
            self.reduce(uinv.apply(combo))
            for combo in itertools.product(*(range(d) for d in diag))
        )

    @cached_property
    def element_index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def iter_elements(self):
        """Deterministic enumeration that also covers infinite groups:
        torsion coordinates cycle inside shells of growing free part."""
        if self.is_finite():
            yield from self.elements
            return
        _, uinv, diag = self._normal_form_data
        free_pos = [i for i, d in enumerate(diag) if d == 0]
        tor_pos = [i for i, d in enumerate(diag) if d]
        tor_ranges = [range(diag[i]) for i in tor_pos]
        nfree = len(free_pos)

        def spiral(s):
            vals = [0]
            for k in range(1, s + 1):
                vals.extend((k, -k))
            return vals

        def shells():
            yield (0,) * nfree
            s = 1
            while True:
                for combo in itertools.product(spiral(s), repeat=nfree):
                    if combo and max(abs(c) for c in combo) == s:
                        yield combo
                s += 1

        for free_combo in shells():
            for tor_combo in itertools.product(*tor_ranges):
                w = [0] * self.ngens
                for p, val in zip(free_pos, free_combo):
                    w[p] = val
                for p, val in zip(tor_pos, tor_combo):
                    w[p] = val
                yield self.reduce(uinv.apply(tuple(w)))

    def __repr__(self) -> str:
        free, invs = self.canonical
        parts = ["Z"] * free + [f"Z/{d}" for d in invs]
        return "FgAbelianGroup<" + (" + ".join(parts) if parts else "0") + ">"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _rank_mod_p(cols, p: int) -> int:
    """Rank of the sparse column family over the field with p elements."""
    piv: dict[int, dict] = {}
    rank = 0
    for c in cols:
        col = {r: v % p for r, v in c.items() if v % p}
        while col:
            r = min(col)
            if r in piv:
                q = col[r]
                pivcol = piv[r]
                for rr, vv in pivcol.items():
                    w = (col.get(rr, 0) - q * vv) % p
                    if w:
                        col[rr] = w
                    else:
                        col.pop(rr, None)
            else:
                inv = pow(col[r], -1, p)
                piv[r] = {rr: (vv * inv) % p for rr, vv in col.items()}
                rank += 1
                break
    return rank


def canonicalize(group: FgAbelianGroup) -> tuple[int, tuple[int, ...]]:
    """Free rank and invariant-factor chain classifying the group."""
    return group.canonical


def direct_sum_canonical(*forms) -> tuple[int, tuple[int, ...]]:
    """Canonical form of a direct sum of groups given by canonical forms."""
    free = sum(f[0] for f in forms)
    tors = [d for f in forms for d in f[1]]
    cols = [{i: d} for i, d in enumerate(tors)]
    _, invs = snf_invariants(cols, len(tors))
    return (free, tuple(invs))


# ---------------------------------------------------------------------------
# homomorphisms


class AbHom:
    """Homomorphism of presented groups, as a matrix on generators.

    The matrix must carry the source relation lattice into the target
    relation lattice; this is verified on construction.
    """

    def __init__(self, source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> None:
        if matrix.rows != target.ngens or matrix.cols != source.ngens:
            raise ValueError("matrix shape does not match source/target generators")
        self.source = source
        self.target = target
        self.matrix = matrix
        for col in source._rel_cols:
            if not target.rel_echelon.contains(_apply_sparse(matrix, col)):
                raise AbelianError("matrix does not preserve the relation lattice")

    @classmethod
    def zero(cls, source: FgAbelianGroup, target: FgAbelianGroup) -> "AbHom":
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    @classmethod
    def identity(cls, group: FgAbelianGroup) -> "AbHom":
        return cls(group, group, IntMatrix.identity(group.ngens))

    def apply(self, vec) -> tuple:
        return self.target.reduce(self.matrix.apply(tuple(vec)))

    def compose(self, other: "AbHom") -> "AbHom":
        """self after other."""
        if other.target.ngens != self.source.ngens:
            raise ValueError("composition mismatch")
        return AbHom(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self) -> bool:
        ech = self.target.rel_echelon
        return all(ech.contains(c) for c in self.matrix.columns_sparse())

    def __repr__(self) -> str:
        return f"AbHom({self.source!r} -> {self.target!r})"


def _apply_sparse(matrix: IntMatrix, col: dict) -> dict:
    out: dict[int, int] = {}
    for j, v in col.items():
        for i in range(matrix.rows):
            w = matrix.at(i, j) * v
            if w:
                x = out.get(i, 0) + w
                if x:
                    out[i] = x
                else:
                    del out[i]
    return out


# ---------------------------------------------------------------------------
# subquotients


class LatticeSubquotient:
    """A subquotient (span num)/(span den) of Z^dim, carrying a presentation,
    a representative basis (lifts of the generators) and class arithmetic.

    ``col_mod`` speeds up construction when both lattices contain
    col_mod * Z^dim and the generator lists lead with columns spanning it
    (e.g. relation columns of a finite-exponent group)."""

    def __init__(self, dim: int, num_cols, den_cols, col_mod: int = 0) -> None:
        self.dim = dim
        self.num_echelon = span_echelon(num_cols, col_mod=col_mod)
        self.basis = self.num_echelon.basis()
        self.den_echelon = span_echelon(den_cols, col_mod=col_mod)
        order = self.num_echelon.pivot_rows()
        pos = {r: k for k, r in enumerate(order)}
        rel_cols = []
        if col_mod > 1:
            # the denominator contains col_mod * Z^dim, so col_mod kills
            # every presentation generator; this keeps coefficients small
            rel_cols.extend({k: col_mod} for k in range(len(self.basis)))
        for c in den_cols:
            coeffs = self.num_echelon.solve(dict(c))
            if coeffs is None:
                raise NotContained("denominator lattice not inside numerator lattice")
            if col_mod > 1:
                col = {pos[r]: q % col_mod for r, q in coeffs.items()}
                col = {k: v for k, v in col.items() if v}
            else:
                col = {pos[r]: q for r, q in coeffs.items() if q}
            if col:
                rel_cols.append(col)
        self._pos = pos
        self.group = FgAbelianGroup(
            len(self.basis), IntMatrix.from_columns(rel_cols, len(self.basis))
        )

    def classify(self, vec: dict | tuple) -> tuple:
        """Coordinates of the class of vec in the presentation."""
        col = vec if isinstance(vec, dict) else vec_to_col(vec)
        coeffs = self.num_echelon.solve(col)
        if coeffs is None:
            raise NotContained("vector not in the numerator lattice")
        raw = [0] * len(self.basis)
        for r, q in coeffs.items():
            raw[self._pos[r]] = q
        return self.group.reduce(tuple(raw))

    def lift(self, coords) -> dict:
        """A representative in Z^dim of the class with given coordinates."""
        out: dict[int, int] = {}
        for k, c in enumerate(coords):
            if c:
                col_addmul(out, self.basis[k], c)
        return out

    def contains(self, vec: dict | tuple) -> bool:
        col = vec if isinstance(vec, dict) else vec_to_col(vec)
        return self.num_echelon.contains(col)

    def class_is_zero(self, vec: dict | tuple) -> bool:
        col = vec if isinstance(vec, dict) else vec_to_col(vec)
        return self.den_echelon.contains(col)

    def same_class(self, u, v) -> bool:
        cu = dict(u) if isinstance(u, dict) else vec_to_col(u)
        cv = v if isinstance(v, dict) else vec_to_col(v)
        col_addmul(cu, cv, -1)
        return self.den_echelon.contains(cu)


def subquotient(
    amb: FgAbelianGroup, sub_gens: IntMatrix, quot_gens: IntMatrix
) -> LatticeSubquotient:
    """(span sub_gens)/(span quot_gens) inside ``amb``, with lift maps.

    Raises NotContained unless quot_gens lies in the lattice spanned by
    sub_gens together with amb's relations.
    """
    if sub_gens.rows != amb.ngens or quot_gens.rows != amb.ngens:
        raise ValueError("generator columns must live in the ambient group")
    num = sub_gens.columns_sparse() + amb._rel_cols
    den = quot_gens.columns_sparse() + amb._rel_cols
    num_ech = span_echelon(num)
    for c in quot_gens.columns_sparse():
        if not num_ech.contains(c):
            raise NotContained("quotient generators escape the subgroup lattice")
    return LatticeSubquotient(amb.ngens, num, den)


def homology_at(f: AbHom, g: AbHom) -> FgAbelianGroup:
    """ker(g)/im(f) for a three-term complex A --f--> B --g--> C.

    Raises CompositionNotZero unless g∘f vanishes as a map of presented
    groups.
    """
    return homology_with_reps(f, g).group


def homology_with_reps(f: AbHom, g: AbHom) -> LatticeSubquotient:
    if f.target.ngens != g.source.ngens:
        raise ValueError("f and g are not composable")
    comp = g.matrix @ f.matrix
    ech_c = g.target.rel_echelon
    for col in comp.columns_sparse():
        if not ech_c.contains(col):
            raise CompositionNotZero("g∘f is not zero")
    b = f.target
    cocycles = preimage_lattice(
        g.matrix.columns_sparse(), g.target.rel_echelon, b.ngens
    )
    num = b._rel_cols + cocycles
    den = b._rel_cols + f.matrix.columns_sparse()
    return LatticeSubquotient(b.ngens, num, den)


# ---------------------------------------------------------------------------
# chain complexes of presented groups


class PresentedComplex:
    """A nonnegatively graded cochain complex of presented groups.

    Degree ``n`` has ``dims[n]`` generators with relation columns
    ``rels[n]``; ``diffs[n]`` holds one sparse column per generator, the
    differential into degree ``n+1``.  Cohomology is available for
    ``n < len(diffs)`` (the top degree lacks its outgoing differential).
    """

    def __init__(self, dims, rels, diffs, exponents=None) -> None:
        self.dims = list(dims)
        self.rels = [list(r) for r in rels]
        self.diffs = [list(d) for d in diffs]
        # per-degree annihilator of the presented group (0 when free/unknown);
        # lets kernel tails stay reduced, since exponent multiples of the
        # generators always lie among the relations
        self.exponents = list(exponents) if exponents else [0] * len(self.dims)
        self._cocycle_cache: dict[int, list[dict]] = {}
        self._boundary_cache: dict[int, Echelon] = {}
        self._rel_cache: dict[int, Echelon] = {}

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def rel_echelon(self, n: int) -> Echelon:
        if n not in self._rel_cache:
            self._rel_cache[n] = span_echelon(self.rels[n])
        return self._rel_cache[n]

    def differential_image(self, vec: dict, n: int) -> dict:
        """Image of a degree-n sparse vector under the differential."""
        out: dict[int, int] = {}
        cols = self.diffs[n]
        for j, v in vec.items():
            col_addmul(out, cols[j], v)
        return out

    def cocycles(self, n: int) -> list[dict]:
        """Generators of the cocycle lattice, modulo the degree-n relations
        (always union with rels[n] downstream)."""
        if n not in self._cocycle_cache:
            self._cocycle_cache[n] = preimage_lattice(
                self.diffs[n], self.rel_echelon(n + 1), self.dims[n],
                tail_mod=self.exponents[n], col_mod=self.exponents[n + 1],
            )
        return self._cocycle_cache[n]

    def boundaries(self, n: int) -> Echelon:
        """Echelon of im(d) + relations at degree n."""
        if n not in self._boundary_cache:
            cols = list(self.rels[n])
            if n > 0:
                cols = cols + self.diffs[n - 1]
            self._boundary_cache[n] = span_echelon(cols, col_mod=self.exponents[n])
        return self._boundary_cache[n]

    def cohomology(self, n: int) -> LatticeSubquotient:
        num = self.rels[n] + self.cocycles(n)
        den = self.rels[n] + (self.diffs[n - 1] if n > 0 else [])
        return LatticeSubquotient(self.dims[n], num, den, col_mod=self.exponents[n])

    def is_cocycle(self, n: int, vec: dict) -> bool:
        return self.rel_echelon(n + 1).contains(self.differential_image(vec, n))

    def is_coboundary(self, n: int, vec: dict) -> bool:
        return self.boundaries(n).contains(vec)
