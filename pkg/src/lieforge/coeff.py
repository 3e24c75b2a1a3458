"""Exact arithmetic and canonical linear algebra over F_l and Z/l^N.

Matrices act on row vectors: a map ``V -> W`` between free modules of ranks
``m`` and ``n`` is an ``m x n`` matrix and ``x |-> x @ M``.  Every row span is
canonicalised through the Howell normal form, which over a field is the
reduced row echelon form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# entries are multiplied pairwise in int64
MAX_MODULUS = 2**31


class CoeffError(ValueError):
    pass


class ComplexError(CoeffError):
    """Raised when two matrices handed to :func:`homology` do not compose to zero."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class CoeffRing:
    """The ring Z/l^N; ``N == 1`` is the prime field F_l."""

    l: int
    N: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.l, int) or not _is_prime(self.l):
            raise CoeffError(f"l={self.l!r} is not prime")
        if not isinstance(self.N, int) or self.N < 1:
            raise CoeffError(f"precision N={self.N!r} must be a positive integer")
        if self.l**self.N > MAX_MODULUS:
            raise CoeffError(f"modulus {self.l}^{self.N} exceeds {MAX_MODULUS}")

    @property
    def modulus(self) -> int:
        return self.l**self.N

    @property
    def is_field(self) -> bool:
        return self.N == 1

    @property
    def residue_field(self) -> "CoeffRing":
        return CoeffRing(self.l, 1)

    def with_precision(self, N: int) -> "CoeffRing":
        return CoeffRing(self.l, N)

    def reduce(self, x: int) -> int:
        return int(x) % self.modulus

    def valuation(self, x: int) -> int:
        """l-adic valuation of ``x`` as an element of Z/l^N (zero has valuation N)."""
        x = int(x) % self.modulus
        if x == 0:
            return self.N
        v = 0
        while x % self.l == 0:
            x //= self.l
            v += 1
        return v

    def is_unit(self, x: int) -> bool:
        return int(x) % self.l != 0

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise CoeffError(f"{x} is not a unit mod {self.modulus}")
        return pow(int(x), -1, self.modulus)

    def elements(self) -> range:
        return range(self.modulus)

    def __str__(self) -> str:
        return f"F_{self.l}" if self.N == 1 else f"Z/{self.l}^{self.N}"


class Mat:
    """Immutable dense matrix over a :class:`CoeffRing` (int64 storage)."""

    __slots__ = ("ring", "data")

    def __init__(self, ring: CoeffRing, data: np.ndarray | Sequence[Sequence[int]], ncols: int | None = None):
        arr = np.asarray(data, dtype=np.int64)
        if arr.size == 0:
            nrows = arr.shape[0] if arr.ndim >= 1 else 0
            if ncols is None:
                ncols = arr.shape[1] if arr.ndim == 2 else 0
            arr = np.zeros((nrows, ncols), dtype=np.int64)
        if arr.ndim != 2:
            raise CoeffError(f"matrix data must be two-dimensional, got shape {arr.shape}")
        if ncols is not None and arr.shape[1] != ncols:
            raise CoeffError(f"expected {ncols} columns, got {arr.shape[1]}")
        arr = np.mod(arr, ring.modulus)
        arr.setflags(write=False)
        self.ring = ring
        self.data = arr

    @classmethod
    def zeros(cls, ring: CoeffRing, nrows: int, ncols: int) -> "Mat":
        return cls(ring, np.zeros((nrows, ncols), dtype=np.int64))

    @classmethod
    def identity(cls, ring: CoeffRing, n: int) -> "Mat":
        return cls(ring, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, ring: CoeffRing, rows: Iterable[Sequence[int]], ncols: int) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(ring, 0, ncols)
        return cls(ring, rows, ncols=ncols)

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.data[i])

    def is_zero(self) -> bool:
        return not self.data.any()

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ring != other.ring:
            raise CoeffError("ring mismatch")
        if self.ncols != other.nrows:
            raise CoeffError(f"cannot compose {self.shape} with {other.shape}")
        return Mat(self.ring, _matmul(self.data, other.data, self.ring.modulus))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and bool((self.data == other.data).all())

    def __hash__(self) -> int:
        return hash((self.ring, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"Mat({self.ring}, {self.tolist()})"

    def transpose(self) -> "Mat":
        return Mat(self.ring, self.data.T.copy())

    def vstack(self, other: "Mat") -> "Mat":
        if self.ncols != other.ncols:
            raise CoeffError("column mismatch in vstack")
        return Mat(self.ring, np.vstack([self.data, other.data]))

    def reduce_to(self, ring: CoeffRing) -> "Mat":
        if ring.l != self.ring.l or ring.N > self.ring.N:
            raise CoeffError(f"cannot reduce {self.ring} matrix to {ring}")
        return Mat(ring, self.data)


def _matmul(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # accumulate column by column of a to stay inside int64
    for k in range(a.shape[1]):
        col = a[:, k]
        if col.any():
            out = (out + np.outer(col, b[k])) % q
    return out


def _valuations(ring: CoeffRing, col: np.ndarray) -> np.ndarray:
    v = np.full(col.shape, ring.N, dtype=np.int64)
    c = col.copy()
    nz = c != 0
    v[nz] = 0
    for _ in range(ring.N - 1):
        div = nz & (c % ring.l == 0)
        if not div.any():
            break
        v[div] += 1
        c[div] //= ring.l
        nz = div
    return v


def _howell_array(ring: CoeffRing, a: np.ndarray) -> np.ndarray:
    q, l, N = ring.modulus, ring.l, ring.N
    w = np.mod(a.astype(np.int64), q)
    ncols = w.shape[1]
    r = 0
    for c in range(ncols):
        if r >= w.shape[0]:
            break
        vals = _valuations(ring, w[r:, c])
        i = int(np.argmin(vals))
        e = int(vals[i])
        if e >= N:
            continue
        i += r
        if i != r:
            w[[r, i]] = w[[i, r]]
        pivot = int(w[r, c])
        unit = pivot // l**e
        if unit != 1:
            w[r] = (w[r] * pow(unit, -1, q)) % q
        pe = l**e
        below = w[r + 1 :, c]
        if below.any():
            f = below // pe
            w[r + 1 :] = (w[r + 1 :] - np.outer(f, w[r])) % q
        above = w[:r, c]
        if above.any():
            f = above // pe
            w[:r] = (w[:r] - np.outer(f, w[r])) % q
        if e > 0:
            ann = (w[r] * l ** (N - e)) % q
            if ann.any():
                w = np.vstack([w, ann[None, :]])
        r += 1
    return w[:r].copy()


def howell_form(M: Mat) -> Mat:
    """Howell normal form of the row span of ``M`` (zero rows dropped).

    Pivots are normalised to powers of l, entries above a pivot ``l^e`` lie in
    ``[0, l^e)``, and for every pivot row the multiple that kills its pivot is
    in the span of the rows below it.  Over F_l this is the RREF.
    """
    return Mat(M.ring, _howell_array(M.ring, M.data), ncols=M.ncols)


def _pivots(ring: CoeffRing, h: np.ndarray) -> list[tuple[int, int]]:
    out = []
    for row in h:
        nz = np.flatnonzero(row)
        c = int(nz[0])
        out.append((c, ring.valuation(int(row[c]))))
    return out


class RowSolver:
    """Precomputed reduction for repeated ``x @ M == b`` solves against a fixed ``M``."""

    def __init__(self, M: Mat):
        ring = M.ring
        self.ring = ring
        self.M = M
        m, n = M.shape
        aug = np.hstack([M.data, np.eye(m, dtype=np.int64)])
        h = _howell_array(ring, aug) if m else np.zeros((0, n), dtype=np.int64)
        top = []
        kern = []
        for row in h:
            if row[:n].any():
                top.append(row)
            else:
                kern.append(row[n:])
        self._top = np.array(top, dtype=np.int64).reshape(len(top), n + m)
        self._pivots = _pivots(ring, self._top[:, :n]) if top else []
        self.kernel = Mat(ring, np.array(kern, dtype=np.int64).reshape(len(kern), m), ncols=m)

    @property
    def span(self) -> Mat:
        return Mat(self.ring, self._top[:, : self.M.ncols].copy(), ncols=self.M.ncols)

    def solve(self, b: Sequence[int]) -> tuple[int, ...] | None:
        """A deterministic ``x`` with ``x @ M == b``, or ``None`` if ``b`` is outside the row span."""
        ring = self.ring
        q, l = ring.modulus, ring.l
        m, n = self.M.shape
        vec = np.mod(np.asarray(b, dtype=np.int64), q)
        if vec.shape != (n,):
            raise CoeffError(f"right-hand side has length {vec.shape}, expected {n}")
        x = np.zeros(m, dtype=np.int64)
        for (c, e), row in zip(self._pivots, self._top):
            val = int(vec[c])
            if val == 0:
                continue
            pe = l**e
            if val % pe:
                return None
            f = val // pe
            vec = (vec - f * row[:n]) % q
            x = (x + f * row[n:]) % q
        if vec.any():
            return None
        return tuple(int(v) for v in x)

    def contains(self, b: Sequence[int]) -> bool:
        return self.solve(b) is not None


def kernel_basis(M: Mat) -> Mat:
    """Howell-form generators of the left kernel ``{x : x @ M == 0}``."""
    if M.nrows == 0:
        return Mat.zeros(M.ring, 0, 0)
    return howell_form(RowSolver(M).kernel)


def solve_left(M: Mat, b: Sequence[int]) -> tuple[int, ...] | None:
    return RowSolver(M).solve(b)


def rank(M: Mat) -> int:
    """Number of Howell rows; the usual rank over F_l."""
    return howell_form(M).nrows


def span_cardinality(M: Mat) -> int:
    """Number of elements in the row span of ``M``."""
    h = howell_form(M)
    total = 0
    for c, e in _pivots(M.ring, h.data) if h.nrows else []:
        total += M.ring.N - e
    return M.ring.l**total


def _smith_presentation(ring: CoeffRing, rel: np.ndarray, gens: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Diagonalise the relation matrix of ``R^k / rowspan(rel)`` over the chain ring.

    Column operations are mirrored on ``gens`` (the ambient images of the
    ``k`` generators) so the returned rows generate the cyclic summands.
    Returns the exponents ``e_t`` (summand ``Z/l^{e_t}``) and generator rows.
    """
    q, l, N = ring.modulus, ring.l, ring.N
    R = np.mod(rel.copy(), q)
    G = np.mod(gens.copy(), q)
    k = G.shape[0]
    exps: list[int] = []
    t = 0
    while t < k and t < R.shape[0]:
        sub = R[t:, t:]
        if not sub.any():
            break
        best = None
        for (i, j), val in np.ndenumerate(sub):
            if val:
                v = ring.valuation(int(val))
                if best is None or v < best[0]:
                    best = (v, i + t, j + t)
                    if v == 0:
                        break
        e, i, j = best
        if i != t:
            R[[t, i]] = R[[i, t]]
        if j != t:
            R[:, [t, j]] = R[:, [j, t]]
            G[[t, j]] = G[[j, t]]
        unit = int(R[t, t]) // l**e
        if unit != 1:
            R[t] = (R[t] * pow(unit, -1, q)) % q
        pe = l**e
        col = R[:, t].copy()
        col[t] = 0
        if col.any():
            R = (R - np.outer(col // pe, R[t])) % q
        rowt = R[t].copy()
        for jj in range(t + 1, k):
            f = int(rowt[jj]) // pe
            if f:
                R[:, jj] = (R[:, jj] - f * R[:, t]) % q
                G[t] = (G[t] + f * G[jj]) % q
        exps.append(e)
        t += 1
    exps.extend([N] * (k - t))
    return exps, G


@dataclass(frozen=True)
class Subquotient:
    """``cycles / boundaries`` inside a free module of rank ``ambient``.

    ``representatives`` has one row per cyclic summand, ``invariant_factors``
    the matching orders ``l^e`` (``e >= 1``).
    """

    ring: CoeffRing
    ambient: int
    cycles: Mat
    boundaries: Mat
    representatives: Mat
    invariant_factors: tuple[int, ...]
    _solver: RowSolver = field(repr=False, compare=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.invariant_factors)

    @property
    def free_rank(self) -> int:
        return sum(1 for f in self.invariant_factors if f == self.ring.modulus)

    @property
    def cardinality(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def is_cycle(self, v: Sequence[int]) -> bool:
        return RowSolver(self.cycles).contains(v) if self.cycles.nrows else not np.mod(np.asarray(v), self.ring.modulus).any()

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of the cycle ``v`` on ``representatives``."""
        if self.ambient == 0:
            return ()
        x = self._solver.solve(v)
        if x is None:
            raise CoeffError("vector is not a cycle of this subquotient")
        k = self.representatives.nrows
        return tuple(int(x[i]) % f for i, f in zip(range(k), self.invariant_factors))

    def is_boundary(self, v: Sequence[int]) -> bool:
        return all(c == 0 for c in self.coordinates(v))

    def lift(self, coords: Sequence[int]) -> tuple[int, ...]:
        """The cycle ``sum coords[i] * representatives[i]``."""
        q = self.ring.modulus
        out = np.zeros(self.ambient, dtype=np.int64)
        for c, row in zip(coords, self.representatives.data):
            out = (out + int(c) * row) % q
        return tuple(int(v) for v in out)


def homology(d_in: Mat, d_out: Mat) -> Subquotient:
    """``ker(d_out) / im(d_in)`` for ``source --d_in--> middle --d_out--> end``."""
    ring = d_in.ring
    if d_out.ring != ring:
        raise CoeffError("ring mismatch")
    if d_in.ncols != d_out.nrows:
        raise ComplexError(f"d_in has {d_in.ncols} columns but d_out has {d_out.nrows} rows")
    n = d_in.ncols
    if d_in.nrows and d_out.ncols and not (d_in @ d_out).is_zero():
        raise ComplexError("d_in @ d_out is not zero")
    if d_out.ncols == 0:
        cycles = Mat.identity(ring, n)
    else:
        cycles = kernel_basis(d_out) if n else Mat.zeros(ring, 0, 0)
    boundaries = howell_form(d_in) if d_in.nrows else Mat.zeros(ring, 0, n)

    if ring.is_field:
        reps = []
        basis = RowSolver(boundaries) if boundaries.nrows else None
        current = boundaries
        for z in cycles.data:
            if basis is not None and basis.contains(z):
                continue
            reps.append(z)
            current = Mat(ring, np.vstack([current.data, z[None, :]]), ncols=n)
            basis = RowSolver(current)
        rep_mat = Mat.from_rows(ring, reps, n)
        factors = tuple([ring.l] * len(reps))
    else:
        k = cycles.nrows
        gens = cycles.data
        rels = [RowSolver(cycles).kernel.data] if k else []
        if boundaries.nrows:
            solver = RowSolver(cycles)
            coords = []
            for b in boundaries.data:
                x = solver.solve(b)
                if x is None:
                    raise ComplexError("boundary is not a cycle")
                coords.append(x)
            rels.append(np.array(coords, dtype=np.int64))
        rel = np.vstack(rels) if rels else np.zeros((0, k), dtype=np.int64)
        rel = rel.reshape(-1, k)
        exps, new_gens = _smith_presentation(ring, rel, gens)
        keep = [i for i, e in enumerate(exps) if e > 0]
        rep_mat = Mat.from_rows(ring, [new_gens[i] for i in keep], n)
        factors = tuple(ring.l ** exps[i] for i in keep)
    stacked = rep_mat.vstack(boundaries) if n else rep_mat
    return Subquotient(ring, n, cycles, boundaries, rep_mat, factors, RowSolver(stacked))
