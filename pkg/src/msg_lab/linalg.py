"""Exact dense linear algebra over GF(p^e).

Matrices are immutable values: every operation returns a fresh Matrix.
Entries are stored unpacked, as an int array of shape (rows, cols, e)
holding coefficient vectors; the scalar interface uses the packed-int
encoding from gf.  The e == 1 case takes plain mod-p numpy paths, the
extension case reduces products through the field's multiplication
tensor.  Rank/kernel/det/solve all ride one Gauss-Jordan routine with
first-nonzero pivot selection, so pivot choice is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import poly
from .errors import BudgetError, UnsupportedCaseError
from .gf import Field

DEFAULT_SHIFT_BUDGET = 2**16


def _coeff_array(field: Field, data) -> np.ndarray:
    arr = np.asarray(data, dtype=field.np_dtype)
    if arr.ndim != 3 or arr.shape[2] != field.e:
        raise ValueError(f"expected (rows, cols, {field.e}) coefficient data")
    return arr % field.p


def _scale_rows(field: Field, rows: np.ndarray, packed_scalar: int) -> np.ndarray:
    """rows (..., e) times a packed scalar."""
    if field.e == 1:
        return rows * packed_scalar % field.p
    svec = np.array(field.coeffs(packed_scalar), dtype=field.np_dtype)
    return np.einsum("...i,j,ijk->...k", rows, svec, field.mul_tensor) % field.p


def _pack_one(field: Field, vec) -> int:
    out = 0
    mult = 1
    for c in vec:
        out += int(c) * mult
        mult *= field.p
    return out


class Matrix:
    __slots__ = ("field", "data")

    def __init__(self, field: Field, data: np.ndarray):
        arr = _coeff_array(field, data)
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, *args):
        raise AttributeError("Matrix is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_packed(field: Field, rows) -> "Matrix":
        arr = np.asarray(rows, dtype=field.np_dtype)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array of packed entries")
        return Matrix(field, field.unpack_np(arr))

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        return Matrix.from_packed(field, np.eye(n, dtype=np.int64))

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Matrix":
        return Matrix(field, np.zeros((rows, cols, field.e), dtype=field.np_dtype))

    @staticmethod
    def diagonal(field: Field, packed_entries: Sequence[int]) -> "Matrix":
        n = len(packed_entries)
        out = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(packed_entries):
            out[i, i] = a
        return Matrix.from_packed(field, out)

    @staticmethod
    def scalar(field: Field, n: int, packed: int) -> "Matrix":
        return Matrix.diagonal(field, [packed] * n)

    @staticmethod
    def hstack(mats: Sequence["Matrix"]) -> "Matrix":
        field = mats[0].field
        return Matrix(field, np.concatenate([m.data for m in mats], axis=1))

    @staticmethod
    def vstack(mats: Sequence["Matrix"]) -> "Matrix":
        field = mats[0].field
        return Matrix(field, np.concatenate([m.data for m in mats], axis=0))

    @staticmethod
    def block2(a: "Matrix", b: "Matrix", c: "Matrix", d: "Matrix") -> "Matrix":
        top = Matrix.hstack([a, b])
        bottom = Matrix.hstack([c, d])
        return Matrix.vstack([top, bottom])

    # -- shape and access --------------------------------------------------

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.data.shape[0], self.data.shape[1])

    def packed(self) -> np.ndarray:
        return self.field.pack_np(self.data)

    def entry(self, i: int, j: int) -> int:
        return _pack_one(self.field, self.data[i, j])

    def key(self) -> tuple:
        """Hashable identity, suitable for dict/set membership."""
        return (self.shape, tuple(int(v) for v in self.packed().ravel()))

    def col(self, j: int) -> "Matrix":
        return Matrix(self.field, self.data[:, j : j + 1, :])

    def columns(self) -> list["Matrix"]:
        return [self.col(j) for j in range(self.ncols)]

    def take_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.data[:, list(idx), :])

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(self.field, self.data[r0:r1, c0:c1, :])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.field.spec,) + self.key())

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.packed().tolist()})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.field, (self.data + other.data) % self.field.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.field, (self.data - other.data) % self.field.p)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, (-self.data) % self.field.p)

    def scale(self, packed_scalar: int) -> "Matrix":
        return Matrix(self.field, _scale_rows(self.field, self.data, packed_scalar))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        if f.e == 1:
            if f.np_dtype is object:
                # huge primes: keep products exact with Python integers
                a = self.data[:, :, 0].tolist()
                b = other.data[:, :, 0].tolist()
                prod = [
                    [
                        sum(ra[m] * b[m][c] for m in range(self.ncols)) % f.p
                        for c in range(other.ncols)
                    ]
                    for ra in a
                ]
                return Matrix.from_packed(f, np.array(prod, dtype=object))
            prod = (self.data[:, :, 0] @ other.data[:, :, 0]) % f.p
            return Matrix(f, prod[:, :, None])
        prod = (
            np.einsum("rmi,mcj,ijk->rck", self.data, other.data, f.mul_tensor) % f.p
        )
        return Matrix(f, prod)

    def matpow(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("matpow needs a square matrix")
        if k < 0:
            return self.inverse().matpow(-k)
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, np.swapaxes(self.data, 0, 1))

    def _check_same(self, other: "Matrix"):
        if self.field != other.field or self.shape != other.shape:
            raise ValueError("incompatible matrices")

    # -- elimination-backed operations -------------------------------------

    def _gauss_jordan(self, track_det: bool = False):
        """Reduced row echelon form with first-nonzero pivots.

        Returns (R coeff array, pivot column tuple, det_packed) where
        det_packed is the determinant when square and track_det is set
        (0 when singular), else None.
        """
        f = self.field
        R = np.array(self.data, copy=True)
        rows, cols = self.shape
        pivots = []
        det = f.one if track_det else None
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero((R[r:, c, :] != 0).any(axis=-1))
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                R[[r, i]] = R[[i, r]]
                if track_det:
                    det = f.neg(det)
            pv = _pack_one(f, R[r, c])
            if track_det:
                det = f.mul(det, pv)
            if pv != f.one:
                R[r] = _scale_rows(f, R[r], f.inv(pv))
            others = np.flatnonzero((R[:, c, :] != 0).any(axis=-1))
            others = others[others != r]
            if others.size:
                factors = R[others, c, :].copy()
                if f.e == 1:
                    R[others, :, 0] = (
                        R[others, :, 0] - factors[:, 0:1] * R[r, :, 0][None, :]
                    ) % f.p
                else:
                    update = np.einsum(
                        "mi,cj,ijk->mck", factors, R[r], f.mul_tensor
                    )
                    R[others] = (R[others] - update) % f.p
            pivots.append(c)
            r += 1
        if track_det:
            if rows != cols:
                raise ValueError("determinant needs a square matrix")
            if len(pivots) < rows:
                det = f.zero
        return R, tuple(pivots), det

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        R, pivots, _ = self._gauss_jordan()
        return Matrix(self.field, R), pivots

    def rank(self) -> int:
        return len(self._gauss_jordan()[1])

    def det(self) -> int:
        return self._gauss_jordan(track_det=True)[2]

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse needs a square matrix")
        n = self.nrows
        aug = Matrix.hstack([self, Matrix.identity(self.field, n)])
        R, pivots, _ = aug._gauss_jordan()
        if tuple(pivots) != tuple(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(self.field, R[:, n:, :])

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """One solution X of self @ X = rhs (free variables set to zero),
        or None when the system is inconsistent."""
        if self.field != rhs.field or self.nrows != rhs.nrows:
            raise ValueError("incompatible system")
        cols = self.ncols
        aug = Matrix.hstack([self, rhs])
        R, pivots, _ = aug._gauss_jordan()
        if any(c >= cols for c in pivots):
            return None
        f = self.field
        out = np.zeros((cols, rhs.ncols, f.e), dtype=f.np_dtype)
        for row_idx, c in enumerate(pivots):
            out[c] = R[row_idx, cols:, :]
        return Matrix(f, out)

    def kernel_basis(self) -> list["Matrix"]:
        """Column vectors spanning the right null space, in the
        deterministic order induced by the free columns."""
        f = self.field
        R, pivots, _ = self._gauss_jordan()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        out = []
        for c in free:
            vec = np.zeros((self.ncols, 1, f.e), dtype=f.np_dtype)
            vec[c, 0, 0] = f.one
            for row_idx, pc in enumerate(pivots):
                vec[pc, 0] = (-R[row_idx, c, :]) % f.p
            out.append(Matrix(f, vec))
        return out


# -- derived operations ----------------------------------------------------

# functional spellings of the standard Matrix bundle


def rank(m: Matrix) -> int:
    return m.rank()


def det(m: Matrix) -> int:
    return m.det()


def kernel_basis(m: Matrix):
    return m.kernel_basis()


def solve(m: Matrix, b: Matrix):
    return m.solve(b)


def invert(m: Matrix) -> Matrix:
    return m.inverse()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def matpow(m: Matrix, k: int) -> Matrix:
    return m.matpow(k)


def evaluate_poly_at(f_poly: poly.Poly, x: Matrix) -> Matrix:
    """f(x) by Horner's rule; coefficients are packed field elements."""
    field = x.field
    n = x.nrows
    acc = Matrix.zeros(field, n, n)
    for c in reversed(f_poly):
        acc = acc @ x
        if c != field.zero:
            acc = acc + Matrix.scalar(field, n, c)
    return acc


def commutant_basis(x: Matrix) -> list[Matrix]:
    """Basis of the linear space {M : x M = M x}."""
    return twisted_commutant_basis(x, x.field.one)


def twisted_commutant_basis(x: Matrix, lam: int) -> list[Matrix]:
    """Basis of {M : M x = lam * (x M)}.

    lam = 1 is the ordinary commutant; other scalars arise when deciding
    whether conjugation can move x to lam * x inside SL (projective class
    computations).
    """
    field = x.field
    n = x.nrows
    if x.ncols != n:
        raise ValueError("commutant needs a square matrix")
    # row-major vectorization: vec(M x) = (I (x) x^T) vec M,
    # vec(x M) = (x (x) I) vec M
    e = field.e
    eye = np.zeros((n, n, e), dtype=field.np_dtype)
    for i in range(n):
        eye[i, i, 0] = field.one
    m1 = np.einsum("ac,bdk->abcdk", eye[:, :, 0], np.swapaxes(x.data, 0, 1))
    m2 = np.einsum("ack,bd->abcdk", x.data, eye[:, :, 0])
    m2 = _scale_rows(field, m2, lam)
    system = (m1 - m2).reshape(n * n, n * n, e) % field.p
    kernel = Matrix(field, system).kernel_basis()
    out = []
    for vec in kernel:
        out.append(Matrix(field, vec.data.reshape(n, n, e)))
    return out


@dataclass(frozen=True)
class MinRankShift:
    r: int
    argmins: tuple[int, ...]


def min_rank_shift(g: Matrix, h: Matrix, budget: int = DEFAULT_SHIFT_BUDGET) -> MinRankShift:
    """min over alpha in F^x of rank(g - alpha h), with every minimizing
    alpha in ascending packed order.  Exhaustive over F^x, so the field
    order is budget-checked."""
    if g.field != h.field or g.shape != h.shape:
        raise ValueError("incompatible matrices")
    field = g.field
    if field.q - 1 > budget:
        raise BudgetError(
            f"min_rank_shift needs {field.q - 1} rank computations, budget {budget}"
        )
    best = None
    argmins: list[int] = []
    for alpha in field.nonzero_elements():
        r = (g - h.scale(alpha)).rank()
        if best is None or r < best:
            best = r
            argmins = [alpha]
        elif r == best:
            argmins.append(alpha)
    return MinRankShift(best, tuple(argmins))


def primary_blocks(x: Matrix, k: int, alpha: int) -> list[tuple[poly.Poly, Matrix]]:
    """Primary decomposition of the space under x, for x satisfying
    (T^k - alpha)(T - 1) = 0: pairs (irreducible factor f, column basis
    of ker f(x)), sorted by (degree, coefficients).  The T - 1 factor is
    always included as a candidate because such x act as the identity on
    their complement block."""
    field = x.field
    n = x.nrows
    target = [field.neg(alpha)] + [field.zero] * (k - 1) + [field.one]
    factors = set(poly.pfactor_distinct(field, tuple(target)))
    factors.add((field.neg(field.one), field.one))
    blocks = []
    total = 0
    for f in sorted(factors, key=lambda t: (len(t), t)):
        ker = evaluate_poly_at(f, x).kernel_basis()
        if ker:
            basis = Matrix.hstack(ker)
            blocks.append((f, basis))
            total += basis.ncols
    if total != n:
        raise UnsupportedCaseError(
            f"matrix does not satisfy (T^{k} - alpha)(T - 1) = 0; "
            f"primary blocks cover {total} of {n} dimensions"
        )
    return blocks


# -- batched enumeration kernels -------------------------------------------


_FAST_TABLE_Q = 512


def _dets_packed_tables(field: Field, pw: np.ndarray):
    """Determinants by Gauss elimination on packed entries through q x q
    lookup tables.  pw: writable (B, n, n) int64 array, consumed."""
    _, sub_t, mul_t, neg_t = field.packed_tables()
    inv_t = field.inv_table()
    B, n = pw.shape[0], pw.shape[1]
    det = np.full(B, field.one, dtype=np.int64)
    alive = np.ones(B, dtype=bool)
    idx = np.arange(B)
    for j in range(n):
        nz = pw[:, j:, j] != 0
        alive &= nz.any(axis=1)
        if not alive.any():
            break
        first = np.argmax(nz, axis=1)
        first[~alive] = 0
        rows = j + first
        swap_needed = (rows != j) & alive
        if swap_needed.any():
            tmp = pw[idx, rows].copy()
            pw[idx, rows] = pw[idx, j]
            pw[idx, j] = tmp
            det[swap_needed] = neg_t[det[swap_needed]]
        pv_safe = np.where(alive, pw[:, j, j], 1)
        det = mul_t[det, pv_safe]
        pw[:, j, :] = mul_t[pw[:, j, :], inv_t[pv_safe][:, None]]
        if j + 1 < n:
            prod = mul_t[pw[:, j + 1 :, j, None], pw[:, j, None, :]]
            pw[:, j + 1 :, :] = sub_t[pw[:, j + 1 :, :], prod]
    det[~alive] = 0
    return alive, det


def _batched_invertible_dets(field: Field, batch: np.ndarray):
    """batch: (B, n, n, e) coefficient arrays.  Returns (invertible mask,
    packed determinants), determinant 0 for singular members."""
    if field.q <= _FAST_TABLE_Q:
        pw = field.pack_np(batch).astype(np.int64)
        return _dets_packed_tables(field, pw)
    p = field.p
    e = field.e
    B, n = batch.shape[0], batch.shape[1]
    work = np.array(batch, copy=True)
    det = np.full(B, field.one, dtype=np.int64)
    alive = np.ones(B, dtype=bool)
    if e > 1:
        inv_t = field.inv_table()
        powers = np.array([p**i for i in range(e)], dtype=np.int64)
        T = field.mul_tensor
    for j in range(n):
        sub = work[:, j:, j, :]
        nz = (sub != 0).any(axis=-1)
        has = nz.any(axis=1)
        alive &= has
        det[~alive] = 0
        if not alive.any():
            break
        first = np.argmax(nz, axis=1)
        first[~alive] = 0
        rows = j + first
        idx = np.arange(B)
        swap_needed = (rows != j) & alive
        if swap_needed.any():
            tmp = work[idx, rows].copy()
            work[idx, rows] = work[idx, j]
            work[idx, j] = tmp
            neg_rows = swap_needed
            if e == 1:
                det[neg_rows] = (-det[neg_rows]) % p
            else:
                det[neg_rows] = np.array(
                    [field.neg(int(v)) for v in det[neg_rows]], dtype=np.int64
                )
        if e == 1:
            pv = work[:, j, j, 0]
            det[alive] = det[alive] * pv[alive] % p
            inv_pv = np.ones(B, dtype=np.int64)
            pv_alive = pv[alive]
            inv_pv[alive] = np.array(
                [pow(int(v), p - 2, p) for v in pv_alive], dtype=np.int64
            )
            work[:, j, :, 0] = work[:, j, :, 0] * inv_pv[:, None] % p
            factors = work[:, j + 1 :, j, 0].copy()
            work[:, j + 1 :, :, 0] = (
                work[:, j + 1 :, :, 0] - factors[:, :, None] * work[:, j, None, :, 0]
            ) % p
        else:
            pvp = (work[:, j, j, :] * powers).sum(axis=-1)
            pvp_safe = np.where(alive, pvp, 1)
            det_new = _vec_field_mul(field, det, pvp_safe, T, powers, p)
            det[alive] = det_new[alive]
            inv_packed = inv_t[pvp_safe]
            inv_vec = field.unpack_np(inv_packed)
            work[:, j, :, :] = (
                np.einsum("bci,bj,ijk->bck", work[:, j, :, :], inv_vec, T) % p
            )
            factors = work[:, j + 1 :, j, :].copy()
            update = np.einsum("bmi,bcj,ijk->bmck", factors, work[:, j, :, :], T)
            work[:, j + 1 :, :, :] = (work[:, j + 1 :, :, :] - update) % p
    det[~alive] = 0
    return alive, det


def _vec_field_mul(field: Field, a_packed, b_packed, T, powers, p):
    av = field.unpack_np(a_packed)
    bv = field.unpack_np(b_packed)
    prod = np.einsum("bi,bj,ijk->bk", av, bv, T) % p
    return (prod * powers).sum(axis=-1).astype(np.int64)


def span_invertible_counts(
    basis: Sequence[Matrix],
    budget: int = 10**6,
    chunk: int = 2**14,
) -> tuple[int, int]:
    """Exhaustively enumerate the linear span of `basis` and return
    (number of invertible members, number with determinant one).  Raises
    BudgetError when q^dim exceeds the budget."""
    if not basis:
        return (0, 0)
    field = basis[0].field
    d = len(basis)
    total = field.q**d
    if total > budget:
        raise BudgetError(f"span has {field.q}^{d} members, budget {budget}")
    n = basis[0].nrows
    e = field.e
    stack = np.stack([b.data for b in basis])  # (d, n, n, e)
    use_tables = e > 1 and field.q <= _FAST_TABLE_Q
    if use_tables:
        add_t, _, mul_t, _ = field.packed_tables()
        flatp = np.stack([field.pack_np(b.data).reshape(n * n).astype(np.int64)
                          for b in basis])
    inv_count = 0
    det1_count = 0
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        combos = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((stop - start, d), dtype=np.int64)
        work = combos.copy()
        for i in range(d):
            digits[:, i] = work % field.q
            work //= field.q
        if e == 1:
            flat = stack[:, :, :, 0].reshape(d, n * n)
            mats = (digits @ flat) % field.p
            ok, dets = _dets_packed_tables(
                field, mats.reshape(-1, n, n).astype(np.int64)
            ) if field.q <= _FAST_TABLE_Q else _batched_invertible_dets(
                field, mats.reshape(-1, n, n)[:, :, :, None]
            )
        elif use_tables:
            acc = np.zeros((stop - start, n * n), dtype=np.int64)
            for i in range(d):
                acc = add_t[acc, mul_t[digits[:, i, None], flatp[i][None, :]]]
            ok, dets = _dets_packed_tables(field, acc.reshape(-1, n, n))
        else:
            cvec = field.unpack_np(digits)  # (B, d, e)
            batch = (
                np.einsum("bdi,dmcj,ijk->bmck", cvec, stack, field.mul_tensor)
                % field.p
            )
            ok, dets = _batched_invertible_dets(field, batch)
        inv_count += int(ok.sum())
        det1_count += int((dets == field.one).sum())
    return inv_count, det1_count
