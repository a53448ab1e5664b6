"""Arithmetic kernels for the truncated ring (Z/p^N)[x] / (f).

An element is a tuple of m integers in [0, p^N), little-endian in the power
basis 1, x, ..., x^{m-1}.  Matrices are flat row-major sequences of n*n*m
coefficients wrapped in a kernel-owned handle; entry (i, j) occupies the
slice [(i*n + j)*m : (i*n + j + 1)*m].

Two interchangeable implementations exist: the pure-Python kernel below and
the Cython `_speedups.FastKernel`, used automatically when the modulus p^N
fits in 63 bits.  `make_kernel` performs the selection; setting the
environment variable DELTA_LIN_PURE=1 forces the fallback.
"""

import os

from .errors import AlgebraInvariantError, NotUnitError, SingularMatrixError

try:
    from . import _speedups
except ImportError:  # extension not built
    _speedups = None

COMPILED_AVAILABLE = _speedups is not None

_U63 = (1 << 63) - 1


def compiled_supported(p, m, N):
    """Whether the compiled kernel can serve a context with these parameters."""
    if _speedups is None:
        return False
    if p ** N > _U63 or m > _speedups.MAX_M:
        return False
    return True


def make_kernel(p, m, N, modulus_tail, force_pure=False):
    if force_pure or os.environ.get("DELTA_LIN_PURE") == "1":
        return PureKernel(p, m, N, modulus_tail)
    if compiled_supported(p, m, N):
        return _speedups.FastKernel(p, m, N, modulus_tail)
    return PureKernel(p, m, N, modulus_tail)


def effective_kind(p=3, m=1, N=16):
    """The kernel kind a fresh context with these parameters would get."""
    return make_kernel(p, m, N, (0,) * m).kind


class PureMat:
    """Matrix handle of the pure kernel: flat coefficient tuple plus n."""

    __slots__ = ("data", "n")

    def __init__(self, data, n):
        self.data = data
        self.n = n


class PureKernel:
    kind = "pure"
    max_n = 128

    def __init__(self, p, m, N, modulus_tail):
        self.p = p
        self.m = m
        self.N = N
        self.q = p ** N
        self.modulus_tail = tuple(c % self.q for c in modulus_tail)
        if len(self.modulus_tail) != m:
            raise ValueError("modulus tail must have m coefficients")
        self._red = self._reduction_rows()
        self._frob = None  # list of m flat m*m matrices: phi^0 .. phi^{m-1}
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)

    # -- setup ------------------------------------------------------------

    def _reduction_rows(self):
        """rows[i][j] = coefficient of x^j in (x^{m+i} mod f), i = 0..m-2."""
        m, q = self.m, self.q
        rows = []
        cur = [(-c) % q for c in self.modulus_tail]  # x^m mod f
        for _ in range(m - 1):
            rows.append(tuple(cur))
            top = cur[m - 1]
            cur = [0] + cur[: m - 1]
            if top:
                base = rows[0]
                for j in range(m):
                    cur[j] = (cur[j] + top * base[j]) % q
        return rows

    def set_frob(self, frob_flat):
        """Install the matrix of the Frobenius lift (row-major, m*m ints)."""
        m, q = self.m, self.q
        mats = [tuple(1 if i == j else 0 for i in range(m) for j in range(m))]
        F = tuple(c % q for c in frob_flat)
        for _ in range(1, m):
            mats.append(self._matmul_small(mats[-1], F))
        self._frob = mats

    def _matmul_small(self, A, B):
        m, q = self.m, self.q
        out = [0] * (m * m)
        for i in range(m):
            for j in range(m):
                acc = 0
                for k in range(m):
                    acc += A[i * m + k] * B[k * m + j]
                out[i * m + j] = acc % q
        return tuple(out)

    # -- scalar operations -------------------------------------------------

    def s_add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def s_sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def s_neg(self, a):
        q = self.q
        return tuple((-x) % q for x in a)

    def s_mul(self, a, b):
        m, q = self.m, self.q
        if m == 1:
            return ((a[0] * b[0]) % q,)
        t = [0] * (2 * m - 1)
        for i in range(m):
            ai = a[i]
            if ai:
                for j in range(m):
                    t[i + j] = (t[i + j] + ai * b[j]) % q
        return self._reduce(t)

    def _reduce(self, t):
        m, q = self.m, self.q
        out = list(t[:m])
        for i in range(m, 2 * m - 1):
            c = t[i]
            if c:
                row = self._red[i - m]
                for j in range(m):
                    rj = row[j]
                    if rj:
                        out[j] = (out[j] + c * rj) % q
        return tuple(out)

    def s_scal_int(self, c, a):
        q = self.q
        c %= q
        return tuple(c * x % q for x in a)

    def s_pow(self, a, e):
        if e < 0:
            raise ValueError("negative exponent; invert first")
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.s_mul(result, base)
            base = self.s_mul(base, base)
            e >>= 1
        return result

    def s_is_unit(self, a):
        p = self.p
        return any(c % p for c in a)

    def s_inv(self, a):
        p, m, N, q = self.p, self.m, self.N, self.q
        if not self.s_is_unit(a):
            raise NotUnitError("not a unit (valuation >= 1)")
        if m == 1:
            return (pow(a[0], -1, q),)
        # inverse mod p by Fermat in F_{p^m}, then Hensel lifting
        b = tuple(c % p for c in self.s_pow(a, p ** m - 2))
        two = self.s_scal_int(2, self.one)
        prec = 1
        while prec < N:
            b = self.s_mul(b, self.s_sub(two, self.s_mul(a, b)))
            prec *= 2
        return b

    def s_frob(self, a, k=1):
        m, q = self.m, self.q
        if m == 1:
            return a
        F = self._frob[k % m]
        out = [0] * m
        for i in range(m):
            acc = 0
            row = i * m
            for j in range(m):
                acc += F[row + j] * a[j]
            out[i] = acc % q
        return tuple(out)

    def s_divp(self, a):
        p = self.p
        for c in a:
            if c % p:
                raise AlgebraInvariantError("exact division by p failed")
        return tuple(c // p for c in a)

    def s_eq_mod(self, a, b, k):
        pk = self.p ** k
        return all((x - y) % pk == 0 for x, y in zip(a, b))

    # -- matrix operations ---------------------------------------------------

    def m_new(self, flat, n):
        q = self.q
        data = tuple(c % q for c in flat)
        if len(data) != n * n * self.m:
            raise ValueError("flat length does not match dimension")
        return PureMat(data, n)

    def m_export(self, h):
        return h.data

    def m_identity(self, n):
        m = self.m
        flat = [0] * (n * n * m)
        for i in range(n):
            flat[(i * n + i) * m] = 1
        return PureMat(tuple(flat), n)

    def m_add(self, A, B):
        q = self.q
        return PureMat(tuple((x + y) % q for x, y in zip(A.data, B.data)), A.n)

    def m_sub(self, A, B):
        q = self.q
        return PureMat(tuple((x - y) % q for x, y in zip(A.data, B.data)), A.n)

    def m_neg(self, A):
        q = self.q
        return PureMat(tuple((-x) % q for x in A.data), A.n)

    def m_transpose(self, A):
        n, m = A.n, self.m
        d = A.data
        out = []
        for i in range(n):
            for j in range(n):
                s = (j * n + i) * m
                out.extend(d[s : s + m])
        return PureMat(tuple(out), n)

    def m_mul(self, A, B):
        n, m = A.n, self.m
        a, b = A.data, B.data
        s_mul, s_add = self.s_mul, self.s_add
        out = []
        for i in range(n):
            for j in range(n):
                acc = self.zero
                for k in range(n):
                    x = a[(i * n + k) * m : (i * n + k + 1) * m]
                    y = b[(k * n + j) * m : (k * n + j + 1) * m]
                    acc = s_add(acc, s_mul(x, y))
                out.extend(acc)
        return PureMat(tuple(out), n)

    def m_scal(self, s, A):
        n, m = A.n, self.m
        d = A.data
        out = []
        for e in range(n * n):
            out.extend(self.s_mul(s, d[e * m : (e + 1) * m]))
        return PureMat(tuple(out), n)

    def m_scal_int(self, c, A):
        q = self.q
        c %= q
        return PureMat(tuple(c * x % q for x in A.data), A.n)

    def m_powp(self, A):
        n, m, p = A.n, self.m, self.p
        d = A.data
        out = []
        for e in range(n * n):
            out.extend(self.s_pow(d[e * m : (e + 1) * m], p))
        return PureMat(tuple(out), n)

    def m_frob(self, A, k=1):
        if self.m == 1:
            return A
        n, m = A.n, self.m
        d = A.data
        out = []
        for e in range(n * n):
            out.extend(self.s_frob(d[e * m : (e + 1) * m], k))
        return PureMat(tuple(out), n)

    def m_divp(self, A):
        p = self.p
        for c in A.data:
            if c % p:
                raise AlgebraInvariantError("exact division by p failed")
        return PureMat(tuple(c // p for c in A.data), A.n)

    def m_eq_mod(self, A, B, k):
        pk = self.p ** k
        return all((x - y) % pk == 0 for x, y in zip(A.data, B.data))

    def _entry(self, d, n, i, j):
        m = self.m
        s = (i * n + j) * m
        return d[s : s + m]

    def m_det(self, A):
        n = A.n
        if n <= 4:
            return self._det_cofactor(A.data, n)
        return self._det_elim(A)

    def _det_cofactor(self, d, n):
        entry = self._entry
        s_mul, s_add, s_sub = self.s_mul, self.s_add, self.s_sub

        def rec(row, mask):
            if row == n:
                return self.one
            acc = self.zero
            sign = 1
            for j in range(n):
                if mask & (1 << j):
                    continue
                a = entry(d, n, row, j)
                if any(a):
                    term = s_mul(a, rec(row + 1, mask | (1 << j)))
                    acc = s_add(acc, term) if sign > 0 else s_sub(acc, term)
                sign = -sign
            return acc

        return rec(0, 0)

    def _det_elim(self, A):
        # unit-pivot Gaussian elimination; exact because pivots are units
        n, m = A.n, self.m
        rows = [
            [list(self._entry(A.data, n, i, j)) for j in range(n)] for i in range(n)
        ]
        det = self.one
        sign = 1
        for col in range(n):
            piv = None
            for r in range(col, n):
                if self.s_is_unit(tuple(rows[r][col])):
                    piv = r
                    break
            if piv is None:
                raise SingularMatrixError("not in GL_n: no unit pivot")
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                sign = -sign
            pivot = tuple(rows[col][col])
            det = self.s_mul(det, pivot)
            pinv = self.s_inv(pivot)
            for r in range(col + 1, n):
                factor = self.s_mul(tuple(rows[r][col]), pinv)
                if any(factor):
                    for j in range(col, n):
                        rows[r][j] = list(
                            self.s_sub(
                                tuple(rows[r][j]),
                                self.s_mul(factor, tuple(rows[col][j])),
                            )
                        )
        return det if sign > 0 else self.s_neg(det)

    def m_inv(self, A):
        n, m = A.n, self.m
        left = [
            [tuple(self._entry(A.data, n, i, j)) for j in range(n)] for i in range(n)
        ]
        right = [
            [self.one if i == j else self.zero for j in range(n)] for i in range(n)
        ]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if self.s_is_unit(left[r][col]):
                    piv = r
                    break
            if piv is None:
                raise SingularMatrixError("not in GL_n: no unit pivot")
            if piv != col:
                left[col], left[piv] = left[piv], left[col]
                right[col], right[piv] = right[piv], right[col]
            pinv = self.s_inv(left[col][col])
            left[col] = [self.s_mul(pinv, x) for x in left[col]]
            right[col] = [self.s_mul(pinv, x) for x in right[col]]
            for r in range(n):
                if r == col:
                    continue
                factor = left[r][col]
                if any(factor):
                    left[r] = [
                        self.s_sub(x, self.s_mul(factor, y))
                        for x, y in zip(left[r], left[col])
                    ]
                    right[r] = [
                        self.s_sub(x, self.s_mul(factor, y))
                        for x, y in zip(right[r], right[col])
                    ]
        flat = []
        for i in range(n):
            for j in range(n):
                flat.extend(right[i][j])
        return PureMat(tuple(flat), n)
