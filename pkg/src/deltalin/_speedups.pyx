# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled arithmetic core, mirroring the pure-Python kernel API.

Selected automatically for contexts whose modulus p^N fits in 63 bits and
whose extension degree is at most MAX_M; coefficients live in unsigned
64-bit words with 128-bit intermediates, so every operation is exact.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

from deltalin.errors import AlgebraInvariantError, NotUnitError, SingularMatrixError

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64

DEF SMAX = 4    # max extension degree m
DEF NMAX = 12   # max matrix dimension n

MAX_M = SMAX
MAX_N = NMAX


cdef inline u64 addmod(u64 a, u64 b, u64 q) noexcept:
    cdef u64 s = a + b
    if s >= q:
        s -= q
    return s


cdef inline u64 submod(u64 a, u64 b, u64 q) noexcept:
    if a >= b:
        return a - b
    return a + (q - b)


cdef inline u64 mulmod(u64 a, u64 b, u64 q) noexcept:
    return <u64>((<u128>a * <u128>b) % q)


cdef class CMat:
    """Kernel-owned matrix handle: flat row-major coefficients."""

    cdef u64* data
    cdef readonly int n
    cdef int size  # n*n*m

    def __dealloc__(self):
        if self.data != NULL:
            PyMem_Free(self.data)


cdef class FastKernel:
    cdef readonly u64 p
    cdef readonly u64 q
    cdef readonly int m
    cdef readonly int N
    cdef readonly str kind
    cdef readonly int max_n
    cdef readonly tuple modulus_tail
    cdef readonly tuple zero
    cdef readonly tuple one
    cdef u64 red[(SMAX - 1) * SMAX]     # reduction rows for x^{m+i}
    cdef u64 frob[SMAX * SMAX * SMAX]   # matrices of phi^0 .. phi^{m-1}
    cdef bint frob_ready

    def __cinit__(self, p, m, N, modulus_tail):
        if m > SMAX:
            raise ValueError(f"compiled kernel supports m <= {SMAX}")
        q = p ** N
        if q > (1 << 63) - 1:
            raise ValueError("compiled kernel needs p^N < 2^63")
        self.p = p
        self.q = q
        self.m = m
        self.N = N
        self.kind = "compiled"
        self.max_n = NMAX
        self.modulus_tail = tuple(c % q for c in modulus_tail)
        if len(self.modulus_tail) != m:
            raise ValueError("modulus tail must have m coefficients")
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)
        self.frob_ready = False
        self._build_reduction_rows()

    cdef void _build_reduction_rows(self):
        cdef int m = self.m
        cdef u64 q = self.q
        cdef u64 cur[SMAX]
        cdef u64 nxt[SMAX]
        cdef u64 top
        cdef int i, j
        for i in range(m):
            cur[i] = (q - <u64>(self.modulus_tail[i])) % q
        for i in range(m - 1):
            for j in range(m):
                self.red[i * m + j] = cur[j]
            top = cur[m - 1]
            for j in range(m - 1, 0, -1):
                nxt[j] = cur[j - 1]
            nxt[0] = 0
            if top:
                for j in range(m):
                    nxt[j] = addmod(nxt[j], mulmod(top, self.red[j], q), q)
            for j in range(m):
                cur[j] = nxt[j]

    def set_frob(self, frob_flat):
        cdef int m = self.m
        cdef u64 q = self.q
        cdef u64 F[SMAX * SMAX]
        cdef u64 prev[SMAX * SMAX]
        cdef u64 acc
        cdef int i, j, k, s
        for i in range(m * m):
            F[i] = frob_flat[i] % self.q
        for i in range(m):
            for j in range(m):
                self.frob[i * m + j] = 1 if i == j else 0
        for s in range(1, m):
            for i in range(m * m):
                prev[i] = self.frob[(s - 1) * m * m + i]
            for i in range(m):
                for j in range(m):
                    acc = 0
                    for k in range(m):
                        acc = addmod(acc, mulmod(prev[i * m + k], F[k * m + j], q), q)
                    self.frob[s * m * m + i * m + j] = acc
        self.frob_ready = True

    # -- scalar core -------------------------------------------------------

    cdef void scal_mul(self, const u64* a, const u64* b, u64* out) noexcept:
        cdef int m = self.m
        cdef u64 q = self.q
        cdef u64 t[2 * SMAX - 1]
        cdef u64 c
        cdef int i, j
        if m == 1:
            out[0] = mulmod(a[0], b[0], q)
            return
        for i in range(2 * m - 1):
            t[i] = 0
        for i in range(m):
            if a[i]:
                for j in range(m):
                    t[i + j] = addmod(t[i + j], mulmod(a[i], b[j], q), q)
        for i in range(2 * m - 2, m - 1, -1):
            c = t[i]
            if c:
                for j in range(m):
                    if self.red[(i - m) * m + j]:
                        t[j] = addmod(t[j], mulmod(c, self.red[(i - m) * m + j], q), q)
        for j in range(m):
            out[j] = t[j]

    cdef void scal_frob(self, const u64* a, u64* out, int k) noexcept:
        cdef int m = self.m
        cdef u64 q = self.q
        cdef u64 acc
        cdef int i, j
        if m == 1:
            out[0] = a[0]
            return
        k %= m
        for i in range(m):
            acc = 0
            for j in range(m):
                acc = addmod(acc, mulmod(self.frob[k * m * m + i * m + j], a[j], q), q)
            out[i] = acc

    cdef void pow_u64(self, const u64* a, u64 e, u64* out) noexcept:
        cdef u64 base[SMAX]
        cdef u64 acc[SMAX]
        cdef u64 tmp[SMAX]
        cdef int i
        cdef int m = self.m
        for i in range(m):
            base[i] = a[i]
            acc[i] = 1 if i == 0 else 0
        while e:
            if e & 1:
                self.scal_mul(acc, base, tmp)
                for i in range(m):
                    acc[i] = tmp[i]
            e >>= 1
            if e:
                self.scal_mul(base, base, tmp)
                for i in range(m):
                    base[i] = tmp[i]
        for i in range(m):
            out[i] = acc[i]

    cdef bint is_unit_c(self, const u64* a) noexcept:
        cdef int i
        for i in range(self.m):
            if a[i] % self.p:
                return True
        return False

    cdef int inv_c(self, const u64* a, u64* out) except -1:
        # Fermat inverse in the residue field, lifted by Hensel doubling
        cdef u64 b[SMAX]
        cdef u64 t[SMAX]
        cdef u64 t2[SMAX]
        cdef int i, prec
        cdef int m = self.m
        cdef u64 q = self.q
        if not self.is_unit_c(a):
            raise NotUnitError("not a unit (valuation >= 1)")
        if m == 1:
            b[0] = a[0] % self.p
            self.pow_u64(b, self.p - 2, b)
        else:
            self._fermat_residue_inverse(a, b)
        prec = 1
        while prec < self.N:
            # b <- b * (2 - a*b)
            self.scal_mul(a, b, t)
            t[0] = submod(2 % q, t[0], q)
            for i in range(1, m):
                t[i] = submod(0, t[i], q)
            self.scal_mul(b, t, t2)
            for i in range(m):
                b[i] = t2[i]
            prec *= 2
        for i in range(m):
            out[i] = b[i]
        return 0

    cdef int _fermat_residue_inverse(self, const u64* a, u64* out) except -1:
        # a^(p^m - 2) mod q, reduced mod p, is the residue-field inverse
        cdef u64 buf[SMAX]
        cdef int i
        e = int(self.p) ** int(self.m) - 2  # Python int: p^m may exceed 64 bits
        for i in range(self.m):
            buf[i] = a[i]
        self._pow_obj(buf, e, buf)
        for i in range(self.m):
            out[i] = buf[i] % self.p
        return 0

    cdef int _pow_obj(self, const u64* a, object e, u64* out) except -1:
        cdef u64 base[SMAX]
        cdef u64 acc[SMAX]
        cdef u64 tmp[SMAX]
        cdef int i
        cdef int m = self.m
        for i in range(m):
            base[i] = a[i]
            acc[i] = 1 if i == 0 else 0
        while e:
            if e & 1:
                self.scal_mul(acc, base, tmp)
                for i in range(m):
                    acc[i] = tmp[i]
            e >>= 1
            if e:
                self.scal_mul(base, base, tmp)
                for i in range(m):
                    base[i] = tmp[i]
        for i in range(m):
            out[i] = acc[i]

    # -- scalar API (tuples in, tuples out) ------------------------------------

    cdef int _load(self, object t, u64* buf) except -1:
        cdef int i
        for i in range(self.m):
            buf[i] = t[i]
        return 0

    cdef tuple _dump(self, const u64* buf):
        cdef int i
        return tuple([buf[i] for i in range(self.m)])

    def s_add(self, a, b):
        cdef u64 x[SMAX]
        cdef u64 y[SMAX]
        cdef int i
        self._load(a, x)
        self._load(b, y)
        for i in range(self.m):
            x[i] = addmod(x[i], y[i], self.q)
        return self._dump(x)

    def s_sub(self, a, b):
        cdef u64 x[SMAX]
        cdef u64 y[SMAX]
        cdef int i
        self._load(a, x)
        self._load(b, y)
        for i in range(self.m):
            x[i] = submod(x[i], y[i], self.q)
        return self._dump(x)

    def s_neg(self, a):
        cdef u64 x[SMAX]
        cdef int i
        self._load(a, x)
        for i in range(self.m):
            x[i] = submod(0, x[i], self.q)
        return self._dump(x)

    def s_mul(self, a, b):
        cdef u64 x[SMAX]
        cdef u64 y[SMAX]
        cdef u64 z[SMAX]
        self._load(a, x)
        self._load(b, y)
        self.scal_mul(x, y, z)
        return self._dump(z)

    def s_scal_int(self, c, a):
        cdef u64 x[SMAX]
        cdef u64 cc = c % self.q
        cdef int i
        self._load(a, x)
        for i in range(self.m):
            x[i] = mulmod(cc, x[i], self.q)
        return self._dump(x)

    def s_pow(self, a, e):
        cdef u64 x[SMAX]
        if e < 0:
            raise ValueError("negative exponent; invert first")
        self._load(a, x)
        self._pow_obj(x, e, x)
        return self._dump(x)

    def s_is_unit(self, a):
        cdef u64 x[SMAX]
        self._load(a, x)
        return bool(self.is_unit_c(x))

    def s_inv(self, a):
        cdef u64 x[SMAX]
        cdef u64 y[SMAX]
        self._load(a, x)
        self.inv_c(x, y)
        return self._dump(y)

    def s_frob(self, a, k=1):
        cdef u64 x[SMAX]
        cdef u64 y[SMAX]
        self._load(a, x)
        self.scal_frob(x, y, k)
        return self._dump(y)

    def s_divp(self, a):
        cdef u64 x[SMAX]
        cdef int i
        self._load(a, x)
        for i in range(self.m):
            if x[i] % self.p:
                raise AlgebraInvariantError("exact division by p failed")
            x[i] //= self.p
        return self._dump(x)

    def s_eq_mod(self, a, b, k):
        cdef u64 x[SMAX]
        cdef u64 y[SMAX]
        cdef u64 pk = 1
        cdef int i
        self._load(a, x)
        self._load(b, y)
        for i in range(<int>k):
            pk *= self.p
        for i in range(self.m):
            if x[i] % pk != y[i] % pk:
                return False
        return True

    # -- matrix API --------------------------------------------------------------

    cdef CMat _alloc(self, int n):
        cdef CMat h = CMat.__new__(CMat)
        h.n = n
        h.size = n * n * self.m
        h.data = <u64*>PyMem_Malloc(h.size * sizeof(u64))
        if h.data == NULL:
            raise MemoryError()
        return h

    def m_new(self, flat, n):
        cdef int size = n * n * self.m
        if n > NMAX:
            raise ValueError(f"compiled kernel supports n <= {NMAX}")
        if len(flat) != size:
            raise ValueError("flat length does not match dimension")
        cdef CMat h = self._alloc(n)
        cdef int i
        q = self.q
        for i in range(size):
            h.data[i] = flat[i] % q
        return h

    def m_export(self, CMat h):
        cdef int i
        return tuple([h.data[i] for i in range(h.size)])

    def m_identity(self, n):
        cdef CMat h = self._alloc(n)
        cdef int i
        for i in range(h.size):
            h.data[i] = 0
        for i in range(<int>n):
            h.data[(i * <int>n + i) * self.m] = 1
        return h

    def m_add(self, CMat A, CMat B):
        cdef CMat h = self._alloc(A.n)
        cdef int i
        for i in range(h.size):
            h.data[i] = addmod(A.data[i], B.data[i], self.q)
        return h

    def m_sub(self, CMat A, CMat B):
        cdef CMat h = self._alloc(A.n)
        cdef int i
        for i in range(h.size):
            h.data[i] = submod(A.data[i], B.data[i], self.q)
        return h

    def m_neg(self, CMat A):
        cdef CMat h = self._alloc(A.n)
        cdef int i
        for i in range(h.size):
            h.data[i] = submod(0, A.data[i], self.q)
        return h

    def m_transpose(self, CMat A):
        cdef CMat h = self._alloc(A.n)
        cdef int n = A.n
        cdef int m = self.m
        cdef int i, j, x
        for i in range(n):
            for j in range(n):
                for x in range(m):
                    h.data[(i * n + j) * m + x] = A.data[(j * n + i) * m + x]
        return h

    def m_mul(self, CMat A, CMat B):
        cdef CMat h = self._alloc(A.n)
        cdef int n = A.n
        cdef int m = self.m
        cdef u64 q = self.q
        cdef u64 acc[SMAX]
        cdef u64 prod[SMAX]
        cdef int i, j, k, x
        for i in range(n):
            for j in range(n):
                for x in range(m):
                    acc[x] = 0
                for k in range(n):
                    self.scal_mul(&A.data[(i * n + k) * m], &B.data[(k * n + j) * m], prod)
                    for x in range(m):
                        acc[x] = addmod(acc[x], prod[x], q)
                for x in range(m):
                    h.data[(i * n + j) * m + x] = acc[x]
        return h

    def m_scal(self, s, CMat A):
        cdef u64 sv[SMAX]
        cdef CMat h = self._alloc(A.n)
        cdef int e
        cdef int m = self.m
        self._load(s, sv)
        for e in range(A.n * A.n):
            self.scal_mul(sv, &A.data[e * m], &h.data[e * m])
        return h

    def m_scal_int(self, c, CMat A):
        cdef CMat h = self._alloc(A.n)
        cdef u64 cc = c % self.q
        cdef int i
        for i in range(h.size):
            h.data[i] = mulmod(cc, A.data[i], self.q)
        return h

    def m_powp(self, CMat A):
        cdef CMat h = self._alloc(A.n)
        cdef int e
        cdef int m = self.m
        for e in range(A.n * A.n):
            self.pow_u64(&A.data[e * m], self.p, &h.data[e * m])
        return h

    def m_frob(self, CMat A, k=1):
        cdef CMat h = self._alloc(A.n)
        cdef int e
        cdef int m = self.m
        cdef int kk = k
        if m == 1:
            for e in range(h.size):
                h.data[e] = A.data[e]
            return h
        for e in range(A.n * A.n):
            self.scal_frob(&A.data[e * m], &h.data[e * m], kk)
        return h

    def m_divp(self, CMat A):
        cdef CMat h = self._alloc(A.n)
        cdef int i
        for i in range(h.size):
            if A.data[i] % self.p:
                raise AlgebraInvariantError("exact division by p failed")
            h.data[i] = A.data[i] // self.p
        return h

    def m_eq_mod(self, CMat A, CMat B, k):
        cdef u64 pk = 1
        cdef int i
        for i in range(<int>k):
            pk *= self.p
        for i in range(A.size):
            if A.data[i] % pk != B.data[i] % pk:
                return False
        return True

    def m_det(self, CMat A):
        cdef u64 out[SMAX]
        if A.n <= 4:
            self._det_cofactor(A.data, A.n, 0, 0, out)
            return self._dump(out)
        return self._det_elim(A)

    cdef int _det_cofactor(self, const u64* d, int n, int row, unsigned mask, u64* out) except -1:
        cdef u64 acc[SMAX]
        cdef u64 sub[SMAX]
        cdef u64 term[SMAX]
        cdef int m = self.m
        cdef u64 q = self.q
        cdef int j, x, sign
        cdef bint nonzero
        if row == n:
            for x in range(m):
                out[x] = 1 if x == 0 else 0
            return 0
        for x in range(m):
            acc[x] = 0
        sign = 1
        for j in range(n):
            if mask & (1u << j):
                continue
            nonzero = False
            for x in range(m):
                if d[(row * n + j) * m + x]:
                    nonzero = True
                    break
            if nonzero:
                self._det_cofactor(d, n, row + 1, mask | (1u << j), sub)
                self.scal_mul(&d[(row * n + j) * m], sub, term)
                if sign > 0:
                    for x in range(m):
                        acc[x] = addmod(acc[x], term[x], q)
                else:
                    for x in range(m):
                        acc[x] = submod(acc[x], term[x], q)
            sign = -sign
        for x in range(m):
            out[x] = acc[x]
        return 0

    cdef tuple _det_elim(self, CMat A):
        cdef int n = A.n
        cdef int m = self.m
        cdef u64 q = self.q
        cdef u64 work[NMAX * NMAX * SMAX]
        cdef u64 det[SMAX]
        cdef u64 pinv[SMAX]
        cdef u64 factor[SMAX]
        cdef u64 tmp[SMAX]
        cdef int i, col, r, jj, x, piv, sign
        for i in range(A.size):
            work[i] = A.data[i]
        for x in range(m):
            det[x] = 1 if x == 0 else 0
        sign = 1
        for col in range(n):
            piv = -1
            for r in range(col, n):
                if self.is_unit_c(&work[(r * n + col) * m]):
                    piv = r
                    break
            if piv < 0:
                raise SingularMatrixError("not in GL_n: no unit pivot")
            if piv != col:
                for jj in range(n * m):
                    tmp[0] = work[piv * n * m + jj]
                    work[piv * n * m + jj] = work[col * n * m + jj]
                    work[col * n * m + jj] = tmp[0]
                sign = -sign
            self.scal_mul(det, &work[(col * n + col) * m], tmp)
            for x in range(m):
                det[x] = tmp[x]
            self.inv_c(&work[(col * n + col) * m], pinv)
            for r in range(col + 1, n):
                self.scal_mul(&work[(r * n + col) * m], pinv, factor)
                if self.is_unit_c(factor) or _any(factor, m):
                    for jj in range(col, n):
                        self.scal_mul(factor, &work[(col * n + jj) * m], tmp)
                        for x in range(m):
                            work[(r * n + jj) * m + x] = submod(
                                work[(r * n + jj) * m + x], tmp[x], q
                            )
        if sign < 0:
            for x in range(m):
                det[x] = submod(0, det[x], q)
        return self._dump(det)

    def m_inv(self, CMat A):
        cdef int n = A.n
        cdef int m = self.m
        cdef u64 q = self.q
        cdef u64 left[NMAX * NMAX * SMAX]
        cdef u64 right[NMAX * NMAX * SMAX]
        cdef u64 pinv[SMAX]
        cdef u64 factor[SMAX]
        cdef u64 tmp[SMAX]
        cdef u64 swp
        cdef int i, col, r, jj, x, piv
        for i in range(A.size):
            left[i] = A.data[i]
            right[i] = 0
        for i in range(n):
            right[(i * n + i) * m] = 1
        for col in range(n):
            piv = -1
            for r in range(col, n):
                if self.is_unit_c(&left[(r * n + col) * m]):
                    piv = r
                    break
            if piv < 0:
                raise SingularMatrixError("not in GL_n: no unit pivot")
            if piv != col:
                for jj in range(n * m):
                    swp = left[piv * n * m + jj]
                    left[piv * n * m + jj] = left[col * n * m + jj]
                    left[col * n * m + jj] = swp
                    swp = right[piv * n * m + jj]
                    right[piv * n * m + jj] = right[col * n * m + jj]
                    right[col * n * m + jj] = swp
            self.inv_c(&left[(col * n + col) * m], pinv)
            for jj in range(n):
                self.scal_mul(pinv, &left[(col * n + jj) * m], tmp)
                for x in range(m):
                    left[(col * n + jj) * m + x] = tmp[x]
                self.scal_mul(pinv, &right[(col * n + jj) * m], tmp)
                for x in range(m):
                    right[(col * n + jj) * m + x] = tmp[x]
            for r in range(n):
                if r == col:
                    continue
                if not _any(&left[(r * n + col) * m], m):
                    continue
                for x in range(m):
                    factor[x] = left[(r * n + col) * m + x]
                for jj in range(n):
                    self.scal_mul(factor, &left[(col * n + jj) * m], tmp)
                    for x in range(m):
                        left[(r * n + jj) * m + x] = submod(
                            left[(r * n + jj) * m + x], tmp[x], q
                        )
                    self.scal_mul(factor, &right[(col * n + jj) * m], tmp)
                    for x in range(m):
                        right[(r * n + jj) * m + x] = submod(
                            right[(r * n + jj) * m + x], tmp[x], q
                        )
        cdef CMat h = self._alloc(n)
        for i in range(h.size):
            h.data[i] = right[i]
        return h


cdef inline bint _any(const u64* a, int m) noexcept:
    cdef int i
    for i in range(m):
        if a[i]:
            return True
    return False
