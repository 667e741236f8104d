# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the functions in ``_pykernels``.

Same inputs, same outputs, same search order.
"""

cdef inline int _at(const int[:] flat, Py_ssize_t n, int i, int j) noexcept nogil:
    if i < 0 or j < 0:
        return -1
    return flat[i * n + j]


def first_zero_law_violation(const int[:] flat, Py_ssize_t n):
    cdef Py_ssize_t i
    for i in range(n):
        if flat[i * n] != i or flat[i] != i:
            return i
    return None


def first_noncommuting(const int[:] flat, Py_ssize_t n):
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(i + 1, n):
            if flat[i * n + j] != flat[j * n + i]:
                return (i, j)
    return None


def first_nonassociative(const int[:] flat, Py_ssize_t n):
    cdef Py_ssize_t i, j, k
    cdef int ij, jk, lhs, rhs
    for i in range(n):
        for j in range(n):
            ij = flat[i * n + j]
            for k in range(n):
                jk = flat[j * n + k]
                lhs = _at(flat, n, ij, <int>k)
                rhs = _at(flat, n, <int>i, jk)
                if lhs != rhs:
                    return (i, j, k)
    return None


def leq_matrix(const int[:] flat, Py_ssize_t n):
    out = bytearray(n * n)
    cdef unsigned char[:] view = out
    cdef Py_ssize_t a, x
    cdef int c
    for a in range(n):
        for x in range(n):
            c = flat[a * n + x]
            if c >= 0:
                view[a * n + c] = 1
    return bytes(out)


cdef int _search(const int[:] flat, Py_ssize_t n, int a0, int a1, int b0, int b1,
                 int* res) noexcept nogil:
    cdef int c00, c01, c10, c11
    for c00 in range(n):
        for c01 in range(n):
            if flat[c00 * n + c01] != a0:
                continue
            for c10 in range(n):
                if flat[c00 * n + c10] != b0:
                    continue
                for c11 in range(n):
                    if flat[c01 * n + c11] == b1 and flat[c10 * n + c11] == a1:
                        res[0] = c00
                        res[1] = c01
                        res[2] = c10
                        res[3] = c11
                        return 1
    return 0


def refinement_matrix(const int[:] flat, Py_ssize_t n, int a0, int a1, int b0, int b1):
    cdef int res[4]
    if _search(flat, n, a0, a1, b0, b1, res):
        return (res[0], res[1], res[2], res[3])
    return None


def first_refinement_failure(const int[:] flat, Py_ssize_t n):
    cdef int a0, a1, b0, b1, s
    cdef int res[4]
    for a0 in range(n):
        for a1 in range(n):
            s = flat[a0 * n + a1]
            if s < 0:
                continue
            for b0 in range(n):
                for b1 in range(n):
                    if flat[b0 * n + b1] != s:
                        continue
                    if not _search(flat, n, a0, a1, b0, b1, res):
                        return (a0, a1, b0, b1)
    return None


def first_n1_failure(const int[:] flat, Py_ssize_t n, const unsigned char[:] orth):
    cdef int a, b, c, x, y
    cdef bint found
    for a in range(n):
        for b in range(n):
            found = False
            for c in range(n):
                for x in range(n):
                    if flat[c * n + x] != a:
                        continue
                    for y in range(n):
                        if flat[c * n + y] == b and orth[x * n + y]:
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            if not found:
                return (a, b)
    return None


def first_n3_failure(const int[:] flat, Py_ssize_t n, const unsigned char[:] leq):
    cdef int a, b, x, y, s, t
    cdef bint ok, least
    for a in range(n):
        for b in range(n):
            if not leq[a * n + b]:
                continue
            ok = False
            for x in range(n):
                s = flat[a * n + x]
                if s < 0 or not leq[b * n + s]:
                    continue
                least = True
                for y in range(n):
                    t = flat[a * n + y]
                    if t >= 0 and leq[b * n + t] and not leq[x * n + y]:
                        least = False
                        break
                if least:
                    ok = True
                    break
            if not ok:
                return (a, b)
    return None


def meet_table(const unsigned char[:] leq, Py_ssize_t n):
    out = [-1] * (n * n)
    cdef int a, b, c, d
    cdef bint greatest
    for a in range(n):
        for b in range(a, n):
            for c in range(n):
                if not (leq[c * n + a] and leq[c * n + b]):
                    continue
                greatest = True
                for d in range(n):
                    if leq[d * n + a] and leq[d * n + b] and not leq[d * n + c]:
                        greatest = False
                        break
                if greatest:
                    out[a * n + b] = c
                    out[b * n + a] = c
                    break
    return out
