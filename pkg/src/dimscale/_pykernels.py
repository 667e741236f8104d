"""Pure-Python exhaustive-search kernels.

Every function takes the addition table as a flat row-major sequence of
ints (``-1`` for an undefined sum) plus the carrier size ``n``.  The
compiled module ``_ckernels`` exposes the same functions with the same
results; ``dimscale.kernels`` picks one at import time.
"""

from __future__ import annotations


def _masks(leq, n):
    down = [0] * n
    up = [0] * n
    for a in range(n):
        row = a * n
        for b in range(n):
            if leq[row + b]:
                down[b] |= 1 << a
                up[a] |= 1 << b
    return down, up


def first_zero_law_violation(flat, n):
    for i in range(n):
        if flat[i * n] != i or flat[i] != i:
            return i
    return None


def first_noncommuting(flat, n):
    for i in range(n):
        for j in range(i + 1, n):
            if flat[i * n + j] != flat[j * n + i]:
                return (i, j)
    return None


def first_nonassociative(flat, n):
    for i in range(n):
        ri = i * n
        for j in range(n):
            ij = flat[ri + j]
            rj = j * n
            for k in range(n):
                jk = flat[rj + k]
                lhs = flat[ij * n + k] if ij >= 0 else -1
                rhs = flat[ri + jk] if jk >= 0 else -1
                if lhs != rhs:
                    return (i, j, k)
    return None


def leq_matrix(flat, n):
    out = bytearray(n * n)
    for a in range(n):
        ra = a * n
        for x in range(n):
            c = flat[ra + x]
            if c >= 0:
                out[ra + c] = 1
    return bytes(out)


def _complements(flat, n):
    # comp[x][c] = ascending list of y with x + y = c
    comp = [dict() for _ in range(n)]
    for x in range(n):
        rx = x * n
        cx = comp[x]
        for y in range(n):
            c = flat[rx + y]
            if c >= 0:
                cx.setdefault(c, []).append(y)
    return comp


def _search_matrix(flat, n, comp, a0, a1, b0, b1):
    for c00 in range(n):
        rows = comp[c00].get(a0)
        cols = comp[c00].get(b0)
        if not rows or not cols:
            continue
        for c01 in rows:
            lasts = comp[c01].get(b1)
            if not lasts:
                continue
            for c10 in cols:
                r10 = c10 * n
                for c11 in lasts:
                    if flat[r10 + c11] == a1:
                        return (c00, c01, c10, c11)
    return None


def refinement_matrix(flat, n, a0, a1, b0, b1):
    return _search_matrix(flat, n, _complements(flat, n), a0, a1, b0, b1)


def first_refinement_failure(flat, n):
    comp = _complements(flat, n)
    by_sum = {}
    for a0 in range(n):
        for a1 in range(n):
            s = flat[a0 * n + a1]
            if s >= 0:
                by_sum.setdefault(s, []).append((a0, a1))
    for a0 in range(n):
        for a1 in range(n):
            s = flat[a0 * n + a1]
            if s < 0:
                continue
            for b0, b1 in by_sum[s]:
                if _search_matrix(flat, n, comp, a0, a1, b0, b1) is None:
                    return (a0, a1, b0, b1)
    return None


def first_n1_failure(flat, n, orth):
    comp = _complements(flat, n)
    for a in range(n):
        for b in range(n):
            found = False
            for c in range(n):
                xs = comp[c].get(a)
                ys = comp[c].get(b)
                if not xs or not ys:
                    continue
                for x in xs:
                    rx = x * n
                    for y in ys:
                        if orth[rx + y]:
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            if not found:
                return (a, b)
    return None


def first_n3_failure(flat, n, leq):
    down, up = _masks(leq, n)
    for a in range(n):
        ra = a * n
        for b in range(n):
            if not leq[ra + b]:
                continue
            above_b = up[b]
            cands = 0
            for x in range(n):
                s = flat[ra + x]
                if s >= 0 and (above_b >> s) & 1:
                    cands |= 1 << x
            ok = False
            m = cands
            while m:
                low = m & -m
                x = low.bit_length() - 1
                if cands & ~up[x] == 0:
                    ok = True
                    break
                m ^= low
            if not ok:
                return (a, b)
    return None


def meet_table(leq, n):
    down, _ = _masks(leq, n)
    out = [-1] * (n * n)
    for a in range(n):
        for b in range(a, n):
            common = down[a] & down[b]
            m = common
            while m:
                low = m & -m
                c = low.bit_length() - 1
                if common & ~down[c] == 0:
                    out[a * n + b] = c
                    out[b * n + a] = c
                    break
                m ^= low
    return out
