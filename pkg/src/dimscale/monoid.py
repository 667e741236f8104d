"""Finite partial commutative monoids given by addition tables.

Elements are dense indices ``0..n-1`` with ``0`` the zero element.  A
missing sum is stored as ``-1`` in the table and surfaced as ``None``.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from dimscale import kernels
from dimscale.errors import PreconditionError, SizeGuardError

UNDEF = -1
DEFAULT_MAX_SIZE = 64


def guard(t: "MonoidTable", max_size: int | None) -> None:
    limit = DEFAULT_MAX_SIZE if max_size is None else max_size
    if t.n > limit:
        raise SizeGuardError(f"carrier of size {t.n} exceeds the bound {limit}")


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


@dataclass(frozen=True, eq=False)
class MonoidTable:
    """Carrier labels plus the full addition table."""

    labels: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if n < 1:
            raise PreconditionError("carrier must be nonempty")
        if len(set(self.labels)) != n:
            raise PreconditionError("labels must be distinct")
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise PreconditionError("table must be n x n")
        for r in self.rows:
            for v in r:
                if not (UNDEF <= v < n):
                    raise PreconditionError(f"table entry {v} out of range")

    @classmethod
    def from_sums(cls, labels: Sequence[str], sums: Iterable[tuple[int, int, int]],
                  symmetric: bool = True, zero_law: bool = True) -> "MonoidTable":
        """Build from ``(i, j, k)`` triples meaning ``i + j = k``."""
        n = len(labels)
        grid = [[UNDEF] * n for _ in range(n)]
        if zero_law:
            for i in range(n):
                grid[i][0] = grid[0][i] = i
        for i, j, k in sums:
            grid[i][j] = k
            if symmetric:
                grid[j][i] = k
        return cls(tuple(labels), tuple(tuple(r) for r in grid))

    @classmethod
    def from_operation(cls, labels: Sequence[str],
                       op: Callable[[int, int], int | None]) -> "MonoidTable":
        n = len(labels)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                k = op(i, j)
                row.append(UNDEF if k is None else k)
            rows.append(tuple(row))
        return cls(tuple(labels), tuple(rows))

    def __eq__(self, other):
        if not isinstance(other, MonoidTable):
            return NotImplemented
        return self.labels == other.labels and self.rows == other.rows

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.labels, self.rows))

    def __repr__(self):
        return f"MonoidTable(n={self.n}, labels={self.labels[:6]}{'...' if self.n > 6 else ''})"

    @property
    def n(self) -> int:
        return len(self.labels)

    def add(self, i: int, j: int) -> int | None:
        k = self.rows[i][j]
        return None if k == UNDEF else k

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise PreconditionError(f"unknown element {label!r}") from None

    @cached_property
    def flat(self) -> array:
        return array("i", [v for r in self.rows for v in r])

    @cached_property
    def leq_bytes(self) -> bytes:
        return kernels.leq_matrix(self.flat, self.n)

    @cached_property
    def down(self) -> tuple[int, ...]:
        """``down[b]`` is the bitmask of all ``a <= b``."""
        n, m = self.n, self.leq_bytes
        out = [0] * n
        for a in range(n):
            row = a * n
            for b in range(n):
                if m[row + b]:
                    out[b] |= 1 << a
        return tuple(out)

    @cached_property
    def up(self) -> tuple[int, ...]:
        n, m = self.n, self.leq_bytes
        return tuple(mask_of(b for b in range(n) if m[a * n + b]) for a in range(n))

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def leq(self, a: int, b: int) -> bool:
        return bool(self.leq_bytes[a * self.n + b])

    @cached_property
    def orth_rows(self) -> tuple[int, ...]:
        """``orth_rows[a]`` is the bitmask of all ``b`` orthogonal to ``a``."""
        down = self.down
        return tuple(
            mask_of(b for b in range(self.n) if down[a] & down[b] == 1)
            for a in range(self.n)
        )

    @cached_property
    def orth_bytes(self) -> bytes:
        n = self.n
        return bytes(
            (self.orth_rows[a] >> b) & 1 for a in range(n) for b in range(n)
        )

    @cached_property
    def meets(self) -> tuple[int, ...]:
        """Flat table of binary meets, ``-1`` where none exists."""
        return tuple(kernels.meet_table(self.leq_bytes, self.n))

    def meet(self, a: int, b: int) -> int | None:
        m = self.meets[a * self.n + b]
        return None if m < 0 else m

    def join(self, a: int, b: int) -> int | None:
        """Least upper bound of ``a`` and ``b``, if unique."""
        common = self.up[a] & self.up[b]
        for c in iter_bits(common):
            if common & ~self.up[c] == 0:
                return c
        return None

    @cached_property
    def sum_masks(self) -> tuple[tuple[int, ...], ...]:
        """``sum_masks[x][c]`` is the bitmask of all ``y`` with ``x + y = c``."""
        out = []
        for x in range(self.n):
            row = [0] * self.n
            for y, c in enumerate(self.rows[x]):
                if c != UNDEF:
                    row[c] |= 1 << y
            out.append(tuple(row))
        return tuple(out)

    def complements(self, x: int, c: int) -> list[int]:
        """All ``y`` with ``x + y = c``, ascending."""
        row = self.rows[x]
        return [y for y in range(self.n) if row[y] == c]


def sum_of(t: MonoidTable, items: Iterable[int]) -> int | None:
    """Left-to-right sum, ``None`` as soon as a partial sum is undefined."""
    acc: int | None = 0
    for x in items:
        if acc is None:
            return None
        acc = t.add(acc, x)
    return acc


def multiple(t: MonoidTable, k: int, a: int) -> int | None:
    return sum_of(t, [a] * k)


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: tuple

    def __str__(self):
        return f"{self.clause} at {self.witness}"


@dataclass(frozen=True)
class PcmReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_pcm(t: MonoidTable, max_size: int | None = None) -> PcmReport:
    """Check the zero law, commutativity and associativity exhaustively."""
    guard(t, max_size)
    out = []
    z = kernels.first_zero_law_violation(t.flat, t.n)
    if z is not None:
        out.append(Violation("zero law", (z, 0, t.rows[z][0])))
    c = kernels.first_noncommuting(t.flat, t.n)
    if c is not None:
        out.append(Violation("commutativity", c))
    a = kernels.first_nonassociative(t.flat, t.n)
    if a is not None:
        out.append(Violation("associativity", a))
    return PcmReport(tuple(out))


def alg_leq(t: MonoidTable, a: int, b: int) -> bool:
    """True iff ``a + x = b`` for some ``x``."""
    return t.leq(a, b)


def is_lower(t: MonoidTable, mask: int) -> bool:
    return all(t.down[x] & ~mask == 0 for x in iter_bits(mask))


def lower_submonoid(t: MonoidTable, X: Iterable[int],
                    max_size: int | None = None) -> tuple[MonoidTable, tuple[int, ...]]:
    """Restrict ``t`` to the lower subset ``X``; returns the table and the inclusion."""
    keep = sorted(set(X))
    mask = mask_of(keep)
    if not keep or keep[0] != 0:
        raise PreconditionError("lower subset must contain 0")
    if not is_lower(t, mask):
        bad = next(x for x in keep if t.down[x] & ~mask)
        raise PreconditionError(f"set is not downward closed below {t.labels[bad]!r}")
    pos = {old: new for new, old in enumerate(keep)}
    rows = []
    for a in keep:
        row = []
        for b in keep:
            c = t.rows[a][b]
            row.append(pos[c] if c != UNDEF and c in pos else UNDEF)
        rows.append(tuple(row))
    sub = MonoidTable(tuple(t.labels[i] for i in keep), tuple(rows))
    emb = tuple(keep)
    check = verify_lower_embedding(sub, t, emb, max_size=max_size)
    if not check.ok:
        raise PreconditionError(f"inclusion is not a lower embedding: {check}")
    return sub, emb


def _fresh_label(labels: Sequence[str], base: str) -> str:
    lab = base
    while lab in labels:
        lab += "'"
    return lab


def adjoin_infinity(t: MonoidTable) -> MonoidTable:
    """Total monoid S^bullet: one new top absorbing every undefined sum."""
    n = t.n
    top = n
    rows = []
    for i in range(n):
        rows.append(tuple(top if v == UNDEF else v for v in t.rows[i]) + (top,))
    rows.append((top,) * (n + 1))
    return MonoidTable(t.labels + (_fresh_label(t.labels, "inf"),), tuple(rows))


@dataclass(frozen=True)
class RefinementMatrix:
    """Grid of indices; rows sum to the first marginal, columns to the second."""

    entries: tuple[tuple[int, ...], ...]

    def row_sums(self, t: MonoidTable) -> tuple[int | None, ...]:
        return tuple(sum_of(t, r) for r in self.entries)

    def col_sums(self, t: MonoidTable) -> tuple[int | None, ...]:
        return tuple(sum_of(t, c) for c in zip(*self.entries))


def find_refinement(t: MonoidTable, a0: int, a1: int, b0: int, b1: int) -> RefinementMatrix | None:
    s, s2 = t.add(a0, a1), t.add(b0, b1)
    if s is None or s2 is None or s != s2:
        raise PreconditionError("marginal sums must be defined and equal")
    hit = kernels.refinement_matrix(t.flat, t.n, a0, a1, b0, b1)
    if hit is None:
        return None
    c00, c01, c10, c11 = hit
    return RefinementMatrix(((c00, c01), (c10, c11)))


@dataclass(frozen=True)
class RefinementCheck:
    ok: bool
    witness: tuple[int, int, int, int] | None = None


def check_refinement(t: MonoidTable, max_size: int | None = None) -> RefinementCheck:
    guard(t, max_size)
    w = kernels.first_refinement_failure(t.flat, t.n)
    return RefinementCheck(w is None, w)


def is_conical(t: MonoidTable) -> bool:
    return all(t.rows[a][b] != 0 for a in range(1, t.n) for b in range(t.n))


@dataclass(frozen=True)
class FormalSum:
    """Nonempty multiset of host indices, kept sorted."""

    summands: tuple[int, ...] = field()

    def __post_init__(self):
        if not self.summands:
            raise PreconditionError("formal sums are nonempty")
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))

    @classmethod
    def of(cls, *items: int) -> "FormalSum":
        return cls(tuple(items))

    def __len__(self):
        return len(self.summands)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.summands + other.summands)


_REF_HOSTS: dict[MonoidTable, bool] = {}


def _ref_host_ok(t: MonoidTable) -> bool:
    if t not in _REF_HOSTS:
        _REF_HOSTS[t] = is_conical(t) and check_refinement(t, max_size=t.n).ok
    return _REF_HOSTS[t]


def ref_eq(t: MonoidTable, u: FormalSum, v: FormalSum, max_length: int = 6) -> bool:
    """Decide equality of formal sums in the universal refinement monoid.

    ``u`` and ``v`` are equal iff some matrix over ``t`` has row sums ``u``
    and column sums ``v``.
    """
    if not _ref_host_ok(t):
        raise PreconditionError("host must be a conical refinement monoid")
    if len(u) > max_length or len(v) > max_length:
        raise PreconditionError(f"formal sums longer than {max_length}")
    rows, cols = u.summands, v.summands
    m, k = len(rows), len(cols)
    n = t.n
    failed: set = set()

    def go(cell: int, row_acc: int, col_acc: tuple[int, ...]) -> bool:
        if cell == m * k:
            return True
        key = (cell, row_acc, col_acc)
        if key in failed:
            return False
        i, j = divmod(cell, k)
        target_r, target_c = rows[i], cols[j]
        for c in range(n):
            r2 = t.rows[row_acc][c]
            if r2 == UNDEF or not t.leq(r2, target_r):
                continue
            c2 = t.rows[col_acc[j]][c]
            if c2 == UNDEF or not t.leq(c2, target_c):
                continue
            if j == k - 1 and r2 != target_r:
                continue
            if i == m - 1 and c2 != target_c:
                continue
            nxt_cols = col_acc[:j] + (c2,) + col_acc[j + 1:]
            if go(cell + 1, 0 if j == k - 1 else r2, nxt_cols):
                return True
        failed.add(key)
        return False

    return go(0, 0, (0,) * k)


@dataclass(frozen=True)
class EmbeddingCheck:
    ok: bool
    clause: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"{self.clause} fails at {self.witness}"


def verify_lower_embedding(A: MonoidTable, B: MonoidTable, f: Sequence[int],
                           max_size: int | None = None) -> EmbeddingCheck:
    """Homomorphism, injective and order-reflecting, range downward closed."""
    guard(A, max_size)
    guard(B, max_size)
    if len(f) != A.n:
        raise PreconditionError("map must be total on the domain")
    if f[0] != 0:
        return EmbeddingCheck(False, "homomorphism", (0,))
    for a in range(A.n):
        for b in range(A.n):
            c = A.rows[a][b]
            if c != UNDEF and B.add(f[a], f[b]) != f[c]:
                return EmbeddingCheck(False, "homomorphism", (a, b))
    for x in range(A.n):
        for y in range(A.n):
            if B.leq(f[x], f[y]) and not A.leq(x, y):
                return EmbeddingCheck(False, "order-reflecting", (x, y))
            if x < y and f[x] == f[y]:
                return EmbeddingCheck(False, "order-reflecting", (x, y))
    image = mask_of(f)
    for x in range(A.n):
        missing = B.down[f[x]] & ~image
        if missing:
            return EmbeddingCheck(False, "lower-range", (x, (missing & -missing).bit_length() - 1))
    return EmbeddingCheck(True)


def _signature(t: MonoidTable, a: int) -> tuple:
    return (
        sum(v != UNDEF for v in t.rows[a]),
        bin(t.down[a]).count("1"),
        bin(t.up[a]).count("1"),
        t.rows[a][a] == a,
    )


def find_isomorphism(A: MonoidTable, B: MonoidTable) -> tuple[int, ...] | None:
    """Some bijection preserving and reflecting the addition table, or None."""
    if A.n != B.n:
        return None
    n = A.n
    sa = [_signature(A, a) for a in range(n)]
    sb = [_signature(B, b) for b in range(n)]
    if sorted(sa) != sorted(sb):
        return None
    f = [-1] * n
    used = [False] * n

    def consistent(a: int) -> bool:
        for x in range(a + 1):
            fx = f[x]
            c = A.rows[a][x]
            d = B.rows[f[a]][fx]
            if c == UNDEF:
                if d != UNDEF:
                    return False
            elif c <= a:
                if d != f[c]:
                    return False
            elif d == UNDEF:
                return False
        return True

    def go(a: int) -> bool:
        if a == n:
            return all(
                (A.rows[x][y] == UNDEF) == (B.rows[f[x]][f[y]] == UNDEF)
                and (A.rows[x][y] == UNDEF or B.rows[f[x]][f[y]] == f[A.rows[x][y]])
                for x in range(n) for y in range(n)
            )
        for b in range(n):
            if used[b] or sb[b] != sa[a]:
                continue
            f[a] = b
            used[b] = True
            if consistent(a) and go(a + 1):
                return True
            used[b] = False
        f[a] = -1
        return False

    return tuple(f) if go(0) else None

