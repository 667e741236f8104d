"""Finite espaliers: validation, the dimension range, and generators.

An espalier is stored as three relations over dense indices: the order
(``below[b]`` is the bitmask of all ``a <= b``), orthogonality (``perp[a]``)
and the equivalence (``sim[a]`` is a class id; ids are numbered in order of
first appearance, so class 0 is the class of the zero element).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from dimscale.errors import DecompositionError, DimScaleError, PreconditionError, SizeGuardError
from dimscale.monoid import FormalSum, MonoidTable, find_isomorphism, iter_bits, mask_of, ref_eq
from dimscale.projections import Projection, ProjectionAlgebra, _maximum, projection_algebra
from dimscale.targets import product_scale

MAX_ESPALIER = 64


def _canonical_classes(ids: Sequence[int]) -> tuple[int, ...]:
    renum: dict[int, int] = {}
    return tuple(renum.setdefault(c, len(renum)) for c in ids)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def classes(self) -> tuple[int, ...]:
        return _canonical_classes([self.find(x) for x in range(len(self.parent))])


@dataclass(frozen=True, eq=False)
class EspalierTable:
    labels: tuple[str, ...]
    below: tuple[int, ...]
    perp: tuple[int, ...]
    sim: tuple[int, ...]

    def __post_init__(self):
        n = len(self.labels)
        if n < 1:
            raise PreconditionError("carrier must be nonempty")
        if len(set(self.labels)) != n:
            raise PreconditionError("labels must be distinct")
        if not (len(self.below) == len(self.perp) == len(self.sim) == n):
            raise PreconditionError("relation tables have the wrong size")
        object.__setattr__(self, "sim", _canonical_classes(self.sim))

    @classmethod
    def from_relations(cls, labels: Sequence[str], leq: Iterable[tuple[int, int]],
                       perp: Iterable[tuple[int, int]], sim: Iterable[tuple[int, int]]) -> "EspalierTable":
        """Relations as index pairs; ``sim`` is closed to an equivalence."""
        n = len(labels)
        below = [0] * n
        for a, b in leq:
            below[b] |= 1 << a
        pm = [0] * n
        for a, b in perp:
            pm[a] |= 1 << b
        uf = _UnionFind(n)
        for a, b in sim:
            uf.union(a, b)
        return cls(tuple(labels), tuple(below), tuple(pm), uf.classes())

    @classmethod
    def from_functions(cls, labels: Sequence[str], leq: Callable[[int, int], bool],
                       perp: Callable[[int, int], bool], sim: Sequence[int]) -> "EspalierTable":
        n = len(labels)
        below = tuple(mask_of(a for a in range(n) if leq(a, b)) for b in range(n))
        pm = tuple(mask_of(b for b in range(n) if perp(a, b)) for a in range(n))
        return cls(tuple(labels), below, pm, tuple(sim))

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise PreconditionError(f"unknown element {label!r}") from None

    @cached_property
    def above(self) -> tuple[int, ...]:
        out = [0] * self.n
        for b in range(self.n):
            for a in iter_bits(self.below[b]):
                out[a] |= 1 << b
        return tuple(out)

    @cached_property
    def classes(self) -> tuple[int, ...]:
        """Bitmask of each equivalence class, by class id."""
        out = [0] * (max(self.sim) + 1)
        for x, c in enumerate(self.sim):
            out[c] |= 1 << x
        return tuple(out)

    def leq(self, a: int, b: int) -> bool:
        return bool(self.below[b] >> a & 1)

    def is_perp(self, a: int, b: int) -> bool:
        return bool(self.perp[a] >> b & 1)

    def equiv(self, a: int, b: int) -> bool:
        return self.sim[a] == self.sim[b]

    def lesssim(self, a: int, b: int) -> bool:
        """``a`` is equivalent to some element below ``b``."""
        return bool(self.classes[self.sim[a]] & self.below[b])

    @cached_property
    def _meet_table(self) -> tuple[int, ...]:
        n = self.n
        out = [-1] * (n * n)
        for a in range(n):
            for b in range(a, n):
                common = self.below[a] & self.below[b]
                for c in iter_bits(common):
                    if common & ~self.below[c] == 0:
                        out[a * n + b] = out[b * n + a] = c
                        break
        return tuple(out)

    @cached_property
    def _join_table(self) -> tuple[int, ...]:
        n = self.n
        out = [-1] * (n * n)
        for a in range(n):
            for b in range(a, n):
                common = self.above[a] & self.above[b]
                for c in iter_bits(common):
                    if common & ~self.above[c] == 0:
                        out[a * n + b] = out[b * n + a] = c
                        break
        return tuple(out)

    def meet(self, a: int, b: int) -> int | None:
        m = self._meet_table[a * self.n + b]
        return None if m < 0 else m

    def join(self, a: int, b: int) -> int | None:
        j = self._join_table[a * self.n + b]
        return None if j < 0 else j

    def oplus(self, a: int, b: int) -> int | None:
        return self.join(a, b) if self.is_perp(a, b) else None

    @cached_property
    def decompositions(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``decompositions[c]``: all ordered pairs ``(a, b)`` with ``a (+) b = c``."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for a in range(self.n):
            for b in iter_bits(self.perp[a]):
                c = self.join(a, b)
                if c is not None:
                    out[c].append((a, b))
        return tuple(tuple(x) for x in out)

    def relative_complements(self, a: int, c: int) -> list[int]:
        """All ``x`` with ``a (+) x = c``, ascending."""
        return [y for x, y in self.decompositions[c] if x == a]


def _guard(L: EspalierTable, max_size: int | None) -> None:
    limit = MAX_ESPALIER if max_size is None else max_size
    if L.n > limit:
        raise SizeGuardError(f"espalier of size {L.n} exceeds {limit}")


# -- validation --------------------------------------------------------------

ESP_AXIOMS = ("L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8")


@dataclass(frozen=True)
class EspVerdict:
    ok: bool
    witness: str = ""
    note: str = ""


@dataclass(frozen=True)
class EspalierReport:
    verdicts: dict[str, EspVerdict]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts.values())

    def failures(self) -> list[str]:
        return [a for a in ESP_AXIOMS if not self.verdicts[a].ok]


def _lab(L: EspalierTable, *xs: int) -> str:
    return ", ".join(L.labels[x] for x in xs)


def _check_l1(L: EspalierTable) -> EspVerdict:
    n = L.n
    for a in range(n):
        if not L.leq(a, a):
            return EspVerdict(False, f"order not reflexive at {_lab(L, a)}")
        if not L.leq(0, a):
            return EspVerdict(False, f"{_lab(L, 0)} is not below {_lab(L, a)}")
        for b in iter_bits(L.above[a]):
            if b != a and L.leq(b, a):
                return EspVerdict(False, f"order not antisymmetric at {_lab(L, a, b)}")
            if L.above[b] & ~L.above[a]:
                return EspVerdict(False, f"order not transitive through {_lab(L, a, b)}")
    for a in range(n):
        for b in range(a + 1, n):
            if L.meet(a, b) is None:
                return EspVerdict(False, f"no meet of {_lab(L, a, b)}")
            if L.above[a] & L.above[b] and L.join(a, b) is None:
                return EspVerdict(False, f"majorized pair {_lab(L, a, b)} has no join")
    return EspVerdict(True)


def _check_l2(L: EspalierTable) -> EspVerdict:
    n = L.n
    for a in range(n):
        if not L.is_perp(a, 0):
            return EspVerdict(False, f"(i) {_lab(L, a)} not orthogonal to 0")
        if L.is_perp(a, a) and a != 0:
            return EspVerdict(False, f"(v) {_lab(L, a)} orthogonal to itself")
        for b in iter_bits(L.perp[a]):
            if not L.is_perp(b, a):
                return EspVerdict(False, f"(ii) asymmetric at {_lab(L, a, b)}")
    for b in range(n):
        for c in iter_bits(L.perp[b]):
            bad = L.below[b] & ~L.perp[c]
            if bad:
                a = (bad & -bad).bit_length() - 1
                return EspVerdict(False, f"(iii) {_lab(L, a)} <= {_lab(L, b)} but not orthogonal to {_lab(L, c)}")
    for a in range(n):
        for b in iter_bits(L.perp[a]):
            ab = L.join(a, b)
            if ab is None:
                continue
            for c in iter_bits(L.perp[ab]):
                if not (L.above[a] & L.above[b] & L.above[c]):
                    continue
                bc = L.join(b, c)
                if bc is None or not L.is_perp(a, bc):
                    return EspVerdict(False, f"(iv) fails for {_lab(L, a, b, c)}")
    return EspVerdict(True)


def _check_l3(L: EspalierTable) -> EspVerdict:
    for b in range(L.n):
        for a in iter_bits(L.below[b]):
            if not L.relative_complements(a, b):
                return EspVerdict(False, f"no x with {_lab(L, a)} (+) x = {_lab(L, b)}")
    return EspVerdict(True)


def _check_l4(L: EspalierTable) -> EspVerdict:
    # finite families: only the consistency of iterated sums needs checking
    for c in range(L.n):
        for a, bc in L.decompositions[c]:
            for b, d in L.decompositions[bc]:
                ab = L.oplus(a, b)
                if ab is None or L.oplus(ab, d) != c:
                    return EspVerdict(False, f"orthogonal family {_lab(L, a, b, d)} has no consistent sum")
    return EspVerdict(True, note="finite-reduction")


def _check_l5(L: EspalierTable) -> EspVerdict:
    if L.classes[L.sim[0]] != 1:
        x = (L.classes[L.sim[0]] & ~1).bit_length() - 1
        return EspVerdict(False, f"{_lab(L, x)} is equivalent to {_lab(L, 0)}")
    return EspVerdict(True)


def _triple_decompositions(L: EspalierTable, c: int):
    for a, rest in L.decompositions[c]:
        for b, d in L.decompositions[rest]:
            yield a, b, d


def _check_l6(L: EspalierTable) -> EspVerdict:
    sim = L.sim
    pairs = [frozenset((sim[x], sim[y]) for x, y in L.decompositions[c]) for c in range(L.n)]
    triples = [
        frozenset((sim[x], sim[y], sim[z]) for x, y, z in _triple_decompositions(L, c))
        for c in range(L.n)
    ]
    for sigs, size in ((pairs, 2), (triples, 3)):
        for cls in L.classes:
            members = list(iter_bits(cls))
            for a in members:
                for c in members:
                    missing = sigs[c] - sigs[a]
                    if missing:
                        want = min(missing)
                        parts = (next(x for x, y in L.decompositions[c] if (sim[x], sim[y]) == want)
                                 if size == 2 else
                                 next(t for t in _triple_decompositions(L, c)
                                      if tuple(sim[u] for u in t) == want))
                        if size == 2:
                            parts = (parts, next(y for x, y in L.decompositions[c]
                                                 if x == parts and (sim[x], sim[y]) == want))
                        return EspVerdict(False, f"{_lab(L, a)} ~ {' (+) '.join(L.labels[p] for p in parts)}"
                                                 f" but has no matching decomposition", note="finite-reduction")
    return EspVerdict(True, note="finite-reduction")


def _check_l7(L: EspalierTable) -> EspVerdict:
    sim = L.sim
    seen: dict[tuple, tuple[int, tuple]] = {}
    for c in range(L.n):
        for parts in itertools.chain(L.decompositions[c], _triple_decompositions(L, c)):
            key = tuple(sim[p] for p in parts)
            prev = seen.get(key)
            if prev is None:
                seen[key] = (c, parts)
            elif sim[prev[0]] != sim[c]:
                return EspVerdict(False, f"{' (+) '.join(L.labels[p] for p in prev[1])} and "
                                         f"{' (+) '.join(L.labels[p] for p in parts)} have equivalent parts "
                                         f"but inequivalent sums", note="finite-reduction")
    return EspVerdict(True, note="finite-reduction")


def _check_l8(L: EspalierTable) -> EspVerdict:
    for a in range(L.n):
        for b in range(L.n):
            j = L.join(a, b)
            if j is None:
                continue
            m = L.meet(a, b)
            found = L.relative_complements(m, a) + L.relative_complements(b, j)
            if len({L.sim[x] for x in found}) > 1:
                return EspVerdict(False, f"parallelogram rule fails for {_lab(L, a, b)}")
    return EspVerdict(True)


def validate_espalier(L: EspalierTable, max_size: int | None = None) -> EspalierReport:
    _guard(L, max_size)
    checks = {
        "L1": _check_l1, "L2": _check_l2, "L3": _check_l3, "L4": _check_l4,
        "L5": _check_l5, "L6": _check_l6, "L7": _check_l7, "L8": _check_l8,
    }
    verdicts = {}
    for name, fn in checks.items():
        if name != "L1" and not verdicts["L1"].ok:
            verdicts[name] = EspVerdict(False, "skipped: the order is not a meet-semilattice")
            continue
        verdicts[name] = fn(L)
    return EspalierReport(verdicts)


# -- operations ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DrngQuotient:
    """Dimension range: the quotient by the equivalence, with induced addition."""

    espalier: EspalierTable
    scale: MonoidTable
    delta: tuple[int, ...]

    @cached_property
    def algebra(self) -> ProjectionAlgebra:
        return projection_algebra(self.scale)


def drng(L: EspalierTable) -> DrngQuotient:
    hit = L.__dict__.get("_drng")
    if hit is not None:
        return hit
    sums: dict[tuple[int, int], int] = {}
    for c in range(L.n):
        for a, b in L.decompositions[c]:
            key = (L.sim[a], L.sim[b])
            prev = sums.setdefault(key, L.sim[c])
            if prev != L.sim[c]:
                raise DecompositionError(
                    f"addition ill-defined: {_lab(L, a)} (+) {_lab(L, b)} lands in two classes",
                    witness=(a, b))
    reps = [(cls & -cls).bit_length() - 1 for cls in L.classes]
    scale = MonoidTable.from_operation([L.labels[r] for r in reps],
                                       lambda i, j: sums.get((i, j)))
    q = DrngQuotient(L, scale, L.sim)
    object.__setattr__(L, "_drng", q)
    return q


@dataclass(frozen=True)
class EspalierOps:
    meet: int | None
    join: int | None
    oplus: int | None
    relative_complement: int | None
    boxplus: int | None


def boxplus(L: EspalierTable, a: int, b: int) -> int | None:
    """Join of ``a`` and ``b`` when their dimensions are orthogonal."""
    q = drng(L)
    j = L.join(a, b)
    if j is None or not q.scale.orth_rows[q.delta[a]] >> q.delta[b] & 1:
        return None
    if not L.is_perp(a, b):
        raise DimScaleError(f"{_lab(L, a, b)}: orthogonal dimensions but not orthogonal")
    return j


def espalier_ops(L: EspalierTable, a: int, b: int) -> EspalierOps:
    """Table-driven operations; the relative complement is of ``a`` in ``b`` (first one)."""
    rc = L.relative_complements(a, b) if L.leq(a, b) else []
    return EspalierOps(L.meet(a, b), L.join(a, b), L.oplus(a, b),
                       rc[0] if rc else None, boxplus(L, a, b))


def p_dot(L: EspalierTable, p: Projection, a: int) -> int:
    """Largest ``u <= a`` whose dimension lies in the range of ``p``."""
    q = drng(L)
    cands = mask_of(x for x in iter_bits(L.below[a]) if p.fixes(q.delta[x]))
    tops = [x for x in iter_bits(cands) if cands & ~L.below[x] == 0]
    if len(tops) != 1:
        raise DecompositionError(f"no largest element below {_lab(L, a)} with dimension in the range")
    return tops[0]


def bv_lesssim(L: EspalierTable, a: int, b: int) -> Projection:
    """Largest projection ``p`` of the dimension range with ``p . a`` below ``b`` up to equivalence."""
    alg = drng(L).algebra
    cands = [p for p in alg.all if L.lesssim(p_dot(L, p, a), b)]
    return _maximum(alg, cands, f"p.{L.labels[a]} lesssim {L.labels[b]}")


def is_trim(L: EspalierTable, a: int, b: int) -> bool:
    """Some ``c`` with ``a (+) c = b`` has dimension ``D(b) minus D(a)``."""
    q = drng(L)
    s = q.scale
    if not s.leq(q.delta[a], q.delta[b]):
        return False
    from dimscale.projections import least_difference
    want = least_difference(s, q.delta[a], q.delta[b])
    return any(q.delta[c] == want for c in L.relative_complements(a, b))


def trim_lift(L: EspalierTable, b: int, chain: Sequence[int]) -> list[int]:
    """Lift an increasing chain in ``[0, D(b)]`` of the dimension range to a trim sequence below ``b``."""
    from dimscale.projections import least_difference
    q = drng(L)
    s = q.scale
    for x, y in zip(chain, chain[1:]):
        if not s.leq(x, y):
            raise PreconditionError("chain must be increasing")
    if chain and not s.leq(chain[-1], q.delta[b]):
        raise PreconditionError("chain must stay below the dimension of b")
    out = []
    a = 0
    for x in chain:
        comps = L.relative_complements(a, b)
        if not comps:
            raise DecompositionError(f"{_lab(L, a)} has no complement in {_lab(L, b)}")
        c = comps[0]
        want = least_difference(s, q.delta[a], x)
        ys = [y for y in iter_bits(L.below[c]) if q.delta[y] == want]
        if not ys:
            raise DecompositionError(f"no piece of dimension {s.labels[want]} below {_lab(L, c)}")
        nxt = L.oplus(a, ys[0])
        if nxt is None or q.delta[nxt] != x:
            raise DecompositionError(f"insertion step fails at {s.labels[x]}")
        out.append(nxt)
        a = nxt
    seq = out + [b]
    for i, u in enumerate(seq):
        for v in seq[i + 1:]:
            if not is_trim(L, u, v):
                raise DecompositionError(f"{_lab(L, u)} is not trim below {_lab(L, v)}")
    return out


# -- Boolean espaliers and closure ---------------------------------------------

def _boolean_shape(B: EspalierTable) -> tuple[list[int], dict[int, int]]:
    """Atom masks of a Boolean lattice with orthogonality = disjointness."""
    atoms = [x for x in range(1, B.n) if B.below[x] == (1 | 1 << x)]
    sub = [mask_of(i for i, at in enumerate(atoms) if B.leq(at, x)) for x in range(B.n)]
    index = {m: x for x, m in enumerate(sub)}
    if B.n != 1 << len(atoms) or len(index) != B.n:
        raise PreconditionError("not a finite Boolean lattice")
    for x in range(B.n):
        for y in range(B.n):
            if B.leq(x, y) != (sub[x] & ~sub[y] == 0):
                raise PreconditionError("order is not inclusion of atom sets")
            if B.is_perp(x, y) != (sub[x] & sub[y] == 0):
                raise PreconditionError("orthogonality is not disjointness")
    return sub, index


def _additive_closure(L: EspalierTable, uf: _UnionFind) -> tuple[int, ...]:
    """Least equivalence containing ``uf`` and closed under joining equivalent orthogonal pairs."""
    changed = True
    while changed:
        changed = False
        seen: dict[tuple[int, int], int] = {}
        for c in range(L.n):
            for a, b in L.decompositions[c]:
                key = (uf.find(a), uf.find(b))
                prev = seen.setdefault(key, c)
                if uf.union(prev, c):
                    changed = True
    return uf.classes()


def _peel_relation(L: EspalierTable, sub: list[int], index: dict[int, int],
                   base: tuple[int, ...]) -> Callable[[int, int], bool]:
    """Literal piecewise definition: finite disjoint decompositions with equivalent parts."""
    members: dict[int, list[int]] = {}
    for x, c in enumerate(base):
        members.setdefault(c, []).append(x)
    memo: dict[tuple[int, int], bool] = {}

    def rel(x: int, y: int) -> bool:
        key = (x, y)
        if key in memo:
            return memo[key]
        memo[key] = False
        res = base[x] == base[y]
        sx, sy = sub[x], sub[y]
        if not res and sx and sy:
            low = sx & -sx
            rest = sx ^ low
            part = rest
            while not res:
                x0 = index[part | low]
                if x0 != x:
                    for y0 in members[base[x0]]:
                        if y0 != y and sub[y0] & ~sy == 0 and rel(index[sx & ~sub[x0]], index[sy & ~sub[y0]]):
                            res = True
                            break
                if part == 0:
                    break
                part = (part - 1) & rest
        memo[key] = res
        return res

    return rel


def espalier_closure(B: EspalierTable, sim0: Iterable[tuple[int, int]],
                     cross_check: bool = True) -> EspalierTable:
    """Least espalier equivalence containing ``sim0`` on a Boolean lattice."""
    sub, index = _boolean_shape(B)
    uf = _UnionFind(B.n)
    for a, b in sim0:
        uf.union(a, b)
    base = uf.classes()
    pre = EspalierTable(B.labels, B.below, B.perp, base)
    if pre.classes[0] != 1:
        raise PreconditionError("x ~ 0 must force x = 0")
    refining = _check_l6(pre)
    if not refining.ok:
        raise PreconditionError(f"relation is not refining: {refining.witness}")
    closed = _additive_closure(pre, uf)
    if cross_check:
        rel = _peel_relation(pre, sub, index, base)
        for x in range(B.n):
            for y in range(B.n):
                if rel(x, y) != (closed[x] == closed[y]):
                    raise DimScaleError(f"closure disagrees with the piecewise definition at {_lab(B, x, y)}")
    out = EspalierTable(B.labels, B.below, B.perp, closed)
    report = validate_espalier(out)
    if not report.ok:
        raise DimScaleError(f"closure is not an espalier: {report.failures()}")
    return out


def _subset_label(bits: Sequence[str]) -> str:
    return "{" + ",".join(bits) + "}"


def boolean_espalier(atom_names: Sequence[str], sim: Callable[[int], object] | None = None) -> EspalierTable:
    """Powerset of ``atom_names`` ordered by inclusion; ``sim`` maps a subset mask to a class key."""
    k = len(atom_names)
    masks = sorted(range(1 << k), key=lambda m: (bin(m).count("1"), [i for i in range(k) if m >> i & 1]))
    labels = [_subset_label([atom_names[i] for i in range(k) if m >> i & 1]) for m in masks]
    keys = [m if sim is None else sim(m) for m in masks]
    ids = {}
    classes = [ids.setdefault(key, len(ids)) for key in keys]
    return EspalierTable.from_functions(
        labels,
        lambda a, b: masks[a] & ~masks[b] == 0,
        lambda a, b: masks[a] & masks[b] == 0,
        classes,
    )


def gen_equipotency(n: int) -> EspalierTable:
    if not 1 <= n <= 6:
        raise PreconditionError("equipotency needs 1 <= n <= 6")
    return boolean_espalier([str(i + 1) for i in range(n)], lambda m: bin(m).count("1"))


def _group_closure(n: int, gens: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    for g in gens:
        if sorted(g) != list(range(n)):
            raise PreconditionError(f"{g} is not a permutation of {n} points")
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                gh = tuple(g[h[i]] for i in range(n))
                if gh not in group:
                    group.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(group)


def named_generators(n: int, name: str) -> list[tuple[int, ...]]:
    if name == "trivial":
        return []
    if name == "cyclic":
        return [tuple((i + 1) % n for i in range(n))]
    if name == "full":
        return [tuple(range(n))] if n < 2 else [
            tuple(range(1, n)) + (0,), (1, 0) + tuple(range(2, n))]
    raise PreconditionError(f"unknown group {name!r}")


def gen_group_action(n: int, generators: Sequence[Sequence[int]], power: int = 1) -> EspalierTable:
    """Powerset of ``n x power`` with the closure of the wreath-style translation relation."""
    if n < 1 or power < 1 or n * power > 6:
        raise SizeGuardError("group action needs n * power <= 6")
    group = _group_closure(n, generators)
    block_names = "abcdef"
    names = [f"{p + 1}{block_names[b]}" if power > 1 else str(p + 1)
             for b in range(power) for p in range(n)]
    B = boolean_espalier(names)
    masks = [mask_of(i for i, nm in enumerate(names) if nm in B.labels[x].strip("{}").split(","))
             for x in range(B.n)]

    # orbit representative: least mask in the orbit
    rep ={m: min(mask_of(g[i] for i in range(n) if m >> i & 1) for g in group) for m in range(1 << n)}

    def signature(x: int) -> tuple[int, ...]:
        m = masks[x]
        blocks = [(m >> (b * n)) & ((1 << n) - 1) for b in range(power)]
        return tuple(sorted(rep[blk] for blk in blocks))

    by_sig: dict[tuple[int, ...], int] = {}
    pairs = []
    for x in range(B.n):
        first = by_sig.setdefault(signature(x), x)
        pairs.append((first, x))
    return espalier_closure(B, pairs)


def gen_subspace_lattice(q: int, n: int) -> EspalierTable:
    """Subspaces of ``F_q^n``; equivalence is projectivity by decomposition."""
    if q not in (2, 3) or n not in (1, 2, 3):
        raise PreconditionError("subspace lattices need q in {2,3} and n in {1,2,3}")
    vectors = list(itertools.product(range(q), repeat=n))
    vindex = {v: i for i, v in enumerate(vectors)}

    def span(vs: Iterable[tuple[int, ...]]) -> int:
        vs = list(vs)
        out = {vectors[0]}
        for v in vs:
            out = {tuple((a + c * b) % q for a, b in zip(u, v)) for u in out for c in range(q)}
        return mask_of(vindex[v] for v in out)

    spaces = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for s in frontier:
            members = [vectors[i] for i in iter_bits(s)]
            for v in vectors:
                if not s >> vindex[v] & 1:
                    t = span(members + [v])
                    if t not in spaces:
                        spaces.add(t)
                        nxt.append(t)
        frontier = nxt
    ordered = sorted(spaces, key=lambda s: (bin(s).count("1"), list(iter_bits(s))))

    def label(s: int) -> str:
        if s == 1:
            return "0"
        basis: list[tuple[int, ...]] = []
        for i in iter_bits(s):
            if not span(basis) >> i & 1:
                basis.append(vectors[i])
        return "<" + ";".join("".join(map(str, v)) for v in basis) + ">"

    labels = [label(s) for s in ordered]
    L0 = EspalierTable.from_functions(
        labels,
        lambda a, b: ordered[a] & ~ordered[b] == 0,
        lambda a, b: ordered[a] & ordered[b] == 1,
        list(range(len(ordered))),
    )
    uf = _UnionFind(L0.n)
    for x, y in perspective_pairs(L0):
        uf.union(x, y)
    classes = _additive_closure(L0, uf)
    return EspalierTable(L0.labels, L0.below, L0.perp, classes)


def perspective_pairs(L: EspalierTable) -> list[tuple[int, int]]:
    """Pairs ``(x, y)`` with a common axis ``z``: ``x (+) z = y (+) z``."""
    out = []
    for x in range(L.n):
        for y in range(x + 1, L.n):
            for z in iter_bits(L.perp[x] & L.perp[y]):
                j = L.oplus(x, z)
                if j is not None and j == L.oplus(y, z):
                    out.append((x, y))
                    break
    return out


# -- products, lower subespaliers, dimension monoid ---------------------------

def _product(Ls: Sequence[EspalierTable], max_size: int) -> EspalierTable:
    total = 1
    for L in Ls:
        total *= L.n
    if total > max_size:
        raise SizeGuardError(f"product of size {total} exceeds {max_size}")
    tuples = list(itertools.product(*(range(L.n) for L in Ls)))
    labels = ["(" + ",".join(L.labels[i] for L, i in zip(Ls, tp)) + ")" for tp in tuples]
    keys = [tuple(L.sim[i] for L, i in zip(Ls, tp)) for tp in tuples]
    ids: dict = {}
    return EspalierTable.from_functions(
        labels,
        lambda a, b: all(L.leq(x, y) for L, x, y in zip(Ls, tuples[a], tuples[b])),
        lambda a, b: all(L.is_perp(x, y) for L, x, y in zip(Ls, tuples[a], tuples[b])),
        [ids.setdefault(k, len(ids)) for k in keys],
    )


def _lower(L: EspalierTable, keep: Sequence[int]) -> EspalierTable:
    keep = sorted(set(keep))
    kmask = mask_of(keep)
    if not keep or keep[0] != 0:
        raise PreconditionError("lower subset must contain 0")
    for x in keep:
        if L.below[x] & ~kmask:
            raise PreconditionError(f"set is not downward closed below {L.labels[x]!r}")
    return EspalierTable.from_functions(
        [L.labels[x] for x in keep],
        lambda a, b: L.leq(keep[a], keep[b]),
        lambda a, b: L.is_perp(keep[a], keep[b]),
        [L.sim[x] for x in keep],
    )


def combine(Ls: Sequence[EspalierTable], mode: str = "product",
            subset: Iterable[int] | None = None, ceiling: int | None = None,
            saturated: bool = False, max_size: int = MAX_ESPALIER) -> EspalierTable:
    """Product of espaliers, or the lower subespalier of ``Ls[0]`` on a set or below a ceiling."""
    if mode == "product":
        out = _product(Ls, max_size)
        got = drng(out).scale
        want = product_scale([drng(L).scale for L in Ls])
        if find_isomorphism(got, want) is None:
            raise DimScaleError("dimension range of the product is not the product of ranges")
        return out
    if mode != "lower_sub":
        raise PreconditionError(f"unknown mode {mode!r}")
    (L,) = Ls
    if ceiling is not None:
        keep = list(iter_bits(L.below[ceiling]))
    elif subset is not None:
        keep = list(subset)
    else:
        raise PreconditionError("lower_sub needs a subset or a ceiling")
    out = _lower(L, keep)
    if saturated:
        q = drng(L)
        dims = {q.delta[x] for x in keep}
        if any(q.delta[x] in dims and x not in set(keep) for x in range(L.n)):
            raise PreconditionError("set is not saturated for the dimension map")
        from dimscale.monoid import lower_submonoid
        want, _ = lower_submonoid(q.scale, dims)
        if find_isomorphism(drng(out).scale, want) is None:
            raise DimScaleError("dimension range of the subespalier is not the image set")
    return out


@dataclass(frozen=True, eq=False)
class DimMonoid:
    """Word problem of the dimension monoid, via the universal refinement monoid of the range."""

    espalier: EspalierTable
    quotient: DrngQuotient = field(repr=False)

    def interval(self, a: int, b: int) -> int:
        """Dimension of the interval ``[a, b]``: that of any relative complement."""
        L = self.espalier
        rc = L.relative_complements(a, b)
        if not rc:
            raise PreconditionError(f"{_lab(L, a)} is not below {_lab(L, b)}")
        return self.quotient.delta[rc[0]]

    def eq(self, u: Sequence[tuple[int, int]], v: Sequence[tuple[int, int]]) -> bool:
        """Equality of two sums of intervals, each given as ``(a, b)`` with ``a <= b``."""
        fu = FormalSum(tuple(self.interval(a, b) for a, b in u) or (0,))
        fv = FormalSum(tuple(self.interval(a, b) for a, b in v) or (0,))
        return ref_eq(self.quotient.scale, fu, fv)

    def relation_failures(self) -> list[str]:
        L = self.espalier
        bad = []
        for a in range(L.n):
            if not self.eq([(a, a)], []):
                bad.append(f"nonzero empty interval at {_lab(L, a)}")
            for b in iter_bits(L.above[a]):
                for c in iter_bits(L.above[b]):
                    if not self.eq([(a, c)], [(a, b), (b, c)]):
                        bad.append(f"interval not additive along {_lab(L, a, b, c)}")
        for a in range(L.n):
            for b in range(L.n):
                j = L.join(a, b)
                if j is not None and not self.eq([(a, j)], [(L.meet(a, b), b)]):
                    bad.append(f"transposed intervals differ at {_lab(L, a, b)}")
        return bad


def dim_monoid(L: EspalierTable) -> DimMonoid:
    return DimMonoid(L, drng(L))
