"""Orthogonality, projections and the Boolean algebra they form.

Element sets are handled internally as int bitmasks over the carrier; the
public functions accept any iterable of indices and return frozensets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple

from dimscale.errors import DecompositionError, NoExtremumError, PreconditionError
from dimscale.monoid import UNDEF, MonoidTable, guard, iter_bits, mask_of

MAX_SUMMANDS = 1024


def perp_mask(t: MonoidTable, mask: int) -> int:
    out = t.full_mask
    for x in iter_bits(mask):
        out &= t.orth_rows[x]
    return out


def orthocomplement(t: MonoidTable, X: Iterable[int]) -> frozenset[int]:
    """All elements orthogonal to every member of ``X``."""
    return frozenset(iter_bits(perp_mask(t, mask_of(X))))


def is_ideal(t: MonoidTable, mask: int) -> bool:
    """Nonempty, and ``a + b`` lies in it iff both ``a`` and ``b`` do."""
    if not mask & 1:
        return False
    for a in range(t.n):
        row = t.rows[a]
        for b in range(t.n):
            c = row[b]
            if c != UNDEF:
                both = (mask >> a) & 1 and (mask >> b) & 1
                if bool((mask >> c) & 1) != bool(both):
                    return False
    return True


@dataclass(frozen=True, eq=False)
class Projection:
    """An idempotent endomorphism splitting the host as range (+) kernel."""

    host: MonoidTable
    range_mask: int
    kernel_mask: int
    image: tuple[int, ...]
    atoms: int

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __eq__(self, other):
        if not isinstance(other, Projection):
            return NotImplemented
        return self.host is other.host and self.range_mask == other.range_mask

    def __hash__(self):
        return hash(self.range_mask)

    def __repr__(self):
        return f"Projection(atoms={bin(self.atoms)})"

    @property
    def range_ideal(self) -> frozenset[int]:
        return frozenset(iter_bits(self.range_mask))

    @property
    def kernel_ideal(self) -> frozenset[int]:
        return frozenset(iter_bits(self.kernel_mask))

    def fixes(self, x: int) -> bool:
        return bool((self.range_mask >> x) & 1)


def _decompose(t: MonoidTable, rng: int, ker: int) -> tuple[int, ...] | int:
    """Image map for ``rng (+) ker``, or the first element without a unique split."""
    image = []
    for x in range(t.n):
        hits = []
        count = 0
        for x0 in iter_bits(rng & t.down[x]):
            k = bin(t.sum_masks[x0][x] & ker).count("1")
            if k:
                hits.append(x0)
                count += k
        if count != 1:
            return x
        image.append(hits[0])
    return tuple(image)


def _is_endomorphism(t: MonoidTable, image: tuple[int, ...]) -> bool:
    for a in range(t.n):
        row = t.rows[a]
        for b in range(a, t.n):
            c = row[b]
            if c != UNDEF and t.rows[image[a]][image[b]] != image[c]:
                return False
    return True


def _split(t: MonoidTable, rng: int):
    ker = perp_mask(t, rng)
    image = _decompose(t, rng, ker)
    if isinstance(image, int):
        return None, image
    if not _is_endomorphism(t, image):
        return None, None
    return (ker, image), None


@dataclass(frozen=True, eq=False)
class ProjectionAlgebra:
    """All projections of a host, canonically ordered, with atoms identified."""

    host: MonoidTable
    atoms: tuple[Projection, ...]
    all: tuple[Projection, ...]
    is_boolean: bool
    _by_atoms: dict = field(repr=False)
    _cc: dict = field(default_factory=dict, repr=False)

    @property
    def zero(self) -> Projection:
        return self.all[0]

    @property
    def identity(self) -> Projection:
        return self._by_atoms[(1 << len(self.atoms)) - 1]

    def from_atoms(self, atom_mask: int) -> Projection:
        return self._by_atoms[atom_mask]

    def atom_index(self, p: Projection) -> int:
        return self.atoms.index(p)

    def leq(self, p: Projection, q: Projection) -> bool:
        return p.range_mask & ~q.range_mask == 0

    def meet(self, p: Projection, q: Projection) -> Projection:
        return self._by_atoms[p.atoms & q.atoms]

    def join(self, p: Projection, q: Projection) -> Projection:
        return self._by_atoms[p.atoms | q.atoms]

    def complement(self, p: Projection) -> Projection:
        return self._by_atoms[((1 << len(self.atoms)) - 1) & ~p.atoms]

    def join_all(self, ps: Iterable[Projection]) -> Projection:
        m = 0
        for p in ps:
            m |= p.atoms
        return self._by_atoms[m]

    def below(self, p: Projection) -> list[Projection]:
        return [q for q in self.all if q.atoms & ~p.atoms == 0]


def _canonical_key(p: Projection):
    return (bin(p.atoms).count("1"), p.atoms, p.range_mask)


@lru_cache(maxsize=128)
def projection_algebra(t: MonoidTable, strict: bool = True,
                       max_size: int | None = None) -> ProjectionAlgebra:
    """Close ``{a^perp-perp}`` under meets and complements and keep the summands.

    With ``strict`` a polar that is not a direct summand raises
    ``DecompositionError``; otherwise only the genuine projections are kept.
    """
    guard(t, max_size)
    polars = {perp_mask(t, perp_mask(t, 1 << a)) for a in range(t.n)}
    polars |= {1, t.full_mask}
    frontier = set(polars)
    while frontier:
        new = set()
        for m in frontier:
            c = perp_mask(t, m)
            if c not in polars:
                new.add(c)
            for m2 in polars:
                i = m & m2
                if i not in polars:
                    new.add(i)
        polars |= new
        frontier = new
        if len(polars) > MAX_SUMMANDS:
            raise DecompositionError(f"more than {MAX_SUMMANDS} polars")

    generators = {perp_mask(t, perp_mask(t, 1 << a)): a for a in range(t.n - 1, -1, -1)}
    raw = {}
    for rng in sorted(polars):
        got, bad = _split(t, rng)
        if got is not None:
            raw[rng] = got
        elif strict:
            a = generators.get(rng)
            where = f"a^perp-perp of {t.labels[a]!r}" if a is not None else "a polar"
            detail = f" at element {t.labels[bad]!r}" if bad is not None else " (not additive)"
            raise DecompositionError(f"{where} is not a direct summand{detail}",
                                     witness=a if a is not None else bad)

    nonzero = [r for r in raw if r != 1]
    minimal = [r for r in nonzero if not any(o != r and o & ~r == 0 for o in nonzero)]
    minimal.sort(key=lambda r: (r & ~1 & -(r & ~1)).bit_length())
    projs = []
    for rng, (ker, image) in raw.items():
        am = mask_of(i for i, a in enumerate(minimal) if a & ~rng == 0)
        projs.append(Projection(t, rng, ker, image, am))
    projs.sort(key=_canonical_key)
    by_atoms = {}
    for p in projs:
        by_atoms.setdefault(p.atoms, p)
    k = len(minimal)
    boolean = len(projs) == 1 << k and len(by_atoms) == len(projs)
    if boolean:
        # meets must be range intersections
        for p in projs:
            for q in projs:
                if p.range_mask & q.range_mask != by_atoms[p.atoms & q.atoms].range_mask:
                    boolean = False
                    break
            if not boolean:
                break
    if strict and not boolean:
        raise DecompositionError("projections do not form a Boolean algebra")
    atoms = tuple(by_atoms[1 << i] for i in range(k) if (1 << i) in by_atoms)
    return ProjectionAlgebra(t, atoms, tuple(projs), boolean, by_atoms)


class LatticeOps(NamedTuple):
    meet: Projection
    join: Projection
    complement: Projection
    leq: bool


def proj_lattice_ops(p: Projection, q: Projection) -> LatticeOps:
    """Meet by composition, complement, join by De Morgan, order by ranges."""
    if p.host is not q.host:
        raise PreconditionError("projections live on different hosts")
    alg = projection_algebra(p.host)
    composed = tuple(p.image[q.image[x]] for x in range(p.host.n))
    meet = alg.meet(p, q)
    if meet.image != composed:
        raise DecompositionError("composition disagrees with the atom meet")
    comp_p = alg.complement(p)
    join = alg.complement(alg.meet(comp_p, alg.complement(q)))
    return LatticeOps(meet, join, comp_p, alg.leq(p, q))


def _algebra(t: MonoidTable, algebra: ProjectionAlgebra | None) -> ProjectionAlgebra:
    return algebra if algebra is not None else projection_algebra(t)


def _maximum(alg: ProjectionAlgebra, cands: list[Projection], what: str) -> Projection:
    if not cands:
        raise NoExtremumError(f"no projection satisfies {what}", "empty")
    if alg.is_boolean:
        top = alg.join_all(cands)
        if top in cands:
            return top
        raise NoExtremumError(f"no largest projection with {what}", "no-maximum", top)
    tops = [p for p in cands if all(alg.leq(q, p) for q in cands)]
    if len(tops) != 1:
        raise NoExtremumError(f"no largest projection with {what}", "no-maximum")
    return tops[0]


def bool_value_leq(t: MonoidTable, a: int, b: int,
                   algebra: ProjectionAlgebra | None = None) -> Projection:
    """Largest projection ``p`` with ``p(a) <= p(b)``."""
    alg = _algebra(t, algebra)
    cands = [p for p in alg.all if t.leq(p.image[a], p.image[b])]
    return _maximum(alg, cands, f"p({t.labels[a]}) <= p({t.labels[b]})")


def central_cover(t: MonoidTable, a: int, algebra: ProjectionAlgebra | None = None) -> Projection:
    """Complement of the Boolean value of ``a <= 0``; the least projection fixing ``a``."""
    alg = _algebra(t, algebra)
    hit = alg._cc.get(a)
    if hit is None:
        hit = alg.complement(bool_value_leq(t, a, 0, alg)) if alg.is_boolean else _least_fixing(alg, a)
        alg._cc[a] = hit
    return hit


def _least_fixing(alg: ProjectionAlgebra, a: int) -> Projection:
    fixing = [p for p in alg.all if p.fixes(a)]
    bots = [p for p in fixing if all(alg.leq(p, q) for q in fixing)]
    if len(bots) != 1:
        raise NoExtremumError("no least projection fixing the element", "no-minimum")
    return bots[0]


def comparability_witness(t: MonoidTable, x: int, y: int,
                          algebra: ProjectionAlgebra | None = None) -> Projection | None:
    """First ``p`` (canonical order) with ``p(x) <= p(y)`` and ``p'(x) >= p'(y)``."""
    alg = _algebra(t, algebra)
    for p in alg.all:
        if not t.leq(p.image[x], p.image[y]):
            continue
        if alg.is_boolean:
            q = alg.complement(p)
            if t.leq(q.image[y], q.image[x]):
                return p
        else:
            for q in alg.all:
                if q.range_mask == p.kernel_mask and t.leq(q.image[y], q.image[x]):
                    return p
    return None


def _extremum(t: MonoidTable, cands: int, least: bool, what: str) -> int:
    if not cands:
        raise NoExtremumError(f"{what}: no candidates", "empty")
    rel = t.up if least else t.down
    hits = [c for c in iter_bits(cands) if cands & ~rel[c] == 0]
    if not hits:
        raise NoExtremumError(f"{what}: no {'least' if least else 'largest'} element",
                              "no-minimum" if least else "no-maximum")
    if len(hits) > 1:
        raise NoExtremumError(f"{what}: extremum not unique", "not-unique", tuple(hits))
    return hits[0]


def least_difference(t: MonoidTable, a: int, b: int) -> int:
    """Least ``x`` with ``b <= a + x``."""
    if not t.leq(a, b):
        raise PreconditionError("least difference needs a <= b")
    row = t.rows[a]
    cands = mask_of(x for x in range(t.n) if row[x] != UNDEF and t.leq(b, row[x]))
    return _extremum(t, cands, True, "least difference")


def largest_difference(t: MonoidTable, a: int, b: int) -> int:
    """Largest ``c`` with ``a + c <= b``."""
    if not t.leq(a, b):
        raise PreconditionError("largest difference needs a <= b")
    row = t.rows[a]
    cands = mask_of(c for c in range(t.n) if row[c] != UNDEF and t.leq(row[c], b))
    return _extremum(t, cands, False, "largest difference")


def is_removable(t: MonoidTable, a: int, b: int) -> bool:
    """``a <= b`` and ``b <= a + x`` forces ``b <= x``."""
    if not t.leq(a, b):
        return False
    row = t.rows[a]
    return all(
        t.leq(b, x) for x in range(t.n) if row[x] != UNDEF and t.leq(b, row[x])
    )


def removable_by_projections(t: MonoidTable, a: int, b: int,
                             algebra: ProjectionAlgebra | None = None) -> bool:
    """Projection criterion for infinite ``a <= b``: no nonzero q <= cc(b) has q(b) <= q(a)."""
    alg = _algebra(t, algebra)
    if not t.leq(a, b):
        return False
    cover = central_cover(t, b, alg)
    return all(
        not t.leq(q.image[b], q.image[a]) for q in alg.below(cover) if q.atoms
    )
