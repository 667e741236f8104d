"""Functional representation of a finite scale.

Points of the representation space are the atoms of the projection
algebra (on a finite algebra every ultrafilter is principal).  The
canonical embedding sends ``x = v + u`` (finite part ``v``, infinite part
``u``) to ``delta(v) + mu(u)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from dimscale.errors import DecompositionError, PreconditionError, SizeGuardError
from dimscale.monoid import MonoidTable, find_isomorphism, iter_bits, multiple
from dimscale.projections import Projection, ProjectionAlgebra, bool_value_leq, projection_algebra
from dimscale.scale import (
    DEFAULT_GAMMA_CAP,
    class_masks,
    finitary_unit,
    scal,
    split_finite_infinite,
    type_decomposition,
)
from dimscale.targets import MAX_ELEMENTS, make_function_scale
from dimscale.values import ZERO, Value, ValueMonoid


@dataclass(frozen=True)
class OmegaAtom:
    index: int
    projection: Projection
    type: str


@dataclass(frozen=True)
class RepFunction:
    """Values at the atoms, in canonical atom order, with a type tag per atom."""

    values: tuple[Value, ...]
    types: tuple[str, ...]

    def __add__(self, other: "RepFunction") -> "RepFunction":
        return RepFunction(tuple(v + w for v, w in zip(self.values, other.values)), self.types)

    def __le__(self, other: "RepFunction") -> bool:
        return all(v <= w for v, w in zip(self.values, other.values))

    def meet(self, other: "RepFunction") -> "RepFunction":
        return RepFunction(tuple(v.meet(w) for v, w in zip(self.values, other.values)), self.types)

    def restrict(self, atom_mask: int) -> "RepFunction":
        """Keep the values on the atoms in ``atom_mask``; zero elsewhere."""
        return RepFunction(
            tuple(v if atom_mask >> i & 1 else ZERO for i, v in enumerate(self.values)), self.types)

    def replace(self, i: int, v: Value) -> "RepFunction":
        vals = list(self.values)
        vals[i] = v
        return RepFunction(tuple(vals), self.types)

    def lines(self) -> list[str]:
        return [f"atom:{i} type:{tag} value:{v}" for i, (tag, v) in enumerate(zip(self.types, self.values))]

    def short(self) -> str:
        return "(" + ",".join(v.short() for v in self.values) + ")"


def omega_atoms(t: MonoidTable, algebra: ProjectionAlgebra | None = None) -> tuple[OmegaAtom, ...]:
    alg = algebra if algebra is not None else projection_algebra(t)
    td = type_decomposition(t, alg)
    out = []
    for i, q in enumerate(alg.atoms):
        tag = next(name for name, p in (("I", td.p_I), ("II", td.p_II), ("III", td.p_III))
                   if alg.leq(q, p))
        out.append(OmegaAtom(i, q, tag))
    return tuple(out)


def characteristic(t: MonoidTable, p: Projection) -> RepFunction:
    atoms = omega_atoms(t)
    return RepFunction(tuple(Value.fin(p.atoms >> a.index & 1) for a in atoms),
                       tuple(a.type for a in atoms))


def _types(atoms: Sequence[OmegaAtom]) -> tuple[str, ...]:
    return tuple(a.type for a in atoms)


# -- mu ----------------------------------------------------------------------

def _layers(t: MonoidTable, q: Projection, alg: ProjectionAlgebra, gamma_cap: int) -> list[int]:
    """Defined layers ``<q, aleph_i>`` for ``i = 0, 1, ...`` up to the cap."""
    out = []
    for i in range(gamma_cap + 1):
        v = scal(t, q, Value.aleph(i), alg)
        if v is None:
            return out
        out.append(v)
    if scal(t, q, Value.aleph(gamma_cap + 1), alg) is not None:
        raise SizeGuardError(f"layers continue past aleph_{gamma_cap}; raise the gamma cap")
    return out


def mu(t: MonoidTable, x: int, gamma_cap: int = DEFAULT_GAMMA_CAP,
       algebra: ProjectionAlgebra | None = None) -> RepFunction:
    """At each atom: the largest aleph whose layer over that atom lies below ``x``."""
    alg = algebra if algebra is not None else projection_algebra(t)
    atoms = omega_atoms(t, alg)
    vals = []
    for a in atoms:
        best = ZERO
        for i, layer in enumerate(_layers(t, a.projection, alg, gamma_cap)):
            if t.leq(layer, x):
                best = Value.aleph(i)
        vals.append(best)
    return RepFunction(tuple(vals), _types(atoms))


def mu_literal(t: MonoidTable, x: int, gamma_cap: int = DEFAULT_GAMMA_CAP,
               algebra: ProjectionAlgebra | None = None) -> RepFunction:
    """Same value, quantifying over every projection in the principal ultrafilter."""
    alg = algebra if algebra is not None else projection_algebra(t)
    atoms = omega_atoms(t, alg)
    vals = []
    for a in atoms:
        best = ZERO
        for p in alg.all:
            if not p.atoms >> a.index & 1:
                continue
            for i in range(gamma_cap + 1):
                layer = scal(t, p, Value.aleph(i), alg)
                if layer is None:
                    break
                if t.leq(layer, x) and best < Value.aleph(i):
                    best = Value.aleph(i)
        vals.append(best)
    return RepFunction(tuple(vals), _types(atoms))


# -- delta -------------------------------------------------------------------

def _in_bool_value(t: MonoidTable, m: int, a: int, n: int, b: int, q: Projection,
                   alg: ProjectionAlgebra) -> bool:
    """Is atom ``q`` below the Boolean value of ``m a <= n b``?

    When a multiple overflows the carrier, only the atoms where the
    projected multiple overflows are affected: they get the value 0.
    """
    ma, nb = multiple(t, m, a), multiple(t, n, b)
    if ma is not None and nb is not None:
        return alg.leq(q, bool_value_leq(t, ma, nb, alg))
    qa, qb = multiple(t, m, q.image[a]), multiple(t, n, q.image[b])
    return qa is not None and qb is not None and t.leq(qa, qb)


def _check_unit(t: MonoidTable, E: Sequence[int]) -> None:
    fin = class_masks(t).finite
    for e in E:
        if e == 0 or not fin >> e & 1:
            raise PreconditionError(f"{t.labels[e]!r} cannot belong to a finitary unit")


def delta_fn(t: MonoidTable, E: Sequence[int], x: int,
             algebra: ProjectionAlgebra | None = None) -> RepFunction:
    """Supremum of ``m/n`` with every ``m e <= n x`` at the atom; zero on Type III atoms.

    ``m`` and ``n`` range up to the carrier size: for a nonzero directly
    finite element, ``n x`` is undefined once ``n`` reaches it.
    """
    alg = algebra if algebra is not None else projection_algebra(t)
    if not class_masks(t).finite >> x & 1:
        raise PreconditionError(f"{t.labels[x]!r} is not directly finite")
    _check_unit(t, E)
    atoms = omega_atoms(t, alg)
    N = t.n
    vals = []
    for a in atoms:
        best = Fraction(0)
        if a.type != "III":
            for n in range(1, N + 1):
                for m in range(1, N + 1):
                    if Fraction(m, n) <= best:
                        continue
                    if all(_in_bool_value(t, m, e, n, x, a.projection, alg) for e in E):
                        best = Fraction(m, n)
        vals.append(Value.fin(best))
    return RepFunction(tuple(vals), _types(atoms))


def delta_integer(t: MonoidTable, E: Sequence[int], x: int,
                  algebra: ProjectionAlgebra | None = None) -> RepFunction:
    """Integer form: largest ``n`` with every ``n e <= x`` at the atom (Type I atoms only)."""
    alg = algebra if algebra is not None else projection_algebra(t)
    _check_unit(t, E)
    atoms = omega_atoms(t, alg)
    vals = []
    for a in atoms:
        best = 0
        if a.type == "I":
            for n in range(1, t.n + 1):
                if all(_in_bool_value(t, n, e, 1, x, a.projection, alg) for e in E):
                    best = n
        vals.append(Value.fin(best))
    return RepFunction(tuple(vals), _types(atoms))


def denominator_cutoff(t: MonoidTable, E: Sequence[int], x: int,
                       algebra: ProjectionAlgebra | None = None) -> bool:
    """Certificate that larger numerators and denominators cannot matter.

    At every atom the carrier-size multiples of the projections of ``x``
    and of each unit element are undefined (or the projection is zero).
    """
    alg = algebra if algebra is not None else projection_algebra(t)
    N = t.n
    for q in alg.atoms:
        for y in (x, *E):
            qy = q.image[y]
            if qy != 0 and multiple(t, N, qy) is not None:
                return False
    return True


# -- epsilon -----------------------------------------------------------------

def epsilon(t: MonoidTable, E: Sequence[int], x: int, gamma_cap: int = DEFAULT_GAMMA_CAP,
            algebra: ProjectionAlgebra | None = None) -> RepFunction:
    alg = algebra if algebra is not None else projection_algebra(t)
    v, u = split_finite_infinite(t, x)
    return delta_fn(t, E, v, alg) + mu(t, u, gamma_cap, alg)


def epsilon_table(t: MonoidTable, E: Sequence[int] | None = None,
                  gamma_cap: int = DEFAULT_GAMMA_CAP) -> tuple[RepFunction, ...]:
    alg = projection_algebra(t)
    E = finitary_unit(t) if E is None else tuple(E)
    return tuple(epsilon(t, E, x, gamma_cap, alg) for x in range(t.n))


# -- clause checks -------------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    ok: bool
    witness: str = ""


def _values_below(v: Value, tag: str) -> list[Value] | None:
    """Values strictly below ``v`` in the atom's monoid; None if infinitely many."""
    if v.is_finite:
        if v.amount.denominator != 1:
            return None
        return [Value.fin(k) for k in range(int(v.amount))]
    if tag != "III":
        return None
    return [ZERO] + [Value.aleph(i) for i in range(v.index.finite)] if v.index.omega_part == 0 else None


def _type_ok(v: Value, tag: str) -> bool:
    if tag == "III":
        return not v.is_finite or v.amount == 0
    if tag == "I":
        return not v.is_finite or v.amount.denominator == 1
    return True


def check_projection_commuting(t: MonoidTable, table: Sequence[RepFunction],
                               alg: ProjectionAlgebra) -> Clause:
    for p in alg.all:
        for x in range(t.n):
            if table[p.image[x]] != table[x].restrict(p.atoms):
                return Clause(False, f"projection {bin(p.atoms)} at {t.labels[x]}")
    return Clause(True)


def check_additivity(t: MonoidTable, table: Sequence[RepFunction]) -> Clause:
    for x in range(t.n):
        for y in range(x, t.n):
            z = t.add(x, y)
            if z is not None and table[z] != table[x] + table[y]:
                return Clause(False, f"{t.labels[x]} + {t.labels[y]}")
    return Clause(True)


def check_lower_image(t: MonoidTable, table: Sequence[RepFunction]) -> Clause:
    """Type-consistent values, injective, order-reflecting, downward closed image."""
    for x, f in enumerate(table):
        for tag, v in zip(f.types, f.values):
            if not _type_ok(v, tag):
                return Clause(False, f"value {v} at a Type {tag} atom for {t.labels[x]}")
    pos = {f: x for x, f in enumerate(table)}
    if len(pos) != t.n:
        return Clause(False, "not injective")
    for x in range(t.n):
        for y in range(t.n):
            if (table[x] <= table[y]) != t.leq(x, y):
                return Clause(False, f"order not matched at {t.labels[x]}, {t.labels[y]}")
    for x, f in enumerate(table):
        for i, (tag, v) in enumerate(zip(f.types, f.values)):
            lower = _values_below(v, tag)
            if lower is None:
                return Clause(False, f"infinitely many values below {t.labels[x]} at atom {i}")
            for w in lower:
                if f.replace(i, w) not in pos:
                    return Clause(False, f"image not lower below {t.labels[x]} at atom {i}")
    return Clause(True)


def check_unit_normalized(t: MonoidTable, table: Sequence[RepFunction], E: Iterable[int]) -> Clause:
    for e in E:
        if any(v not in (ZERO, Value.fin(1)) for v in table[e].values):
            return Clause(False, f"{t.labels[e]} is not 0/1-valued")
    return Clause(True)


def embedding_clauses(t: MonoidTable, table: Sequence[RepFunction], E: Sequence[int],
                      alg: ProjectionAlgebra | None = None) -> dict[str, Clause]:
    alg = alg if alg is not None else projection_algebra(t)
    return {
        "projection-commuting": check_projection_commuting(t, table, alg),
        "additivity": check_additivity(t, table),
        "lower-image": check_lower_image(t, table),
        "E-normalization": check_unit_normalized(t, table, E),
    }


@dataclass(frozen=True)
class EmbeddingReport:
    unit: tuple[int, ...]
    clauses: dict[str, Clause]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.clauses.values())


def verify_embedding(t: MonoidTable, E: Sequence[int] | None = None,
                     gamma_cap: int = DEFAULT_GAMMA_CAP) -> EmbeddingReport:
    alg = projection_algebra(t)
    E = finitary_unit(t) if E is None else tuple(E)
    table = epsilon_table(t, E, gamma_cap)
    clauses = embedding_clauses(t, table, E, alg)

    pi = [x for x in iter_bits(class_masks(t).infinite)]
    mus = {x: mu(t, x, gamma_cap, alg) for x in range(t.n)}
    bad = next((f"{t.labels[x]}" for x in range(t.n) if mus[x] != mu_literal(t, x, gamma_cap, alg)), None)
    clauses["mu-ultrafilter-form"] = Clause(bad is None, bad or "")
    bad = next((f"{t.labels[x]} + {t.labels[y]}" for x in pi for y in pi
                if t.add(x, y) is not None and mus[t.add(x, y)] != mus[x] + mus[y]), None)
    clauses["mu-additive-infinite"] = Clause(bad is None, bad or "")
    bad = next((f"{t.labels[x]}, {t.labels[y]}" for x in pi for y in pi
                if (mus[x] <= mus[y]) != t.leq(x, y)), None)
    clauses["mu-order-infinite"] = Clause(bad is None, bad or "")
    bad = next((f"{bin(p.atoms)} at {t.labels[x]}" for p in alg.all for x in range(t.n)
                if mus[p.image[x]] != mus[x].restrict(p.atoms)), None)
    clauses["mu-projection-commuting"] = Clause(bad is None, bad or "")

    fin = class_masks(t).finite
    bad = None
    for x in iter_bits(fin):
        d = delta_fn(t, E, x, alg)
        if any(not v.is_finite for v in d.values):
            bad = f"delta({t.labels[x]}) has an aleph value"
        elif d != delta_integer(t, E, x, alg):
            bad = f"delta({t.labels[x]}) disagrees with the integer form"
        elif not denominator_cutoff(t, E, x, alg):
            bad = f"no denominator cutoff for {t.labels[x]}"
        if bad:
            break
    clauses["delta-finite-integer"] = Clause(bad is None, bad or "")
    return EmbeddingReport(tuple(E), clauses)


# -- roundtrip ----------------------------------------------------------------

_KIND = {"I": "Z", "II": "Q", "III": "Two"}


def codomain_monoids(table: Sequence[RepFunction]) -> list[ValueMonoid]:
    """Per-atom value monoid just large enough to hold the image."""
    if not table:
        return []
    out = []
    for i, tag in enumerate(table[0].types):
        vals = [f.values[i] for f in table]
        if tag == "III":
            top = max((v.index.finite for v in vals if not v.is_finite), default=0)
            out.append(ValueMonoid("Two", gamma=top))
        elif tag == "I":
            if any(not v.is_finite for v in vals):
                raise DecompositionError(f"aleph value at Type I atom {i}")
            out.append(ValueMonoid("Z", bound=max(v.amount for v in vals)))
        else:
            raise PreconditionError("Type II atoms have no enumerable codomain")
    return out


@dataclass(frozen=True)
class RoundtripReport:
    ok: bool
    detail: str
    codomain_size: int = 0


def roundtrip(t: MonoidTable, E: Sequence[int] | None = None,
              gamma_cap: int = DEFAULT_GAMMA_CAP) -> RoundtripReport:
    """Rebuild ``t`` as the lower subset of its codomain spanned by the image of epsilon."""
    from dimscale.monoid import lower_submonoid

    table = epsilon_table(t, E, gamma_cap)
    types = table[0].types
    try:
        monoids = codomain_monoids(table)
    except (DecompositionError, PreconditionError) as exc:
        return RoundtripReport(False, str(exc))
    fs = make_function_scale(types, monoids)
    size = 1
    for m in monoids:
        size *= len(m.elements())
    if size > MAX_ELEMENTS:
        return RoundtripReport(False, f"codomain of size {size} exceeds {MAX_ELEMENTS}", size)
    cod = fs.table
    pos = {f: i for i, f in enumerate(fs.elements)}
    image = [pos.get(f.values) for f in table]
    if None in image:
        return RoundtripReport(False, "image escapes the codomain", size)
    try:
        sub, emb = lower_submonoid(cod, image, max_size=MAX_ELEMENTS)
    except PreconditionError as exc:
        return RoundtripReport(False, f"image is not a lower subset: {exc}", size)
    # epsilon itself must be the isomorphism onto the image
    where = {c: k for k, c in enumerate(emb)}
    f = tuple(where[c] for c in image)
    for x in range(t.n):
        for y in range(t.n):
            s = t.add(x, y)
            u = sub.add(f[x], f[y])
            if (s is None) != (u is None) or (s is not None and f[s] != u):
                return RoundtripReport(False, f"epsilon does not preserve {t.labels[x]} + {t.labels[y]}", size)
    if find_isomorphism(t, sub) is None:
        return RoundtripReport(False, "no isomorphism found", size)
    return RoundtripReport(True, "isomorphic", size)


# -- perturbation surrogate for uniqueness --------------------------------------

def perturbation_values(table: Sequence[RepFunction], i: int) -> list[Value]:
    """Alternative values at atom ``i``: the codomain range widened by one step, plus an off-type value."""
    tag = table[0].types[i]
    vals = [f.values[i] for f in table]
    if tag == "III":
        top = max((v.index.finite for v in vals if not v.is_finite), default=-1)
        return [ZERO, Value.fin(1)] + [Value.aleph(k) for k in range(top + 2)]
    top = max((int(v.amount) for v in vals if v.is_finite), default=0)
    return [Value.fin(k) for k in range(top + 2)] + [Value.aleph(0)]


@dataclass(frozen=True)
class PerturbationReport:
    tried: int
    survivors: tuple[tuple[int, int, Value], ...]

    @property
    def ok(self) -> bool:
        return not self.survivors


def perturbation_check(t: MonoidTable, E: Sequence[int] | None = None,
                       gamma_cap: int = DEFAULT_GAMMA_CAP) -> PerturbationReport:
    """Change one value of one element and confirm some clause breaks."""
    alg = projection_algebra(t)
    E = finitary_unit(t) if E is None else tuple(E)
    table = list(epsilon_table(t, E, gamma_cap))
    tried = 0
    survivors = []
    for i in range(len(alg.atoms)):
        alternatives = perturbation_values(table, i)
        for x in range(t.n):
            original = table[x]
            for v in alternatives:
                if v == original.values[i]:
                    continue
                table[x] = original.replace(i, v)
                tried += 1
                if all(c.ok for c in embedding_clauses(t, table, E, alg).values()):
                    survivors.append((x, i, v))
            table[x] = original
    return PerturbationReport(tried, tuple(survivors))
