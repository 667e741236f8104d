"""Element classes, the layer recursion and the scale axiom checker."""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from functools import lru_cache

from dimscale import kernels
from dimscale.errors import DecompositionError, NoExtremumError, PreconditionError
from dimscale.monoid import UNDEF, MonoidTable, check_refinement, guard, iter_bits, mask_of
from dimscale.projections import (
    Projection,
    ProjectionAlgebra,
    _extremum,
    bool_value_leq,
    central_cover,
    comparability_witness,
    is_removable,
    perp_mask,
    projection_algebra,
)
from dimscale.values import ZERO, Ordinal, Value

DEFAULT_GAMMA_CAP = 4


@dataclass(frozen=True)
class ElementClass:
    directly_finite: bool
    purely_infinite: bool
    multiple_free: bool
    cancellable: bool


@dataclass(frozen=True)
class ClassMasks:
    """Bitmasks of directly finite, purely infinite, multiple-free, cancellable elements."""

    finite: int
    infinite: int
    multiple_free: int
    cancellable: int


@lru_cache(maxsize=128)
def class_masks(t: MonoidTable) -> ClassMasks:
    n = t.n
    fin = inf = mf = canc = 0
    for a in range(n):
        row = t.rows[a]
        if all(row[x] != a for x in range(1, n)):
            fin |= 1 << a
        if row[a] == a:
            inf |= 1 << a
        doubles_below = [x for x in range(1, n) if t.rows[x][x] != UNDEF and t.leq(t.rows[x][x], a)]
        if not doubles_below:
            mf |= 1 << a
        seen = {}
        ok = True
        for x in range(n):
            s = t.rows[x][a]
            if s != UNDEF:
                if s in seen:
                    ok = False
                    break
                seen[s] = x
        if ok:
            canc |= 1 << a
    return ClassMasks(fin, inf, mf, canc)


def classify_element(t: MonoidTable, a: int) -> ElementClass:
    m = class_masks(t)
    bit = 1 << a
    return ElementClass(bool(m.finite & bit), bool(m.infinite & bit),
                        bool(m.multiple_free & bit), bool(m.cancellable & bit))


def infinite_part(t: MonoidTable, a: int) -> int:
    """Largest purely infinite element below ``a``."""
    return _extremum(t, class_masks(t).infinite & t.down[a], False, "infinite part")


def split_finite_infinite(t: MonoidTable, a: int) -> tuple[int, int]:
    """``(v, u)`` with ``u`` the infinite part, ``v`` directly finite, ``a = v + u``, ``v`` orthogonal to ``u``."""
    u = infinite_part(t, a)
    cands = t.sum_masks[u][a] & t.orth_rows[u]
    found = list(iter_bits(cands))
    if len(found) != 1:
        raise DecompositionError(f"no unique finite part for {t.labels[a]!r}", witness=a)
    v = found[0]
    if not class_masks(t).finite >> v & 1:
        raise DecompositionError(f"finite part of {t.labels[a]!r} is not directly finite", witness=a)
    return v, u


# -- the layer recursion ----------------------------------------------------

def _predecessor(kappa: Value) -> Value:
    idx = kappa.index
    return ZERO if idx == Ordinal(0, 0) else Value.aleph(idx.pred())


@dataclass(frozen=True, eq=False)
class _ScalContext:
    t: MonoidTable
    alg: ProjectionAlgebra
    memo: dict = field(default_factory=dict)


_CONTEXTS: "weakref.WeakKeyDictionary[ProjectionAlgebra, _ScalContext]" = weakref.WeakKeyDictionary()


def _context(t: MonoidTable, alg: ProjectionAlgebra) -> _ScalContext:
    ctx = _CONTEXTS.get(alg)
    if ctx is None:
        ctx = _CONTEXTS[alg] = _ScalContext(t, alg)
    return ctx


def scal(t: MonoidTable, p: Projection, kappa: Value,
         algebra: ProjectionAlgebra | None = None) -> int | None:
    """The layer element indexed by ``(p, kappa)``, or ``None`` when undefined.

    Base: value 0.  Successor: least purely infinite ``x`` with the previous
    layer removable in ``x`` and central cover ``p``.  Limit: supremum of
    the earlier layers when they are increasing and bounded.
    """
    alg = algebra if algebra is not None else projection_algebra(t)
    ctx = _context(t, alg)
    if not (kappa == ZERO or not kappa.is_finite):
        raise PreconditionError("layer index must be 0 or an aleph")
    return _scal(ctx, p, kappa)


def _scal(ctx: _ScalContext, p: Projection, kappa: Value) -> int | None:
    if kappa == ZERO or not p.atoms:
        return 0
    key = (p.atoms, kappa)
    if key in ctx.memo:
        return ctx.memo[key]
    t, alg = ctx.t, ctx.alg
    if kappa.index.is_limit:
        result = _limit_layer(ctx, p, kappa.index)
    else:
        prev = _scal(ctx, p, _predecessor(kappa))
        if prev is None:
            result = None
        else:
            cands = mask_of(
                x for x in iter_bits(class_masks(t).infinite)
                if is_removable(t, prev, x) and central_cover(t, x, alg) == p
            )
            try:
                result = _extremum(t, cands, True, "layer successor")
            except NoExtremumError as exc:
                if exc.reason != "empty":
                    raise
                result = None
    ctx.memo[key] = result
    return result


def _limit_layer(ctx: _ScalContext, p: Projection, lam: Ordinal) -> int | None:
    t = ctx.t
    seen = []
    k = 0
    while True:
        v = _scal(ctx, p, Value.aleph(Ordinal(lam.omega_part - 1, k)))
        if v is None:
            return None
        if seen and (v == seen[-1] or not t.leq(seen[-1], v)):
            return None
        seen.append(v)
        k += 1
        if k > t.n + 1:
            return None


# -- finitary units and types ----------------------------------------------

def finitary_unit(t: MonoidTable) -> tuple[int, ...]:
    """Greedy maximal orthogonal family of U, smallest elements first; verified dense."""
    m = class_masks(t)
    u_mask = 0
    for x in iter_bits(m.finite & ~1):
        if m.multiple_free >> x & 1 or not (m.multiple_free & t.down[x] & ~1):
            u_mask |= 1 << x
    order = sorted(iter_bits(u_mask), key=lambda x: (bin(t.down[x]).count("1"), x))
    chosen: list[int] = []
    for x in order:
        if all(t.orth_rows[x] >> e & 1 for e in chosen):
            chosen.append(x)
    for x in iter_bits(m.finite & ~1):
        if not any(t.leq(e, x) for e in chosen):
            raise DecompositionError(f"finitary unit is not dense below {t.labels[x]!r}", witness=x)
    return tuple(sorted(chosen))


@dataclass(frozen=True)
class TypeDecomposition:
    S_I: frozenset[int]
    S_II: frozenset[int]
    S_III: frozenset[int]
    p_I: Projection
    p_II: Projection
    p_III: Projection


def type_decomposition(t: MonoidTable, algebra: ProjectionAlgebra | None = None) -> TypeDecomposition:
    alg = algebra if algebra is not None else projection_algebra(t)
    m = class_masks(t)
    mf_nonzero = m.multiple_free & m.finite
    s1 = perp_mask(t, perp_mask(t, mf_nonzero))
    s2 = perp_mask(t, mf_nonzero) & perp_mask(t, perp_mask(t, m.finite))
    s3 = perp_mask(t, m.finite)
    by_range = {p.range_mask: p for p in alg.all}
    try:
        p1, p2, p3 = by_range[s1], by_range[s2], by_range[s3]
    except KeyError:
        raise DecompositionError("type ideals are not projection ranges") from None
    if p1.atoms & p2.atoms or p1.atoms & p3.atoms or p2.atoms & p3.atoms:
        raise DecompositionError("type projections overlap")
    if alg.join(alg.join(p1, p2), p3) != alg.identity:
        raise DecompositionError("type projections do not cover the identity")
    as_set = lambda mask: frozenset(iter_bits(mask))
    return TypeDecomposition(as_set(s1), as_set(s2), as_set(s3), p1, p2, p3)


# -- the axiom checker -------------------------------------------------------

AXIOMS = ("M1", "M2", "M3", "M4", "M5", "M6", "N1", "N2", "N3")
M_ROUTE = ("M1", "M2", "M3", "M4", "M5", "M6")
N_ROUTE = ("M1", "M2", "M5", "M6", "N1", "N2", "N3")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: str = ""


@dataclass(frozen=True)
class AxiomReport:
    verdicts: dict[str, Verdict]

    @property
    def m_route(self) -> bool:
        return all(self.verdicts[a].ok for a in M_ROUTE)

    @property
    def n_route(self) -> bool:
        return all(self.verdicts[a].ok for a in N_ROUTE)

    @property
    def ok(self) -> bool:
        return self.m_route and self.n_route

    def failures(self) -> list[str]:
        return [a for a in AXIOMS if not self.verdicts[a].ok]


def _lab(t: MonoidTable, *xs: int) -> str:
    return ", ".join(t.labels[x] for x in xs)


def _check_m1(t: MonoidTable) -> Verdict:
    ref = check_refinement(t, max_size=t.n)
    if not ref.ok:
        return Verdict(False, f"no refinement for {_lab(t, *ref.witness)}")
    for a in range(t.n):
        for b in range(a + 1, t.n):
            if t.leq(a, b) and t.leq(b, a):
                return Verdict(False, f"antisymmetry fails for {_lab(t, a, b)}")
    return Verdict(True)


def _check_m2(t: MonoidTable) -> Verdict:
    for a in range(t.n):
        for b in range(a + 1, t.n):
            if t.meet(a, b) is None:
                return Verdict(False, f"no meet of {_lab(t, a, b)}")
    return Verdict(True)


def _check_m3(t: MonoidTable, alg: ProjectionAlgebra) -> Verdict:
    for x in range(t.n):
        for y in range(x + 1, t.n):
            if comparability_witness(t, x, y, alg) is None:
                return Verdict(False, f"no comparability projection for {_lab(t, x, y)}")
    return Verdict(True)


def _check_m4(t: MonoidTable, alg: ProjectionAlgebra) -> Verdict:
    for a in range(t.n):
        for b in range(t.n):
            try:
                bool_value_leq(t, a, b, alg)
            except NoExtremumError as exc:
                return Verdict(False, f"Boolean value [{_lab(t, a)} <= {_lab(t, b)}]: {exc.reason}")
    return Verdict(True)


def _check_m5(t: MonoidTable) -> Verdict:
    m = class_masks(t)
    for a in range(t.n):
        ok = any(
            t.sum_masks[y][a] & m.finite
            for y in iter_bits(m.infinite & t.down[a])
        )
        if not ok:
            return Verdict(False, f"{_lab(t, a)} is not finite + infinite")
    return Verdict(True)


def _check_m6(t: MonoidTable) -> Verdict:
    inf = class_masks(t).infinite
    rem = {
        (a, b): is_removable(t, a, b)
        for a in iter_bits(inf) for b in iter_bits(inf)
    }
    for a in iter_bits(inf):
        for b in iter_bits(inf):
            if not rem[(a, b)]:
                continue
            target = perp_mask(t, 1 << b)
            cands = mask_of(
                x for x in iter_bits(inf)
                if rem[(a, x)] and perp_mask(t, 1 << x) == target
            )
            try:
                _extremum(t, cands, True, "M6")
            except NoExtremumError as exc:
                return Verdict(False, f"no least element above {_lab(t, a)} for {_lab(t, b)}: {exc.reason}")
    return Verdict(True)


def _check_n1(t: MonoidTable) -> Verdict:
    w = kernels.first_n1_failure(t.flat, t.n, t.orth_bytes)
    return Verdict(True) if w is None else Verdict(False, f"no orthogonal split for {_lab(t, *w)}")


def _check_n2(t: MonoidTable) -> Verdict:
    for a in range(t.n):
        ker = perp_mask(t, 1 << a)
        rng = perp_mask(t, ker)
        for x in range(t.n):
            count = sum(
                bin(t.sum_masks[x0][x] & ker).count("1")
                for x0 in iter_bits(rng & t.down[x])
            )
            if count != 1:
                return Verdict(False, f"{_lab(t, x)} does not split along {_lab(t, a)}")
    return Verdict(True)


def _check_n3(t: MonoidTable) -> Verdict:
    w = kernels.first_n3_failure(t.flat, t.n, t.leq_bytes)
    return Verdict(True) if w is None else Verdict(False, f"no least difference for {_lab(t, *w)}")


def check_scale(t: MonoidTable, max_size: int | None = None) -> AxiomReport:
    """Evaluate all nine axioms exhaustively and report both routes."""
    guard(t, max_size)
    v: dict[str, Verdict] = {}
    v["M1"] = _check_m1(t)
    v["M2"] = _check_m2(t)
    try:
        alg = projection_algebra(t, strict=False, max_size=t.n)
    except DecompositionError as exc:
        alg = None
        why = f"projections unavailable: {exc}"
    if alg is not None:
        v["M3"] = _check_m3(t, alg)
        v["M4"] = _check_m4(t, alg)
    else:
        v["M3"] = v["M4"] = Verdict(False, why)
    v["M5"] = _check_m5(t)
    v["M6"] = _check_m6(t)
    v["N1"] = _check_n1(t)
    v["N2"] = _check_n2(t)
    v["N3"] = _check_n3(t)
    return AxiomReport(v)
