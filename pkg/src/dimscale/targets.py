"""Function scales over a finite discrete space, products and lower subsets.

A ``FunctionScale`` is the set of all functions from a finite list of
typed points to value monoids, optionally capped by a ceiling function.
Enumerable ones materialize as a ``MonoidTable``; rational ones expose
their operations lazily and are checked by sampling.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from dimscale import values as V
from dimscale.errors import PreconditionError, SizeGuardError
from dimscale.monoid import MonoidTable, lower_submonoid
from dimscale.values import ZERO, Value, ValueMonoid

MAX_ELEMENTS = 4096
TYPE_KIND = {"I": "Z", "II": "Q", "III": "Two"}

Func = tuple[Value, ...]


def label_of(f: Func) -> str:
    if len(f) == 1:
        return f[0].short()
    return "(" + ",".join(v.short() for v in f) + ")"


@dataclass(frozen=True)
class FunctionScale:
    types: tuple[str, ...]
    monoids: tuple[ValueMonoid, ...]
    ceiling: Func | None = None

    def __post_init__(self):
        if len(self.types) != len(self.monoids):
            raise PreconditionError("one monoid per point")
        for tag, m in zip(self.types, self.monoids):
            if TYPE_KIND.get(tag) != m.kind:
                raise PreconditionError(f"type {tag} needs a {TYPE_KIND.get(tag)} monoid, got {m.kind}")
        if self.ceiling is not None:
            if len(self.ceiling) != len(self.types):
                raise PreconditionError("ceiling has the wrong length")
            for m, c in zip(self.monoids, self.ceiling):
                if not m.contains(c):
                    raise PreconditionError(f"ceiling value {c} not in {m}")

    @property
    def size(self) -> int:
        return len(self.types)

    def zero(self) -> Func:
        return (ZERO,) * self.size

    def contains(self, f: Func) -> bool:
        if len(f) != self.size or not all(m.contains(v) for m, v in zip(self.monoids, f)):
            return False
        return self.ceiling is None or all(v <= c for v, c in zip(f, self.ceiling))

    def add(self, f: Func, g: Func) -> Func | None:
        s = tuple(v + w for v, w in zip(f, g))
        return s if self.contains(s) else None

    @staticmethod
    def leq(f: Func, g: Func) -> bool:
        return all(v <= w for v, w in zip(f, g))

    @staticmethod
    def meet(f: Func, g: Func) -> Func:
        return tuple(v.meet(w) for v, w in zip(f, g))

    @staticmethod
    def least_difference(f: Func, g: Func) -> Func:
        return tuple(V.least_difference(v, w) for v, w in zip(f, g))

    @staticmethod
    def largest_difference(f: Func, g: Func) -> Func:
        return tuple(V.largest_difference(v, w) for v, w in zip(f, g))

    @staticmethod
    def restrict(f: Func, points: Iterable[int]) -> Func:
        """``f`` on ``points`` and zero elsewhere."""
        keep = set(points)
        return tuple(v if i in keep else ZERO for i, v in enumerate(f))

    @property
    def enumerable(self) -> bool:
        if all(m.enumerable for m in self.monoids):
            return True
        if self.ceiling is None:
            return False
        # a ceiling makes Z points finite; Q points never are
        return all(
            m.enumerable or (m.kind == "Z" and c.is_finite)
            for m, c in zip(self.monoids, self.ceiling)
        )

    def point_values(self, i: int) -> list[Value]:
        m = self.monoids[i]
        cap = None if self.ceiling is None else self.ceiling[i]
        if m.enumerable:
            vals = m.elements()
        elif m.kind == "Z" and cap is not None and cap.is_finite:
            vals = [Value.fin(k) for k in range(int(cap.amount) + 1)]
        else:
            raise PreconditionError(f"point {i} is not enumerable")
        return [v for v in vals if cap is None or v <= cap]

    @cached_property
    def elements(self) -> tuple[Func, ...]:
        if not self.enumerable:
            raise PreconditionError("function scale is not enumerable")
        per_point = [self.point_values(i) for i in range(self.size)]
        total = 1
        for vals in per_point:
            total *= len(vals)
        if total > MAX_ELEMENTS:
            raise SizeGuardError(f"{total} elements exceed the cap {MAX_ELEMENTS}")
        return tuple(itertools.product(*per_point))

    @cached_property
    def table(self) -> MonoidTable:
        elems = self.elements
        pos = {f: i for i, f in enumerate(elems)}
        return MonoidTable.from_operation(
            [label_of(f) for f in elems],
            lambda i, j: pos.get(self.add(elems[i], elems[j])),
        )


def make_function_scale(types: Sequence[str], monoids: Sequence[ValueMonoid],
                        ceiling: Sequence[Value] | None = None) -> FunctionScale:
    return FunctionScale(tuple(types), tuple(monoids),
                         None if ceiling is None else tuple(ceiling))


def chain(n: int) -> MonoidTable:
    """The truncation ``{0, ..., n}`` of the natural numbers."""
    return make_function_scale(["I"], [ValueMonoid("Z", bound=n)]).table


def two_gamma(gamma: int) -> MonoidTable:
    """``{0, aleph_0, ..., aleph_gamma}`` with ``a + b = max(a, b)``."""
    return make_function_scale(["III"], [ValueMonoid("Two", gamma=gamma)]).table


def product_scale(tables: Sequence[MonoidTable], max_size: int = MAX_ELEMENTS) -> MonoidTable:
    """Componentwise partial addition on the cartesian product."""
    if not tables:
        raise PreconditionError("empty product")
    if len(tables) == 1:
        return tables[0]
    total = 1
    for t in tables:
        total *= t.n
    if total > max_size:
        raise SizeGuardError(f"product of size {total} exceeds {max_size}")
    tuples = list(itertools.product(*(range(t.n) for t in tables)))
    pos = {tp: i for i, tp in enumerate(tuples)}

    def op(i: int, j: int):
        out = []
        for t, a, b in zip(tables, tuples[i], tuples[j]):
            c = t.add(a, b)
            if c is None:
                return None
            out.append(c)
        return pos[tuple(out)]

    labels = ["(" + ",".join(t.labels[k] for t, k in zip(tables, tp)) + ")" for tp in tuples]
    return MonoidTable.from_operation(labels, op)


def lower_subset_scale(t: MonoidTable, bound: int | Callable[[int], bool] | Iterable[int]) -> MonoidTable:
    """Lower subset given by a ceiling element, a predicate, or an explicit set."""
    if isinstance(bound, int):
        keep = [x for x in range(t.n) if t.leq(x, bound)]
    elif callable(bound):
        keep = [x for x in range(t.n) if bound(x)]
    else:
        keep = list(bound)
    return lower_submonoid(t, keep)[0]


# -- sampled checks for rational function scales ---------------------------

def _refine_point(a0: Value, a1: Value, b0: Value, b1: Value) -> tuple[Value, Value, Value, Value]:
    s = a0 + a1
    if s.is_finite:
        c00 = a0.meet(b0)
        c01 = Value.fin(a0.amount - c00.amount)
        c10 = Value.fin(b0.amount - c00.amount)
        c11 = Value.fin(a1.amount - c10.amount)
        return c00, c01, c10, c11
    a, b = (a0, a1), (b0, b1)
    i = 0 if a0 == s else 1
    j = 0 if b0 == s else 1
    c = [[ZERO, ZERO], [ZERO, ZERO]]
    c[i][j] = s
    c[i][1 - j] = b[1 - j]
    c[1 - i][j] = a[1 - i]
    return c[0][0], c[0][1], c[1][0], c[1][1]


@dataclass
class SampleReport:
    checked: dict[str, int] = field(default_factory=lambda: {"refinement": 0, "N1": 0, "N3": 0})
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class _Sampler:
    def __init__(self, fs: FunctionScale, rng: random.Random):
        self.fs = fs
        self.rng = rng

    def value(self, i: int, cap: Value | None = None) -> Value:
        m = self.fs.monoids[i]
        ceil = self.fs.ceiling[i] if self.fs.ceiling is not None else None
        for c in (cap, ceil):
            if c is not None and (ceil is None or c < ceil):
                ceil = c
        r = self.rng
        if m.gamma is not None and r.random() < 0.25:
            top = m.gamma.finite if m.gamma.omega_part == 0 else 3
            v = Value.aleph(r.randint(0, top))
        elif m.kind == "Two":
            v = ZERO
        elif m.kind == "Z":
            v = Value.fin(r.randint(0, 6))
        else:
            v = Value.fin(Fraction(r.randint(0, 12), r.randint(1, 6)))
        if m.bound is not None and v.is_finite and v.amount > m.bound:
            v = Value.fin(m.bound if m.kind == "Q" else int(m.bound))
        if ceil is not None and not v <= ceil:
            if ceil.is_finite and r.random() < 0.5:
                v = Value.fin(ceil.amount * Fraction(r.randint(0, 4), 4))
                if m.kind == "Z":
                    v = Value.fin(int(v.amount))
            else:
                v = ceil
        return v

    def func(self, cap: Func | None = None) -> Func:
        return tuple(self.value(i, None if cap is None else cap[i]) for i in range(self.fs.size))

    def summable_pair(self) -> tuple[Func, Func]:
        while True:
            a, b = self.func(), self.func()
            if self.fs.add(a, b) is not None:
                return a, b


def sample_checks(fs: FunctionScale, samples: int = 10_000, seed: int = 0) -> SampleReport:
    """Randomized refinement, N1 and N3 checks; ``samples`` draws of each."""
    rng = random.Random(seed)
    sm = _Sampler(fs, rng)
    rep = SampleReport()
    for _ in range(samples):
        a0, a1 = sm.summable_pair()
        s = fs.add(a0, a1)
        b0 = sm.func(cap=s)
        b1 = tuple(
            V.least_difference(x, y) if not y.is_finite and x < y else
            (sm.value(i, cap=y) if not y.is_finite else Value.fin(y.amount - x.amount))
            for i, (x, y) in enumerate(zip(b0, s))
        )
        cells = [_refine_point(*q) for q in zip(a0, a1, b0, b1)]
        c00, c01, c10, c11 = (tuple(c[k] for c in cells) for k in range(4))
        ok = (fs.add(b0, b1) == s and fs.add(c00, c01) == a0 and fs.add(c10, c11) == a1
              and fs.add(c00, c10) == b0 and fs.add(c01, c11) == b1)
        rep.checked["refinement"] += 1
        if not ok:
            rep.violations.append(("refinement", (a0, a1, b0, b1)))

        a, b = sm.func(), sm.func()
        c = fs.meet(a, b)
        x, y = fs.least_difference(c, a), fs.least_difference(c, b)
        common = fs.meet(x, y)
        ok = (fs.add(c, x) == a and fs.add(c, y) == b and all(v == ZERO for v in common))
        rep.checked["N1"] += 1
        if not ok:
            rep.violations.append(("N1", (a, b)))

        lo = fs.meet(a, b)
        d = fs.least_difference(lo, a)
        probe = sm.func()
        s2 = fs.add(lo, d)
        ok = s2 is not None and fs.leq(a, s2)
        s3 = fs.add(lo, probe)
        if s3 is not None and fs.leq(a, s3) and not fs.leq(d, probe):
            ok = False
        rep.checked["N3"] += 1
        if not ok:
            rep.violations.append(("N3", (lo, a, probe)))
    return rep
