"""The named instance corpus used by the acceptance run and the CLI."""

from __future__ import annotations

import os
from typing import Callable

from dimscale.espalier import (
    EspalierTable,
    combine,
    drng,
    gen_equipotency,
    gen_group_action,
    gen_subspace_lattice,
    named_generators,
)
from dimscale.monoid import MonoidTable
from dimscale.targets import chain, lower_subset_scale, product_scale, two_gamma
from dimscale.textio import emit


def _coords(t: MonoidTable, x: int) -> list[str]:
    return t.labels[x].strip("()").split(",")


def _finite_total(t: MonoidTable, x: int) -> int:
    return sum(int(c) for c in _coords(t, x) if not c.startswith("a"))


def _scales() -> list[tuple[str, Callable[[], MonoidTable]]]:
    c, g = chain, two_gamma
    P = lambda *ts: product_scale(list(ts))
    out: list[tuple[str, Callable[[], MonoidTable]]] = []
    out += [(f"chain-{n}", lambda n=n: c(n)) for n in range(7)]
    out += [(f"two-gamma-{k}", lambda k=k: g(k)) for k in range(4)]
    out += [
        ("prod-c1-c1", lambda: P(c(1), c(1))),
        ("prod-c1-c2", lambda: P(c(1), c(2))),
        ("prod-c2-c2", lambda: P(c(2), c(2))),
        ("prod-c3-c3", lambda: P(c(3), c(3))),
        ("prod-c1-c1-c1", lambda: P(c(1), c(1), c(1))),
        ("prod-c1-c1-c1-c1", lambda: P(c(1), c(1), c(1), c(1))),
        ("prod-c1-g0", lambda: P(c(1), g(0))),
        ("prod-c1-g1", lambda: P(c(1), g(1))),
        ("prod-c2-g1", lambda: P(c(2), g(1))),
        ("prod-c3-g2", lambda: P(c(3), g(2))),
        ("prod-c5-g3", lambda: P(c(5), g(3))),
        ("prod-g0-g0", lambda: P(g(0), g(0))),
        ("prod-g1-g1", lambda: P(g(1), g(1))),
        ("prod-c1-c1-g0", lambda: P(c(1), c(1), g(0))),
        ("prod-c1-c2-g2", lambda: P(c(1), c(2), g(2))),
        ("prod-c2-c2-g1", lambda: P(c(2), c(2), g(1))),
        ("prod-c1-g0-g1", lambda: P(c(1), g(0), g(1))),
    ]
    tri = lambda t, k: lower_subset_scale(t, lambda x: _finite_total(t, x) <= k)
    out += [
        ("lower-triangle-c2-c2", lambda: tri(P(c(2), c(2)), 2)),
        ("lower-triangle-c3-c3", lambda: tri(P(c(3), c(3)), 3)),
        ("lower-triangle-c1-c1-c1", lambda: tri(P(c(1), c(1), c(1)), 2)),
        ("lower-ceiling-c2-g2", lambda: (lambda t: lower_subset_scale(t, t.index("(1,a1)")))(P(c(2), g(2)))),
        ("lower-triangle-c2-c2-g1", lambda: tri(P(c(2), c(2), g(1)), 3)),
        ("lower-notop-c1-c1-g1", lambda: (lambda t: lower_subset_scale(
            t, lambda x: t.labels[x] != "(1,1,a1)"))(P(c(1), c(1), g(1)))),
        ("lower-staircase-c3-g1", lambda: (lambda t: lower_subset_scale(
            t, lambda x: _finite_total(t, x) <= 1 or _coords(t, x)[1] != "a1"))(P(c(3), g(1)))),
    ]
    return out


def _espaliers() -> list[tuple[str, Callable[[], EspalierTable]]]:
    ga = lambda n, grp, k: gen_group_action(n, named_generators(n, grp), k)
    out: list[tuple[str, Callable[[], EspalierTable]]] = []
    out += [(f"equipotency-{n}", lambda n=n: gen_equipotency(n)) for n in range(1, 6)]
    out += [
        ("group-cyclic-2-1", lambda: ga(2, "cyclic", 1)),
        ("group-cyclic-3-1", lambda: ga(3, "cyclic", 1)),
        ("group-cyclic-4-1", lambda: ga(4, "cyclic", 1)),
        ("group-trivial-2-1", lambda: ga(2, "trivial", 1)),
        ("group-trivial-2-2", lambda: ga(2, "trivial", 2)),
        ("group-full-2-2", lambda: ga(2, "full", 2)),
        ("group-trivial-3-2", lambda: ga(3, "trivial", 2)),
        ("group-cyclic-2-3", lambda: ga(2, "cyclic", 3)),
    ]
    out += [(f"subspace-{q}-{n}", lambda q=q, n=n: gen_subspace_lattice(q, n))
            for q, n in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2))]
    out += [
        ("product-eq1-eq2", lambda: combine([gen_equipotency(1), gen_equipotency(2)])),
        ("product-eq2-sub22", lambda: combine([gen_equipotency(2), gen_subspace_lattice(2, 2)])),
        ("product-sub22-sub21", lambda: combine([gen_subspace_lattice(2, 2), gen_subspace_lattice(2, 1)])),
        ("product-eq1-eq1-eq1", lambda: combine([gen_equipotency(1)] * 3)),
    ]

    def below(L: EspalierTable, label: str) -> EspalierTable:
        return combine([L], "lower_sub", ceiling=L.index(label))

    out += [
        ("lower-sub23-plane", lambda: below(gen_subspace_lattice(2, 3), "<010;100>")),
        ("lower-eq3-pair", lambda: below(gen_equipotency(3), "{1,2}")),
        ("lower-trivial22-block", lambda: below(ga(2, "trivial", 2), "{1a,2a,1b}")),
        ("lower-prod-eq2-sub22", lambda: (lambda L: combine(
            [L], "lower_sub", subset=[x for x in range(L.n)
                                      if L.labels[x].endswith(",0)") or L.labels[x].startswith("({},")]))(
            combine([gen_equipotency(2), gen_subspace_lattice(2, 2)]))),
    ]
    return out


def scale_corpus() -> list[tuple[str, MonoidTable]]:
    return [(name, build()) for name, build in _scales()]


def espalier_corpus() -> list[tuple[str, EspalierTable]]:
    return [(name, build()) for name, build in _espaliers()]


def all_scales() -> list[tuple[str, MonoidTable]]:
    """Target scales plus the dimension range of every corpus espalier."""
    return scale_corpus() + [(f"drng-{name}", drng(L).scale) for name, L in espalier_corpus()]


def write_corpus(directory: str) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    written = []
    for name, obj in scale_corpus():
        written.append(_write(directory, f"{name}.pcm", emit(obj)))
    for name, obj in espalier_corpus():
        written.append(_write(directory, f"{name}.esp", emit(obj)))
    return written


def _write(directory: str, name: str, text: str) -> str:
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path
