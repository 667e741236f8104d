"""Named structural checks run over the whole corpus.

Each check takes one instance and returns ``None`` or a witness string.
``SCALE_CHECKS`` run on every scale, ``ESPALIER_CHECKS`` on every espalier.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from dimscale.espalier import boxplus, combine, drng, gen_equipotency, validate_espalier
from dimscale.monoid import check_refinement, find_isomorphism, iter_bits, validate_pcm
from dimscale.projections import (
    central_cover,
    comparability_witness,
    is_removable,
    least_difference,
    perp_mask,
    projection_algebra,
)
from dimscale.represent import (
    delta_fn,
    epsilon_table,
    mu,
    omega_atoms,
    roundtrip,
    verify_embedding,
)
from dimscale.scale import check_scale, class_masks, finitary_unit, infinite_part, scal, type_decomposition
from dimscale.targets import product_scale
from dimscale.values import ZERO, Value

Witness = Optional[str]
KAPPAS = (ZERO, Value.aleph(0), Value.aleph(1), Value.aleph(2), Value.aleph(3))


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[object], Witness]
    max_size: int = 64


def _lab(t, *xs):
    return ", ".join(t.labels[x] for x in xs)


# -- scales ---------------------------------------------------------------------

def pcm_axioms_hold(t):
    rep = validate_pcm(t)
    return None if rep.ok else str(rep.violations[0])


def refinement_holds(t):
    rep = check_refinement(t)
    return None if rep.ok else str(rep.witness)


def order_is_antisymmetric(t):
    for a, b in itertools.combinations(range(t.n), 2):
        if t.leq(a, b) and t.leq(b, a):
            return _lab(t, a, b)


def binary_meets_exist(t):
    for a, b in itertools.combinations(range(t.n), 2):
        if t.meet(a, b) is None:
            return _lab(t, a, b)


def smaller_summands_stay_summable(t):
    for a in range(t.n):
        for b in range(t.n):
            if t.add(a, b) is None:
                continue
            for x in iter_bits(t.down[a]):
                for y in iter_bits(t.down[b]):
                    if t.add(x, y) is None:
                        return _lab(t, a, b, x, y)


def projections_commute_with_differences(t):
    alg = projection_algebra(t)
    for a in range(t.n):
        for b in iter_bits(t.up[a]):
            d = least_difference(t, a, b)
            for p in alg.all:
                if p.image[d] != least_difference(t, p.image[a], p.image[b]):
                    return _lab(t, a, b)


def separativity(t):
    for a, b, c in itertools.product(range(t.n), repeat=3):
        s = t.add(a, c)
        if a != b and s is not None and s == t.add(b, c) and t.leq(c, a) and t.leq(c, b):
            return _lab(t, a, b, c)


def pseudo_cancellation(t):
    absorbed = [[u for u in range(t.n) if t.add(u, c) == c] for c in range(t.n)]
    for a, b, c in itertools.product(range(t.n), repeat=3):
        s = t.add(a, c)
        if s is None or s != t.add(b, c):
            continue
        if not any(t.add(d, u) == a and t.add(d, v) == b
                   for d in range(t.n) for u in absorbed[c] for v in absorbed[c]):
            return _lab(t, a, b, c)


def directly_finite_elements_cancel(t):
    m = class_masks(t)
    bad = m.finite & ~m.cancellable
    return None if not bad else t.labels[bad.bit_length() - 1]


def polars_split_the_scale(t):
    ranges = {p.range_mask for p in projection_algebra(t).all}
    for a in range(t.n):
        perp = perp_mask(t, 1 << a)
        if perp not in ranges or perp_mask(t, perp) not in ranges:
            return t.labels[a]


def central_cover_of_meet(t):
    alg = projection_algebra(t)
    for a, b in itertools.combinations(range(t.n), 2):
        if central_cover(t, t.meet(a, b)) != alg.meet(central_cover(t, a), central_cover(t, b)):
            return _lab(t, a, b)


def projection_meets_are_pointwise(t):
    alg = projection_algebra(t)
    for p, q in itertools.combinations(alg.all, 2):
        r = alg.meet(p, q)
        for x in range(t.n):
            if r.image[x] != t.meet(p.image[x], q.image[x]):
                return f"{bin(p.atoms)} {bin(q.atoms)} at {t.labels[x]}"


def meets_split_by_comparability(t):
    alg = projection_algebra(t)
    for a in range(t.n):
        for b in range(t.n):
            p = comparability_witness(t, a, b, alg)
            if t.meet(a, b) != t.add(p.image[a], alg.complement(p).image[b]):
                return _lab(t, a, b)


def infinite_part_is_additive(t):
    for a in range(t.n):
        for b in range(t.n):
            s = t.add(a, b)
            if s is not None and infinite_part(t, s) != t.add(infinite_part(t, a), infinite_part(t, b)):
                return _lab(t, a, b)


def translation_preserves_meets(t):
    for a in range(t.n):
        for x, y in itertools.combinations(range(t.n), 2):
            ax, ay = t.add(a, x), t.add(a, y)
            if ax is not None and ay is not None and t.add(a, t.meet(x, y)) != t.meet(ax, ay):
                return _lab(t, a, x, y)


def layers_increase_removably(t):
    alg = projection_algebra(t)
    for p in alg.all:
        if not p.atoms:
            continue
        layers = [x for x in (scal(t, p, k, alg) for k in KAPPAS) if x is not None]
        for x, y in zip(layers, layers[1:]):
            if x == y or not is_removable(t, x, y):
                return f"{bin(p.atoms)} at {_lab(t, x, y)}"
        if any(central_cover(t, x, alg) != p for x in layers[1:]):
            return f"cover of layer over {bin(p.atoms)}"


def layers_are_bilinear(t):
    alg = projection_algebra(t)
    for p, q in itertools.combinations(alg.all, 2):
        for k in KAPPAS[1:4]:
            x, y = scal(t, p, k, alg), scal(t, q, k, alg)
            if x is None or y is None:
                continue
            j = t.join(x, y)
            if j is not None and scal(t, alg.join(p, q), k, alg) != j:
                return f"{bin(p.atoms)} {bin(q.atoms)} at {k}"


def axiom_routes_agree(t):
    rep = check_scale(t)
    if rep.m_route != rep.n_route:
        return f"M-route {rep.m_route} N-route {rep.n_route}"
    return None if rep.ok else ", ".join(rep.failures())


def no_type_two_part(t):
    td = type_decomposition(t)
    return None if td.S_II == frozenset({0}) else _lab(t, *sorted(td.S_II))


def finitary_unit_is_dense(t):
    E = finitary_unit(t)
    for x in iter_bits(class_masks(t).finite & ~1):
        if all(t.meet(x, e) == 0 for e in E):
            return t.labels[x]


def aleph_dimension_is_additive(t):
    pi = list(iter_bits(class_masks(t).infinite))
    m = {x: mu(t, x) for x in pi}
    for x in pi:
        for y in pi:
            s = t.add(x, y)
            if s is not None and m[s] != m[x] + m[y]:
                return _lab(t, x, y)


def aleph_dimension_reflects_order(t):
    pi = list(iter_bits(class_masks(t).infinite))
    m = {x: mu(t, x) for x in pi}
    for x in pi:
        for y in pi:
            if (m[x] <= m[y]) != t.leq(x, y):
                return _lab(t, x, y)


def finite_dimension_is_finite(t):
    E = finitary_unit(t)
    for x in iter_bits(class_masks(t).finite):
        if any(not v.is_finite for v in delta_fn(t, E, x).values):
            return t.labels[x]


def embedding_commutes_with_projections(t):
    alg = projection_algebra(t)
    table = epsilon_table(t)
    for p in alg.all:
        for x in range(t.n):
            if table[p.image[x]] != table[x].restrict(p.atoms):
                return f"{bin(p.atoms)} at {t.labels[x]}"


def embedding_is_lower_and_invertible(t):
    rep = verify_embedding(t)
    if not rep.ok:
        return ", ".join(k for k, c in rep.clauses.items() if not c.ok)
    rt = roundtrip(t)
    return None if rt.ok else rt.detail


def unit_maps_to_indicator(t):
    E = finitary_unit(t)
    table = epsilon_table(t, E)
    atoms = omega_atoms(t)
    for e in E:
        cc = central_cover(t, e)
        want = tuple(Value.fin(cc.atoms >> a.index & 1) for a in atoms)
        if table[e].values != want:
            return t.labels[e]


SCALE_CHECKS = (
    Check("pcm-axioms-hold", pcm_axioms_hold),
    Check("refinement-holds", refinement_holds),
    Check("order-is-antisymmetric", order_is_antisymmetric),
    Check("binary-meets-exist", binary_meets_exist),
    Check("smaller-summands-stay-summable", smaller_summands_stay_summable, 30),
    Check("projections-commute-with-differences", projections_commute_with_differences),
    Check("separativity", separativity, 30),
    Check("pseudo-cancellation", pseudo_cancellation, 16),
    Check("directly-finite-elements-cancel", directly_finite_elements_cancel),
    Check("polars-split-the-scale", polars_split_the_scale),
    Check("central-cover-of-meet", central_cover_of_meet),
    Check("projection-meets-are-pointwise", projection_meets_are_pointwise),
    Check("meets-split-by-comparability", meets_split_by_comparability),
    Check("infinite-part-is-additive", infinite_part_is_additive),
    Check("translation-preserves-meets", translation_preserves_meets, 30),
    Check("layers-increase-removably", layers_increase_removably),
    Check("layers-are-bilinear", layers_are_bilinear),
    Check("axiom-routes-agree", axiom_routes_agree),
    Check("no-type-two-part", no_type_two_part),
    Check("finitary-unit-is-dense", finitary_unit_is_dense),
    Check("aleph-dimension-is-additive", aleph_dimension_is_additive),
    Check("aleph-dimension-reflects-order", aleph_dimension_reflects_order),
    Check("finite-dimension-is-finite", finite_dimension_is_finite),
    Check("embedding-commutes-with-projections", embedding_commutes_with_projections),
    Check("embedding-is-lower-and-invertible", embedding_is_lower_and_invertible),
    Check("unit-maps-to-indicator", unit_maps_to_indicator),
)


# -- espaliers --------------------------------------------------------------------

def espalier_axioms_hold(L):
    rep = validate_espalier(L)
    return None if rep.ok else "; ".join(f"{a}: {rep.verdicts[a].witness}" for a in rep.failures())


def mutual_subequivalence_is_equivalence(L):
    for a, b in itertools.combinations(range(L.n), 2):
        if L.lesssim(a, b) and L.lesssim(b, a) and not L.equiv(a, b):
            return f"{L.labels[a]}, {L.labels[b]}"


def range_has_refinement(L):
    return refinement_holds(drng(L).scale)


def range_is_a_scale(L):
    return axiom_routes_agree(drng(L).scale)


def orthogonality_passes_to_pieces(L):
    for a, b, c in itertools.combinations(range(1, L.n), 3):
        ab = L.oplus(a, b)
        if ab is not None and L.is_perp(ab, c) and not (L.is_perp(a, c) and L.is_perp(b, c)):
            return f"{L.labels[a]}, {L.labels[b]}, {L.labels[c]}"


def perspective_elements_are_equivalent(L):
    for a, b, c in itertools.product(range(L.n), repeat=3):
        ja = L.join(a, c)
        if ja is not None and ja == L.join(b, c) and L.meet(a, c) == L.meet(b, c) == 0 \
                and not L.equiv(a, b):
            return f"{L.labels[a]}, {L.labels[b]} over {L.labels[c]}"


def range_has_general_comparability(L):
    s = drng(L).scale
    for x in range(s.n):
        for y in range(s.n):
            if comparability_witness(s, x, y) is None:
                return _lab(s, x, y)


def orthogonal_dimensions_give_orthogonal_joins(L):
    q = drng(L)
    for a in range(L.n):
        for b in range(L.n):
            if L.join(a, b) is not None and q.scale.orth_rows[q.delta[a]] >> q.delta[b] & 1:
                if boxplus(L, a, b) != L.oplus(a, b):
                    return f"{L.labels[a]}, {L.labels[b]}"


def ranges_of_products_multiply(L):
    pair = [L, gen_equipotency(1)]
    got = drng(combine(pair)).scale
    want = product_scale([drng(x).scale for x in pair])
    return None if find_isomorphism(got, want) is not None else "product range differs"


ESPALIER_CHECKS = (
    Check("espalier-axioms-hold", espalier_axioms_hold),
    Check("mutual-subequivalence-is-equivalence", mutual_subequivalence_is_equivalence),
    Check("range-has-refinement", range_has_refinement),
    Check("range-is-a-scale", range_is_a_scale),
    Check("orthogonality-passes-to-pieces", orthogonality_passes_to_pieces, 32),
    Check("perspective-elements-are-equivalent", perspective_elements_are_equivalent, 32),
    Check("range-has-general-comparability", range_has_general_comparability),
    Check("orthogonal-dimensions-give-orthogonal-joins", orthogonal_dimensions_give_orthogonal_joins),
    Check("ranges-of-products-multiply", ranges_of_products_multiply, 32),
)

ALL_CHECKS = tuple(("scale", c) for c in SCALE_CHECKS) + tuple(("espalier", c) for c in ESPALIER_CHECKS)


def run_check(kind, check, scales, espaliers):
    """Run one check over the corpus; return (instances checked, first failure or None)."""
    pool = scales if kind == "scale" else espaliers
    count = 0
    for name, obj in pool:
        if obj.n > check.max_size:
            continue
        count += 1
        w = check.run(obj)
        if w is not None:
            return count, f"{check.name} fails on {name}: {w}"
    return count, None
