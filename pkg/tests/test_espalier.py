import itertools
from math import comb

import pytest

from dimscale.errors import PreconditionError, SizeGuardError
from dimscale.espalier import (
    ESP_AXIOMS,
    EspalierTable,
    boolean_espalier,
    boxplus,
    bv_lesssim,
    combine,
    dim_monoid,
    drng,
    espalier_closure,
    espalier_ops,
    gen_equipotency,
    gen_group_action,
    gen_subspace_lattice,
    is_trim,
    named_generators,
    p_dot,
    perspective_pairs,
    trim_lift,
    validate_espalier,
)
from dimscale.monoid import check_refinement, find_isomorphism
from dimscale.projections import bool_value_leq, central_cover, comparability_witness
from dimscale.scale import check_scale
from dimscale.targets import chain, product_scale
from dimscale.textio import emit, parse


def broken_equipotency():
    """Powerset of {1,2,3} by cardinality, except that {1} is glued to {2,3}."""
    def key(m):
        return "glued" if m in (0b001, 0b110) else bin(m).count("1")
    return boolean_espalier(["1", "2", "3"], key)


def one_point():
    return EspalierTable.from_relations(["0"], [(0, 0)], [(0, 0)], [])


def idx(L, *labels):
    return tuple(L.index(s) for s in labels)


# -- validation -------------------------------------------------------------------

def test_equipotency_validates():
    rep = validate_espalier(gen_equipotency(3))
    assert rep.ok and set(rep.verdicts) == set(ESP_AXIOMS)


def test_glued_classes_break_refinement():
    rep = validate_espalier(broken_equipotency())
    assert not rep.verdicts["L6"].ok
    assert rep.verdicts["L6"].witness
    assert "L6" in rep.failures()


def test_one_point_espalier():
    L = one_point()
    assert validate_espalier(L).ok
    assert drng(L).scale.n == 1


def test_corpus_espaliers_validate(espaliers):
    assert len(espaliers) >= 20
    for name, L in espaliers:
        assert validate_espalier(L).ok, name


def test_zero_must_be_alone_in_its_class():
    L = boolean_espalier(["1"], lambda m: 0)
    assert not validate_espalier(L).verdicts["L5"].ok


def test_size_guard():
    with pytest.raises(SizeGuardError):
        validate_espalier(gen_equipotency(6), max_size=10)


# -- operations ---------------------------------------------------------------------

def test_operation_examples():
    L = gen_equipotency(2)
    e, a, b, ab = idx(L, "{}", "{1}", "{2}", "{1,2}")
    ops = espalier_ops(L, a, b)
    assert ops.oplus == ab and ops.join == ab and ops.meet == e
    assert espalier_ops(L, a, ab).relative_complement == b
    assert L.oplus(a, a) is None


def test_boxplus_matches_oplus(espaliers):
    for _, L in espaliers:
        q = drng(L)
        for a in range(L.n):
            for b in range(L.n):
                s = boxplus(L, a, b)
                if s is not None:
                    assert L.oplus(a, b) == s
                elif L.join(a, b) is not None and q.scale.orth_rows[q.delta[a]] >> q.delta[b] & 1:
                    pytest.fail("boxplus undefined on an orthogonal majorized pair")


def test_drng_examples():
    assert drng(gen_equipotency(3)).scale.labels == ("{}", "{1}", "{1,2}", "{1,2,3}")
    assert find_isomorphism(drng(gen_equipotency(3)).scale, chain(3)) is not None
    assert find_isomorphism(drng(gen_subspace_lattice(2, 2)).scale, chain(2)) is not None


def test_dimension_map_is_additive(espaliers):
    for _, L in espaliers:
        q = drng(L)
        for c in range(L.n):
            for a, b in L.decompositions[c]:
                assert q.scale.add(q.delta[a], q.delta[b]) == q.delta[c]


def test_drng_of_every_espalier_is_a_scale(espaliers):
    for name, L in espaliers:
        s = drng(L).scale
        assert check_refinement(s).ok, name
        rep = check_scale(s)
        assert rep.ok and rep.m_route == rep.n_route, (name, rep.failures())


def test_p_dot_examples():
    L = combine([gen_equipotency(1), gen_equipotency(2)])
    q = drng(L)
    alg = q.algebra
    top = L.n - 1
    assert p_dot(L, alg.identity, top) == top
    assert p_dot(L, alg.zero, top) == 0
    first = next(p for p in alg.atoms if q.scale.labels[max(p.range_ideal)].startswith("({1},{}"))
    assert L.labels[p_dot(L, first, top)] == "({1},{})"


def test_p_dot_splits_each_element(espaliers):
    for _, L in espaliers:
        q = drng(L)
        alg = q.algebra
        for p in alg.all:
            comp = alg.complement(p)
            for a in range(L.n):
                u, v = p_dot(L, p, a), p_dot(L, comp, a)
                assert q.delta[u] == p.image[q.delta[a]]
                assert boxplus(L, u, v) == a


def test_bool_value_examples():
    L = gen_equipotency(2)
    alg = drng(L).algebra
    a, b = idx(L, "{1}", "{1,2}")
    assert bv_lesssim(L, a, b) == alg.identity
    assert bv_lesssim(L, b, a) == alg.zero
    for x in range(L.n):
        assert bv_lesssim(L, x, 0) == alg.complement(central_cover(drng(L).scale, drng(L).delta[x]))


def test_bool_values_match_the_range(espaliers):
    for _, L in espaliers:
        q = drng(L)
        for a in range(L.n):
            for b in range(L.n):
                want = bool_value_leq(q.scale, q.delta[a], q.delta[b], q.algebra)
                assert bv_lesssim(L, a, b) == want


def test_trim_lift_examples():
    L = gen_equipotency(3)
    q = drng(L)
    b = L.index("{1,2,3}")
    assert trim_lift(L, b, [0]) == [0]
    got = trim_lift(L, b, [q.delta[L.index("{1}")], q.delta[L.index("{1,2}")]])
    assert [L.labels[x] for x in got] == ["{1}", "{1,2}"]
    (top,) = trim_lift(L, b, [q.delta[b]])
    assert L.equiv(top, b) and L.leq(top, b)
    with pytest.raises(PreconditionError):
        trim_lift(L, L.index("{1}"), [q.delta[b]])


def test_trim_lifts_exist_on_corpus(espaliers):
    for _, L in espaliers:
        q = drng(L)
        for b in range(L.n):
            below = [x for x in range(q.scale.n) if q.scale.leq(x, q.delta[b])]
            for x, y in itertools.combinations(below, 2):
                if q.scale.leq(x, y):
                    seq = trim_lift(L, b, [x, y])
                    assert [q.delta[s] for s in seq] == [x, y]
                    assert is_trim(L, seq[0], seq[1])


# -- closure and generators ----------------------------------------------------------

def test_closure_examples():
    B = boolean_espalier(["1", "2", "3"])
    same = espalier_closure(B, [])
    assert len(same.classes) == B.n
    E = gen_equipotency(3)
    assert espalier_closure(B, [(x, y) for x in range(E.n) for y in range(E.n) if E.equiv(x, y)]).sim == E.sim


def test_cyclic_singleton_translations_close_to_equipotency():
    B = boolean_espalier(["1", "2", "3", "4"])
    singles = idx(B, "{1}", "{2}", "{3}", "{4}")
    pairs = [(singles[i], singles[(i + 1) % 4]) for i in range(4)]
    assert espalier_closure(B, pairs).sim == gen_equipotency(4).sim


def test_closure_is_idempotent(espaliers):
    checked = 0
    for _, L in espaliers:
        atoms = [L.labels[x].strip("{}") for x in range(1, L.n) if L.below[x] == 1 | 1 << x]
        if not L.labels[0] == "{}" or L.n != 1 << len(atoms):
            continue
        B = boolean_espalier(atoms)
        if B.labels != L.labels or B.below != L.below:
            continue
        pairs = [(x, y) for x in range(L.n) for y in range(L.n) if L.equiv(x, y)]
        assert espalier_closure(B, pairs).sim == L.sim
        checked += 1
    assert checked >= 10


def test_closure_rejects_bad_relations():
    B = boolean_espalier(["1", "2"])
    with pytest.raises(PreconditionError):
        espalier_closure(B, [(0, 1)])
    B3 = boolean_espalier(["1", "2", "3"])
    with pytest.raises(PreconditionError):
        espalier_closure(B3, [idx(B3, "{1}", "{2,3}")])
    with pytest.raises(PreconditionError):
        espalier_closure(gen_subspace_lattice(2, 2), [])


def test_equipotency_generator():
    assert drng(gen_equipotency(1)).scale.n == 2
    for n in range(1, 6):
        assert find_isomorphism(drng(gen_equipotency(n)).scale, chain(n)) is not None
    with pytest.raises(PreconditionError):
        gen_equipotency(0)
    with pytest.raises(PreconditionError):
        gen_equipotency(7)


def test_group_action_examples():
    for n in (2, 3, 4):
        assert gen_group_action(n, named_generators(n, "full")).sim == gen_equipotency(n).sim
    trivial = gen_group_action(3, named_generators(3, "trivial"))
    assert len(trivial.classes) == trivial.n
    with pytest.raises(SizeGuardError):
        gen_group_action(4, [], 2)
    with pytest.raises(PreconditionError):
        gen_group_action(3, [(0, 0, 1)])


@pytest.mark.parametrize("n,group,power", [(2, "trivial", 2), (2, "full", 3), (3, "cyclic", 2), (2, "cyclic", 2)])
def test_equivalence_bounds_block_support(n, group, power):
    L = gen_group_action(n, named_generators(n, group), power)
    width = comb(n, n // 2)

    def support(x):
        names = L.labels[x].strip("{}").split(",") if L.labels[x] != "{}" else []
        return {nm[-1] for nm in names}

    for x in range(L.n):
        for y in range(L.n):
            if L.equiv(x, y):
                assert len(support(y)) <= len(support(x)) * width


def test_full_action_identifies_equal_block_patterns():
    L = gen_group_action(3, named_generators(3, "full"), 2)
    a, b = idx(L, "{1a}", "{3b}")
    assert L.equiv(a, b)
    c, d = idx(L, "{1a,2a}", "{1b,3b}")
    assert L.equiv(c, d)


def test_subspace_examples():
    L = gen_subspace_lattice(2, 2)
    assert L.n == 5 and validate_espalier(L).ok
    lines = idx(L, "<01>", "<10>", "<11>")
    assert perspective_pairs(L) == list(itertools.combinations(lines, 2))
    assert gen_subspace_lattice(2, 1).n == 2
    for q, n in ((2, 3), (3, 2)):
        assert find_isomorphism(drng(gen_subspace_lattice(q, n)).scale, chain(n)) is not None
    with pytest.raises(PreconditionError):
        gen_subspace_lattice(5, 2)


def test_product_and_lower_combinations():
    two = gen_equipotency(1)
    P = combine([two, two])
    assert P.n == 4 and validate_espalier(P).ok
    E = gen_equipotency(3)
    sub = combine([E], "lower_sub", ceiling=E.index("{1,2}"))
    assert sub.labels == ("{}", "{1}", "{2}", "{1,2}") and validate_espalier(sub).ok
    with pytest.raises(PreconditionError):
        combine([E], "lower_sub", subset=[0, E.index("{1,2}")])
    with pytest.raises(PreconditionError):
        combine([E], "lower_sub", subset=[0, 1], saturated=True)


def test_product_ranges_multiply():
    Ls = [gen_equipotency(2), gen_subspace_lattice(2, 1)]
    got = drng(combine(Ls)).scale
    assert find_isomorphism(got, product_scale([drng(L).scale for L in Ls])) is not None


def test_dimension_monoid_examples():
    L = gen_subspace_lattice(2, 2)
    D = dim_monoid(L)
    zero, line, top = idx(L, "0", "<01>", "<01;10>")
    other = L.index("<10>")
    assert D.eq([(zero, line), (zero, other)], [(zero, top)])
    assert not D.eq([(zero, line)], [(zero, top)])
    assert D.relation_failures() == []
    assert dim_monoid(one_point()).relation_failures() == []
    for a in range(L.n):
        assert D.eq([(a, a)], [])


# -- invariants ------------------------------------------------------------------------

def test_mutual_subequivalence_is_equivalence(espaliers):
    for _, L in espaliers:
        for a in range(L.n):
            for b in range(L.n):
                if L.lesssim(a, b) and L.lesssim(b, a):
                    assert L.equiv(a, b)


def test_strongly_orthogonal_families_are_orthogonal(espaliers):
    for _, L in espaliers:
        if L.n > 32:
            continue
        for a, b in itertools.combinations(range(L.n), 2):
            if L.meet(a, b) == 0 and L.join(a, b) is not None and L.is_perp(a, b):
                assert L.oplus(a, b) == L.join(a, b)
        for a, b, c in itertools.combinations(range(1, L.n), 3):
            ab = L.oplus(a, b)
            if ab is not None and L.is_perp(ab, c):
                assert L.is_perp(a, c) and L.is_perp(b, c)


def test_perspective_elements_are_equivalent(espaliers):
    for _, L in espaliers:
        if L.n > 32:
            continue
        for a in range(L.n):
            for b in range(L.n):
                for c in range(L.n):
                    ja, jb = L.join(a, c), L.join(b, c)
                    if ja is not None and ja == jb and L.meet(a, c) == L.meet(b, c) == 0:
                        assert L.equiv(a, b)


def test_ranges_have_general_comparability(espaliers):
    for _, L in espaliers:
        s = drng(L).scale
        for x in range(s.n):
            for y in range(s.n):
                assert comparability_witness(s, x, y) is not None


def test_equal_sizes_are_equivalent_under_full_action():
    for n in (2, 3):
        L = gen_group_action(n, named_generators(n, "full"), 2)
        in_first_block = [x for x in range(L.n) if "b" not in L.labels[x]]
        for x, y in itertools.combinations(in_first_block, 2):
            if L.labels[x].count(",") == L.labels[y].count(",") and 0 not in (x, y):
                assert L.equiv(x, y)


# -- text format ------------------------------------------------------------------------

def test_text_round_trip(espaliers):
    for _, L in espaliers:
        back = parse(emit(L))
        assert back.labels == L.labels and back.below == L.below
        assert back.perp == L.perp and back.classes == L.classes
        assert emit(back) == emit(L)


def test_broken_file_reports_refinement_failure():
    L = parse(emit(broken_equipotency()))
    assert not validate_espalier(L).verdicts["L6"].ok


def test_hand_written_file():
    text = """esp v1
# two-element chain
elements: 0 x
leq: 0 0
leq: 0 x
leq: x x
perp: 0 0
perp: 0 x
perp: x 0
"""
    L = parse(text)
    assert validate_espalier(L).ok and drng(L).scale.n == 2
