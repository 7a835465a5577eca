import random
from fractions import Fraction
from math import comb

import pytest

import oracles
from conftest import ALL_FIELDS, random_homogeneous, small_context
from extreg import Element, coords, from_coords
from extreg.exterior import mono_indices
from extreg.family import build_family
from extreg.fields import PrimeField, QQ
from extreg.linalg import Matrix, in_span, rank
from extreg.resolution import (BettiTable, FreeModule, GradedSubmodule,
                               ModuleMap, SizeGuardError, annihilator,
                               betti_table, check_size_guard, ideal_submodule,
                               kernel_submodule, minimal_generators,
                               multiplication_matrix, regularity_lower_bound,
                               render_betti, syzygy_step)


def _to_oracle_terms(e):
    return {mono_indices(m): v for m, v in e.terms.items()}


# ---------------------------------------------------------------------------
# multiplication matrices


def test_mult_matrix_f1_degree0():
    inst = build_family(1, QQ)
    m = multiplication_matrix(inst.f, 0)
    assert (m.n_rows, m.n_cols) == (1, 1)
    assert m.rows == [[Fraction(1)]]


def test_mult_matrix_f2_degree1_injective():
    inst = build_family(2, QQ)
    m = multiplication_matrix(inst.f, 1)
    assert (m.n_rows, m.n_cols) == (4, 4)
    assert rank(m) == 4
    oracle_rows = oracles.mult_matrix(4, _to_oracle_terms(inst.f), 1, 0)
    assert oracles.oracle_rank(oracle_rows, 0) == 4


def test_mult_matrix_dimensions():
    for n in (1, 2, 3):
        inst = build_family(n, QQ)
        for d in range(2 * n + 1):
            m = multiplication_matrix(inst.f, d)
            assert m.n_cols == comb(2 * n, d)
            expected_rows = comb(2 * n, d + 2) if d + 2 <= 2 * n else 0
            assert m.n_rows == expected_rows


def test_mult_matrix_rejects_inhomogeneous():
    ctx = small_context(QQ, 3)
    e = Element(ctx, {0b1: 1, 0b11: 1})
    with pytest.raises(ValueError):
        multiplication_matrix(e, 1)


# ---------------------------------------------------------------------------
# annihilators


def test_annihilator_f1_dims():
    inst = build_family(1, QQ)
    ann = annihilator(inst.f, 2)
    assert {d: ann.dim(d) for d in ann.degrees()} == {0: 0, 1: 2, 2: 1}


def test_annihilator_f2_degree1_trivial():
    inst = build_family(2, QQ)
    ann = annihilator(inst.f, 2)
    assert ann.dim(1) == 0
    assert ann.dim(2) == 5


def test_witness_lies_in_annihilator():
    for n in (1, 2, 3):
        for field in (QQ, PrimeField(2), PrimeField(5)):
            inst = build_family(n, field)
            ann = annihilator(inst.f, n)
            assert ann.contains((inst.s,), n)


def test_annihilator_rejects_degenerate_input():
    ctx = small_context(QQ, 3)
    with pytest.raises(ValueError):
        annihilator(Element.zero(ctx), 2)
    with pytest.raises(ValueError):
        annihilator(Element(ctx, {0b1: 1, 0b11: 1}), 2)


def test_annihilator_closure_invariant(rng):
    for field in (QQ, PrimeField(3)):
        ctx = small_context(field, 5)
        for _ in range(5):
            g = random_homogeneous(rng, ctx, rng.randint(1, 3), nonzero=True)
            ann = annihilator(g, 4)
            for d in range(4):
                mat_next = ann.degree_bases[d + 1]
                for col in ann.degree_bases[d].columns():
                    e = (Element.variable(ctx, rng.randrange(5))
                         .wedge(from_coords(ctx, d, col)))
                    assert in_span(mat_next, coords(e, d + 1))


def test_annihilator_dims_match_bruteforce_oracle(rng):
    # random homogeneous elements in up to 6 variables, all fields
    for _ in range(12):
        field = rng.choice(ALL_FIELDS)
        n = rng.randint(2, 6)
        ctx = small_context(field, n)
        g = random_homogeneous(rng, ctx, rng.randint(1, n - 1), nonzero=True)
        ann = annihilator(g, n)
        got = {d: ann.dim(d) for d in range(n + 1)}
        expected = oracles.annihilator_dims(n, _to_oracle_terms(g), n,
                                            field.characteristic)
        assert got == expected


# ---------------------------------------------------------------------------
# minimal generators


def test_minimal_generators_ann_f1():
    inst = build_family(1, QQ)
    gens = minimal_generators(annihilator(inst.f, 2))
    assert {d: c for d, (c, _) in gens.items()} == {1: 2, 2: 0}
    reps = [vec[0] for vec in gens[1][1]]
    x1 = Element.variable(inst.context, "x1")
    y1 = Element.variable(inst.context, "y1")
    assert reps == [x1, y1]


def test_minimal_generators_zero_submodule():
    ctx = small_context(QQ, 3)
    ambient = FreeModule(ctx, (0,))
    empty = GradedSubmodule(ambient, {
        d: Matrix.from_columns(QQ, [], n_rows=ctx.dim(d)) for d in range(3)})
    assert minimal_generators(empty) == {}


def test_minimal_generators_principal_ideal():
    inst = build_family(3, QQ)
    gens = minimal_generators(ideal_submodule([inst.f], 2))
    assert {d: c for d, (c, _) in gens.items()} == {2: 1}


def test_minimal_generator_representatives_annihilate(rng):
    for field in (QQ, PrimeField(2)):
        ctx = small_context(field, 5)
        for _ in range(4):
            g = random_homogeneous(rng, ctx, 2, nonzero=True)
            gens = minimal_generators(annihilator(g, 4))
            for _, reps in gens.values():
                for vec in reps:
                    assert vec[0].wedge(g).is_zero()


def test_minimal_generators_requires_contiguous_degrees():
    ctx = small_context(QQ, 3)
    ambient = FreeModule(ctx, (0,))
    gap = GradedSubmodule(ambient, {
        0: Matrix.from_columns(QQ, [], n_rows=1),
        2: Matrix.from_columns(QQ, [], n_rows=3)})
    with pytest.raises(ValueError):
        minimal_generators(gap)


# ---------------------------------------------------------------------------
# syzygy steps


def _principal_map(inst):
    ctx = inst.context
    return ModuleMap(FreeModule(ctx, (2,)), FreeModule(ctx, (0,)),
                     ((inst.f,),))


def test_syzygy_step_f1():
    inst = build_family(1, QQ)
    psi = syzygy_step(_principal_map(inst), 4)
    assert psi.source.twists == (3, 3)
    assert psi.is_minimal()


def test_syzygy_step_injective_window_is_empty():
    ctx = small_context(QQ, 3)
    x = Element.variable(ctx, 0)
    phi = ModuleMap(FreeModule(ctx, (1,)), FreeModule(ctx, (0,)), ((x,),))
    psi = syzygy_step(phi, 1)
    assert psi.source.rank == 0
    assert psi.note is not None


def test_syzygy_step_family_degree_n_plus_2():
    for n in (2, 3):
        inst = build_family(n, QQ)
        psi = syzygy_step(_principal_map(inst), n + 2)
        assert n + 2 in psi.source.twists


def test_syzygy_step_j_max_below_twist_raises():
    inst = build_family(2, QQ)
    with pytest.raises(ValueError):
        syzygy_step(_principal_map(inst), 1)


def test_syzygy_steps_minimal_and_compose_to_zero(rng):
    # random small cyclic quotients, two steps deep
    cases = 0
    while cases < 10:
        field = rng.choice(ALL_FIELDS)
        n = rng.randint(2, 4)
        ctx = small_context(field, n)
        gens = [random_homogeneous(rng, ctx, rng.randint(1, 2), nonzero=True)
                for _ in range(rng.randint(1, 2))]
        j_max = n + 2
        ideal = ideal_submodule(gens, j_max)
        min_gens = minimal_generators(ideal)
        twists, columns = [], []
        for d in sorted(min_gens):
            for repv in min_gens[d][1]:
                twists.append(d)
                columns.append(repv)
        if not twists:
            continue
        cases += 1
        phi = ModuleMap(FreeModule(ctx, tuple(twists)), FreeModule(ctx, (0,)),
                        tuple(columns))
        psi = syzygy_step(phi, j_max)
        assert psi.is_minimal()
        assert phi.compose(psi).is_zero_map()
        if psi.source.rank and max(psi.source.twists) <= j_max:
            chi = syzygy_step(psi, j_max)
            assert chi.is_minimal()
            assert psi.compose(chi).is_zero_map()


def test_exactness_in_window():
    inst = build_family(2, QQ)
    phi = _principal_map(inst)
    j_max = 6
    psi = syzygy_step(phi, j_max)
    kernel = kernel_submodule(phi, j_max)
    for d in range(2, j_max + 1):
        image_rank = rank(psi.matrix_at_degree(d))
        assert image_rank == kernel.dim(d)


def test_module_map_validation():
    ctx = small_context(QQ, 3)
    x = Element.variable(ctx, 0)
    with pytest.raises(ValueError):  # wrong homogeneous degree
        ModuleMap(FreeModule(ctx, (3,)), FreeModule(ctx, (0,)), ((x,),))
    with pytest.raises(ValueError):  # wrong column count
        ModuleMap(FreeModule(ctx, (1, 1)), FreeModule(ctx, (0,)), ((x,),))


def test_matrix_at_degree_respects_composition():
    inst = build_family(2, QQ)
    phi = _principal_map(inst)
    psi = syzygy_step(phi, 6)
    comp = phi.compose(psi)
    for d in range(4, 7):
        a = phi.matrix_at_degree(d)
        b = psi.matrix_at_degree(d)
        c = comp.matrix_at_degree(d)
        for j in range(b.n_cols):
            assert a.mat_vec(b.column(j)) == c.column(j)


# ---------------------------------------------------------------------------
# betti tables and regularity


def test_betti_f1_window_2_4():
    inst = build_family(1, QQ)
    table = betti_table([inst.f], 2, 4)
    assert table.entries == ((0, 0, 1), (1, 2, 1), (2, 3, 2))
    assert regularity_lower_bound(table) == 1


def test_betti_zero_ideal():
    table = betti_table([], 2, 4)
    assert table.entries == ((0, 0, 1),)
    assert regularity_lower_bound(table) == 0


def test_betti_char0_second_column_concentrated():
    for n in (2, 3):
        inst = build_family(n, QQ)
        table = betti_table([inst.f], 2, n + 4)
        col2 = table.column(2)
        assert col2.get(n + 2, 0) >= 1
        assert all(j >= n + 2 for j in col2)


def test_betti_matches_divided_power_oracle(rng):
    # independent homology computation on small cyclic quotients
    for _ in range(6):
        field = rng.choice((QQ, PrimeField(2), PrimeField(3)))
        n = rng.randint(2, 4)
        ctx = small_context(field, n)
        gens = [random_homogeneous(rng, ctx, rng.randint(1, 2), nonzero=True)
                for _ in range(rng.randint(1, 2))]
        i_max, j_max = 3, n + 1
        table = betti_table(gens, i_max, j_max)
        expected = oracles.betti_numbers(
            n, [_to_oracle_terms(g) for g in gens], i_max, j_max,
            field.characteristic)
        got = {(i, j): b for (i, j, b) in table.entries}
        assert got == expected


def test_betti_family_matches_oracle():
    for field in (QQ, PrimeField(2)):
        inst = build_family(2, field)
        table = betti_table([inst.f], 3, 6)
        expected = oracles.betti_numbers(4, [_to_oracle_terms(inst.f)], 3, 6,
                                         field.characteristic)
        assert {(i, j): b for (i, j, b) in table.entries} == expected


def test_betti_beta1_equals_direct_minimal_generators(rng):
    for _ in range(6):
        field = rng.choice(ALL_FIELDS)
        n = rng.randint(2, 4)
        ctx = small_context(field, n)
        gens = [random_homogeneous(rng, ctx, rng.randint(1, 3), nonzero=True)
                for _ in range(rng.randint(1, 3))]
        j_max = n + 1
        table = betti_table(gens, 1, j_max)
        direct = minimal_generators(ideal_submodule(gens, j_max))
        counts = {d: c for d, (c, _) in direct.items() if c}
        assert table.column(1) == counts


def test_betti_input_validation():
    inst = build_family(1, QQ)
    ctx = inst.context
    with pytest.raises(ValueError):
        betti_table([Element.zero(ctx)], 2, 4)
    with pytest.raises(ValueError):
        betti_table([Element.one(ctx)], 2, 4)
    with pytest.raises(ValueError):
        betti_table([Element(ctx, {0b1: 1, 0b11: 1})], 2, 4)
    # duplicates collapse
    assert betti_table([inst.f, inst.f], 2, 4) == betti_table([inst.f], 2, 4)


def test_betti_table_type_validation():
    with pytest.raises(ValueError):
        BettiTable(((0, 0, 0),), (2, 4))
    with pytest.raises(ValueError):
        BettiTable(((3, 0, 1),), (2, 4))
    with pytest.raises(ValueError):
        BettiTable(((0, 5, 1),), (2, 4))
    with pytest.raises(ValueError):
        BettiTable(((0, 0, 1), (0, 0, 2)), (2, 4))


def test_regularity_lower_bound():
    assert regularity_lower_bound(BettiTable(((0, 0, 1),), (0, 0))) == 0
    for n in (2, 5):
        t = BettiTable(((0, 0, 1), (1, 2, 1), (2, n + 2, 1)), (2, n + 2))
        assert regularity_lower_bound(t) == n
    with pytest.raises(ValueError):
        regularity_lower_bound(BettiTable((), (1, 1)))


def test_render_betti_layout():
    inst = build_family(1, QQ)
    table = betti_table([inst.f], 2, 4)
    assert render_betti(table) == "\n".join([
        "       0 1 2",
        "total: 1 1 2",
        "    0: 1 . .",
        "    1: . 1 2",
    ])


def test_size_guard():
    big_q = small_context(QQ, 13)
    with pytest.raises(SizeGuardError):
        check_size_guard(big_q, allow_large=False)
    with pytest.raises(SizeGuardError):
        check_size_guard(big_q, allow_large=True)  # Q stays capped
    big_p = small_context(PrimeField(2), 13)
    with pytest.raises(SizeGuardError):
        check_size_guard(big_p, allow_large=False)
    check_size_guard(big_p, allow_large=True)
    x = Element.variable(big_p, 0)
    ann = annihilator(x, 1, allow_large=True)
    assert ann.dim(1) == 1  # only x itself kills x in degree 1


def test_worker_cap_does_not_change_results(rng, monkeypatch):
    inst = build_family(2, QQ)
    base = annihilator(inst.f, 4)
    monkeypatch.setenv("EXTREG_THREADS", "4")
    threaded = annihilator(inst.f, 4)
    assert {d: base.degree_bases[d].rows for d in base.degrees()} == \
        {d: threaded.degree_bases[d].rows for d in threaded.degrees()}
    monkeypatch.setenv("EXTREG_THREADS", "not-a-number")
    fallback = annihilator(inst.f, 4)
    assert fallback.degree_bases[2].rows == base.degree_bases[2].rows
