import random
from fractions import Fraction
from itertools import combinations

import pytest

from cartan_eds import cartan
from cartan_eds.cartan import (
    CharacterError,
    CharacterTable,
    GenusError,
    compute_characters,
    compute_characters_multi,
    format_table,
    integral_flag,
    parse_table,
    polar_matrix,
    sample_point,
)
from cartan_eds.eds import EDSystem
from cartan_eds.exterior import Chart, Form, evaluate
from cartan_eds.linalg import rank, rank_mod_p, random_prime
from cartan_eds.models import GOLDEN_TABLE1, ModelSpec, build, build_contact_example


def test_polar_matrix_empty_flag_maxwell():
    e = build(ModelSpec("maxwell", 4))
    p = sample_point(e.N, random.Random(0))
    gens = [evaluate(f, p) for f in e.forms()]
    M = polar_matrix(gens, [], e.N)
    assert M.shape == (0, 14) and rank(M) == 0


def test_polar_matrix_contact_one_vector():
    # at (x,y,z,p,q) with V = dx-direction lifted: th(V)=0 forces V_z = p V_x + q V_y;
    # rows are th and i_V dth = V_x dp - V_p dx + V_y dq - V_q dy, independent -> rank 2
    e = build_contact_example()
    p = [Fraction(v) for v in (1, 2, 3, 4, 5)]
    gens = [evaluate(f, p) for f in e.forms()]
    V = [Fraction(1), Fraction(0), Fraction(4), Fraction(7), Fraction(-2)]
    assert gens[0](V) == 0
    M = polar_matrix(gens, [V], 5)
    assert M.shape == (2, 5) and rank(M) == 2


def test_polar_rank_maxwell4_three_vectors():
    e = build(ModelSpec("maxwell", 4))
    run = integral_flag(e, seed=7)
    M = polar_matrix([evaluate(f, run.flag.point) for f in e.forms()], run.flag.vectors[:3], e.N)
    assert rank(M) == 9
    rng = random.Random(99)
    for _ in range(3):
        assert rank_mod_p(M, random_prime(rng)) == 9


def test_empty_system_is_all_gauge():
    chart = Chart(tuple(f"u{i}" for i in range(7)), (0, 1, 2))
    t = compute_characters(EDSystem(chart, [], (0, 1, 2)), seed=1)
    assert format_table(t) == "7[0,0,0]3+4" and t.cartan_ok


def test_contact_characters():
    # c_0 = 1 (the contact form), c_1 = 2, s_2 = 5 - 2 - 2 = 1
    t = compute_characters(build_contact_example(), seed=5)
    assert str(t) == "5[1,1]2+1" and t.cartan_ok


def test_genus_failure_reported():
    chart = Chart(("a", "b", "c"), (0, 1))
    e = EDSystem(chart, [("g", Form.basis(chart, (0,)))], (0, 1))
    with pytest.raises(GenusError) as info:
        compute_characters(e, seed=3)
    assert info.value.step == 0 and info.value.seed == 3


def test_format_examples():
    assert format_table(CharacterTable(20, 5, (0, 1, 2, 4, 7), 1, True)) == "20[0,1,2,4,7]5+1"
    assert format_table(CharacterTable(21, 3, (0, 6, 9), 3, True)) == "21[0,6,9]3+3"
    assert parse_table("14[0,1,3,5]4 + 1") == (14, (0, 1, 3, 5), 4, 1)


def test_multi_maxwell3_agreement():
    t = compute_characters_multi(build(ModelSpec("maxwell", 3)), [1, 2, 3])
    assert str(t) == "9[0,2,3]3+1" and t.agreement and t.seeds == (1, 2, 3) and t.trials == 3


def test_multi_su2_n4_agreement():
    t = compute_characters_multi(build(ModelSpec("su2ym", 4)), [1, 2, 3])
    assert str(t) == "34[0,3,9,15]4+3" and t.agreement


def test_same_seed_is_bit_identical():
    e = build(ModelSpec("su2ym", 3))
    r1, r2 = integral_flag(e, 42), integral_flag(e, 42)
    assert r1.flag.point == r2.flag.point
    assert r1.flag.vectors == r2.flag.vectors
    assert [m.rows for m in r1.matrices] == [m.rows for m in r2.matrices]
    assert compute_characters(e, 42) == compute_characters(e, 42)


def test_disagreement_returns_majority(monkeypatch):
    real = cartan.compute_characters

    def fake(eds, seed, **opts):
        t = real(eds, seed, **opts)
        if seed == 2:
            return CharacterTable(t.N, t.n, (9,) * t.n, 0, False, 1, (seed,))
        return t

    monkeypatch.setattr(cartan, "compute_characters", fake)
    t = cartan.compute_characters_multi(build(ModelSpec("maxwell", 3)), [1, 2, 3])
    assert not t.agreement and str(t) == "9[0,2,3]3+1"


def test_trial_error_carries_seed():
    chart = Chart(("a", "b"), (0,))
    e = EDSystem(chart, [("g", Form.basis(chart, (0,)))], (0,))
    with pytest.raises(CharacterError) as info:
        compute_characters_multi(e, [11])
    assert info.value.seed == 11


@pytest.mark.parametrize("family,n", [("maxwell", 4), ("su2ym", 3), ("su2ym", 4)])
def test_flag_is_integral_and_transversal(family, n):
    e = build(ModelSpec(family, n))
    run = integral_flag(e, seed=5)
    gens = [evaluate(f, run.flag.point) for f in e.forms()]
    V = run.flag.vectors
    for g in gens:
        for subset in combinations(range(len(V)), g.degree):
            assert g(*[V[i] for i in subset]) == 0
    for k, v in enumerate(V):
        assert [v[j] for j in e.independence] == [int(j == k) for j in range(n)]
    assert run.ranks == sorted(run.ranks)


def test_prime_point_sampler():
    e = build(ModelSpec("maxwell", 4))
    p = sample_point(e.N, random.Random(1), values="primes")
    assert all(abs(v) >= 2 for v in p)
    assert str(compute_characters(e, 1, point_values="primes")) == GOLDEN_TABLE1["maxwell"][4]


def test_modular_check_option_records_crosschecks():
    e = build(ModelSpec("maxwell", 4))
    run = integral_flag(e, 3, modular_check=True)
    assert len(run.crosschecks) == 4 and all(c["ok"] for c in run.crosschecks)
    assert [c["rank"] for c in run.crosschecks] == [0, 1, 4, 9]
