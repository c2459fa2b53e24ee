import random
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from cartan_eds.exterior import (
    Chart,
    ChartMismatch,
    EvaluatedForm,
    Form,
    Metric,
    Poly,
    evaluate,
    exterior_derivative,
    hodge_dual_2form,
    hodge_star,
    interior_product,
    wedge,
)
from cartan_eds.models import ModelSpec, gauge_fields

from helpers import random_form, random_poly, small_chart

CHART3 = Chart(("x1", "x2", "x3"), (0, 1, 2))


def dx(i, chart=CHART3):
    return Form.basis(chart, (i,))


def x(i, chart=CHART3):
    return Poly.var(i)


# --- wedge -------------------------------------------------------------------

def test_wedge_repeated_basis_is_zero():
    assert wedge(dx(0), dx(0)).is_zero()


def test_wedge_one_forms_anticommute():
    assert wedge(dx(0), dx(1)) == -wedge(dx(1), dx(0))
    assert wedge(dx(1), dx(0)).terms == {(0, 1): Poly.const(-1)}


def test_wedge_bilinear_over_poly():
    lhs = wedge(dx(0) * x(0), dx(1))
    assert lhs == Form.basis(CHART3, (0, 1)) * x(0)


def test_wedge_chart_mismatch():
    other = Chart(("a", "b", "c"), (0,))
    with pytest.raises(ChartMismatch):
        wedge(dx(0), Form.basis(other, (1,)))


def test_wedge_overflowing_degree_is_zero_form():
    top = Form.basis(CHART3, (0, 1, 2))
    w = wedge(top, dx(0))
    assert w.is_zero() and w.degree == 4


def test_form_constructor_canonicalizes():
    f = Form(CHART3, 2, {(2, 0): 3, (0, 2): 1, (1, 1): 7})
    assert f.terms == {(0, 2): Poly.const(-2)}


def test_adding_mixed_degrees_raises():
    with pytest.raises(ValueError):
        dx(0) + Form.basis(CHART3, (0, 1))


# --- exterior derivative -----------------------------------------------------

def test_d_product_rule_on_coordinates():
    f = dx(2) * (x(0) * x(1))
    expected = Form(CHART3, 2, {(0, 2): x(1), (1, 2): x(0)})
    assert exterior_derivative(f) == expected


def test_d_of_d_of_polynomial_function_is_zero():
    rng = random.Random(3)
    for _ in range(20):
        f = Form.scalar(CHART3, random_poly(rng, 3, max_terms=5, max_degree=3))
        assert exterior_derivative(exterior_derivative(f)).is_zero()


def test_d_of_maxwell_potential():
    # A = sum A_i dx^i with A_i independent coordinates, so dA = sum dA_i ^ dx^i:
    # four terms, each dx^i ^ dA_i with coefficient -1
    fields = gauge_fields(ModelSpec("maxwell", 4))
    dA = exterior_derivative(fields.A[0])
    assert dA.degree == 2
    assert dA.terms == {(i, 4 + i): Poly.const(-1) for i in range(4)}


def test_d_of_top_form_is_zero():
    top = Form.basis(CHART3, (0, 1, 2)) * x(0)
    assert exterior_derivative(top).is_zero()


# --- evaluation ---------------------------------------------------------------

def test_evaluate_coefficient():
    p = [Fraction(3), Fraction(5), Fraction(7)]
    e = evaluate(dx(1) * x(0), p)
    assert e.terms == {(1,): Fraction(3)}


def test_evaluate_constant_zero_form():
    e = evaluate(Form.scalar(CHART3, 1), [Fraction(9)] * 3)
    assert e.degree == 0 and e.terms == {(): Fraction(1)}


def test_evaluate_maxwell_theta():
    spec = ModelSpec("maxwell", 4)
    fields = gauge_fields(spec)
    rng = random.Random(11)
    p = [Fraction(rng.randint(-10, 10)) for _ in range(fields.chart.N)]
    e = evaluate(fields.theta[0], p)
    expected = {(i, 4 + i): Fraction(-1) for i in range(4)}
    for k, (i, j) in enumerate(combinations(range(4), 2)):
        if p[8 + k]:
            expected[(i, j)] = -p[8 + k]
    assert e.terms == expected


def test_structural_zeros_dropped_on_evaluation():
    f = dx(0) * x(1)
    assert evaluate(f, [Fraction(1), Fraction(0), Fraction(1)]).is_zero()


# --- interior product ----------------------------------------------------------

def test_interior_coordinate_vector():
    e = EvaluatedForm(3, 2, {(0, 1): 1})
    assert interior_product([1, 0, 0], e).terms == {(1,): Fraction(1)}


def test_interior_sign_from_slot():
    e = EvaluatedForm(3, 2, {(0, 1): 5})
    assert interior_product([0, 1, 0], e).terms == {(0,): Fraction(-5)}


def test_interior_twice_same_vector_vanishes():
    rng = random.Random(5)
    chart = small_chart(6)
    for _ in range(20):
        a = evaluate(random_form(rng, chart, 3), [Fraction(rng.randint(-4, 4)) for _ in range(6)])
        v = [Fraction(rng.randint(-4, 4)) for _ in range(6)]
        assert interior_product(v, interior_product(v, a)).is_zero()


def test_interior_of_zero_form_raises():
    with pytest.raises(ValueError):
        interior_product([1, 0, 0], EvaluatedForm(3, 0, {(): 1}))


def test_full_evaluation_is_determinant():
    e = EvaluatedForm(2, 2, {(0, 1): 1})
    assert e([1, 2], [3, 4]) == 1 * 4 - 2 * 3


# --- Hodge dual: brute-force oracle over every index tuple ---------------------

def _parity(seq):
    inv = sum(1 for a, b in combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def _epsilon(idx):
    return 0 if len(set(idx)) != len(idx) else _parity(idx)


def oracle_dual(components, k, signs, normalization):
    """Literal sum: normalization * w^{I} eps_{I J} dx^J over all ordered I, J.

    ``components`` maps every ordered k-tuple of base positions to its value.
    Returns a dict keyed by sorted J.
    """
    n = len(signs)
    out = {}
    for I in permutations(range(n), k):
        w = components.get(I, 0)
        if not w:
            continue
        raised = w
        for i in I:
            raised *= signs[i]
        for J in permutations([j for j in range(n) if j not in I]):
            e = _epsilon(I + J)
            key = tuple(sorted(J))
            out[key] = out.get(key, 0) + normalization * raised * e * _parity(J)
    return {k: v for k, v in out.items() if v}


def _full_components(pairs_values, k):
    """Antisymmetric extension of sorted-key components to all orderings."""
    full = {}
    for key, v in pairs_values.items():
        for perm in permutations(range(k)):
            full[tuple(key[p] for p in perm)] = v * _parity(perm)
    return full


def _form_constants(form):
    return {k: v.constant() for k, v in form.terms.items()}


def test_dual_of_zero_is_zero():
    chart = Chart(tuple(f"x{i}" for i in range(4)), tuple(range(4)))
    assert hodge_dual_2form({}, Metric.lorentz(4), chart).is_zero()


def test_dual_f12_euclidean_n4():
    chart = Chart(tuple(f"x{i}" for i in range(4)), tuple(range(4)))
    star = hodge_dual_2form({(0, 1): 1}, Metric.lorentz(4, "euclidean"), chart)
    oracle = oracle_dual(_full_components({(0, 1): 1}, 2), 2, (1, 1, 1, 1), Fraction(1, 4))
    assert oracle == {(2, 3): 1}
    assert _form_constants(star) == {(2, 3): Fraction(1)}


def test_dual_requires_n_at_least_3():
    chart = Chart(("a", "b"), (0, 1))
    with pytest.raises(ValueError):
        hodge_dual_2form({(0, 1): 1}, Metric((1, 1)), chart)


def test_dual_rejects_non_antisymmetric_input():
    chart = Chart(tuple(f"x{i}" for i in range(3)), (0, 1, 2))
    with pytest.raises(ValueError):
        hodge_dual_2form({(0, 1): 1, (1, 0): 1}, Metric((1, 1, 1)), chart)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("signature", ["mostly-plus", "mostly-minus", "time-first", "euclidean"])
def test_dual_matches_brute_force_and_double_dual_sign(n, signature):
    rng = random.Random(100 * n + len(signature))
    metric = Metric.lorentz(n, signature)
    chart = Chart(tuple(f"x{i}" for i in range(n)), tuple(range(n)))
    comps = {pair: Fraction(rng.randint(-9, 9)) for pair in combinations(range(n), 2)}
    star = hodge_dual_2form(comps, metric, chart)
    norm = Fraction(1, 2 * factorial(n - 2))
    oracle = oracle_dual(_full_components(comps, 2), 2, metric.signs, norm)
    assert _form_constants(star) == oracle

    # second dual of the (n-2)-form, again by brute force
    oracle2 = oracle_dual(_full_components(oracle, n - 2), n - 2, metric.signs,
                          Fraction(1, factorial(n - 2) * 2))
    sign = (-1) ** ((n - 2) * 2) * metric.det
    assert oracle2 == {k: sign * v for k, v in comps.items() if v}
    assert _form_constants(hodge_star(star, metric)) == oracle2


def test_general_dual_reduces_to_quarter_formula_in_four_dimensions():
    metric = Metric.lorentz(4)
    chart = Chart(tuple(f"x{i}" for i in range(4)), tuple(range(4)))
    comps = {pair: Fraction(k + 1) for k, pair in enumerate(combinations(range(4), 2))}
    quarter = oracle_dual(_full_components(comps, 2), 2, metric.signs, Fraction(1, 4))
    assert _form_constants(hodge_dual_2form(comps, metric, chart)) == quarter


# --- algebraic laws on random polynomial forms ----------------------------------

forms_seed = st.integers(min_value=0, max_value=2 ** 32)


@settings(max_examples=200, deadline=None)
@given(forms_seed, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_wedge_laws_and_leibniz(seed, p, q, r):
    rng = random.Random(seed)
    chart = small_chart(6)
    a, b, c = (random_form(rng, chart, k) for k in (p, q, r))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    sign = (-1) ** (p * q)
    assert wedge(a, b) == wedge(b, a) * sign
    lhs = exterior_derivative(wedge(a, b))
    rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)) * ((-1) ** p)
    assert lhs == rhs
    assert exterior_derivative(exterior_derivative(a)).is_zero()


@settings(max_examples=100, deadline=None)
@given(forms_seed, st.integers(0, 3), st.integers(1, 3))
def test_evaluate_commutes_with_wedge_and_contraction_is_antiderivation(seed, p, q):
    rng = random.Random(seed)
    chart = small_chart(6)
    a, b = random_form(rng, chart, p), random_form(rng, chart, q)
    point = [Fraction(rng.randint(-5, 5)) for _ in range(6)]
    ea, eb = evaluate(a, point), evaluate(b, point)
    assert evaluate(wedge(a, b), point) == ea ^ eb
    v = [Fraction(rng.randint(-5, 5)) for _ in range(6)]
    lhs = interior_product(v, ea ^ eb)
    rhs = interior_product(v, eb)
    rhs = (ea ^ rhs) * ((-1) ** p)
    if p:
        rhs = rhs + (interior_product(v, ea) ^ eb)
    assert lhs == rhs


def test_all_arithmetic_is_exact():
    with pytest.raises(TypeError):
        Poly.const(0.5)
    with pytest.raises(TypeError):
        dx(0) * 0.5
