"""Random polynomial forms for property tests."""
import random
from fractions import Fraction
from itertools import combinations

from cartan_eds.exterior import Chart, Form, Poly


def random_poly(rng: random.Random, N: int, max_terms: int = 3, max_degree: int = 2) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = tuple(sorted(rng.randrange(N) for _ in range(rng.randint(0, max_degree))))
        terms[mono] = Fraction(rng.randint(-5, 5), rng.choice((1, 1, 2, 3)))
    return Poly(terms)


def random_form(rng: random.Random, chart: Chart, degree: int, max_terms: int = 4) -> Form:
    basis = list(combinations(range(chart.N), degree))
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[rng.choice(basis)] = random_poly(rng, chart.N)
    return Form(chart, degree, terms)


def small_chart(N: int = 5, n: int = 2) -> Chart:
    return Chart(tuple(f"u{i}" for i in range(N)), tuple(range(n)))
