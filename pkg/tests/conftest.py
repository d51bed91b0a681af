import itertools
import random
from collections import Counter
from math import gcd

from hypothesis import strategies as st

from neronpair.complexes import Complex
from neronpair.fgab import FpAbGroup, GroupHom, hom_from_images
from neronpair.linalg import IntegerMatrix


@st.composite
def matrices(draw, max_rows=6, max_cols=6, bound=10, min_rows=0, min_cols=0):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r))
    return IntegerMatrix.from_rows(rows, cols=c)


@st.composite
def square_matrices(draw, max_n=5, bound=9, min_n=1):
    n = draw(st.integers(min_n, max_n))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=n, max_size=n))
    return IntegerMatrix.from_rows(rows, cols=n)


@st.composite
def finite_groups(draw, max_order=64):
    factors = []
    size = 1
    while True:
        choices = [d for d in range(2, max_order // size + 1) if not factors or d % factors[-1] == 0]
        if not choices or draw(st.booleans()):
            break
        d = draw(st.sampled_from(choices))
        factors.append(d)
        size *= d
    return FpAbGroup(0, tuple(factors))


@st.composite
def groups(draw, max_order=36, max_free=1):
    G = draw(finite_groups(max_order))
    return FpAbGroup(draw(st.integers(0, max_free)), G.invariant_factors)


def random_group(rng: random.Random, max_order=12, max_free=1) -> FpAbGroup:
    orders = [rng.choice([0] * 2 + list(range(1, max_order + 1))) for _ in range(rng.randint(0, 2))]
    orders = [o for o in orders if o != 0] + [0] * min(max_free, sum(1 for o in orders if o == 0))
    return FpAbGroup.from_orders(orders)


def random_element_killed_by(rng: random.Random, H: FpAbGroup, d: int):
    """Random element of H with d * x = 0 (d = 0 means no condition)."""
    out = []
    for o in H.orders:
        if d == 0:
            out.append(rng.randint(-5, 5) if o == 0 else rng.randrange(o))
        elif o == 0:
            out.append(0)
        else:
            step = o // gcd(o, d)
            out.append(step * rng.randrange(o // step))
    return out


def random_hom(rng: random.Random, G: FpAbGroup, H: FpAbGroup) -> GroupHom:
    cols = [random_element_killed_by(rng, H, o) for o in G.orders]
    return hom_from_images(G, H, cols)


def random_complex(rng: random.Random, length=None, max_order=12, lowest=None, max_free=1) -> Complex:
    """Random bounded complex with d o d = 0: each differential factors through the previous cokernel."""
    n = rng.randint(1, 3) if length is None else length
    lo = rng.randint(-1, 1) if lowest is None else lowest
    terms = [random_group(rng, max_order, max_free)]
    maps = []
    for _ in range(n - 1):
        T = random_group(rng, max_order, max_free)
        if maps:
            prev = maps[-1]
            sq = prev.cokernel()
            proj = GroupHom(prev.target, sq.group, sq.projection_matrix(IntegerMatrix.identity(prev.target.ngens)))
            h = random_hom(rng, sq.group, T) @ proj
        else:
            h = random_hom(rng, terms[-1], T)
        maps.append(h)
        terms.append(T)
    if not maps:
        return Complex.single(terms[0], lo)
    return Complex.from_maps(lo, maps)


def order_profile(elements, order_of) -> Counter:
    """Multiset of element orders: determines a finite abelian group up to isomorphism."""
    return Counter(order_of(x) for x in elements)


def group_profile(G: FpAbGroup) -> Counter:
    return order_profile(G.elements(), G.element_order)


def all_elements(orders):
    return itertools.product(*(range(o) for o in orders))


# acceptance lines, filled by test_acceptance and printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
