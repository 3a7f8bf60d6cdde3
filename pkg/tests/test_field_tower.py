import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import get_space
from oracles import PolyField
from twoweight.field_tower import (
    ZERO,
    ResourceCapError,
    build_tower,
    find_primitive_polynomial,
    is_primitive,
)

TOWERS = [(3, 1, 2), (2, 1, 2), (3, 1, 3), (2, 2, 2), (2, 1, 3)]


def tables(p, e, n):
    return get_space(p, e, n).tables


@pytest.mark.parametrize(
    "p,e,n,order,gamma,gamma_order",
    [(3, 1, 2, 80, 10, 8), (2, 1, 2, 15, 5, 3), (3, 1, 3, 728, 28, 26)],
)
def test_build_tower_orders(p, e, n, order, gamma, gamma_order):
    T = tables(p, e, n)
    assert T.order == order
    assert T.gamma == gamma
    assert T.order // np.gcd(T.gamma, T.order) == gamma_order


@pytest.mark.parametrize("p,e,n", TOWERS)
def test_exp_table_matches_polynomial_powers(p, e, n):
    T = tables(p, e, n)
    F = PolyField(p, T.params.modulus)
    cur = F.one()
    for k in range(T.order):
        assert tuple(T.digits[k].tolist()) == cur
        cur = F.mul(cur, F.x())
    assert cur == F.one()


@pytest.mark.parametrize("p,e,n", TOWERS)
def test_zech_table(p, e, n):
    T = tables(p, e, n)
    F = PolyField(p, T.params.modulus)
    for k in range(T.order):
        want = F.add(F.one(), tuple(T.digits[k].tolist()))
        z = int(T.zech[k])
        if z == ZERO:
            assert want == F.zero()
        else:
            assert tuple(T.digits[z].tolist()) == want


@pytest.mark.parametrize("p,degree", [(2, 4), (3, 4), (2, 6), (2, 8), (3, 6)])
def test_default_modulus_is_smallest_primitive(p, degree):
    chosen = find_primitive_polynomial(p, degree)
    # brute-force oracle: step through powers of x for every smaller candidate
    for low in itertools.product(range(p), repeat=degree):
        cand = low + (1,)
        prim = low[0] != 0 and PolyField(p, cand).order_of_x() == p**degree - 1
        if cand == chosen:
            assert prim
            break
        assert not prim, f"{cand} is primitive and precedes {chosen}"


def test_primitive_rejects_reducible_and_nonprimitive():
    assert not is_primitive((1, 0, 1), 2)  # x^2 + 1 = (x+1)^2
    assert not is_primitive((1, 1, 1, 1, 1), 2)  # x^4+x^3+x^2+x+1: x has order 5
    assert is_primitive((1, 1, 0, 0, 1), 2)


def test_build_tower_errors():
    with pytest.raises(ValueError):
        build_tower(4, 1, 2)
    with pytest.raises(ValueError):
        build_tower(3, 1, 1)
    with pytest.raises(ValueError):
        build_tower(2, 1, 2, modulus=(1, 1, 1, 1, 1))
    with pytest.raises(ValueError):
        build_tower(2, 1, 2, modulus=(1, 1, 1))
    with pytest.raises(ResourceCapError):
        build_tower(3, 1, 3, max_entries=100)


def test_user_modulus_is_used():
    T = build_tower(2, 1, 2, modulus=(1, 0, 0, 1, 1))
    assert T.params.modulus == (1, 0, 0, 1, 1)
    F = PolyField(2, (1, 0, 0, 1, 1))
    assert tuple(T.digits[7].tolist()) == F.power(F.x(), 7)


def test_field_examples():
    T = tables(3, 1, 2)
    x = 17
    assert T.add(x, T.neg(x)) == ZERO
    assert T.mul(13, 75) == (13 + 75) % 80
    T2 = tables(2, 1, 2)
    assert all(T2.add(k, k) == ZERO for k in range(T2.order))
    with pytest.raises(ZeroDivisionError):
        T.inv(ZERO)
    assert T.mul(x, T.inv(x)) == 0
    assert T.pow(x, 80) == 0
    assert T.pow(ZERO, 0) == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TOWERS), st.data())
def test_field_axioms(tower, data):
    T = tables(*tower)
    el = st.integers(min_value=-1, max_value=T.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert T.add(a, b) == T.add(b, a)
    assert T.add(T.add(a, b), c) == T.add(a, T.add(b, c))
    assert T.mul(a, T.add(b, c)) == T.add(T.mul(a, b), T.mul(a, c))
    assert T.sub(T.add(a, b), b) == a


@pytest.mark.parametrize("p,e,n", TOWERS)
def test_frobenius_fixes_fields(p, e, n):
    T = tables(p, e, n)
    q = T.q
    for k in range(T.order):
        assert T.pow(k, q ** (2 * n)) == k
        assert (T.pow(k, q**n) == k) == T.in_subfield(k)
        assert (T.pow(k, q) == k) == T.in_base(k)


def test_trace_examples():
    T = tables(3, 1, 2)
    assert T.trace_to_base(ZERO, "big") == ZERO
    # GF(9) -> GF(3): Tr(1) = 1 + 1 = 2
    assert T.label(T.trace_to_base(0, "sub")) == 2
    rng = random.Random(1)
    for _ in range(20):
        x = rng.randrange(T.order)
        conj = ZERO
        for i in range(4):
            conj = T.add(conj, T.pow(x, 3**i))
        assert T.trace_to_base(x, "big") == conj
    with pytest.raises(ValueError):
        T.trace_to_base(1, "sub")
    with pytest.raises(ValueError):
        T.trace_to_base(0, "nowhere")


@pytest.mark.parametrize("p,e,n", TOWERS)
def test_trace_balanced_and_linear(p, e, n):
    T = tables(p, e, n)
    q = T.q
    sub = [ZERO] + [j * T.norm_exp for j in range(T.sub_order)]
    values = [T.label(T.trace_to_base(y, "sub")) for y in sub]
    assert sorted(np.bincount(values, minlength=q).tolist()) == [q ** (n - 1)] * q
    rng = random.Random(2)
    for _ in range(30):
        x, y = rng.randrange(-1, T.order), rng.randrange(-1, T.order)
        lam = T.from_label(rng.randrange(q))
        lhs = T.trace_to_base(T.add(T.mul(lam, x), y))
        rhs = T.add(T.mul(lam, T.trace_to_base(x)), T.trace_to_base(y))
        assert lhs == rhs


@pytest.mark.parametrize("p,e,n", [(3, 1, 2), (2, 1, 2), (2, 2, 2), (3, 1, 3)])
def test_rel_norm_fibres(p, e, n):
    T = tables(p, e, n)
    assert T.rel_norm(1) == T.gamma
    assert T.rel_norm(ZERO) == ZERO
    images = [T.rel_norm(k) for k in range(T.order)]
    assert all(T.in_subfield(v) for v in images)
    vals, freq = np.unique(images, return_counts=True)
    assert len(vals) == T.sub_order
    assert set(freq.tolist()) == {T.q**n + 1}
    rng = random.Random(3)
    for _ in range(20):
        x, y = rng.randrange(T.order), rng.randrange(T.order)
        assert T.mul(T.rel_norm(x), T.rel_norm(y)) == T.rel_norm(T.mul(x, y))


@pytest.mark.parametrize("p,e,n", TOWERS)
def test_gamma_and_xi_orders(p, e, n):
    T = tables(p, e, n)
    q = T.q
    gamma_order = T.order // np.gcd(T.gamma, T.order)
    xi_order = T.order // np.gcd(T.xi, T.order)
    assert gamma_order == q**n - 1
    assert xi_order == (q ** (2 * n) - 1) * (q - 1) // (q**n - 1)


@pytest.mark.parametrize("p,e,n", TOWERS)
def test_coords(p, e, n):
    T = tables(p, e, n)
    assert T.coords(ZERO) == (0,) * (2 * n)
    assert T.coords(1) == (0, 1) + (0,) * (2 * n - 2)
    rows = {T.coords(k) for k in range(-1, T.order)}
    assert len(rows) == T.order + 1
    rng = random.Random(4)
    for _ in range(30):
        x, y = rng.randrange(-1, T.order), rng.randrange(-1, T.order)
        s = T.coords(T.add(x, y))
        assert s == tuple(int(T.label_add[a, b]) for a, b in zip(T.coords(x), T.coords(y)))
        assert T.from_coords(T.coords(x)) == x


def test_label_arithmetic_matches_prime_field():
    T = tables(3, 1, 2)
    for a in range(3):
        for b in range(3):
            assert T.label_add[a, b] == (a + b) % 3
            assert T.label_mul[a, b] == (a * b) % 3


def test_gf4_labels_form_a_field():
    T = tables(2, 2, 2)
    add, mul = T.label_add, T.label_mul
    assert (add == add.T).all() and (mul == mul.T).all()
    for a in range(1, 4):
        assert sorted(mul[a, 1:].tolist()) == [1, 2, 3]
        assert mul[a, T.label_inv[a]] == 1
