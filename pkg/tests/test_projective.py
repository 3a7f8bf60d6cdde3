import itertools
import random

import numpy as np
import pytest

from conftest import get_space
from oracles import gfp_rank, normalize
from twoweight.field_tower import ZERO
from twoweight.projective import PointSet, enumerate_points


@pytest.mark.parametrize(
    "p,n,total,lam,pi",
    [(3, 2, 364, 40, 4), (2, 2, 63, 15, 3), (3, 3, 9841, 364, 13)],
)
def test_enumerate_points_counts(p, n, total, lam, pi):
    S = get_space(p, 1, n)
    pts = enumerate_points(S)
    assert len(pts) == total
    assert sum(pt.y == ZERO for pt in pts) == lam
    assert sum(pt.x == ZERO for pt in pts) == pi
    assert [pt.index for pt in pts] == list(range(total))
    # Lambda first, then Pi
    assert all(pt.y == ZERO for pt in pts[:lam])
    assert all(pt.x == ZERO for pt in pts[lam : lam + pi])


@pytest.mark.parametrize("p,e,n", [(3, 1, 2), (2, 1, 2), (2, 2, 2)])
def test_canonicalize_classes(p, e, n):
    S = get_space(p, e, n)
    T = S.tables
    scalars = [k * T.base_step for k in range(T.q - 1)]
    ys = [ZERO] + [j * T.norm_exp for j in range(T.sub_order)]
    seen = set()
    for x in range(-1, T.order):
        for y in ys:
            if x == ZERO and y == ZERO:
                continue
            base = S.canonicalize(x, y)
            for lam in scalars:
                assert S.canonicalize(T.mul(lam, x), T.mul(lam, y)) == base
            seen.add(base)
    assert len(seen) == (T.q ** (3 * n) - 1) // (T.q - 1)


def test_canonical_form_has_last_nonzero_one(space_32):
    S = space_32
    T = S.tables
    for pt in enumerate_points(S):
        vec = T.coords(pt.x) + T.coords_sub(pt.y)
        last = [c for c in vec if c][-1]
        assert last == 1
        assert S.canonicalize(pt.x, pt.y) == pt
    pi_point = S.canonicalize(ZERO, 0)
    assert pi_point.x == ZERO and pi_point.y == 0 and pi_point.index == S.M


def test_canonicalize_rejects_zero(space_32):
    with pytest.raises(ValueError):
        space_32.canonicalize(ZERO, ZERO)


def test_coordinates_roundtrip(space_22):
    S = space_22
    rows = S.coordinates(np.arange(S.num_points))
    back = S.indices_from_coordinates(rows)
    assert back.tolist() == list(range(S.num_points))
    assert len({tuple(r) for r in rows.tolist()}) == S.num_points


def test_hyperplane_point_counts(space_32):
    S = space_32
    for i in range(S.num_points):
        h = S.functional(i)
        assert len(S.hyperplane_points(h)) == 121


def test_hyperplane_examples(space_32):
    S = space_32
    T = S.tables
    h = S.functional(5)  # a Lambda-indexed functional (a, 0)
    assert h.b == ZERO
    assert all(S.hyperplane_contains(h, S.point(i)) for i in range(S.M, S.M + S.m))
    rng = random.Random(0)
    for _ in range(5):
        pt = S.point(rng.randrange(S.num_points))
        through = sum(S.hyperplane_contains(S.functional(i), pt) for i in range(S.num_points))
        assert through == (T.q ** (3 * T.n - 1) - 1) // (T.q - 1)


def test_pairing_is_nondegenerate(space_22):
    S = space_22
    patterns = {tuple(S.hyperplane_points(S.functional(i)).indices.tolist())
                for i in range(S.num_points)}
    assert len(patterns) == S.num_points


def test_trace_hyperplanes_are_coordinate_hyperplanes(space_22):
    # every trace hyperplane is {v : h . v = 0} for some dual vector h
    S = space_22
    coords = S.coordinates(np.arange(S.num_points))
    dual_sets = set()
    for h in itertools.product(range(2), repeat=6):
        if any(h):
            dual_sets.add(tuple(np.flatnonzero(coords @ np.array(h) % 2 == 0).tolist()))
    trace_sets = {tuple(S.hyperplane_points(S.functional(i)).indices.tolist())
                  for i in range(S.num_points)}
    assert trace_sets == dual_sets


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2)])
def test_lines_meet_hyperplanes_in_one_or_all(p, n):
    S = get_space(p, 1, n)
    rng = random.Random(5)
    for _ in range(40):
        i, j = rng.sample(range(S.num_points), 2)
        line = [pt.index for pt in S.line_through(i, j)]
        h = S.hyperplane_points(S.functional(rng.randrange(S.num_points)))
        assert sum(k in h for k in line) in (1, p + 1)


def test_line_through(space_32):
    S = space_32
    T = S.tables
    line = S.line_through(S.canonicalize(0, ZERO), S.canonicalize(ZERO, 0))
    assert len(line) == 4
    assert sum(pt.y == ZERO for pt in line) == 1
    assert sum(pt.x == ZERO for pt in line) == 1
    rng = random.Random(6)
    for _ in range(20):
        i, j = rng.sample(range(S.num_points), 2)
        a = {pt.index for pt in S.line_through(i, j)}
        b = {pt.index for pt in S.line_through(j, i)}
        assert a == b and len(a) == T.q + 1
        # oracle: collinear means the coordinate vectors span a plane
        rows = S.coordinates(sorted(a)).tolist()
        assert gfp_rank(rows, 3) == 2
    with pytest.raises(ValueError):
        S.line_through(3, 3)


def test_lambda_and_pi_span_everything(space_32):
    S = space_32
    rows = S.coordinates(np.concatenate([S.lambda_set().indices, S.pi_set().indices]))
    assert gfp_rank(rows.tolist(), 3) == 6
    assert not (S.lambda_set().mask & S.pi_set().mask).any()


def test_subspace_contained_whole_space(space_22):
    S = space_22
    everything = S.point_set(range(S.num_points))
    assert len(S.subspace_contained(everything, 1)) == 651


def test_subspace_contained_single_line(space_32):
    S = space_32
    line = tuple(pt.index for pt in S.line_through(7, 300))
    assert S.subspace_contained(S.point_set(line), 1) == [line]
    with pytest.raises(ValueError):
        S.subspace_contained(S.point_set(line), 0)


def test_subspace_contained_planes(space_22):
    S = space_22
    # a plane plus a stray point: exactly that plane, and its 7 lines
    plane = S.span_with([pt.index for pt in S.line_through(1, 20)], 40)
    assert len(plane) == 7
    stray = next(i for i in range(S.num_points) if i not in set(plane.tolist()))
    ps = S.point_set(np.append(plane, stray))
    assert S.subspace_contained(ps, 2) == [tuple(plane.tolist())]
    assert len(S.subspace_contained(ps, 1)) == 7


def test_point_set_basics():
    ps = PointSet([5, 1, 3, 3], 10)
    assert ps.indices.tolist() == [1, 3, 5]
    assert 3 in ps and 4 not in ps
    assert ps == PointSet([1, 3, 5], 10)
    with pytest.raises(ValueError):
        PointSet([10], 10)


def test_normalize_oracle_agrees_with_canonical_form(space_32):
    S = space_32
    rows = S.coordinates(np.arange(S.num_points)).tolist()
    assert all(tuple(r) == normalize(r, 3) for r in rows)
