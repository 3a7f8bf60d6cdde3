"""Field model of PG(3n-1, q).

A point is a class of pairs (x, y) with x in GF(q^2n), y in GF(q^n), not both
zero, modulo GF(q)^*.  Points get dense indices in the order

* Lambda = {(x, 0)}: index i for the class of (beta^i, 0), 0 <= i < M;
* Pi = {(0, y)}: index M + j for the class of (0, gamma^j), 0 <= j < m;
* mixed points: index M + m + j*N + k for the class of (beta^k, gamma^j),

with N = q^2n - 1, M = N/(q-1), m = (q^n - 1)/(q-1).  The pair with that
exponent pattern is the *index representative*; the *canonical form* is the
scaling whose last nonzero coordinate (coords(x) then coords(y)) is 1.

Hyperplanes are trace functionals (a, b) : Tr(a x) + Tr(b y) = 0 and are
indexed by exactly the same scheme.
"""

from __future__ import annotations

from functools import cached_property
from typing import NamedTuple

import numpy as np

from .field_tower import ZERO, FieldTables


class ProjPoint(NamedTuple):
    x: int
    y: int
    index: int


class HyperplaneFunctional(NamedTuple):
    a: int
    b: int
    index: int


class PointSet:
    """Sorted point indices plus a membership mask over the whole space."""

    def __init__(self, indices, num_points: int):
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if len(idx) and (idx[0] < 0 or idx[-1] >= num_points):
            raise ValueError("point index out of range")
        self.indices = idx
        self.mask = np.zeros(num_points, dtype=bool)
        self.mask[idx] = True
        self.indices.setflags(write=False)
        self.mask.setflags(write=False)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return bool(self.mask[int(i)])

    def __iter__(self):
        return iter(self.indices.tolist())

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return len(self.mask) == len(other.mask) and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash(self.indices.tobytes())

    def __repr__(self):
        return f"PointSet({len(self)} of {len(self.mask)})"


class ProjectiveSpace:
    def __init__(self, tables: FieldTables):
        self.tables = T = tables
        self.q, self.n = T.q, T.n
        self.N = T.order
        self.M = T.base_step  # |Lambda|
        self.m = T.xi_exp  # |Pi|
        self.num_points = self.M + self.m + self.m * self.N
        self.dimension = 3 * T.n - 1

        # index representatives, shared by points and functionals
        idx = np.arange(self.num_points, dtype=np.int64)
        rx = np.full(self.num_points, ZERO, dtype=np.int64)
        ry = np.full(self.num_points, ZERO, dtype=np.int64)
        rx[: self.M] = idx[: self.M]
        ry[self.M : self.M + self.m] = np.arange(self.m) * T.norm_exp
        r = idx[self.M + self.m :] - self.M - self.m
        rx[self.M + self.m :] = r % self.N
        ry[self.M + self.m :] = (r // self.N) * T.norm_exp
        self.rep_x, self.rep_y = rx, ry
        rx.setflags(write=False)
        ry.setflags(write=False)

    # -- indexing and canonical form ------------------------------------

    def indices_of(self, xs, ys) -> np.ndarray:
        """Dense indices of the classes of the pairs (xs[i], ys[i])."""
        T = self.tables
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if ((xs == ZERO) & (ys == ZERO)).any():
            raise ValueError("zero vector is not a projective point")
        jy = np.where(ys == ZERO, 0, ys // T.norm_exp)
        t, j = jy // self.m, jy % self.m
        xshift = (xs - t * self.M) % self.N
        mixed = self.M + self.m + j * self.N + xshift
        out = np.where(xs == ZERO, self.M + j, mixed)
        return np.where(ys == ZERO, xs % self.M, out)

    def index_of(self, x: int, y: int) -> int:
        T = self.tables
        if y != ZERO and not T.in_subfield(y):
            raise ValueError("y must lie in GF(q^n)")
        return int(self.indices_of([T.reduce(x)], [T.reduce(y)])[0])

    def _lead_exponents(self, xs, ys) -> np.ndarray:
        # exponent of the last nonzero coordinate of coords(x) || coords(y)
        T = self.tables
        lead_big, lead_sub = self._lead_tables
        return np.where(ys == ZERO, lead_big[np.where(xs == ZERO, T.order, xs)],
                        lead_sub[np.where(ys == ZERO, 0, ys // T.norm_exp)])

    @cached_property
    def _lead_tables(self):
        T = self.tables
        return self._last_nonzero(T.coord_table), self._last_nonzero(T.sub_coord_table)

    def _last_nonzero(self, table: np.ndarray) -> np.ndarray:
        T = self.tables
        nz = table != 0
        pos = table.shape[1] - 1 - np.argmax(nz[:, ::-1], axis=1)
        labels = table[np.arange(len(table)), pos]
        return np.where(nz.any(axis=1), T.label_to_exp[labels], ZERO)

    def canonical_pairs(self, indices) -> tuple[np.ndarray, np.ndarray]:
        idx = np.asarray(indices, dtype=np.int64)
        xs, ys = self.rep_x[idx], self.rep_y[idx]
        lead = self._lead_exponents(xs, ys)
        cx = np.where(xs == ZERO, ZERO, (xs - lead) % self.N)
        cy = np.where(ys == ZERO, ZERO, (ys - lead) % self.N)
        return cx, cy

    def canonicalize(self, x: int, y: int) -> ProjPoint:
        if x == ZERO and y == ZERO:
            raise ValueError("zero vector is not a projective point")
        i = self.index_of(x, y)
        cx, cy = self.canonical_pairs([i])
        return ProjPoint(int(cx[0]), int(cy[0]), i)

    def point(self, index: int) -> ProjPoint:
        cx, cy = self.canonical_pairs([index])
        return ProjPoint(int(cx[0]), int(cy[0]), int(index))

    def functional(self, index: int) -> HyperplaneFunctional:
        cx, cy = self.canonical_pairs([index])
        return HyperplaneFunctional(int(cx[0]), int(cy[0]), int(index))

    def coordinates(self, indices) -> np.ndarray:
        """Canonical GF(q) coordinate rows (3n labels each) for the given points."""
        T = self.tables
        cx, cy = self.canonical_pairs(indices)
        left = T.coord_table[np.where(cx == ZERO, T.order, cx)]
        right = T.sub_coord_table[np.where(cy == ZERO, T.sub_order, cy // T.norm_exp)]
        return np.hstack([left, right])

    def indices_from_coordinates(self, rows) -> np.ndarray:
        T = self.tables
        out = []
        for row in np.asarray(rows, dtype=np.int64):
            x = T.from_coords(row[: 2 * self.n], "big")
            y = T.from_coords(row[2 * self.n :], "sub")
            out.append(self.index_of(x, y))
        return np.array(out, dtype=np.int64)

    # -- named subsets ---------------------------------------------------

    def lambda_set(self) -> PointSet:
        return PointSet(np.arange(self.M), self.num_points)

    def pi_set(self) -> PointSet:
        return PointSet(np.arange(self.M, self.M + self.m), self.num_points)

    def point_set(self, indices) -> PointSet:
        return PointSet(indices, self.num_points)

    # -- incidence -------------------------------------------------------

    def pairing(self, a, b, xs, ys) -> np.ndarray:
        """Labels of Tr(a x) + Tr(b y); broadcasts over its arguments."""
        T = self.tables
        left = T.vtrace_big(T.vmul(a, xs))
        right = T.vtrace_sub(T.vmul(b, ys))
        return T.label_add[left, right]

    def hyperplane_contains(self, h: HyperplaneFunctional, pt: ProjPoint) -> bool:
        return bool(self.pairing(h.a, h.b, pt.x, pt.y) == 0)

    def hyperplane_points(self, h: HyperplaneFunctional) -> PointSet:
        vals = self.pairing(h.a, h.b, self.rep_x, self.rep_y)
        return PointSet(np.flatnonzero(vals == 0), self.num_points)

    def combine(self, xs, ys, px, py) -> np.ndarray:
        # indices of s + lam * p for every (s, lam), lam in GF(q)^*
        T = self.tables
        lams = np.arange(self.q - 1) * self.M
        X = T.vadd(np.asarray(xs)[:, None], T.vmul(px, lams)[None, :])
        Y = T.vadd(np.asarray(ys)[:, None], T.vmul(py, lams)[None, :])
        return self.indices_of(X.ravel(), Y.ravel()).reshape(X.shape)

    def line_through(self, p1: ProjPoint | int, p2: ProjPoint | int) -> list[ProjPoint]:
        i1 = p1.index if isinstance(p1, ProjPoint) else int(p1)
        i2 = p2.index if isinstance(p2, ProjPoint) else int(p2)
        if i1 == i2:
            raise ValueError("a line needs two distinct points")
        others = self.combine(self.rep_x[[i1]], self.rep_y[[i1]], self.rep_x[i2], self.rep_y[i2])
        idx = sorted({i1, i2, *others.ravel().tolist()})
        return [self.point(i) for i in idx]

    def span_with(self, subspace, p: int) -> np.ndarray:
        """Point indices of the span of a subspace (given by all its points) and a point."""
        sub = np.asarray(subspace, dtype=np.int64)
        extra = self.combine(self.rep_x[sub], self.rep_y[sub], self.rep_x[p], self.rep_y[p])
        return np.unique(np.concatenate([sub, [p], extra.ravel()]))

    def subspace_contained(self, point_set: PointSet, dim: int) -> list[tuple[int, ...]]:
        """All projective subspaces of dimension ``dim`` whose points all lie in the set.

        Grows subspaces one dimension at a time, keeping only those that stay
        inside the set.  Each subspace is returned as a sorted tuple of indices.
        """
        if dim < 1 or dim > self.dimension:
            raise ValueError(f"dim must lie in 1..{self.dimension}")
        if len(point_set) == 0:
            raise ValueError("empty point set")
        mask = point_set.mask
        members = point_set.indices
        level = [(int(i),) for i in members]
        for _ in range(dim):
            found = {}
            for sub in level:
                sub_arr = np.array(sub, dtype=np.int64)
                done = np.zeros(len(mask), dtype=bool)
                done[sub_arr] = True
                cands = members[members > sub_arr[0]] if len(sub) == 1 else members
                cands = cands[~done[cands]]
                if not len(cands):
                    continue
                # s + lam * c for every s in sub, candidate c
                T = self.tables
                lams = np.arange(self.q - 1) * self.M
                cx, cy = self.rep_x[cands], self.rep_y[cands]
                sx, sy = self.rep_x[sub_arr], self.rep_y[sub_arr]
                X = T.vadd(sx[None, :, None], T.vmul(cx[:, None, None], lams[None, None, :]))
                Y = T.vadd(sy[None, :, None], T.vmul(cy[:, None, None], lams[None, None, :]))
                pts = self.indices_of(X.ravel(), Y.ravel()).reshape(len(cands), -1)
                inside = mask[pts].all(axis=1)
                for c, row in zip(cands[inside].tolist(), pts[inside]):
                    if done[c]:
                        continue
                    span = np.unique(np.concatenate([sub_arr, [c], row]))
                    done[span] = True
                    found.setdefault(tuple(span.tolist()), None)
            level = sorted(found)
        return level


def enumerate_points(space: ProjectiveSpace) -> list[ProjPoint]:
    cx, cy = space.canonical_pairs(np.arange(space.num_points))
    return [ProjPoint(x, y, i) for i, (x, y) in enumerate(zip(cx.tolist(), cy.tolist()))]
