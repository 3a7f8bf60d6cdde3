"""Elliptic quadrics Q_a and the <xi>-orbits inside Lambda = PG(2n-1, q).

Lambda-point i is the class of beta^i.  The quadric with parameter gamma^s
is ``{x : Tr(gamma^s * x^(q^n+1)) = 0}`` and orbit i is the <xi>-orbit of
beta^i, xi = beta^((q^n-1)/(q-1)).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .field_tower import ZERO, FieldTables
from .projective import PointSet, ProjectiveSpace


class StructureError(RuntimeError):
    """An orbit or incidence fails the expected structure."""


@dataclass(frozen=True)
class Quadric:
    index: int  # parameter a = gamma^index, 0 <= index < m
    a: int  # exponent of a in GF(q^2n)
    points: PointSet

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class SingerOrbit:
    index: int
    points: PointSet

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class OrbitStructure:
    kind: str  # "cap" or "line_union"
    lines: tuple[tuple[int, ...], ...] = ()


@dataclass
class GammaSpace:
    """Incidence between orbits (rows) and quadrics (columns)."""

    incidence: np.ndarray
    partial: int  # orbit/quadric pairs meeting in some but not all orbit points
    intersections_checked: int = 0
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "incidence": self.incidence.astype(int).tolist(),
            "partial_intersections": self.partial,
            "orbits_per_quadric": sorted(set(self.incidence.sum(axis=0).tolist())),
            "quadrics_per_orbit": sorted(set(self.incidence.sum(axis=1).tolist())),
            "independent_families_checked": self.intersections_checked,
            **self.details,
        }


def quadric_values(T: FieldTables, a: int, xs) -> np.ndarray:
    """GF(q) labels of Tr(a * x^(q^n+1)) for an array of exponents."""
    norms = np.where(np.asarray(xs) == ZERO, ZERO, (np.asarray(xs) * T.norm_exp) % T.order)
    return T.vtrace_sub(T.vmul(a, norms))


@functools.lru_cache(maxsize=8)
def build_quadrics(space: ProjectiveSpace) -> list[Quadric]:
    T = space.tables
    lam = np.arange(space.M)
    out = []
    for s in range(space.m):
        a = s * T.norm_exp
        vals = quadric_values(T, a, space.rep_x[lam])
        out.append(Quadric(s, a, space.point_set(lam[vals == 0])))
    return out


def pencil_check(T: FieldTables, a: int, b: int, lam: int, mu: int) -> bool:
    """Linearity of the quadric family in its parameter.

    ``a``, ``b`` are nonzero elements of GF(q^n); ``lam``, ``mu`` elements
    of GF(q), not both zero (all as exponents).
    """
    if a == ZERO or b == ZERO:
        raise ValueError("quadric parameters must be nonzero")
    if lam == ZERO and mu == ZERO:
        raise ValueError("(lambda, mu) must not be (0, 0)")
    if not (T.in_subfield(a) and T.in_subfield(b)):
        raise ValueError("quadric parameters must lie in GF(q^n)")
    if not (T.in_base(lam) and T.in_base(mu)):
        raise ValueError("coefficients must lie in GF(q)")
    c = T.add(T.mul(lam, a), T.mul(mu, b))
    xs = np.arange(T.order)
    va, vb, vc = (quadric_values(T, t, xs) for t in (a, b, c))
    lam_l, mu_l = T.label(lam), T.label(mu)
    combined = T.label_add[T.label_mul[lam_l, va], T.label_mul[mu_l, vb]]
    linear = np.array_equal(combined, vc)
    contained = not ((va == 0) & (vb == 0) & (vc != 0)).any()
    return bool(linear and contained)


@functools.lru_cache(maxsize=8)
def xi_orbits(space: ProjectiveSpace) -> list[SingerOrbit]:
    T = space.tables
    steps = np.arange(T.norm_exp)  # q^n + 1 powers of xi
    out = []
    for i in range(space.m):
        exps = (i + steps * T.xi) % T.order
        out.append(SingerOrbit(i, space.point_set(space.indices_of(exps, np.full_like(exps, ZERO)))))
    return out


def orbit_structure(space: ProjectiveSpace, orbit: SingerOrbit) -> OrbitStructure:
    """Cap (no three collinear) or a partition into pairwise disjoint full lines."""
    pts = orbit.points.indices
    mask = orbit.points.mask
    q = space.q
    on_line = []  # for each pair: orbit points on their joining line
    lines = set()
    for i, a in enumerate(pts):
        rest = pts[i + 1 :]
        if not len(rest):
            break
        others = space.combine(space.rep_x[rest], space.rep_y[rest], space.rep_x[a], space.rep_y[a])
        hits = mask[others].sum(axis=1) + 2
        on_line.append(hits)
        for b, row, h in zip(rest.tolist(), others, hits.tolist()):
            if h == q + 1:
                lines.add(tuple(sorted({int(a), b, *row.tolist()})))
    counts = np.concatenate(on_line) if on_line else np.array([2])
    if (counts == 2).all():
        return OrbitStructure("cap")
    lines = sorted(lines)
    covered = np.concatenate([np.array(l) for l in lines]) if lines else np.array([], dtype=int)
    partial = ((counts > 2) & (counts < q + 1)).any()
    if not partial and len(covered) == len(pts) and len(np.unique(covered)) == len(covered):
        return OrbitStructure("line_union", tuple(lines))
    raise StructureError(f"orbit {orbit.index} is neither a cap nor a union of disjoint lines")


def parameters_independent(T: FieldTables, exps) -> bool:
    """GF(q)-linear independence of elements of GF(q^n)."""
    rows = [list(T.coords_sub(a)) for a in exps]
    return gf_rank(T, np.array(rows, dtype=np.int64)) == len(rows)


def gf_rank(T: FieldTables, mat: np.ndarray) -> int:
    """Rank over GF(q) of a matrix of labels."""
    A = np.array(mat, dtype=np.int64, copy=True)
    if A.size == 0:
        return 0
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if A[r, c]), None)
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        A[rank] = T.label_mul[T.label_inv[A[rank, c]], A[rank]]
        for r in range(rows):
            if r != rank and A[r, c]:
                factor = T.label_neg[A[r, c]]
                A[r] = T.label_add[A[r], T.label_mul[factor, A[rank]]]
        rank += 1
        if rank == rows:
            break
    return rank


def orbit_quadric_incidence(
    space: ProjectiveSpace, quadrics: list[Quadric], orbits: list[SingerOrbit]
) -> GammaSpace:
    T = space.tables
    n_o, n_q = len(orbits), len(quadrics)
    inc = np.zeros((n_o, n_q), dtype=bool)
    partial = 0
    for i, orb in enumerate(orbits):
        for j, quad in enumerate(quadrics):
            meet = int(quad.points.mask[orb.points.indices].sum())
            if meet == len(orb):
                inc[i, j] = True
            elif meet:
                partial += 1
    if partial:
        raise StructureError(f"{partial} orbit/quadric pairs intersect partially")
    expected = (T.q ** (T.n - 1) - 1) // (T.q - 1)
    if set(inc.sum(axis=0).tolist()) != {expected} or set(inc.sum(axis=1).tolist()) != {expected}:
        raise StructureError("orbit/quadric incidence is not that of PG(n-1, q)")

    # any n-1 independent quadrics meet in exactly one orbit
    checked = 0
    for combo in itertools.combinations(range(n_q), T.n - 1):
        if not parameters_independent(T, [quadrics[j].a for j in combo]):
            continue
        common = np.logical_and.reduce([quadrics[j].points.mask for j in combo])
        hits = [o.index for o in orbits if common[o.points.indices].all()]
        if len(hits) != 1 or int(common.sum()) != len(orbits[hits[0]]):
            raise StructureError(f"quadrics {combo} do not meet in a single orbit")
        checked += 1
    return GammaSpace(inc, partial, checked)
