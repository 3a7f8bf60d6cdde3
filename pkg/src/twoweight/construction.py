"""The two-weight set built as a union of baseless cones and as a group orbit."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .projective import PointSet, ProjectiveSpace
from .singer import build_quadrics, xi_orbits


class CorrespondenceError(ValueError):
    pass


@dataclass(frozen=True)
class Correspondence:
    """perm[j] is the orbit attached to the Pi-point gamma^j."""

    perm: tuple[int, ...]
    anti_isomorphic: bool


@dataclass
class TwoWeightSet:
    points: PointSet
    provenance: dict
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)


def pi_hyperplanes(space: ProjectiveSpace) -> np.ndarray:
    """incidence[s, j]: Tr(gamma^s * gamma^j) = 0, i.e. Pi-point j on hyperplane s of Pi."""
    T = space.tables
    s = np.arange(space.m)[:, None]
    j = np.arange(space.m)[None, :]
    return T.vtrace_sub(T.vmul(s * T.norm_exp, j * T.norm_exp)) == 0


def _orbit_in_quadric(space: ProjectiveSpace) -> np.ndarray:
    # contained[s, i]: orbit i lies inside the quadric with parameter gamma^s
    quads, orbits = build_quadrics(space), xi_orbits(space)
    return np.array([[q.points.mask[o.points.indices].all() for o in orbits] for q in quads])


def is_anti_isomorphism(space: ProjectiveSpace, perm) -> bool:
    """Whether perm sends every hyperplane of Pi onto the orbits inside one quadric."""
    on_hyp = pi_hyperplanes(space)
    contained = _orbit_in_quadric(space)
    stars = {frozenset(np.flatnonzero(row).tolist()) for row in contained}
    perm = np.asarray(perm)
    return all(frozenset(perm[np.flatnonzero(row)].tolist()) in stars for row in on_hyp)


def make_correspondence(space: ProjectiveSpace, perm) -> Correspondence:
    perm = tuple(int(v) for v in perm)
    if sorted(perm) != list(range(space.m)):
        raise CorrespondenceError(f"not a bijection onto the {space.m} orbits: {perm}")
    return Correspondence(perm, is_anti_isomorphism(space, perm))


def alpha_correspondence(space: ProjectiveSpace) -> Correspondence:
    """gamma^i -> I_i, checked against Tr(a gamma^i) = 0 <=> I_i inside Q_a."""
    on_hyp = pi_hyperplanes(space)
    contained = _orbit_in_quadric(space)
    # quadric parameter gamma^s pairs with the hyperplane Tr(gamma^s y) = 0
    if not np.array_equal(on_hyp, contained):
        raise CorrespondenceError("alpha does not reverse incidence")
    return Correspondence(tuple(range(space.m)), True)


def _params(space: ProjectiveSpace) -> dict:
    return space.tables.describe()


def geometric_set(space: ProjectiveSpace, corr: Correspondence) -> TwoWeightSet:
    """Union over Pi-points p_j of the cone p_j I_perm[j] with its base removed."""
    if sorted(corr.perm) != list(range(space.m)):
        raise CorrespondenceError("correspondence is not bijective")
    T = space.tables
    orbits = xi_orbits(space)
    lams = np.arange(T.q - 1) * T.base_step
    cones = []
    for j, o in enumerate(corr.perm):
        apex_y = j * T.norm_exp
        base = space.rep_x[orbits[o].points.indices]
        # lam * (orbit point) + apex, lam in GF(q)^*
        xs = T.vmul(base[:, None], lams[None, :]).ravel()
        cone = space.indices_of(xs, np.full_like(xs, apex_y))
        cones.append(np.append(cone, space.M + j))
    allpts = np.concatenate(cones)
    if len(np.unique(allpts)) != len(allpts):
        raise CorrespondenceError("cones are not disjoint")
    prov = {
        "construction": "geometric",
        "correspondence": list(corr.perm),
        "anti_isomorphic": corr.anti_isomorphic,
    }
    return TwoWeightSet(space.point_set(allpts), prov, _params(space))


def algebraic_set(space: ProjectiveSpace) -> TwoWeightSet:
    """Orbit of (1, 1) under diag(beta, gamma), together with Pi."""
    T = space.tables
    k = np.arange(T.order, dtype=np.int64)
    orbit = space.indices_of(k, (k * T.norm_exp) % T.order)
    if len(np.unique(orbit)) != T.order:
        raise RuntimeError("orbit of (1,1) is not regular")
    pts = np.concatenate([orbit, np.arange(space.M, space.M + space.m)])
    prov = {"construction": "algebraic", "correspondence": None, "anti_isomorphic": None}
    return TwoWeightSet(space.point_set(pts), prov, _params(space))


def sets_equal(s1: TwoWeightSet, s2: TwoWeightSet) -> bool:
    if s1.params.get("modulus") != s2.params.get("modulus") or any(
        s1.params.get(k) != s2.params.get(k) for k in ("p", "e", "n")
    ):
        raise ValueError("sets live on different towers")
    return s1.points == s2.points


def bijection_experiment(space: ProjectiveSpace, corr: Correspondence, threads: int = 1):
    from .analysis import hyperplane_spectrum

    return hyperplane_spectrum(space, geometric_set(space, corr), threads=threads)


def lambda_control(space: ProjectiveSpace) -> TwoWeightSet:
    """Lambda itself, used as a negative control for the certifier."""
    prov = {"construction": "lambda", "correspondence": None, "anti_isomorphic": None}
    return TwoWeightSet(space.lambda_set(), prov, _params(space))

