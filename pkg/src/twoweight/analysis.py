"""Hyperplane spectra and the counts behind the two-weight property."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .construction import TwoWeightSet
from .projective import PointSet, ProjectiveSpace
from .singer import build_quadrics

BLOCK_ENTRIES = 1 << 21


def _exact_div(num: int, den: int) -> int:
    quo, rem = divmod(num, den)
    if rem:
        raise ValueError(f"{num}/{den} is not an integer")
    return quo


def expected_weights(q: int, n: int) -> tuple[int, int]:
    """Intersection sizes (large, small) of the two-weight set in PG(3n-1, q)."""
    if q < 2 or n < 2:
        raise ValueError("need q >= 2 and n >= 2")
    w1 = _exact_div(q ** (2 * n) - q ** (2 * n - 1) + q**n - q, q - 1)
    w2 = _exact_div(q ** (2 * n) - q ** (2 * n - 1) - q ** (n + 1) + 2 * q**n - q, q - 1)
    return w1, w2


def blowup_weights(q: int, n: int, d: int) -> tuple[int, int]:
    """Weights of the blow-up of a maximal d-arc of PG(2, q^n) into PG(3n-1, q)."""
    Q = q**n
    if not (1 < d < Q) or Q % d:
        raise ValueError(f"d={d} must divide q^n={Q} with 1 < d < q^n")
    g = _exact_div(q ** (n - 1) - 1, q - 1)
    return (Q * d - Q + d) * g, d * _exact_div(Q - 1, q - 1) + (Q * d - Q) * g


@dataclass
class SpectrumCertificate:
    histogram: dict[int, int]
    expected: tuple[int, int]
    classes: dict[str, dict[int, int]]
    set_size: int
    params: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @property
    def support(self) -> set[int]:
        return set(self.histogram)

    @property
    def verdict(self) -> bool:
        return self.support == set(self.expected)

    @property
    def num_weights(self) -> int:
        return len(self.histogram)

    def as_dict(self) -> dict:
        def keyed(h):
            return {str(k): v for k, v in sorted(h.items(), reverse=True)}

        return {
            "histogram": keyed(self.histogram),
            "expected": list(self.expected),
            "verdict": "pass" if self.verdict else "fail",
            "set_size": self.set_size,
            "hyperplane_classes": {k: keyed(v) for k, v in self.classes.items()},
        }


def _points_of(obj) -> PointSet:
    return obj.points if isinstance(obj, TwoWeightSet) else obj


def intersection_counts(space: ProjectiveSpace, point_set, threads: int = 1) -> np.ndarray:
    """|H cap S| for every hyperplane H, in functional-index order."""
    pts = _points_of(point_set).indices
    xs, ys = space.rep_x[pts], space.rep_y[pts]
    total = space.num_points
    step = max(1, BLOCK_ENTRIES // max(1, len(pts)))
    counts = np.zeros(total, dtype=np.int64)

    def work(start):
        stop = min(total, start + step)
        a = space.rep_x[start:stop, None]
        b = space.rep_y[start:stop, None]
        vals = space.pairing(a, b, xs[None, :], ys[None, :])
        counts[start:stop] = (vals == 0).sum(axis=1)

    starts = range(0, total, step)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, starts))
    else:
        for s in starts:
            work(s)
    return counts


def _histogram(values) -> dict[int, int]:
    sizes, freq = np.unique(np.asarray(values), return_counts=True)
    return {int(s): int(f) for s, f in zip(sizes, freq)}


def hyperplane_spectrum(space: ProjectiveSpace, point_set, threads: int = 1) -> SpectrumCertificate:
    counts = intersection_counts(space, point_set, threads)
    M, m = space.M, space.m
    classes = {
        # functional (a, 0) annihilates all of Pi, (0, b) all of Lambda
        "contains_pi": _histogram(counts[:M]),
        "contains_lambda": _histogram(counts[M : M + m]),
        "mixed": _histogram(counts[M + m :]),
    }
    T = space.tables
    prov = point_set.provenance if isinstance(point_set, TwoWeightSet) else {}
    return SpectrumCertificate(
        histogram=_histogram(counts),
        expected=expected_weights(T.q, T.n),
        classes=classes,
        set_size=len(_points_of(point_set)),
        params=T.describe(),
        provenance=dict(prov),
    )


def section_sizes(q: int, n: int) -> dict[str, int]:
    """Sizes of a hyperplane section of an elliptic quadric of PG(2n-1, q)."""
    return {
        "parabolic": _exact_div(q ** (2 * n - 2) - 1, q - 1),
        "cone": 1 + q * _exact_div((q ** (n - 1) + 1) * (q ** (n - 2) - 1), q - 1),
    }


class ProofCaseError(RuntimeError):
    pass


def proof_case_counts(space: ProjectiveSpace, tws: TwoWeightSet) -> dict:
    """Recheck the intermediate counts of the three hyperplane cases.

    For a mixed functional (a, b) the Lambda-part is lam = {Tr(ax) = 0} and
    the Pi-part is the hyperplane Tr(by) = 0 of Pi, whose partner quadric is
    Q_b.  The section lam cap Q_b is classified by size, the codimension-2
    space <lam, pi> is counted against (section)(q-1) + |pi|, and the full
    hyperplane count is recorded per branch.
    """
    T = space.tables
    q, n = T.q, T.n
    w1, w2 = expected_weights(q, n)
    sizes = section_sizes(q, n)
    pi_hyp = (q ** (n - 1) - 1) // (q - 1)
    quads = build_quadrics(space)
    quad_mask = np.array([Q.points.mask[: space.M] for Q in quads])  # (m, M)

    pts = tws.points.indices
    xs, ys = space.rep_x[pts], space.rep_y[pts]
    lam_x = space.rep_x[: space.M]
    full = intersection_counts(space, tws)

    branch_counts = {"parabolic": {}, "cone": {}}
    identity_failures = 0
    start = space.M + space.m
    step = max(1, BLOCK_ENTRIES // max(1, len(pts) + space.M))
    for s0 in range(start, space.num_points, step):
        s1 = min(space.num_points, s0 + step)
        a = space.rep_x[s0:s1, None]
        b = space.rep_y[s0:s1, None]
        in_lam = T.vtrace_big(T.vmul(a, lam_x[None, :])) == 0  # (B, M)
        bidx = (b[:, 0] // T.norm_exp) % space.m  # quadric index of Q_b (up to GF(q)^*)
        section = (in_lam & quad_mask[bidx]).sum(axis=1)
        both = (T.vtrace_big(T.vmul(a, xs[None, :])) == 0) & (
            T.vtrace_sub(T.vmul(b, ys[None, :])) == 0
        )
        sub_count = both.sum(axis=1)
        for sec, sub, tot in zip(section.tolist(), sub_count.tolist(), full[s0:s1].tolist()):
            kind = next((k for k, v in sizes.items() if v == sec), None)
            if kind is None:
                raise ProofCaseError(f"section of size {sec} matches neither branch")
            if sub != sec * (q - 1) + pi_hyp:
                identity_failures += 1
            branch_counts[kind][tot] = branch_counts[kind].get(tot, 0) + 1

    contains_lambda = set(full[space.M : start].tolist())
    contains_pi = set(full[: space.M].tolist())
    report = {
        "section_sizes": sizes,
        "branches": {
            k: {str(t): c for t, c in sorted(v.items())} for k, v in branch_counts.items()
        },
        "mixed_hyperplanes": int(space.num_points - start),
        "codim2_identity_failures": identity_failures,
        "contains_lambda_sizes": sorted(contains_lambda),
        "contains_pi_sizes": sorted(contains_pi),
    }
    report["consistent"] = bool(
        identity_failures == 0
        and contains_lambda == {w2}
        and contains_pi == {w1}
        and set(branch_counts["parabolic"]) <= {w1}
        and set(branch_counts["cone"]) <= {w2}
    )
    return report


def geometric_containment(space: ProjectiveSpace, tws) -> dict:
    """Search every (n-1)-space inside the set; the expected outcome is Pi alone."""
    dim = space.n - 1
    found = space.subspace_contained(_points_of(tws), dim)
    pi = tuple(space.pi_set().indices.tolist())
    only_pi = found == [pi]
    return {
        "dimension": dim,
        "subspaces_found": len(found),
        "only_pi": only_pi,
        "conclusion": "not geometric" if only_pi else "see subspaces",
        "subspaces": [list(s) for s in found] if not only_pi else [],
    }
