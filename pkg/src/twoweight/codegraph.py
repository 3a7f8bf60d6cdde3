"""The linear two-weight code and the strongly regular Cayley graph of a point set."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analysis import SpectrumCertificate, hyperplane_spectrum
from .field_tower import FieldTables
from .projective import ProjectiveSpace
from .singer import gf_rank

DEFAULT_VERTEX_CAP = 20_000
MATRIX_PAIR_LIMIT = 4096  # explicit all-pairs adjacency squaring up to this many vertices


class VerificationError(RuntimeError):
    pass


@dataclass
class CodeArtifact:
    generator: np.ndarray  # (3n, len) labels over GF(q)
    weights: dict[int, int]  # nonzero weight -> codeword count
    rank: int
    samples_checked: int = 0

    @property
    def length(self) -> int:
        return self.generator.shape[1]

    def as_dict(self) -> dict:
        return {
            "nk": [self.length, self.rank],
            "weights": {str(w): c for w, c in sorted(self.weights.items())},
            "random_codewords_checked": self.samples_checked,
        }


@dataclass
class GraphArtifact:
    v: int
    k: int
    lam: int
    mu: int
    method: str
    diff_mask: np.ndarray = field(repr=False)
    pairs_checked: int = 0

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "k": self.k,
            "lambda": self.lam,
            "mu": self.mu,
            "method": self.method,
            "pairs_checked": self.pairs_checked,
        }


def encode_message(T: FieldTables, msg, G: np.ndarray) -> np.ndarray:
    """Codeword msg * G over GF(q), all in labels."""
    word = np.zeros(G.shape[1], dtype=np.int64)
    for coef, row in zip(np.asarray(msg).tolist(), G):
        if coef:
            word = T.label_add[word, T.label_mul[coef, row]]
    return word


def export_code(
    space: ProjectiveSpace,
    point_set,
    spectrum: SpectrumCertificate | None = None,
    samples: int = 128,
    seed: int = 0,
) -> CodeArtifact:
    """Generator matrix with the points as columns; weights read off the spectrum.

    A hyperplane meeting the set in w points gives q-1 codewords of weight
    len - w.  ``samples`` random messages are encoded directly as a check.
    """
    T = space.tables
    pts = point_set.points if hasattr(point_set, "points") else point_set
    G = space.coordinates(pts.indices).T.copy()
    rank = gf_rank(T, G)
    if rank < G.shape[0]:
        raise VerificationError(f"generator matrix has rank {rank} < {G.shape[0]}")
    if spectrum is None:
        spectrum = hyperplane_spectrum(space, point_set)
    length = G.shape[1]
    weights = {}
    for size, count in spectrum.histogram.items():
        if length - size:
            weights[length - size] = weights.get(length - size, 0) + (T.q - 1) * count

    rng = np.random.default_rng(seed)
    checked = 0
    for _ in range(samples):
        msg = rng.integers(0, T.q, size=G.shape[0])
        if not msg.any():
            continue
        w = int(np.count_nonzero(encode_message(T, msg, G)))
        if w not in weights:
            raise VerificationError(f"codeword of weight {w} outside {sorted(weights)}")
        checked += 1
    return CodeArtifact(G, weights, rank, checked)


def brute_force_weights(T: FieldTables, G: np.ndarray) -> dict[int, int]:
    """Weight distribution by encoding every nonzero message."""
    k = G.shape[0]
    msgs = np.indices((T.q,) * k).reshape(k, -1).T[1:]
    words = np.zeros((len(msgs), G.shape[1]), dtype=np.int64)
    for i in range(k):
        words = T.label_add[words, T.label_mul[msgs[:, i][:, None], G[i][None, :]]]
    sizes, freq = np.unique(np.count_nonzero(words, axis=1), return_counts=True)
    return {int(s): int(f) for s, f in zip(sizes, freq)}


# vertex i of the Cayley graph is the vector with base-q digits of i, coordinate 0 lowest


def vertex_digits(q: int, dim: int) -> np.ndarray:
    return np.indices((q,) * dim)[::-1].reshape(dim, -1).T


def digits_to_index(q: int, digits: np.ndarray) -> np.ndarray:
    return digits @ (q ** np.arange(digits.shape[-1]))


def difference_set(space: ProjectiveSpace, point_set) -> np.ndarray:
    """Membership mask over all q^3n vectors of the nonzero multiples of the points."""
    T = space.tables
    pts = point_set.points if hasattr(point_set, "points") else point_set
    rows = space.coordinates(pts.indices)
    dim = rows.shape[1]
    mask = np.zeros(T.q**dim, dtype=bool)
    for lam in range(1, T.q):
        mask[digits_to_index(T.q, T.label_mul[lam, rows])] = True
    return mask


def export_graph(
    space: ProjectiveSpace,
    point_set,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    sample_pairs: int = 200_000,
    seed: int = 0,
) -> GraphArtifact:
    """Strong regularity of the Cayley graph on GF(q)^3n with connection set D.

    Up to ``MATRIX_PAIR_LIMIT`` vertices the adjacency matrix is squared and
    every vertex pair is read off.  Up to ``vertex_cap`` the common-neighbour
    count is computed for every difference vector (each pair u, w has exactly
    |D cap (D + u - w)| common neighbours).  Beyond the cap only random pairs
    are sampled and the method says so.
    """
    T = space.tables
    q = T.q
    dim = 3 * T.n
    v = q**dim
    D = difference_set(space, point_set)
    if D[0] or not np.array_equal(D, D[_neg_index(T, dim)]):
        raise VerificationError("connection set is not symmetric")
    k = int(D.sum())
    digs = vertex_digits(q, dim)

    if v <= MATRIX_PAIR_LIMIT:
        A = np.zeros((v, v), dtype=np.float32)
        for u in range(v):
            diff = T.label_sub[digs[u][None, :], digs]
            A[u] = D[digits_to_index(q, diff)]
        common = (A @ A).astype(np.int64)
        adj = A.astype(bool)
        off = ~np.eye(v, dtype=bool)
        lam_vals = np.unique(common[adj])
        mu_vals = np.unique(common[~adj & off])
        degrees = np.unique(adj.sum(axis=1))
        method, pairs = "all_pairs_matrix", v * (v - 1) // 2
    elif v <= vertex_cap:
        members = np.flatnonzero(D)
        counts = np.zeros(v, dtype=np.int64)
        for s in members:
            shifted = T.label_add[digs[s][None, :], digs]
            counts += D[digits_to_index(q, shifted)]
        lam_vals = np.unique(counts[D])
        nonadj = ~D
        nonadj[0] = False
        mu_vals = np.unique(counts[nonadj])
        degrees = np.array([k])
        method, pairs = "all_differences", v * (v - 1) // 2
    else:
        rng = np.random.default_rng(seed)
        u = rng.integers(0, v, size=sample_pairs)
        w = rng.integers(0, v, size=sample_pairs)
        keep = u != w
        u, w = u[keep], w[keep]
        diff = digits_to_index(q, T.label_sub[digs[u], digs[w]])
        members = np.flatnonzero(D)
        counts = np.zeros(len(diff), dtype=np.int64)
        for s in members:
            counts += D[digits_to_index(q, T.label_add[digs[s][None, :], digs[diff]])]
        lam_vals = np.unique(counts[D[diff]])
        mu_vals = np.unique(counts[~D[diff]])
        degrees = np.array([k])
        method, pairs = "sampled_pairs_only", len(diff)

    if len(degrees) != 1 or len(lam_vals) != 1 or len(mu_vals) != 1:
        raise VerificationError(
            f"not strongly regular: degrees {degrees.tolist()}, "
            f"lambda {lam_vals.tolist()}, mu {mu_vals.tolist()}"
        )
    return GraphArtifact(v, k, int(lam_vals[0]), int(mu_vals[0]), method, D, pairs)


def _neg_index(T: FieldTables, dim: int) -> np.ndarray:
    digs = vertex_digits(T.q, dim)
    return digits_to_index(T.q, T.label_neg[digs])


def srg_from_spectrum(q: int, set_size: int, weights: tuple[int, int]) -> tuple[int, int, int]:
    """(k, lambda, mu) predicted by the eigenvalues q*w - |S| of the Cayley graph."""
    k = (q - 1) * set_size
    r, s = (q * w - set_size for w in sorted(weights, reverse=True))
    mu = k + r * s
    return k, mu + r + s, mu


def edge_list(T: FieldTables, graph: GraphArtifact):
    """Yield (u, w) with u < w for every edge, vertices in vector-index order."""
    dim = 3 * T.n
    digs = vertex_digits(T.q, dim)
    for u in range(graph.v):
        diff = digits_to_index(T.q, T.label_sub[digs[u + 1 :], digs[u][None, :]])
        for w in (np.flatnonzero(graph.diff_mask[diff]) + u + 1).tolist():
            yield u, w
