"""File formats: point sets, certificates, generator matrices, edge lists."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .construction import TwoWeightSet
from .projective import ProjectiveSpace

POINTSET_FORMAT = "twoweight-pointset/1"


def format_label(label: int, p: int, e: int) -> str:
    """A GF(q) label as its e base-p digits, most significant first."""
    return "".join(str((label // p**j) % p) for j in reversed(range(e)))


def parse_label(token: str, p: int) -> int:
    value = 0
    for ch in token:
        d = int(ch)
        if d >= p:
            raise ValueError(f"digit {d} out of range for p={p}")
        value = value * p + d
    return value


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def pointset_text(space: ProjectiveSpace, tws: TwoWeightSet) -> str:
    T = space.tables
    header = {
        "format": POINTSET_FORMAT,
        "p": T.p,
        "e": T.e,
        "n": T.n,
        "modulus": list(T.params.modulus),
        "points": len(tws),
        "provenance": tws.provenance,
    }
    lines = [json.dumps(header, sort_keys=True)]
    for row in space.coordinates(tws.points.indices).tolist():
        lines.append(" ".join(format_label(c, T.p, T.e) for c in row))
    return "\n".join(lines) + "\n"


def write_pointset(path, space: ProjectiveSpace, tws: TwoWeightSet) -> Path:
    path = Path(path)
    path.write_text(pointset_text(space, tws))
    return path


def read_pointset_header(path) -> dict:
    with open(path) as fh:
        return json.loads(fh.readline())


def read_pointset(path, space: ProjectiveSpace) -> TwoWeightSet:
    lines = Path(path).read_text().splitlines()
    header = json.loads(lines[0])
    if header.get("format") != POINTSET_FORMAT:
        raise ValueError(f"{path}: not a point-set file")
    T = space.tables
    if (header["p"], header["e"], header["n"]) != (T.p, T.e, T.n) or tuple(
        header["modulus"]
    ) != T.params.modulus:
        raise ValueError(f"{path}: written for a different tower")
    rows = [[parse_label(tok, T.p) for tok in line.split()] for line in lines[1:] if line.strip()]
    if any(len(r) != 3 * T.n for r in rows):
        raise ValueError(f"{path}: expected {3 * T.n} coordinates per point")
    idx = space.indices_from_coordinates(np.array(rows, dtype=np.int64).reshape(-1, 3 * T.n))
    prov = dict(header.get("provenance") or {})
    return TwoWeightSet(space.point_set(idx), prov, T.describe())


def generator_text(G: np.ndarray, q: int) -> str:
    sep = " " if q <= 9 else ","
    return "".join(sep.join(str(v) for v in row) + "\n" for row in G.tolist())


def write_edges(path, edges) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        for u, w in edges:
            fh.write(f"{u} {w}\n")
    return path
