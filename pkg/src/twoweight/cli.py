"""Command-line front end: build, certify, experiment.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import geometric_containment, hyperplane_spectrum, proof_case_counts
from .codegraph import DEFAULT_VERTEX_CAP, VerificationError, edge_list, export_code, export_graph
from .construction import (
    CorrespondenceError,
    algebraic_set,
    alpha_correspondence,
    bijection_experiment,
    geometric_set,
    lambda_control,
    make_correspondence,
    sets_equal,
)
from .field_tower import DEFAULT_MAX_ENTRIES, ResourceCapError, build_tower
from .projective import ProjectiveSpace
from .serialize import dumps_json, generator_text, pointset_text, read_pointset, write_edges

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
OUT_ENV = "TWOWEIGHT_OUT"
GRAPH_HARD_LIMIT = 64  # multiples of the vertex cap beyond which the graph is skipped


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int
    e: int
    n: int
    modulus: tuple[int, ...] | None = None
    construction: str = "both"
    correspondence: str = "alpha"
    out: Path | None = None
    vertex_cap: int = DEFAULT_VERTEX_CAP
    threads: int = 1
    max_bijections: int = 5040
    samples: int = 100
    seed: int = 0
    input: Path | None = None
    edges: bool = False
    max_entries: int = DEFAULT_MAX_ENTRIES


def parse_modulus(text: str | None):
    if not text:
        return None
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"bad modulus {text!r}; expected coefficients low degree first") from None


def make_space(cfg: RunConfig) -> ProjectiveSpace:
    try:
        tables = build_tower(cfg.p, cfg.e, cfg.n, cfg.modulus, max_entries=cfg.max_entries)
    except ResourceCapError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return ProjectiveSpace(tables)


def load_correspondence(space: ProjectiveSpace, source: str):
    if source == "alpha":
        return alpha_correspondence(space)
    path = Path(source)
    if not path.exists():
        raise UsageError(f"correspondence {source!r} is neither 'alpha' nor a file")
    text = path.read_text().strip()
    perm = json.loads(text) if text.startswith("[") else [int(t) for t in text.split()]
    try:
        return make_correspondence(space, perm)
    except CorrespondenceError as exc:
        raise UsageError(str(exc)) from None


def build_sets(space: ProjectiveSpace, cfg: RunConfig) -> dict:
    if cfg.construction == "lambda":
        return {"lambda": lambda_control(space)}
    sets = {}
    if cfg.construction in ("geometric", "both"):
        sets["geometric"] = geometric_set(space, load_correspondence(space, cfg.correspondence))
    if cfg.construction in ("algebraic", "both"):
        sets["algebraic"] = algebraic_set(space)
    return sets


def _emit(cfg: RunConfig, name: str, text: str):
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / name).write_text(text)


def _set_name(space: ProjectiveSpace, kind: str) -> str:
    return f"pointset_q{space.q}_n{space.n}_{kind}.txt"


def cmd_build(cfg: RunConfig) -> int:
    space = make_space(cfg)
    sets = build_sets(space, cfg)
    status = EXIT_OK
    if len(sets) == 2:
        equal = sets_equal(sets["geometric"], sets["algebraic"])
        print(f"constructions agree: {equal}", file=sys.stderr)
        if not equal:
            status = EXIT_FAIL
    for kind, tws in sets.items():
        print(f"{kind}: {len(tws)} points", file=sys.stderr)
        _emit(cfg, _set_name(space, kind), pointset_text(space, tws))
    return status


def certificate(space: ProjectiveSpace, tws, cfg: RunConfig, equivalence=None):
    """Full certificate dict plus the code and graph artifacts (or None)."""
    T = space.tables
    spectrum = hyperplane_spectrum(space, tws, threads=cfg.threads)
    cert = {
        "params": {"p": T.p, "e": T.e, "n": T.n, "q": T.q},
        "modulus": list(T.params.modulus),
        "constants": T.describe(),
        "construction": tws.provenance,
        **spectrum.as_dict(),
        "proof_case_report": None,
        "containment_report": geometric_containment(space, tws),
        "code": None,
        "graph": None,
    }
    if equivalence is not None:
        cert["construction_equivalence"] = equivalence
    default = tws.provenance.get("construction") == "algebraic" or (
        tws.provenance.get("construction") == "geometric"
        and tws.provenance.get("correspondence") == list(range(space.m))
    )
    if default:
        cert["proof_case_report"] = proof_case_counts(space, tws)
    code = graph = None
    if spectrum.verdict:
        code = export_code(space, tws, spectrum, seed=cfg.seed)
        cert["code"] = code.as_dict()
        v = T.q ** (3 * T.n)
        if v <= GRAPH_HARD_LIMIT * cfg.vertex_cap:
            graph = export_graph(space, tws, vertex_cap=cfg.vertex_cap, seed=cfg.seed)
            cert["graph"] = graph.as_dict()
        else:
            cert["graph"] = {"skipped": f"{v} vertices exceed the vertex cap"}
    return cert, spectrum, code, graph


def cmd_certify(cfg: RunConfig) -> int:
    space = make_space(cfg)
    equivalence = None
    if cfg.input is not None:
        try:
            tws = read_pointset(cfg.input, space)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    else:
        sets = build_sets(space, cfg)
        if len(sets) == 2:
            equivalence = sets_equal(sets["geometric"], sets["algebraic"])
        tws = next(iter(sets.values()))
    cert, spectrum, code, graph = certificate(space, tws, cfg, equivalence)
    _emit(cfg, "certificate.json", dumps_json(cert))
    if cfg.out is not None and code is not None:
        (cfg.out / "generator.txt").write_text(generator_text(code.generator, space.q))
    if cfg.out is not None and graph is not None and cfg.edges:
        if graph.v > cfg.vertex_cap:
            raise ResourceCapError(f"edge list of {graph.v} vertices exceeds the vertex cap")
        write_edges(cfg.out / "edges.txt", edge_list(space.tables, graph))
    hist = ", ".join(f"{k}: {v}" for k, v in sorted(spectrum.histogram.items(), reverse=True))
    print(f"spectrum {{{hist}}} expected {list(spectrum.expected)}: "
          f"{'pass' if spectrum.verdict else 'FAIL'}", file=sys.stderr)
    if not spectrum.verdict or equivalence is False:
        return EXIT_FAIL
    return EXIT_OK


def _bijections(space: ProjectiveSpace, cfg: RunConfig):
    m = space.m
    if cfg.correspondence == "exhaustive":
        if math.factorial(m) > cfg.max_bijections:
            raise ResourceCapError(f"{m}! bijections exceed --max-bijections {cfg.max_bijections}")
        return [list(p) for p in itertools.permutations(range(m))]
    if cfg.correspondence == "random":
        if cfg.samples > cfg.max_bijections:
            raise ResourceCapError("--samples exceeds --max-bijections")
        rng = np.random.default_rng(cfg.seed)
        return [rng.permutation(m).tolist() for _ in range(cfg.samples)]
    return [list(load_correspondence(space, cfg.correspondence).perm)]


def cmd_experiment(cfg: RunConfig) -> int:
    space = make_space(cfg)
    runs = []
    for perm in _bijections(space, cfg):
        corr = make_correspondence(space, perm)
        spectrum = bijection_experiment(space, corr, threads=cfg.threads)
        runs.append({
            "correspondence": perm,
            "anti_isomorphic": corr.anti_isomorphic,
            "histogram": {str(k): v for k, v in sorted(spectrum.histogram.items(), reverse=True)},
            "two_weight": spectrum.num_weights == 2,
            "matches_expected": spectrum.verdict,
        })
    summary = {
        "bijections": len(runs),
        "two_weight": sum(r["two_weight"] for r in runs),
        "matches_expected": sum(r["matches_expected"] for r in runs),
        "anti_isomorphic": sum(r["anti_isomorphic"] for r in runs),
        "anti_isomorphic_matching": sum(r["anti_isomorphic"] and r["matches_expected"] for r in runs),
    }
    T = space.tables
    report = {
        "params": {"p": T.p, "e": T.e, "n": T.n, "q": T.q},
        "modulus": list(T.params.modulus),
        "mode": cfg.correspondence,
        "seed": cfg.seed if cfg.correspondence == "random" else None,
        "summary": summary,
        "runs": runs,
    }
    _emit(cfg, "experiment.json", dumps_json(report))
    print(f"{summary['matches_expected']}/{summary['bijections']} bijections give the "
          f"expected two-weight spectrum", file=sys.stderr)
    # only n = 2 promises success for every bijection
    if T.n == 2 and summary["matches_expected"] != summary["bijections"]:
        return EXIT_FAIL
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, required=True, help="characteristic (prime)")
    common.add_argument("-e", type=int, default=1, help="q = p^e")
    common.add_argument("-n", type=int, required=True, help="n >= 2; the space is PG(3n-1, q)")
    common.add_argument("--modulus", help="primitive polynomial of degree 2ne, low degree first")
    common.add_argument("--correspondence", default="alpha",
                        help="'alpha', a permutation file, or for experiments 'exhaustive'/'random'")
    common.add_argument("--out", type=Path, default=os.environ.get(OUT_ENV) or None,
                        help=f"output directory (default ${OUT_ENV}, else stdout)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    common.add_argument("--max-bijections", type=int, default=5040)
    common.add_argument("--max-entries", type=int, default=DEFAULT_MAX_ENTRIES,
                        help="largest field table allowed")

    parser = _Parser(prog="twoweight", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    b = sub.add_parser("build", parents=[common], help="construct the point set(s)")
    b.add_argument("--construction", choices=["geometric", "algebraic", "both"], default="both")
    c = sub.add_parser("certify", parents=[common], help="spectrum, reports, code and graph")
    c.add_argument("--construction", choices=["geometric", "algebraic", "both", "lambda"],
                   default="both", help="'lambda' certifies Lambda itself (negative control)")
    c.add_argument("--input", type=Path, help="certify a point-set file instead of building")
    c.add_argument("--edges", action="store_true", help="also write the graph edge list")
    c.add_argument("--seed", type=int, default=0)
    x = sub.add_parser("experiment", parents=[common], help="cone construction over many bijections")
    x.add_argument("--samples", type=int, default=100)
    x.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(args) -> RunConfig:
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    return RunConfig(
        p=args.p,
        e=args.e,
        n=args.n,
        modulus=parse_modulus(args.modulus),
        construction=getattr(args, "construction", "both"),
        correspondence=args.correspondence,
        out=Path(args.out) if args.out else None,
        vertex_cap=args.vertex_cap,
        threads=args.threads,
        max_bijections=args.max_bijections,
        samples=getattr(args, "samples", 100),
        seed=getattr(args, "seed", 0),
        input=getattr(args, "input", None),
        edges=getattr(args, "edges", False),
        max_entries=args.max_entries,
    )


COMMANDS = {"build": cmd_build, "certify": cmd_certify, "experiment": cmd_experiment}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"twoweight: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"twoweight: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (VerificationError, CorrespondenceError) as exc:
        print(f"twoweight: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
