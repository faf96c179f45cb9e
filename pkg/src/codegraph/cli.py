"""Command-line surface.

Subcommands: enum, graph, cliques, hmap-verify, aut, theorem.  All
flags are long-form kebab-case; machine-readable output has a fixed
field order and integral values only, so identical configurations
produce identical bytes (the theorem certificate's wall_ms field is the
one documented exception).

Exit codes: 0 success, 1 falsified assertion (a counterexample was
found), 2 invalid configuration, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import autgroup, cliques, fqlinalg, grassmann, hmap, verify
from .errors import BudgetExceeded, Falsified, ParameterError

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_BAD_CONFIG = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    command: str
    n: int = 0
    k: int = 2
    q: int = 2
    format: str = "text"
    jobs: int = 1
    budget_secs: Optional[float] = None
    out: Optional[str] = None
    nondegenerate: bool = False
    direct: bool = False
    export: Optional[str] = None
    witness_dump: Optional[str] = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codegraph",
        description="Grassmann graphs, non-degenerate code graphs, clique "
        "taxonomy, and exhaustive embedding certification over small prime fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, k: bool = True, q: bool = True) -> None:
        p.add_argument("--n", type=int, required=True, help="ambient dimension")
        if k:
            p.add_argument("--k", type=int, default=2, help="subspace dimension")
        if q:
            p.add_argument("--q", type=int, default=2, help="prime field order")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("enum", help="list all k-dimensional subspaces")
    common(p)

    p = sub.add_parser("graph", help="build a graph and report its shape")
    common(p)
    p.add_argument("--nondegenerate", action="store_true", help="restrict to non-degenerate codes")
    p.add_argument("--export", help="write hex adjacency rows here plus a .vertices sidecar")

    p = sub.add_parser("cliques", help="enumerate and classify maximal cliques")
    common(p)
    p.add_argument("--nondegenerate", action="store_true")

    p = sub.add_parser("hmap-verify", help="run the collapse-map assertions")
    common(p, k=False, q=False)

    p = sub.add_parser("aut", help="automorphism group orders")
    common(p)
    p.add_argument("--direct", action="store_true", help="also run the brute-force graph searches")

    p = sub.add_parser("theorem", help="exhaustively certify the classification")
    common(p, k=False, q=False)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget-secs", type=float, default=None)
    p.add_argument("--witness-dump", help="write one verdict+witness line per embedding")
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for name in vars(ns):
        if name != "command" and hasattr(cfg, name):
            setattr(cfg, name, getattr(ns, name))
    if cfg.jobs < 1:
        raise ParameterError("--jobs must be at least 1")
    return cfg


def _kind(cfg: RunConfig) -> str:
    return grassmann.KIND_NONDEGENERATE if cfg.nondegenerate else grassmann.KIND_FULL


def _cmd_enum(cfg: RunConfig) -> tuple[dict, list[str], int]:
    subs = fqlinalg.enumerate_subspaces(cfg.n, cfg.k, cfg.q)
    payload = {
        "n": cfg.n,
        "k": cfg.k,
        "q": cfg.q,
        "count": len(subs),
        "subspaces": [[fqlinalg.vector_text(r) for r in s.rows] for s in subs],
    }
    text = [fqlinalg.format_subspace_blocks(subs)]
    return payload, text, EXIT_OK


def _cmd_graph(cfg: RunConfig) -> tuple[dict, list[str], int]:
    g = grassmann.build_graph(cfg.n, cfg.k, cfg.q, _kind(cfg))
    comps = grassmann.connected_components(g)
    payload = {
        "n": g.n,
        "k": g.k,
        "q": g.q,
        "kind": g.kind,
        "vertices": g.nv,
        "edges": g.edge_count,
        "components": len(comps),
        "complete_regime": g.complete_regime,
    }
    text = [
        f"graph {g.kind} n={g.n} k={g.k} q={g.q}",
        f"vertices {g.nv}",
        f"edges {g.edge_count}",
        f"components {len(comps)}",
    ]
    if g.complete_regime:
        text.append("complete graph regime (k is 1 or n-1)")
    if cfg.export:
        with open(cfg.export, "w", encoding="utf-8") as fh:
            fh.write(grassmann.graph_export_text(g) + "\n")
        with open(cfg.export + ".vertices", "w", encoding="utf-8") as fh:
            fh.write(grassmann.vertex_sidecar_text(g) + "\n")
        text.append(f"export written to {cfg.export}")
    return payload, text, EXIT_OK


def _cmd_cliques(cfg: RunConfig) -> tuple[dict, list[str], int]:
    g = grassmann.build_graph(cfg.n, cfg.k, cfg.q, _kind(cfg))
    found = cliques.enumerate_maximal_cliques(g)
    counts = {"star": 0, "top": 0, "neither": 0, "star+top": 0}
    for c in found:
        counts[c.verdict] += 1
    falsified = g.kind == grassmann.KIND_FULL and (
        counts["neither"] or counts["star+top"]
    )
    payload = {
        "n": g.n,
        "k": g.k,
        "q": g.q,
        "kind": g.kind,
        "maximal_cliques": len(found),
        "stars": counts["star"],
        "tops": counts["top"],
        "neither": counts["neither"],
        "maximal_stars": sum(1 for c in found if c.is_maximal_star),
        "falsified": bool(falsified),
        "cliques": [
            {
                "verdict": c.verdict,
                "size": c.size,
                "anchor": (c.star_center or c.top_roof).inline_text()
                if (c.star_center or c.top_roof)
                else None,
                "maximal_in_code_graph": c.maximal_in_code_graph,
                "is_maximal_star": c.is_maximal_star,
            }
            for c in found
        ],
    }
    text = [
        f"maximal cliques {len(found)} (stars {counts['star']}, tops {counts['top']}, neither {counts['neither']})"
    ]
    text.extend(cliques.clique_report_rows(found))
    return payload, text, EXIT_FALSIFIED if falsified else EXIT_OK


def _cmd_hmap_verify(cfg: RunConfig) -> tuple[dict, list[str], int]:
    report = hmap.verify_h(cfg.n)
    text = [
        f"collapse map at n={report['n']}: vertices {report['vertices']} "
        f"A={report['class_sizes']['A']} B={report['class_sizes']['B']} C={report['class_sizes']['C']}"
    ]
    for a in report["assertions"]:
        status = "pass" if a["passed"] else "FAIL"
        wit = f" witness={json.dumps(a['witness'])}" if a["witness"] is not None else ""
        text.append(f"{status} {a['name']}{wit}")
    return report, text, EXIT_OK if report["passed"] else EXIT_FALSIFIED


def _cmd_aut(cfg: RunConfig) -> tuple[dict, list[str], int]:
    gg = autgroup.grassmann_aut_group(cfg.n, cfg.k, cfg.q)
    cg = autgroup.code_graph_aut_group(cfg.n, cfg.k, cfg.q)
    payload = {
        "n": cfg.n,
        "k": cfg.k,
        "q": cfg.q,
        "grassmann_aut_order": gg.order,
        "code_graph_aut_order": cg.order,
    }
    text = [
        f"generated automorphisms of the full graph: {gg.order} ({gg.description})",
        f"generated automorphisms of the code graph: {cg.order} ({cg.description})",
    ]
    code = EXIT_OK
    if cfg.direct:
        gfull = grassmann.build_graph(cfg.n, cfg.k, cfg.q, grassmann.KIND_FULL)
        gnd = grassmann.build_graph(cfg.n, cfg.k, cfg.q, grassmann.KIND_NONDEGENERATE)
        direct_full, _ = autgroup.graph_automorphisms(gfull)
        direct_code, _ = autgroup.graph_automorphisms(gnd)
        payload["direct_full"] = direct_full
        payload["direct_code"] = direct_code
        payload["match"] = direct_full == gg.order and direct_code == cg.order
        text.append(f"direct search, full graph: {direct_full}")
        text.append(f"direct search, code graph: {direct_code}")
        if not payload["match"]:
            text.append("MISMATCH between generated and direct counts")
            code = EXIT_FALSIFIED
    return payload, text, code


def _cmd_theorem(cfg: RunConfig) -> tuple[dict, list[str], int]:
    cert = verify.certify_theorem(
        cfg.n,
        budget_secs=cfg.budget_secs,
        jobs=cfg.jobs,
        witness_dump=cfg.witness_dump,
    )
    falsified = (
        cert["unclassified"] > 0
        or cert["soundness_failures"] > 0
        or cert["witness_failures"] > 0
        or cert["route_mismatches"] > 0
        or any(v["fail"] for v in cert["lemma_chain"].values())
    )
    text = [
        f"embeddings {cert['embeddings_total']} "
        f"(extendable {cert['extendable']}, exceptional {cert['exceptional']}, "
        f"unclassified {cert['unclassified']})",
        f"complete {cert['complete']}",
        f"wall_ms {cert['wall_ms']}",
    ]
    for name, tally in cert["lemma_chain"].items():
        text.append(f"{name}: pass {tally['pass']} fail {tally['fail']}")
    if falsified:
        code = EXIT_FALSIFIED
    elif not cert["complete"]:
        code = EXIT_BUDGET
    else:
        code = EXIT_OK
    return cert, text, code


_COMMANDS = {
    "enum": _cmd_enum,
    "graph": _cmd_graph,
    "cliques": _cmd_cliques,
    "hmap-verify": _cmd_hmap_verify,
    "aut": _cmd_aut,
    "theorem": _cmd_theorem,
}


def run(cfg: RunConfig) -> int:
    """Execute one command and write its report; returns the exit code."""
    payload, text, code = _COMMANDS[cfg.command](cfg)
    body = (
        json.dumps(payload, indent=2) + "\n"
        if cfg.format == "json"
        else "\n".join(text) + "\n"
    )
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return code


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        return run(cfg)
    except ParameterError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Falsified as exc:
        print(f"falsified: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    raise SystemExit(main())
