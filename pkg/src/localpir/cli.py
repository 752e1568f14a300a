"""Command line front end: local-pir {bounds, scheme, verify, simulate}.

Storage comes from a named family (--family with --n) or a JSON file
(--graph) shaped {"n": N, "edges": [[u, v], ...]} with 1-based vertices.
Exit codes: 0 success, 1 a verifier verdict is FAIL, 2 invalid input or
an enumeration over the cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .capacity import BoundReport, BoundValue, family_bounds, graph_bounds
from .errors import InvalidFamilyParams, LocalPIRError
from .graphs import Graph, components, family, graph_from_json, graph_to_json
from .scheme import (
    PlanConfig,
    bipartite_config,
    build_plan_family,
    default_component_config,
    et_config,
    union_config,
)
from .sim import Transcript, measure_rate, run_retrieval
from .verify import (
    DEFAULT_CAP,
    SchemeReport,
    canonical_privacy_probe,
    check_scheme,
    cost_audit,
)

FAMILIES = ("cycle", "path", "star", "complete", "complete_bipartite")


# --- input resolution --------------------------------------------------------

def load_graph(args) -> Graph:
    has_family = args.family is not None
    has_file = args.graph is not None
    if has_family == has_file:
        raise InvalidFamilyParams("give exactly one of --family or --graph")
    if has_family:
        if args.n is None:
            raise InvalidFamilyParams("--family requires --n")
        return family_graph(args.family, args.n)
    try:
        with open(args.graph, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InvalidFamilyParams(f"cannot read {args.graph}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidFamilyParams(
            f"{args.graph} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InvalidFamilyParams(f"{args.graph}: top level must be an object")
    return graph_from_json(obj)


def family_graph(name: str, n: int) -> Graph:
    if name == "complete_bipartite":
        if n < 2 or n % 2:
            raise InvalidFamilyParams(
                "--family complete_bipartite builds the balanced member and "
                f"needs even n >= 2, got {n}; use --graph for unbalanced")
        return family(name, a=n // 2, b=n // 2)
    return family(name, n)


def resolve_cap(flag_value: int | None) -> int:
    env = os.environ.get("LOCAL_PIR_CAP")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InvalidFamilyParams(
                f"LOCAL_PIR_CAP must be an integer, got {env!r}") from None
    return DEFAULT_CAP if flag_value is None else flag_value


def resolve_config(args, g: Graph) -> PlanConfig:
    t_i = args.t_i if args.t_i is not None else args.t
    t_j = args.t_j if args.t_j is not None else args.t
    if t_j is None:
        t_j = t_i
    if args.scheme == "et" or (args.scheme == "auto" and t_i is not None):
        if t_i is None:
            raise InvalidFamilyParams("the t-sum scheme needs --t or --t-i")
        return et_config(t_i, t_j)
    if args.scheme == "bipartite":
        return bipartite_config()
    if args.scheme == "union":
        return union_config()
    if len(components(g)) > 1:
        return union_config()
    return default_component_config(g)


def describe_config(cfg: PlanConfig) -> str:
    if cfg.kind == "et":
        return f"t-sum (t_i={cfg.t_i}, t_j={cfg.t_j})"
    if cfg.kind == "bipartite":
        return f"bipartite cover (L={cfg.length})"
    if cfg.kind == "union":
        return ("component dispatch (per-component defaults)"
                if cfg.component_configs is None else "component dispatch")
    return f"fixture {cfg.fixture}"


# --- rendering ---------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def frac_str(fr: Fraction) -> str:
    return str(fr)


def bound_str(bv: BoundValue) -> str:
    if bv.is_rational:
        return str(bv)
    return f"{bv} (~{bv.as_float():.6g})"


def atom_label(atom, k_total: int) -> str:
    def ref(m: int, p: int) -> str:
        if k_total <= 26:
            return f"{chr(ord('a') + m - 1)}{p}"
        return f"W{m}({p})"

    return "+".join(ref(m, p) for (m, p) in atom)


def render_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(header[i]), *(len(r[i]) for r in rows))
              if rows else len(header[i]) for i in range(len(header))]
    out = [" | ".join(h.ljust(w) for h, w in zip(header, widths)),
           "-+-".join("-" * w for w in widths)]
    out += [" | ".join(c.ljust(w) for c, w in zip(row, widths))
            for row in rows]
    return "\n".join(line.rstrip() for line in out)


def render_bounds(report: BoundReport) -> str:
    lines = [f"family {report.family}  n={report.n}",
             f"lower bound  {bound_str(report.lower)}",
             f"upper bound  {bound_str(report.upper)}",
             f"exact        {'yes' if report.exact else 'no'}"]
    if report.optimizer is not None:
        lines.append(f"best t-sum   t_i={report.optimizer[0]} "
                     f"t_j={report.optimizer[1]}")
    if report.cited_lower is not None:
        note = f"  ({report.cited_note})" if report.cited_note else ""
        lines.append(f"cited lower  {bound_str(report.cited_lower)}{note}")
    for comp in report.comparators:
        val = "n/a" if comp.value is None else f"{comp.value:.6g}"
        note = f"  {comp.note}" if comp.note else ""
        lines.append(f"comparator   {val}  [{comp.source}]{note}")
    return "\n".join(lines)


def render_plans(g: Graph, plans, thetas) -> str:
    header = ["theta"] + [f"server {s}" for s in g.vertices]
    rows = []
    for t in thetas:
        row = [str(t)]
        for s in g.vertices:
            atoms = plans[t].atoms_at(s)
            row.append(", ".join(atom_label(a, g.K) for a in atoms)
                       if atoms else "-")
        rows.append(row)
    audit = cost_audit(plans, g)
    lengths = {plans[t].length for t in plans}
    l_part = (f"L={lengths.pop()}" if len(lengths) == 1
              else "L per component: "
                   + ", ".join(f"{t}:{plans[t].length}" for t in sorted(plans)))
    downloads = {plans[t].download_count() for t in plans}
    d_part = (f"D_k={downloads.pop()} for every theta" if len(downloads) == 1
              else "expected D=" + frac_str(audit.expected_download))
    return (render_table(header, rows)
            + f"\n{l_part}; {d_part}; rate {frac_str(audit.rate)}")


def render_verify(report: SchemeReport, probes) -> str:
    lines = []
    for pr in report.privacy:
        line = (f"server {pr.server}: privacy {pr.verdict} "
                f"(thetas {list(pr.thetas)}, support {pr.support_size})")
        if pr.counterexample is not None:
            line += f"  distinguishing fingerprint: {pr.counterexample}"
        lines.append(line)
    lines.append(f"decode: {report.decode.verdict} "
                 f"({report.decode.trials} trials)")
    for failure in report.decode.failures[:5]:
        lines.append(f"  theta {failure['theta']} seed {failure['seed']}: "
                     f"{failure['reason']}")
    cost = report.cost
    lines.append(f"cost: expected download {frac_str(cost.expected_download)}, "
                 f"rate {frac_str(cost.rate)}"
                 + ("" if cost.ok else " [closed-form MISMATCH]"))
    for m in cost.mismatches:
        lines.append(f"  {m}")
    if probes is not None:
        for p in probes:
            what = ("hides every message" if p.canonical else
                    f"distinguishes thetas {list(p.distinguishable)}")
            lines.append(f"server {p.server}: canonical probe {what}")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines)


def render_transcript(t: Transcript, k_total: int) -> str:
    lines = [f"transcript theta={t.theta} seed={t.seed} q={t.q} "
             f"D_k={t.download} decoded_ok={t.decoded_ok}"]
    for log in t.per_server:
        pairs = "; ".join(f"{atom_label(atom, k_total)}={val}"
                          for atom, val in zip(log.atoms, log.answers))
        lines.append(f"  server {log.server}: {pairs}")
    return "\n".join(lines)


# --- subcommands -------------------------------------------------------------

def cmd_bounds(args) -> int:
    if args.family is not None:
        if args.graph is not None:
            raise InvalidFamilyParams("give exactly one of --family or --graph")
        if args.n is None:
            raise InvalidFamilyParams("--family requires --n")
        report = family_bounds(args.family, args.n)
    else:
        report = graph_bounds(load_graph(args))
    if args.format == "json":
        print(dump_json(report.to_json()))
    else:
        print(render_bounds(report))
    return 0


def cmd_scheme(args) -> int:
    g = load_graph(args)
    config = resolve_config(args, g)
    plans = build_plan_family(g, config)
    if args.theta is not None and args.theta not in plans:
        raise InvalidFamilyParams(f"theta {args.theta} outside 1..{g.K}")
    thetas = [args.theta] if args.theta is not None else list(g.messages)
    fmt = "table" if args.emit_table else args.format
    if fmt == "json":
        obj = {
            "graph": graph_to_json(g),
            "scheme": config.kind,
            "lengths": {str(t): plans[t].length for t in thetas},
            "downloads": {str(t): plans[t].download_count() for t in thetas},
            "atoms": {str(t): {str(s): [[list(r) for r in atom]
                                        for atom in plans[t].atoms_at(s)]
                               for s in g.vertices if plans[t].atoms_at(s)}
                      for t in thetas},
        }
        print(dump_json(obj))
    else:
        print(render_plans(g, plans, thetas))
    return 0


def cmd_verify(args) -> int:
    g = load_graph(args)
    config = resolve_config(args, g)
    cap = resolve_cap(args.cap)
    plans = build_plan_family(g, config)
    report = check_scheme(plans, g, q=args.q, seeds=args.seeds, cap=cap)
    probes = None
    if args.probe:
        probes = [canonical_privacy_probe(plans, g, s, cap)
                  for s in g.vertices]
    if args.format == "json":
        obj = report.to_json()
        if probes is not None:
            obj["probes"] = [p.to_json() for p in probes]
        print(dump_json(obj))
    else:
        print(render_verify(report, probes))
    return verdict_exit_code(report)


def verdict_exit_code(report: SchemeReport) -> int:
    """0 when every check passed, 1 when any verdict is FAIL."""
    return 0 if report.ok else 1


def cmd_simulate(args) -> int:
    g = load_graph(args)
    config = resolve_config(args, g)
    report = measure_rate(g, config, q=args.q, seeds=args.seeds)
    transcript = None
    if args.theta is not None:
        transcript = run_retrieval(g, config, args.theta, args.seed, args.q)
    if args.format == "json":
        obj = report.to_json()
        if transcript is not None:
            obj["transcript"] = transcript.to_json()
        print(dump_json(obj))
    else:
        lines = [f"graph {report.graph}",
                 f"scheme {describe_config(config)}",
                 f"measured rate {frac_str(report.rate)} "
                 f"(~{float(report.rate):.6g})",
                 f"total download {report.total_download} over "
                 f"{len(report.per_theta_download)} messages",
                 f"decode spot checks "
                 f"{'PASS' if report.decoded_ok else 'FAIL'}"]
        if report.bounds is not None:
            lines.append(f"bounds [{bound_str(report.bounds.lower)}, "
                         f"{bound_str(report.bounds.upper)}]"
                         + (" (exact)" if report.bounds.exact else "")
                         + ("" if report.bracketed else "  NOT BRACKETED"))
        print("\n".join(lines))
        if transcript is not None:
            print(render_transcript(transcript, g.K))
    return 0 if report.decoded_ok else 1


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="local-pir",
        description="Build, verify, and rate retrieval schemes with local "
                    "user privacy on edge-replicated storage.")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", choices=FAMILIES,
                       help="named storage family (requires --n)")
        p.add_argument("--n", type=int, help="number of servers")
        p.add_argument("--graph", metavar="PATH",
                       help='graph JSON file {"n": N, "edges": [[u,v], ...]}')
        p.add_argument("--format", choices=("table", "json"),
                       default="table", help="output rendering")

    def scheme_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scheme",
                       choices=("auto", "et", "bipartite", "union"),
                       default="auto",
                       help="plan construction; auto tunes per component")
        p.add_argument("--t", type=int,
                       help="t-sum subset size for both endpoints")
        p.add_argument("--t-i", type=int, dest="t_i",
                       help="subset size at the first endpoint")
        p.add_argument("--t-j", type=int, dest="t_j",
                       help="subset size at the second endpoint")

    def runtime_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--q", type=int, default=2, help="prime field size")
        p.add_argument("--seeds", type=int, default=32,
                       help="decode trials per desired message")
        p.add_argument("--cap", type=int, default=None,
                       help=f"enumeration cap (default {DEFAULT_CAP}; "
                            "env LOCAL_PIR_CAP overrides)")

    p_bounds = sub.add_parser("bounds",
                              help="capacity bounds for a family or graph")
    graph_opts(p_bounds)
    p_bounds.set_defaults(func=cmd_bounds)

    p_scheme = sub.add_parser("scheme",
                              help="emit a plan family as table or JSON")
    graph_opts(p_scheme)
    scheme_opts(p_scheme)
    p_scheme.add_argument("--theta", type=int,
                          help="restrict output to one desired message")
    p_scheme.add_argument("--emit-table", action="store_true",
                          dest="emit_table",
                          help="force the table rendering")
    p_scheme.set_defaults(func=cmd_scheme)

    p_verify = sub.add_parser("verify",
                              help="privacy, decodability, and cost audit")
    graph_opts(p_verify)
    scheme_opts(p_verify)
    runtime_opts(p_verify)
    p_verify.add_argument("--probe", action="store_true",
                          help="also test the stricter hide-everything "
                               "condition at each server")
    p_verify.set_defaults(func=cmd_verify)

    p_sim = sub.add_parser("simulate",
                           help="run retrievals and measure the exact rate")
    graph_opts(p_sim)
    scheme_opts(p_sim)
    runtime_opts(p_sim)
    p_sim.add_argument("--theta", type=int,
                       help="also dump one transcript for this message")
    p_sim.add_argument("--seed", type=int, default=0,
                       help="seed for the dumped transcript")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LocalPIRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
