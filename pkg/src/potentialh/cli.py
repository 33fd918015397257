"""Command-line front end: ``python -m potentialh <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .conjecture import conjecture_gap
from .constructive import bmdt_repair, pipeline
from .errors import ContractViolation, PotentialError
from .graphkit import Graph, _parse_edge_list, from_graph6, named_graph, parse, to_graph6
from .oracle import DEFAULT_CAP, VerdictCache, is_potentially_h_graphic, sigma_exact
from .potential import extremal_realization, extremal_sequence, lower_bound, profile
from .seqcore import GraphicSequence, SlackFunction, format_terms, is_graphic, layoff, parse_terms, realize

FORMATS = ("text", "json", "csv")
ENV_THREADS = "POTENTIALH_THREADS"
ENV_CACHE = "POTENTIALH_CACHE"
SWEEP_COLUMNS = ("H", "n", "sigma_exact", "lower_bound", "sigma_tilde_n")


@dataclass(frozen=True)
class RunConfig:
    oracle_cap_n: int = DEFAULT_CAP
    thread_count: int = 1
    cache_path: str | None = None
    time_budget: float | None = None
    output_format: str = "text"

    def __post_init__(self):
        if self.oracle_cap_n < 1 or self.thread_count < 1:
            raise ContractViolation("caps and thread counts must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ContractViolation("time budget must be positive")
        if self.output_format not in FORMATS:
            raise ContractViolation(f"format must be one of {', '.join(FORMATS)}")

    @classmethod
    def from_args(cls, args: argparse.Namespace, env: dict | None = None) -> "RunConfig":
        """Flags win over environment variables, which win over defaults."""
        env = os.environ if env is None else env
        threads = args.threads
        if threads is None:
            threads = int(env[ENV_THREADS]) if env.get(ENV_THREADS) else 1
        cache = args.cache if args.cache is not None else env.get(ENV_CACHE) or None
        return cls(args.cap, threads, cache, args.time_budget, args.format)

    def cache(self) -> VerdictCache | None:
        return VerdictCache(self.cache_path) if self.cache_path else None


_EDGE_TEXT = re.compile(r"^(?:(\d+):)?(\d+-\d+(?:,\d+-\d+)*)?$")


def read_graph(text: str) -> Graph:
    """A graph from a file path, a catalog name, an inline edge list or graph6 text.

    Inline edge lists look like ``0-1,1-2`` with an optional ``n:`` prefix
    giving the order (``4:0-1`` has two isolated vertices).
    """
    path = Path(text)
    if path.is_file():
        return parse(path.read_text()).with_label(path.stem)
    try:
        return named_graph(text)
    except ContractViolation:
        pass
    m = _EDGE_TEXT.match(text.replace(" ", ""))
    if m and (m.group(1) or m.group(2)):
        pairs = [tuple(map(int, e.split("-"))) for e in m.group(2).split(",")] if m.group(2) else []
        n = int(m.group(1)) if m.group(1) else 1 + max(max(p) for p in pairs)
        body = f"n {n}\n" + "".join(f"{a} {b}\n" for a, b in pairs)
        return _parse_edge_list(body).with_label(text)
    return from_graph6(text).with_label(text)


def read_sequence(text: str) -> GraphicSequence:
    return GraphicSequence.sorted_from(parse_terms(text))


def graph_name(g: Graph) -> str:
    return g.label or to_graph6(g)


def _csv_text(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue().rstrip("\n")


class Output:
    """Collects one result and renders it in the configured format."""

    def __init__(self, cfg: RunConfig, stream=None):
        self.cfg = cfg
        self.stream = stream or sys.stdout

    def emit(self, text: str, data: dict, rows: list[dict] | None = None, columns=None) -> None:
        fmt = self.cfg.output_format
        if fmt == "json":
            out = json.dumps(data, sort_keys=True)
        elif fmt == "csv":
            if rows is None:
                rows = [{k: v for k, v in data.items() if not isinstance(v, (list, dict))}]
            out = _csv_text(rows, columns or list(rows[0]))
        else:
            out = text
        print(out, file=self.stream)


# -- subcommands -------------------------------------------------------------


def cmd_graphic(args, cfg, out: Output) -> int:
    s = read_sequence(args.sequence)
    ok = is_graphic(s)
    out.emit("graphic" if ok else "not graphic", {"sequence": format_terms(s.terms), "graphic": ok})
    return 0


def cmd_realize(args, cfg, out: Output) -> int:
    s = read_sequence(args.sequence)
    g = realize(s)
    out.emit(to_graph6(g), {"sequence": format_terms(s.terms), "graph6": to_graph6(g), "edges": g.edges()})
    return 0


def cmd_layoff(args, cfg, out: Output) -> int:
    s = read_sequence(args.sequence)
    r = layoff(s, args.index)
    text = format_terms(r.terms)
    out.emit(text, {"sequence": format_terms(s.terms), "index": args.index, "result": text})
    return 0


def cmd_profile(args, cfg, out: Output) -> int:
    h = read_graph(args.graph)
    p = profile(h)
    rows = [{"i": i, "nabla": nab, "sigma_tilde_i": st} for i, nab, st in p.rows()]
    lines = [f"k={p.k} alpha={p.alpha} sigma_tilde={p.sigma_tilde}", "i nabla sigma_tilde_i"]
    lines += [f"{r['i']} {r['nabla']} {r['sigma_tilde_i']}" for r in rows]
    data = {"graph": graph_name(h), "k": p.k, "alpha": p.alpha, "sigma_tilde": p.sigma_tilde, "rows": rows}
    out.emit("\n".join(lines), data, rows, ("i", "nabla", "sigma_tilde_i"))
    return 0


def cmd_extremal(args, cfg, out: Output) -> int:
    h = read_graph(args.graph)
    p = profile(h)
    indices = [args.i] if args.i is not None else list(p.indices)
    rows = []
    for i in indices:
        spec = extremal_sequence(h, i, args.n, p)
        row = {"i": i, "n": args.n, "sequence": format_terms(spec.sequence.terms), "sum": spec.sequence.total}
        if args.witness:
            row["graph6"] = to_graph6(extremal_realization(spec))
        rows.append(row)
    text = "\n".join(
        f"i={r['i']} {r['sequence']} (sum {r['sum']})" + (f" {r['graph6']}" if "graph6" in r else "") for r in rows
    )
    out.emit(text, {"graph": graph_name(h), "rows": rows}, rows, list(rows[0]))
    return 0


def cmd_potential(args, cfg, out: Output) -> int:
    s = read_sequence(args.sequence)
    h = read_graph(args.graph)
    v = is_potentially_h_graphic(s, h, cfg.oracle_cap_n)
    text = "potentially H-graphic" if v.decision else "not potentially H-graphic"
    data = {"sequence": format_terms(s.terms), "graph": graph_name(h), "potentially": v.decision}
    if args.witness and v.witness is not None:
        text += "\n" + to_graph6(v.witness)
        data["witness"] = to_graph6(v.witness)
    out.emit(text, data)
    return 0


def cmd_sigma_exact(args, cfg, out: Output) -> int:
    h = read_graph(args.graph)
    r = sigma_exact(h, args.n, cfg.oracle_cap_n, cfg.cache(), cfg.thread_count, cfg.time_budget, args.positive)
    wit = format_terms(r.witness.terms)
    data = {"graph": graph_name(h), "n": args.n, "sigma": r.sigma, "witness": wit, "checked": r.sequences_checked}
    out.emit(f"{r.sigma}\nwitness {wit}", data)
    return 0


def cmd_bmdt(args, cfg, out: Output) -> int:
    s = read_sequence(args.sequence)
    h = read_graph(args.graph)
    rep = bmdt_repair(s, h, check_bounds=not args.no_check)
    g6 = to_graph6(rep.graph)
    emb = {str(u): v for u, v in sorted(rep.embedding.items())}
    data = {
        "graph6": g6,
        "embedding": emb,
        "switches": len(rep.switches),
        "g_value": rep.constants.g_value,
        "f_value": rep.constants.f_value,
    }
    text = f"{g6}\nembedding {' '.join(f'{u}->{v}' for u, v in emb.items())}\nswitches {len(rep.switches)}"
    out.emit(text, data)
    return 0


def _slack(args) -> SlackFunction:
    c = Fraction(args.slack)
    return SlackFunction.sqrt(c) if args.slack_kind == "sqrt" else SlackFunction.constant(c)


def cmd_pipeline(args, cfg, out: Output) -> int:
    s = read_sequence(args.sequence)
    h = read_graph(args.graph)
    res = pipeline(s, h, _slack(args))
    if args.trace and res.trace is not None:
        Path(args.trace).write_text(res.trace.to_json())
    data = {"outcome": res.outcome, "graph6": to_graph6(res.graph), "detail": res.detail}
    if res.embedding is not None:
        data["embedding"] = {str(u): v for u, v in sorted(res.embedding.items())}
    if res.trace is not None:
        data.update(ell=res.trace.ell, reason=res.trace.reason.value, t=res.trace.t_value)
    if res.final is not None:
        data["branch"] = res.final.branch
    lines = [f"outcome {res.outcome}"]
    if res.trace is not None:
        lines.append(f"ell {res.trace.ell} ({res.trace.reason.value}), t {res.trace.t_value}")
    if res.detail:
        lines.append(res.detail)
    if args.witness:
        lines.append(data["graph6"])
    out.emit("\n".join(lines), data)
    return 0


def cmd_conjecture(args, cfg, out: Output) -> int:
    h = read_graph(args.graph)
    c = conjecture_gap(h)
    w6 = to_graph6(c.witness)
    data = {"graph": graph_name(h), "sigma_tilde": c.sigma_tilde, "subgraph_max": c.subgraph_max, "gap": c.gap, "witness": w6}
    out.emit(f"sigma_tilde {c.sigma_tilde}\nsubgraph_max {c.subgraph_max}\ngap {c.gap}\nwitness {w6}", data)
    return 0


def parse_range(text: str) -> list[int]:
    """``8``, ``8..11`` or ``8-11`` (inclusive)."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\.\.|-)\s*(\d+))?\s*", text)
    if m is None:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def sweep_rows(graphs: list[Graph], ns: list[int], cfg: RunConfig, positive: bool = False) -> list[dict]:
    cache = cfg.cache()
    rows = []
    for h in graphs:
        st = profile(h).sigma_tilde
        for n in ns:
            r = sigma_exact(h, n, cfg.oracle_cap_n, cache, cfg.thread_count, cfg.time_budget, positive)
            rows.append(
                {"H": graph_name(h), "n": n, "sigma_exact": r.sigma, "lower_bound": lower_bound(h, n), "sigma_tilde_n": st * n}
            )
    return rows


def read_sweep_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [{"H": r["H"], **{c: int(r[c]) for c in SWEEP_COLUMNS[1:]}} for r in rows]


def cmd_sweep(args, cfg, out: Output) -> int:
    graphs = [read_graph(g) for g in args.graphs]
    rows = sweep_rows(graphs, args.n, cfg, args.positive)
    text = _csv_text(rows, SWEEP_COLUMNS)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if cfg.output_format == "json":
        print(json.dumps({"rows": rows}, sort_keys=True), file=out.stream)
    else:
        print(text, file=out.stream)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest n the exact oracle accepts")
    common.add_argument("--threads", type=int, default=None, help=f"worker processes (env {ENV_THREADS})")
    common.add_argument("--cache", default=None, help=f"verdict cache file (env {ENV_CACHE})")
    common.add_argument("--time-budget", type=float, default=None, help="seconds before sigma-exact gives up")
    common.add_argument("--witness", action="store_true", help="also print a witness graph")

    parser = argparse.ArgumentParser(prog="potentialh", description="Potentially H-graphic sequence toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("graphic", cmd_graphic, "decide graphicality").add_argument("sequence")
    add("realize", cmd_realize, "Havel-Hakimi realization as graph6").add_argument("sequence")
    p = add("layoff", cmd_layoff, "lay off one term")
    p.add_argument("sequence")
    p.add_argument("-i", "--index", type=int, required=True, help="1-based position")
    add("profile", cmd_profile, "nabla / sigma-tilde table of a graph").add_argument("graph")
    p = add("extremal", cmd_extremal, "extremal lower-bound sequences")
    p.add_argument("graph")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-i", type=int, default=None)
    p = add("potential", cmd_potential, "exact potentially H-graphic decision")
    p.add_argument("sequence")
    p.add_argument("graph")
    p = add("sigma-exact", cmd_sigma_exact, "exact potential number at small n")
    p.add_argument("graph")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--positive", action="store_true", help="only sequences without zero terms")
    p = add("bmdt", cmd_bmdt, "bounded-degree embedding by switches")
    p.add_argument("sequence")
    p.add_argument("graph")
    p.add_argument("--no-check", action="store_true", help="skip the order and degree-bound hypotheses")
    p = add("pipeline", cmd_pipeline, "reduce, embed and reconstruct")
    p.add_argument("sequence")
    p.add_argument("graph")
    p.add_argument("--slack", default="0", help="slack coefficient (exact rational)")
    p.add_argument("--slack-kind", choices=("constant", "sqrt"), default="constant")
    p.add_argument("--trace", default=None, help="write the reduction trace as JSON")
    add("conjecture", cmd_conjecture, "profile slope versus the best subgraph value").add_argument("graph")
    p = add("sweep", cmd_sweep, "sigma-exact over graphs and an n range, as CSV")
    p.add_argument("graphs", nargs="+")
    p.add_argument("-n", type=parse_range, required=True, help="n or lo..hi")
    p.add_argument("--out", default=None, help="also write the CSV here")
    p.add_argument("--positive", action="store_true", help="only sequences without zero terms")
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None, env: dict | None = None) -> int:
    """Run one subcommand; 0 on success, 1 on domain errors, 2 on usage errors."""
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = RunConfig.from_args(args, env)
        return args.func(args, cfg, Output(cfg, stdout))
    except (PotentialError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1


def main() -> None:
    sys.exit(run())

