"""Command-line entry point: ``threshold-lab <command> ...``.

Exit codes: 0 when every requested property holds, 1 when one fails, 2 on
usage errors, malformed input or violated hypotheses.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import codes, constructions, io
from .graph import (
    GraphError,
    VertexMap,
    blowup,
    find_induced_cycle,
    is_family_free,
    is_twin_free,
    min_degree,
    twin_quotient,
    verify_homomorphism,
)
from .partition import (
    FailureReport,
    HypothesisError,
    Partition,
    c5_warmup_decompose,
    clique_image_pipeline,
    decompose_blowup,
    hitting_set_small_odd,
    verify_certificate,
)
from .saturation import is_maximal_free, saturate
from .vc import vc_at_least, vc_dimension

OK, FALSE, USAGE = 0, 1, 2

# failure reasons that mean the input is outside the pipeline's hypotheses
HYPOTHESIS_REASONS = {"min-degree", "not-free", "not-maximal"}


@dataclass
class CommandResult:
    code: int
    lines: list[str] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)

    def emit(self, out=None) -> None:
        out = out or sys.stdout
        for line in self.lines:
            print(line, file=out)


class UsageError(Exception):
    pass


def fraction_arg(text: str) -> Fraction:
    """Exact rational given as ``p/q`` or an integer."""
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected p/q, got {text!r}") from None
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError("decimal values are not accepted; use p/q")
    return q


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _seq(xs) -> str:
    return ",".join(map(str, xs))


def _summary(G) -> list[str]:
    d = min_degree(G)
    return [f"n {G.n}", f"m {G.m}", f"delta {d}", f"delta/n {_fmt(Fraction(d, G.n))}"]


# --------------------------------------------------------------------------
# gen


def _gen_graph(args):
    kind = args.kind
    if kind == "andrasfai":
        return constructions.andrasfai(args.k, args.r)
    if kind == "lower-even":
        return constructions.lower_even(args.k, args.m)
    if kind == "lower-odd":
        return constructions.lower_odd(args.k, args.m)
    if kind == "general":
        return constructions.general_lower(args.s, args.t, args.m)
    if kind == "kr-composite":
        return constructions.kr_free_composite(args.r, args.l)
    raise UsageError(f"unknown generator {kind}")


def run_generate(args) -> CommandResult:
    res = CommandResult(OK)
    if args.kind == "blowup":
        H = io.read_graph(args.input)
        if (args.uniform is None) == (args.sizes is None):
            raise UsageError("give exactly one of --uniform and --sizes")
        sizes = args.uniform if args.uniform is not None else args.sizes
        G = blowup(H, sizes).graph
        sidecar = f"kind=blowup\nbase_n={H.n}\nn={G.n}\nm_edges={G.m}\n"
    else:
        G, meta = _gen_graph(args)
        sidecar = meta.sidecar(G, with_labels=args.labels)
    text = io.format_edge_list(G)
    if args.output:
        Path(args.output).write_text(text)
        meta_path = args.output + ".meta"
        Path(meta_path).write_text(sidecar)
        res.artifacts += [args.output, meta_path]
    else:
        res.lines.append(text.rstrip("\n"))
    res.lines.extend(_summary(G))
    return res


# --------------------------------------------------------------------------
# check


def run_check(args) -> CommandResult:
    G = io.read_graph(args.graph)
    prop = args.prop
    if prop == "free":
        ok, cycle = is_family_free(G, args.cycles)
        line = "free" if ok else f"cycle {_seq(cycle.vertices)}"
        return CommandResult(OK if ok else FALSE, [line])
    if prop == "induced-free":
        for length in sorted(args.cycles):
            cycle = find_induced_cycle(G, length)
            if cycle is not None:
                return CommandResult(FALSE, [f"induced-cycle {_seq(cycle.vertices)}"])
        return CommandResult(OK, ["induced-free"])
    if prop == "maximal":
        ok, pair = is_maximal_free(G, args.cycle)
        return CommandResult(OK if ok else FALSE, ["maximal" if ok else f"non-edge {pair[0]} {pair[1]}"])
    if prop == "vc":
        if args.at_least is not None:
            ok, wit = vc_at_least(G, args.at_least)
            line = f"shattered {_seq(wit)}" if ok else f"no shattered set of size {args.at_least}"
            return CommandResult(OK if ok else FALSE, [line])
        r = vc_dimension(G)
        lines = [f"d {r.dimension}", f"witness {_seq(r.witness)}"]
        if args.at_most is not None:
            return CommandResult(OK if r.dimension <= args.at_most else FALSE, lines)
        return CommandResult(OK, lines)
    if prop == "min-degree":
        d = min_degree(G)
        lines = [f"delta {d}", f"delta/n {_fmt(Fraction(d, G.n))}"]
        ok = True
        if args.at_least is not None:
            ok = d >= args.at_least
        if args.ratio is not None:
            ok = ok and Fraction(d, G.n) >= args.ratio
        return CommandResult(OK if ok else FALSE, lines)
    if prop == "twin-free":
        if is_twin_free(G):
            return CommandResult(OK, ["twin-free"])
        _, P = twin_quotient(G)
        pair = next(r for r in P.rosters if len(r) > 1)[:2]
        return CommandResult(FALSE, [f"twins {pair[0]} {pair[1]}"])
    if prop == "hom":
        H = io.read_graph(args.target)
        phi = _read_map(args.map, G.n, H.n)
        bad = verify_homomorphism(G, H, phi)
        return CommandResult(OK if bad is None else FALSE, ["homomorphism" if bad is None else f"edge {bad[0]} {bad[1]}"])
    raise UsageError(f"unknown check {prop}")


def _read_map(path: str, n: int, image: int) -> VertexMap:
    """Vertex map file: one ``v image`` line per domain vertex."""
    table: dict[int, int] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"map line {lineno}: expected 'v image'")
        try:
            v, img = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"map line {lineno}: entries must be integers") from None
        if v in table:
            raise GraphError(f"map line {lineno}: vertex {v} listed twice")
        table[v] = img
    if sorted(table) != list(range(n)):
        raise GraphError("map must list every domain vertex exactly once")
    return VertexMap(n, image, tuple(table[v] for v in range(n)))


def _read_coloring(path: str, n: int) -> Partition:
    """Colouring file: one ``v colour`` line per vertex."""
    phi = _read_map(path, n, 1 << 30)
    return Partition.from_class_of(phi.assignment)


# --------------------------------------------------------------------------
# pipelines


def _write_json(obj: dict, path: Optional[str], res: CommandResult) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
        res.artifacts.append(path)


def _certificate_result(cert, args) -> CommandResult:
    if isinstance(cert, FailureReport):
        payload = cert.to_json()
        if cert.reason in HYPOTHESIS_REASONS:
            if args.output:
                Path(args.output).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
            raise HypothesisError(f"{cert.reason}: {cert.detail}")
        res = CommandResult(FALSE, [f"failure {cert.reason}", f"witness {json.dumps(payload['witness'])}"])
        _write_json(payload, args.output, res)
        return res
    res = CommandResult(
        OK,
        [
            f"quotient {cert.minimal_quotient.n}",
            f"raw-quotient {cert.quotient.n}",
            f"gamma {_fmt(cert.gamma)}",
            f"c2km1-free {str(cert.c2km1_free).lower()}",
            "nonsingular-free " + _seq(str(b).lower() for b in cert.nonsingular_free),
        ],
    )
    if not (cert.c2km1_free and all(cert.nonsingular_free)):
        res.code = FALSE
    _write_json(cert.to_json(), args.output, res)
    return res


def run_decompose(args) -> CommandResult:
    G = io.read_graph(args.graph)
    check = False if args.no_maximality else None
    cert = decompose_blowup(G, args.k, args.epsilon, gamma=args.gamma, check_maximality=check, schedule=args.schedule)
    return _certificate_result(cert, args)


def run_c5_decompose(args) -> CommandResult:
    G = io.read_graph(args.graph)
    check = False if args.no_maximality else None
    cert = c5_warmup_decompose(G, args.epsilon, check_maximality=check)
    return _certificate_result(cert, args)


def run_verify_cert(args) -> CommandResult:
    G = io.read_graph(args.graph)
    cert = json.loads(Path(args.certificate).read_text())
    ok, msg = verify_certificate(G, cert)
    return CommandResult(OK if ok else FALSE, [msg])


def run_hitting_set(args) -> CommandResult:
    G = io.read_graph(args.graph)
    hs = hitting_set_small_odd(G, args.k, args.epsilon)
    lines = [f"removed {len(hs.removed)}", f"vertices {_seq(sorted(hs.removed))}",
             f"p1-classes {hs.p1_classes}", f"remainder-free {str(hs.remainder_free).lower()}"]
    return CommandResult(OK if hs.remainder_free else FALSE, lines)


def run_clique_image(args) -> CommandResult:
    G = io.read_graph(args.graph)
    coloring = _read_coloring(args.coloring, G.n)
    rep = clique_image_pipeline(G, args.s, args.t, coloring, args.epsilon)
    lines = [f"quotient {rep.quotient.n}", f"radius {rep.radius}",
             f"homomorphism {str(rep.homomorphism_ok).lower()}"]
    lines.append(f"K{args.t}-free" if rep.clique_free else f"clique {_seq(rep.clique_witness)}")
    return CommandResult(OK if rep.clique_free and rep.homomorphism_ok else FALSE, lines)


def run_codes_check(args) -> CommandResult:
    G = io.read_graph(args.graph)
    A = io.parse_assignment(Path(args.assignment).read_text(), G.n)
    rep = codes.verify_theorem_instance(G, args.s, args.r, A)
    return CommandResult(FALSE if rep.contradiction or not rep.condition_ok else OK, rep.lines())


def run_codes_search(args) -> CommandResult:
    G = io.read_graph(args.graph)
    t = args.r + args.s - 3
    threads = codes.resolve_threads(args.threads)
    M, A = codes.brute_force_max_weight(G, args.s, t, budget=args.budget, threads=threads)
    bound = codes.weight_bound(G.n, args.s, args.r)
    hyp = codes.meets_degree_hypothesis(G, args.s, args.r)
    lines = [f"M*={M}", f"bound {_fmt(bound) if bound.denominator != 1 else bound.numerator}",
             f"degree-hypothesis {'ok' if hyp else 'fails'}"]
    lines += [f"{v} {A.bitstring(v)}" for v in range(A.n)]
    if args.output:
        Path(args.output).write_text(io.format_assignment(A))
    return CommandResult(FALSE if hyp and M > bound else OK, lines)


def run_saturate(args) -> CommandResult:
    G = io.read_graph(args.graph)
    result = saturate(G, args.cycle)
    lines = [f"added {len(result.added)}"] + [f"+ {u} {v}" for u, v in result.added]
    lines.append(f"maximal {str(result.maximal).lower()}")
    res = CommandResult(OK if result.maximal else FALSE, lines)
    if args.output:
        io.write_graph(result.graph, args.output)
        res.artifacts.append(args.output)
    return res


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="threshold-lab", description="Exact graph checks for odd-cycle-free and clique-free thresholds.")
    p.add_argument("--threads", type=int, default=None, help="worker cap (env THRESHOLD_LAB_THREADS)")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a construction")
    gsub = gen.add_subparsers(dest="kind", required=True)
    specs: dict[str, list[str]] = {
        "andrasfai": ["k", "r"],
        "lower-even": ["k", "m"],
        "lower-odd": ["k", "m"],
        "general": ["s", "t", "m"],
        "kr-composite": ["r", "l"],
    }
    for name, params in specs.items():
        g = gsub.add_parser(name)
        for prm in params:
            g.add_argument(f"--{prm}", type=int, required=True)
        g.add_argument("--labels", action="store_true", help="include the label table in the sidecar")
        g.add_argument("-o", "--output")
    g = gsub.add_parser("blowup")
    g.add_argument("--input", required=True)
    g.add_argument("--uniform", type=int)
    g.add_argument("--sizes", type=int_list)
    g.add_argument("-o", "--output")
    gen.set_defaults(func=run_generate)

    chk = sub.add_parser("check", help="test a property of an edge-list graph")
    csub = chk.add_subparsers(dest="prop", required=True)
    c = csub.add_parser("free")
    c.add_argument("--cycles", type=int_list, required=True)
    c = csub.add_parser("induced-free")
    c.add_argument("--cycles", type=int_list, required=True)
    c = csub.add_parser("maximal")
    c.add_argument("--cycle", type=int, required=True)
    c = csub.add_parser("vc")
    c.add_argument("--at-least", type=int)
    c.add_argument("--at-most", type=int)
    c = csub.add_parser("min-degree")
    c.add_argument("--at-least", type=int)
    c.add_argument("--ratio", type=fraction_arg, help="require delta/n >= p/q")
    csub.add_parser("twin-free")
    c = csub.add_parser("hom")
    c.add_argument("--target", required=True)
    c.add_argument("--map", required=True)
    for c in csub.choices.values():
        c.add_argument("graph")
    chk.set_defaults(func=run_check)

    def pipeline(name: str, func: Callable, help_text: str) -> argparse.ArgumentParser:
        q = sub.add_parser(name, help=help_text)
        q.set_defaults(func=func)
        return q

    q = pipeline("decompose", run_decompose, "certify a blowup decomposition")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--epsilon", type=fraction_arg, required=True)
    q.add_argument("--gamma", type=fraction_arg)
    q.add_argument("--schedule", choices=["theorem", "lemma"], default="theorem")
    q.add_argument("--no-maximality", action="store_true")
    q.add_argument("graph")
    q.add_argument("-o", "--output")

    q = pipeline("c5-decompose", run_c5_decompose, "single-refinement decomposition for maximal C5-free graphs")
    q.add_argument("--epsilon", type=fraction_arg, required=True)
    q.add_argument("--no-maximality", action="store_true")
    q.add_argument("graph")
    q.add_argument("-o", "--output")

    q = pipeline("verify-cert", run_verify_cert, "re-check a certificate against its graph")
    q.add_argument("graph")
    q.add_argument("certificate")

    q = pipeline("hitting-set", run_hitting_set, "remove singular classes to kill short odd cycles")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--epsilon", type=fraction_arg, required=True)
    q.add_argument("graph")

    q = pipeline("clique-image", run_clique_image, "clique-free homomorphic image from a colouring")
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--epsilon", type=fraction_arg, required=True)
    q.add_argument("--coloring", required=True)
    q.add_argument("graph")

    def codes_args(q, search: bool):
        q.add_argument("--s", type=int, required=True)
        q.add_argument("--r", type=int, required=True)
        q.add_argument("graph")
        if search:
            q.add_argument("--budget", type=int, default=10_000_000)
            q.add_argument("-o", "--output")
        else:
            q.add_argument("assignment")

    codes_args(pipeline("codes-check", run_codes_check, "check the weight inequality for an assignment"), False)
    codes_args(pipeline("codes-search", run_codes_search, "exhaustive maximum weight"), True)
    grp = sub.add_parser("codes", help="alias group for codes-check / codes-search")
    gsub = grp.add_subparsers(dest="codes_cmd", required=True)
    codes_args(gsub.add_parser("check"), False)
    codes_args(gsub.add_parser("search"), True)
    gsub.choices["check"].set_defaults(func=run_codes_check)
    gsub.choices["search"].set_defaults(func=run_codes_search)

    q = pipeline("saturate", run_saturate, "greedily add edges keeping the graph C_l-free")
    q.add_argument("--cycle", type=int, required=True)
    q.add_argument("graph")
    q.add_argument("-o", "--output")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        res = args.func(args)
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return USAGE
    except (GraphError, UsageError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except codes.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return USAGE
    res.emit()
    return res.code


if __name__ == "__main__":
    sys.exit(main())
