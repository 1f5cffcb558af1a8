import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd

from models import (
    dump_model,
    graded_quiver_to_file,
    heart_from_file,
    load_model,
    parse_central_charge,
    parse_class,
    path_sum_to_json,
    probe_from_file,
    qp_from_file,
    qp_to_file,
    representation_from_file,
    triangulation_from_file,
    HeartFile,
    ProbeFile,
    QPFile,
    RepresentationFile,
    TriangulationFile,
)
from utils.config import FORMAT_VERSION, LOG_LEVEL
from utils.data_classes import GridAxis, RunConfig
from utils.error_handler import ErrorHandler, InvalidQuiverError, OutOfRangeError, UsageError
from utils.heart_graph import (
    StabilityCondition,
    c_action,
    c_action_probe,
    chamber_from_imaginary_parts,
    exchange_graph,
    is_intermediate,
    probe_distance,
    sph_twist_class_action,
    stab_metric,
    support_constant,
)
from utils.logging_handler import StructuredLogger, with_logging
from utils.qp_core import (
    euler_matrix,
    ginzburg_graded_quiver,
    is_nondegenerate_to_depth,
    jacobian_algebra_basis,
    jacobian_relations,
    mutate_sequence,
)
from utils.quad_periods import (
    PROXY_METHOD,
    PolynomialQuadDifferential,
    a2_chamber_scan,
    genericity_proxy,
    imz_chamber_scan,
    period_table,
)
from utils.rep_stab import hn_oracle, hn_table
from utils.surface_lab import (
    MarkedSurfaceData,
    check_compatibility,
    compare_exchange_graphs,
    decoration_count,
    flip_graph,
    flip_graph_to_dot,
    quiver_from_angulation,
)

logger = StructuredLogger(__name__)


class CliParser(argparse.ArgumentParser):
    """argparse whose usage errors use the same diagnostic line as every other failure"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # grid axes such as -2:2:101 are values, not options
        self._negative_number_matcher = re.compile(r"^-\d+$|^-\d*\.\d+$|^-[\d.]*:[-\d.:]*$")

    def error(self, message):
        self.exit(ErrorHandler.handle_usage_error(message))


def _require(config: RunConfig, name: str):
    value = config.option(name)
    if value is None:
        raise UsageError(detail=f"{config.subcommand} needs --{name.replace('_', '-')}")
    return value


def _input(config: RunConfig) -> str:
    if not config.input_path:
        raise UsageError(detail=f"{config.subcommand} needs --in")
    return config.input_path


def _json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _frame(config: RunConfig, frame: pd.DataFrame, sep: str = ",") -> str:
    if config.output_format == "table":
        return frame.to_markdown(index=False) + "\n"
    if config.output_format == "json":
        return frame.to_json(orient="records", indent=2) + "\n"
    return frame.to_csv(index=False, sep=sep, lineterminator="\n")


def _classes(text: str) -> List[tuple]:
    return [parse_class(chunk) for chunk in text.split(";")]


# -- qp_core ------------------------------------------------------------------------

@with_logging
def run_mutate(config: RunConfig) -> str:
    qp = qp_from_file(load_model(_input(config), QPFile))
    mutated = mutate_sequence(qp, _require(config, "vertex"))
    return dump_model(qp_to_file(mutated))


@with_logging
def run_jacobian(config: RunConfig) -> str:
    qp = qp_from_file(load_model(_input(config), QPFile))
    relations = jacobian_relations(qp)
    note = None
    try:
        basis = [{"vertex": v, "path": list(p)} for v, p in jacobian_algebra_basis(qp, config.option("max_length"))]
    except (InvalidQuiverError, OutOfRangeError) as e:
        basis, note = None, str(e)
    return _json({
        "format_version": FORMAT_VERSION,
        "relations": [path_sum_to_json(r) for r in relations],
        "basis": basis,
        "basis_note": note,
    })


@with_logging
def run_ginzburg(config: RunConfig) -> str:
    qp = qp_from_file(load_model(_input(config), QPFile))
    return dump_model(graded_quiver_to_file(ginzburg_graded_quiver(qp, config.option("N", 3))))


@with_logging
def run_euler(config: RunConfig) -> str:
    qp = qp_from_file(load_model(_input(config), QPFile))
    return _json({"format_version": FORMAT_VERSION, "vertices": list(qp.vertices), "euler": euler_matrix(qp)})


@with_logging
def run_nondegenerate(config: RunConfig) -> str:
    qp = qp_from_file(load_model(_input(config), QPFile))
    depth = config.depth if config.depth is not None else 2
    return _json({"depth": depth, "nondegenerate": is_nondegenerate_to_depth(qp, depth)})


# -- rep_stab -----------------------------------------------------------------------

@with_logging
def run_hn(config: RunConfig) -> str:
    rep = representation_from_file(load_model(_input(config), RepresentationFile))
    Z = parse_central_charge(_require(config, "z"), config.backend, config.tolerance)
    if config.option("oracle"):
        factors = hn_oracle(rep, Z)
        frame = pd.DataFrame({"class": [",".join(str(c) for c in f.cls) for f in factors],
                              "phase": [f.phase for f in factors]})
    else:
        frame = hn_table(rep, Z)
    return _frame(config, frame, sep=";")


# -- heart_graph --------------------------------------------------------------------

def _sigma(config: RunConfig) -> StabilityCondition:
    heart = heart_from_file(load_model(_require(config, "seed"), HeartFile))
    return StabilityCondition(heart, parse_central_charge(_require(config, "z"), config.backend, config.tolerance))


@with_logging
def run_exchange_graph(config: RunConfig) -> str:
    seed = heart_from_file(load_model(_require(config, "seed"), HeartFile))
    heart_filter = is_intermediate if config.option("intermediate_only") else None
    if config.depth is None and heart_filter is None:
        raise UsageError(detail="exchange-graph needs --depth unless --intermediate-only is given")
    graph = exchange_graph(seed, config.depth, heart_filter, config.threads)
    if config.output_format == "dot":
        return graph.to_dot()
    return _json({
        "format_version": FORMAT_VERSION,
        "vertices": [{"classes": [list(r) for r in h.classes], "levels": list(h.levels), "depth": d}
                     for h, d in zip(graph.vertices, graph.depths)],
        "edges": [{"source": e.source, "target": e.target, "simple": e.simple,
                   "direction": e.direction.value, "error": e.error} for e in graph.edges],
        "boundary": graph.boundary,
    })


@with_logging
def run_chamber(config: RunConfig) -> str:
    convert = Fraction if config.backend == "exact" else float
    try:
        im1, im2 = convert(_require(config, "imz1")), convert(_require(config, "imz2"))
    except (ValueError, ZeroDivisionError):
        raise UsageError(detail="--imz1 and --imz2 must be numbers") from None
    tolerance = 0.0 if config.backend == "exact" else config.tolerance
    return chamber_from_imaginary_parts(im1, im2, tolerance) + "\n"


@with_logging
def run_metric(config: RunConfig) -> str:
    if config.option("probe"):
        probe = probe_from_file(load_model(config.option("probe"), ProbeFile))
        return _json({"distance": probe_distance(probe)})
    sigma = _sigma(config)
    try:
        lam = complex(_require(config, "lam").replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(detail=f"--lam {config.option('lam')} is not a complex number") from None
    probe = c_action_probe(sigma, lam, _classes(_require(config, "classes")))
    return _json({"lambda": [lam.real, lam.imag], "distance": stab_metric(sigma, c_action(sigma, lam), probe)})


@with_logging
def run_twist(config: RunConfig) -> str:
    heart = heart_from_file(load_model(_require(config, "seed"), HeartFile))
    cls = parse_class(_require(config, "cls"))
    image = sph_twist_class_action(heart, _require(config, "simple"), cls, bool(config.option("inverse")))
    return _json({"class": list(cls), "image": list(image)})


@with_logging
def run_support(config: RunConfig) -> str:
    sigma = _sigma(config)
    report = support_constant(sigma, _classes(_require(config, "classes")), config.option("norm", "euclidean"))
    constant = str(report.constant) if isinstance(report.constant, Fraction) else report.constant
    return _json({
        "norm": report.norm,
        "constant": constant,
        "ratios": [{"class": list(c), "ratio": r} for c, r in report.ratios],
        "quadratic_form": [{"class": list(c), "value": v} for c, v in report.quadratic_form],
    })


# -- surface_lab --------------------------------------------------------------------

@with_logging
def run_surface(config: RunConfig) -> str:
    action = config.option("action")
    if action == "flip-graph":
        graph = flip_graph(_require(config, "m"))
        if config.output_format == "dot":
            return flip_graph_to_dot(graph)
        return _json({
            "m": config.option("m"),
            "vertices": [[list(a) for a in graph.nodes[n]["triangulation"].arcs] for n in sorted(graph.nodes)],
            "edges": [[u, v, list(graph.edges[u, v]["arc"])] for u, v in sorted(graph.edges)],
        })
    if action == "quiver":
        T = triangulation_from_file(load_model(_input(config), TriangulationFile))
        return dump_model(qp_to_file(quiver_from_angulation(T)))
    return compare_exchange_graphs(_require(config, "m"), config.threads).summary() + "\n"


@with_logging
def run_compat(config: RunConfig) -> str:
    boundary = [int(m) for m in _require(config, "boundary")]
    weights = config.option("weights") or []
    data = MarkedSurfaceData(config.option("genus", 0), tuple(boundary), tuple(weights))
    return _json({
        "compatible": check_compatibility(data) if weights else None,
        "decorations": decoration_count(data.genus, boundary, config.option("weight", 1)),
    })


# -- quad_periods -------------------------------------------------------------------

@with_logging
def run_periods(config: RunConfig) -> str:
    p = PolynomialQuadDifferential.parse(_require(config, "poly"))
    table = period_table(p)
    if config.output_format in ("csv", "table"):
        return _frame(config, table.to_frame())
    disc = p.discriminant()
    return _json({
        "polynomial": _require(config, "poly"),
        "discriminant": [disc.real, disc.imag],
        "zeros": [[z.real, z.imag] for z in table.zeros],
        "periods": [{"i": e.i, "j": e.j, "re": e.value.real, "im": e.value.imag, "path": e.method}
                    for e in table.entries],
        "generic": genericity_proxy(p),
        "method": PROXY_METHOD,
    })


@with_logging
def run_chambers(config: RunConfig) -> str:
    if not config.grid or len(config.grid) != 2:
        raise UsageError(detail="chambers needs --grid with two axes start:stop:count")
    if config.option("imz"):
        frame = imz_chamber_scan(config.grid[0], config.grid[1])
    else:
        frame = a2_chamber_scan(config.grid[0], config.grid[1], config.option("a_imag", 0.0),
                                config.option("b_real", 0.0), config.threads)
    return frame.to_csv(index=False, lineterminator="\n") if config.output_format != "table" else _frame(config, frame)


HANDLERS: Dict[str, Callable[[RunConfig], str]] = {
    "mutate": run_mutate,
    "jacobian": run_jacobian,
    "ginzburg": run_ginzburg,
    "euler": run_euler,
    "nondegenerate": run_nondegenerate,
    "hn": run_hn,
    "exchange-graph": run_exchange_graph,
    "chamber": run_chamber,
    "metric": run_metric,
    "twist": run_twist,
    "support": run_support,
    "surface": run_surface,
    "compat": run_compat,
    "periods": run_periods,
    "chambers": run_chambers,
}

DEFAULT_FORMATS = {"exchange-graph": "dot", "surface": "json", "chambers": "csv", "hn": "csv"}


def build_parser() -> argparse.ArgumentParser:
    common = CliParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads for BFS and scans")
    common.add_argument("--backend", choices=["exact", "float"], default=None)
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--format", dest="output_format", choices=["json", "csv", "table", "dot"], default=None)
    common.add_argument("--out", dest="output_path", default=None)

    parser = CliParser(prog="stablab", description="Stability conditions on quiver categories")
    parser.add_argument("--version", action="version", version=f"format_version {FORMAT_VERSION}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=CliParser)

    for name in ("mutate", "jacobian", "ginzburg", "euler", "nondegenerate"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--in", dest="input_path", required=True)
        if name == "mutate":
            p.add_argument("--vertex", nargs="+", required=True, help="vertex, or a word of vertices")
        if name == "jacobian":
            p.add_argument("--max-length", type=int, default=None)
        if name == "ginzburg":
            p.add_argument("--N", type=int, default=3)
        if name == "nondegenerate":
            p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("hn", parents=[common])
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--z", required=True, help="central charge 're,im;re,im;…' on the simples")
    p.add_argument("--oracle", action="store_true", help="use the brute-force chain search")

    p = sub.add_parser("exchange-graph", parents=[common])
    p.add_argument("--seed", required=True)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--intermediate-only", action="store_true")

    p = sub.add_parser("chamber", parents=[common])
    p.add_argument("--imz1", required=True)
    p.add_argument("--imz2", required=True)

    p = sub.add_parser("metric", parents=[common])
    p.add_argument("--probe", default=None)
    p.add_argument("--seed", default=None)
    p.add_argument("--z", default=None)
    p.add_argument("--lam", default=None, help="complex λ, e.g. 0.3+0.2j")
    p.add_argument("--classes", default=None, help="semistable classes '1,0;0,1;…'")

    p = sub.add_parser("twist", parents=[common])
    p.add_argument("--seed", required=True)
    p.add_argument("--simple", required=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--inverse", action="store_true")

    p = sub.add_parser("support", parents=[common])
    p.add_argument("--seed", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--classes", required=True)
    p.add_argument("--norm", choices=["euclidean", "sup"], default="euclidean")

    p = sub.add_parser("surface", parents=[common])
    p.add_argument("action", choices=["flip-graph", "quiver", "compare"])
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--in", dest="input_path", default=None)

    p = sub.add_parser("compat", parents=[common])
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--boundary", nargs="+", type=int, required=True, help="marked points per boundary component")
    p.add_argument("--weights", nargs="*", type=int, default=None)
    p.add_argument("--weight", type=int, default=1)

    p = sub.add_parser("periods", parents=[common])
    p.add_argument("--poly", required=True)

    p = sub.add_parser("chambers", parents=[common])
    p.add_argument("--grid", nargs=2, type=GridAxis.parse, required=True, metavar="START:STOP:COUNT")
    p.add_argument("--imz", action="store_true", help="scan Im Z(S1), Im Z(S2) directly")
    p.add_argument("--a-imag", type=float, default=0.0)
    p.add_argument("--b-real", type=float, default=0.0)
    return parser


_CONFIG_FIELDS = ("subcommand", "input_path", "output_path", "depth", "grid")


def make_config(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    options = {k: v for k, v in values.items()
               if k not in _CONFIG_FIELDS + ("threads", "backend", "tolerance", "output_format")}
    kwargs = {k: values[k] for k in ("threads", "backend", "tolerance") if values.get(k) is not None}
    return RunConfig(
        subcommand=args.subcommand,
        input_path=values.get("input_path"),
        output_path=values.get("output_path"),
        depth=values.get("depth"),
        grid=values.get("grid"),
        output_format=values.get("output_format") or DEFAULT_FORMATS.get(args.subcommand, "json"),
        options=options,
        **kwargs,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr, format="%(message)s")
    try:
        config = make_config(build_parser().parse_args(argv))
        output = HANDLERS[config.subcommand](config)
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(output)
        else:
            sys.stdout.write(output)
        return 0
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except Exception as e:
        return ErrorHandler.handle_error(e)


if __name__ == "__main__":
    sys.exit(main())
