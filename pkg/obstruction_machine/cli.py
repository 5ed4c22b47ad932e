"""
Obstruction Machine CLI

Every engine operation behind one verb. Results go to stdout (text or
--json), logs go to stderr through rich, so stdout is byte-identical between
runs of the same command.

Exit codes: 0 success, 1 domain error, 2 usage error or malformed input.
"""

import argparse
import io
import json
import logging
import re
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import sympy
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .acceptance.engine import AcceptanceEngine
from .arrangement.engine import (
    betti_complement,
    k3_arrangement_from_roots,
    load_arrangement,
    poincare_polynomial,
    single_subspace_betti,
    transversality_check,
)
from .core.config import MachineConfig, get_config, load_config, set_config
from .core.errors import InvalidInput, ObstructionMachineError
from .core.formatting import format_rational, jsonable
from .core.isometry import classify, compose, load_isometry, reflection, reflection_factorization, splitting_sections
from .core.lattice import enumerate_vectors, resolve_lattice, sublattice_report
from .genus.engine import (
    ch_component,
    chern_character_real,
    ell_from_ch,
    ell_product_of_surfaces,
    ell_relation_constant,
    fiber_integrate_surface,
    l_tilde_rank2,
    l_tilde_series,
    series_inverse_check,
    substitute_kappa0,
    verify_bo3_relation,
    verify_degree12_relation,
)
from .genus.graded import GradedPolynomial
from .obstruction.engine import (
    STEP_FLAT_VANISHING,
    STEP_STABLE_RANGE,
    borel_stable_range,
    bott_obstruction,
    e2_region_check,
    first_obstruction_class,
    harer_genus_threshold,
    obstruction_report,
    stabilizer_report,
)
from .obstruction.tensor import connected_sum_pullback, independence_certificate

logger = logging.getLogger(__name__)

PROG = "obstruction-machine"
K3_ROOT_OFFSET = 6
TABLE_WIDTH = 120

_POLYNOMIAL_TEXT = re.compile(r"^[\sA-Za-z0-9_*^+\-/()]+$")


@dataclass
class Output:
    """What a verb produced: the JSON payload and, optionally, custom text."""
    data: Dict[str, Any]
    text: Optional[str] = None
    exit_code: int = 0
    reasoning: List[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def parse_json_arg(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"malformed {what} JSON: {e}") from e


def parse_vectors(text: str, what: str = "vector list") -> List[List[int]]:
    data = parse_json_arg(text, what)
    if not isinstance(data, list) or not all(
        isinstance(v, list) and all(isinstance(x, int) for x in v) for v in data
    ):
        raise InvalidInput(f"{what} must be a JSON list of integer lists")
    return data


def parse_int_list(text: str, what: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as e:
        raise InvalidInput(f"{what} must be comma-separated integers, got {text!r}") from e


def parse_polynomial(text: str) -> GradedPolynomial:
    """Parse "l_1^2*l_2" or "e^2*kappa_1" style input into a graded polynomial."""
    if not _POLYNOMIAL_TEXT.match(text):
        raise InvalidInput(f"unexpected characters in polynomial {text!r}")
    names = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text))
    symbols = {name: sympy.Symbol(name) for name in names}
    try:
        return GradedPolynomial(sympy.sympify(text.replace("^", "**"), locals=symbols))
    except (sympy.SympifyError, SyntaxError, TypeError, ValueError) as e:
        raise InvalidInput(f"cannot parse polynomial {text!r}: {e}") from e


def standard_roots(count: int) -> List[List[int]]:
    """e_7, e_8, ... in K3 coordinates: simple roots of the -E8 blocks."""
    available = 22 - K3_ROOT_OFFSET
    if count < 1 or count > available:
        raise InvalidInput(f"--roots as a count must be between 1 and {available}, got {count}")
    roots = []
    for i in range(K3_ROOT_OFFSET, K3_ROOT_OFFSET + count):
        v = [0] * 22
        v[i] = 1
        roots.append(v)
    return roots


def parse_roots(text: str) -> List[List[int]]:
    stripped = text.strip()
    if stripped.isdigit():
        return standard_roots(int(stripped))
    return parse_vectors(stripped, "root list")


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def cmd_lattice(args: argparse.Namespace) -> Output:
    l = resolve_lattice(args.source)
    if args.signature:
        sig = l.signature
        return Output(data={"lattice": l.label(), "signature": sig.to_dict()}, text=str(sig))
    if args.sublattice:
        report = sublattice_report(l, parse_vectors(args.sublattice))
        return Output(data={"lattice": l.label(), "sublattice": report.to_dict()})
    return Output(data=l.to_dict())


def cmd_roots(args: argparse.Namespace) -> Output:
    l = resolve_lattice(args.source)
    config = get_config().enumeration
    if args.box is not None and args.box > config.max_box:
        raise InvalidInput(f"--box {args.box} exceeds the configured limit {config.max_box}")
    slabs = args.slabs or config.slabs
    vectors = enumerate_vectors(l, args.norm, box=args.box, slabs=slabs)
    return Output(
        data={
            "lattice": l.label(),
            "norm": args.norm,
            "box": args.box,
            "count": len(vectors),
            "vectors": [list(v) for v in vectors],
        }
    )


def cmd_isometry(args: argparse.Namespace) -> Output:
    if args.sections:
        l = resolve_lattice(args.lattice or "K3")
        return Output(data={"lattice": l.label(), "sections": splitting_sections(l).to_dict()})

    if args.reflect:
        l = resolve_lattice(args.lattice or "K3")
        vector = parse_int_list(args.reflect.strip("[] "), "--reflect")
        g = reflection(l, vector)
    elif args.document:
        g = load_isometry(args.document)
    else:
        raise InvalidInput("give an isometry document, --reflect VECTOR or --sections")

    if args.compose:
        g = compose(g, load_isometry(args.compose))

    cls = classify(g)
    factors = reflection_factorization(g)
    data = g.to_dict()
    data.update(cls.to_dict())
    data["reflections"] = len(factors)
    reasoning = [
        "spinor norm: product of the norm signs of a reflection factorization",
        f"factorization length {len(factors)}, parity matches det {cls.determinant}",
    ]
    return Output(data=data, reasoning=reasoning)


def cmd_genus(args: argparse.Namespace) -> Output:
    data: Dict[str, Any] = {}
    reasoning: List[str] = []

    if args.integrate:
        poly = parse_polynomial(args.integrate)
        integrated = fiber_integrate_surface(poly)
        data["integrated"] = integrated.to_dict()
        if args.genus is not None:
            data["kappa0_substituted"] = substitute_kappa0(integrated, args.genus).to_dict()
        reasoning.append("fiber integration: e^(j+1) integrates to kappa_j")
        return Output(data=data, reasoning=reasoning)

    if args.ch is not None:
        data["total"] = chern_character_real(args.ch, args.max_degree).to_dict()
        data["chern_character"] = {
            str(d): ch_component(d, args.ch).to_dict() for d in range(0, args.max_degree + 1, 4)
        }
        return Output(data=data)

    series = l_tilde_series(args.order)
    data["series"] = "x/tanh(x/2)"
    data["order"] = args.order
    data["coefficients"] = {str(k): c for k, c in series.nonzero_terms().items()}
    data["inverse_check"] = series_inverse_check(args.order)
    if args.rank2 is not None:
        data["rank2"] = {"j": args.rank2, "polynomial": l_tilde_rank2(args.rank2).to_dict()}
    if args.relations:
        data["relations"] = [verify_bo3_relation().to_dict(), verify_degree12_relation().to_dict()]
        data["ell_constant"] = ell_relation_constant().to_dict()
        reasoning.append("BO(3) relation: ch_4^2 against ch_8 in H*(BO(3))")
    return Output(data=data, reasoning=reasoning)


def cmd_ell(args: argparse.Namespace) -> Output:
    if args.genera:
        expansion = ell_product_of_surfaces(parse_int_list(args.genera, "--genera"), args.i)
        reasoning = [STEP_FLAT_VANISHING, f"Harer stable range: degrees <= {expansion.stable_upto}"]
        return Output(data=expansion.to_dict(), reasoning=reasoning)
    return Output(data={"i": args.i, "degree": 4 * args.i, "polynomial": ell_from_ch(args.i).to_dict()})


def cmd_sum(args: argparse.Namespace) -> Output:
    text = args.classes.strip()
    if re.fullmatch(r"\d+(\s*,\s*\d+)*", text):
        classes: Any = parse_int_list(text, "class indices")
    else:
        classes = parse_polynomial(text)
    tensor = connected_sum_pullback(classes, args.n)
    return Output(data=tensor.to_dict())


def cmd_independence(args: argparse.Namespace) -> Output:
    monomials = parse_vectors(args.monomials, "monomial list") if args.monomials else None
    cert = independence_certificate(args.n, args.N, monomials)
    reasoning = ["maximal-length terms of distinct monomials are distinct slot permutations"]
    return Output(data=cert.to_dict(), reasoning=reasoning)


def cmd_range(args: argparse.Namespace) -> Output:
    data: Dict[str, Any] = {}
    reasoning: List[str] = []
    if args.p is not None:
        if args.q is None:
            raise InvalidInput("range needs both p and q")
        data.update(borel_stable_range(args.p, args.q).to_dict())
        reasoning.append(STEP_STABLE_RANGE)
    if args.harer is not None:
        data["harer_genus_threshold"] = harer_genus_threshold(args.harer)
    if args.bott:
        i, k = args.bott
        data["bott_obstruction"] = bott_obstruction(i, k)
        reasoning.append(STEP_FLAT_VANISHING)
    if args.first is not None:
        data["first_obstruction"] = first_obstruction_class(args.first).to_dict()
    if not data:
        raise InvalidInput("range needs p q, --harer, --bott or --first")
    return Output(data=data, reasoning=reasoning)


def cmd_stabilizer(args: argparse.Namespace) -> Output:
    l = resolve_lattice(args.lattice)
    if args.region:
        sizes = parse_int_list(args.sizes, "--sizes") if args.sizes else None
        region = e2_region_check(args.max_total_degree, sizes, l)
        return Output(data=region.to_dict(), exit_code=0 if region.all_ok else 1)
    if not args.roots:
        raise InvalidInput("stabilizer needs --roots or --region")
    report = stabilizer_report(l, parse_roots(args.roots))
    reasoning = [
        "pointwise stabilizer acts on the orthogonal complement",
        STEP_STABLE_RANGE,
    ]
    return Output(data=report.to_dict(), reasoning=reasoning)


def cmd_betti(args: argparse.Namespace) -> Output:
    if args.single is not None:
        table = single_subspace_betti(args.single)
        return Output(data=table.to_dict(), text="\n".join(table.lines()))

    if args.roots:
        arrangement = k3_arrangement_from_roots(parse_roots(args.roots))
    elif args.arrangement:
        arrangement = load_arrangement(args.arrangement)
    else:
        raise InvalidInput("betti needs an arrangement document or --roots")

    if args.check:
        result = transversality_check(arrangement, args.max_subset)
        return Output(data=result.to_dict(), exit_code=0 if result.transversal else 1)

    table = betti_complement(arrangement, args.max_degree)
    data = table.to_dict()
    data["poincare"] = poincare_polynomial(table)
    header = [f"subspaces: {table.subspaces}", f"ambient_dim: {table.ambient_dim}", f"valid_upto: {table.valid_upto}"]
    reasoning = ["Goresky-MacPherson: transversal codimension-3 arrangement, one class per subset in degree 2n"]
    return Output(data=data, text="\n".join(header + table.lines()), reasoning=reasoning)


def cmd_report(args: argparse.Namespace) -> Output:
    l = resolve_lattice(args.source)
    genera = parse_int_list(args.genera, "--genera") if args.genera else None
    report = obstruction_report(l, args.k, k3_summand=args.k3_summand, surface_factors=genera)
    data = report.to_dict()
    certificates = data.pop("certificates")
    data["first_obstruction"] = first_obstruction_class(args.k).to_dict()
    return Output(data=data, reasoning=certificates)


def cmd_reproduce(args: argparse.Namespace) -> Output:
    e8_gram = parse_vectors(args.e8_gram, "E8 Gram matrix") if args.e8_gram else None
    report = AcceptanceEngine(e8_gram=e8_gram).run()
    return Output(
        data=report.to_dict(),
        text=render_acceptance_table(report),
        exit_code=0 if report.all_passed else 1,
    )


COMMANDS: Dict[str, Callable[[argparse.Namespace], Output]] = {
    "lattice": cmd_lattice,
    "roots": cmd_roots,
    "isometry": cmd_isometry,
    "genus": cmd_genus,
    "ell": cmd_ell,
    "sum": cmd_sum,
    "independence": cmd_independence,
    "range": cmd_range,
    "stabilizer": cmd_stabilizer,
    "betti": cmd_betti,
    "report": cmd_report,
    "reproduce": cmd_reproduce,
}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, list):
        return "(" + ",".join(_scalar(v) for v in value) + ")"
    return format_rational(value)


def render_text(data: Dict[str, Any], indent: int = 0) -> List[str]:
    """Indented "key: value" lines for an already-jsonable payload."""
    pad = "  " * indent
    lines: List[str] = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(render_text(value, indent + 1))
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                body = render_text(item, indent + 2)
                if body:
                    lines.append(f"{pad}  - {body[0].lstrip()}")
                    lines.extend(body[1:])
        elif isinstance(value, list) and value and all(isinstance(v, list) for v in value):
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  {_scalar(v)}" for v in value)
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: " + ", ".join(_scalar(v) for v in value))
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return lines


def render_acceptance_table(report) -> str:
    table = Table(title="Acceptance criteria", show_lines=False)
    table.add_column("#", justify="right")
    table.add_column("criterion")
    table.add_column("result")
    table.add_column("detail", overflow="fold")
    for r in report.results:
        detail = r.detail if r.error_message is None else f"{r.detail} {r.error_message}".strip()
        table.add_row(str(r.number), r.name, "PASS" if r.passed else "FAIL", detail)

    buffer = io.StringIO()
    console = Console(file=buffer, width=TABLE_WIDTH, color_system=None, force_terminal=False)
    console.print(table)
    console.print(f"{report.passed}/{report.total} criteria passed")
    return buffer.getvalue().rstrip("\n")


def render(output: Output, as_json: bool, cite: bool) -> str:
    data = dict(output.data)
    if cite:
        data["reasoning"] = output.reasoning
    if as_json:
        return json.dumps(jsonable(data), indent=2, ensure_ascii=False)
    if output.text is not None:
        text = output.text
        if cite and output.reasoning:
            text += "\n" + "\n".join(f"reasoning: {step}" for step in output.reasoning)
        return text
    return "\n".join(render_text(jsonable(data)))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class UsageError(Exception):
    """Raised instead of argparse's sys.exit so execute() stays side-effect free."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", dest="as_json", help="machine-readable output")
    common.add_argument("--cite", action="store_true", help="attach the reasoning step behind each result")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    common.add_argument("--config", default=None, help="alternative config.yaml")

    parser = _Parser(prog=PROG, description="Exact lattice, genus and obstruction computations.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("lattice", parents=[common], help="lattice invariants")
    p.add_argument("source", help="built-in name, H+E8 style sum, inline JSON or file")
    p.add_argument("--signature", action="store_true")
    p.add_argument("--sublattice", metavar="VECTORS", help="JSON list of vectors")

    p = sub.add_parser("roots", parents=[common], help="enumerate vectors of a given norm")
    p.add_argument("source")
    p.add_argument("--norm", type=int, default=-2)
    p.add_argument("--box", type=int, default=None)
    p.add_argument("--slabs", type=int, default=None)

    p = sub.add_parser("isometry", parents=[common], help="classify an isometry")
    p.add_argument("document", nargs="?", help="isometry JSON (inline or file)")
    p.add_argument("--lattice", default=None, help="lattice for --reflect and --sections (default K3)")
    p.add_argument("--reflect", metavar="VECTOR", help="comma-separated vector to reflect through")
    p.add_argument("--compose", metavar="DOCUMENT", help="right factor g = document * compose")
    p.add_argument("--sections", action="store_true", help="splitting reflections for the sign quotients")

    p = sub.add_parser("genus", parents=[common], help="x/tanh(x/2) genus and Chern character")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--rank2", type=int, default=None, metavar="J")
    p.add_argument("--relations", action="store_true")
    p.add_argument("--ch", type=int, default=None, metavar="RANK")
    p.add_argument("--max-degree", type=int, default=12)
    p.add_argument("--integrate", metavar="POLY", help="fiber-integrate a polynomial in e over a surface")
    p.add_argument("--genus", type=int, default=None, help="substitute kappa_0 = 2 - 2g")

    p = sub.add_parser("ell", parents=[common], help="the class l_i")
    p.add_argument("i", type=int)
    p.add_argument("--genera", default=None, help="comma-separated genera of surface factors")

    p = sub.add_parser("sum", parents=[common], help="pull l-classes back to a connected sum")
    p.add_argument("classes", help='monomial such as "l_1^2*l_2" or indices "1,1,2"')
    p.add_argument("n", type=int)

    p = sub.add_parser("independence", parents=[common], help="independence certificate")
    p.add_argument("n", type=int)
    p.add_argument("N", type=int)
    p.add_argument("--monomials", default=None, help="JSON list of exponent vectors")

    p = sub.add_parser("range", parents=[common], help="stable ranges and thresholds")
    p.add_argument("p", type=int, nargs="?")
    p.add_argument("q", type=int, nargs="?")
    p.add_argument("--harer", type=int, default=None, metavar="DEGREE")
    p.add_argument("--bott", type=int, nargs=2, default=None, metavar=("I", "K"))
    p.add_argument("--first", type=int, default=None, metavar="K")

    p = sub.add_parser("stabilizer", parents=[common], help="root-tuple stabilizers")
    p.add_argument("--lattice", default="K3")
    p.add_argument("--roots", default=None, help="JSON list of roots, or a count of standard roots")
    p.add_argument("--region", action="store_true", help="check the low-degree region")
    p.add_argument("--max-total-degree", type=int, default=9)
    p.add_argument("--sizes", default=None, help="comma-separated tuple sizes")

    p = sub.add_parser("betti", parents=[common], help="Betti numbers of arrangement complements")
    p.add_argument("arrangement", nargs="?", help="arrangement JSON (inline or file)")
    p.add_argument("--roots", default=None, help="JSON list of K3 roots, or a count of standard roots")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--check", action="store_true", help="transversality only")
    p.add_argument("--max-subset", type=int, default=None)
    p.add_argument("--single", type=int, default=None, metavar="CODIM")

    p = sub.add_parser("report", parents=[common], help="obstruction report for a 4k-manifold")
    p.add_argument("source")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k3-summand", action="store_true")
    p.add_argument("--genera", default=None)

    p = sub.add_parser("reproduce", parents=[common], help="run the acceptance suite")
    p.add_argument("--e8-gram", default=None, help="replace the E8 Gram matrix (fault injection)")

    return parser


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def configure_logging(verbose: bool) -> None:
    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        handler = RichHandler(console=Console(stderr=True), show_time=False, show_path=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        root.addHandler(handler)


def _error_output(error: ObstructionMachineError, as_json: bool) -> str:
    print(f"error: {error.name}: {error.message}", file=sys.stderr)
    if as_json:
        return json.dumps(jsonable({"error": error.name, "message": error.message}), indent=2, ensure_ascii=False)
    return ""


def execute(argv: Sequence[str]) -> Tuple[int, str]:
    """Run one command; returns (exit code, stdout text). Errors go to stderr."""
    argv = list(argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 2, ""
    except SystemExit as e:
        # --help
        return int(e.code or 0), ""

    configure_logging(args.verbose)
    previous: Optional[MachineConfig] = None
    try:
        previous = get_config()
        if args.config:
            set_config(load_config(args.config))
        output = COMMANDS[args.verb](args)
        return output.exit_code, render(output, args.as_json, args.cite)
    except InvalidInput as e:
        return 2, _error_output(e, as_json)
    except ObstructionMachineError as e:
        return 1, _error_output(e, as_json)
    finally:
        set_config(previous)


def run(argv: Optional[Sequence[str]] = None) -> int:
    code, text = execute(sys.argv[1:] if argv is None else argv)
    if text:
        print(text)
    return code


__all__ = ["COMMANDS", "Output", "build_parser", "execute", "render", "render_text", "run"]
