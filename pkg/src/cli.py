"""
Command line frontend: parses argv, calls the service and renders the envelope
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from src import hirzebruch as fn
from src.exceptions import DomainError, InvariantError
from src.models import OutputEnvelope
from src.schema import CENSUS_MAX_LEVEL, DEFAULT_D_MAX, I_SURFACE_CHI, TString
from src.service import Service
from src.utils import markdown_table

logger = logging.getLogger(__name__)

service = Service()


# --- argument types -----------------------------------------------------


def int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma separated integers, got {text!r}"
        )


def fn_class_arg(text: str):
    """
    "x,y" for x*sigma_0 + y*Gamma; the surface comes from --n
    """
    values = int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"a class is given as x,y, got {text!r}")
    return tuple(values)


def series_arg(text: str):
    """
    "w1,w2,...:e1,e2,..." for weights and relation degrees
    """
    weights, _, relations = text.partition(":")
    return int_list(weights), int_list(relations)


def _fn(args, attr: str = "cls") -> fn.FnClass:
    x, y = getattr(args, attr)
    return fn.FnClass.from_sigma0(args.n, x, y)


# --- parser -------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "md"), default="text")
    common.add_argument(
        "--out", type=Path, default=None, help="write output to this path"
    )
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        "isurf", description="Exact computations for T-singular I-surfaces"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    hj = commands.add_parser("hj", help="Hirzebruch-Jung strings").add_subparsers(
        dest="action", required=True
    )
    p = hj.add_parser("expand", parents=[common])
    p.add_argument("N", type=int)
    p.add_argument("Q", type=int)
    p.set_defaults(run=lambda a: service.expand(a.N, a.Q))
    p = hj.add_parser("eval", parents=[common])
    p.add_argument("entries", type=int, nargs="+")
    p.set_defaults(run=lambda a: service.evaluate(a.entries))
    p = hj.add_parser("classify", parents=[common])
    p.add_argument("entries", type=int, nargs="+")
    p.set_defaults(run=lambda a: service.classify(a.entries))

    ts = commands.add_parser("tstring", help="T-string enumeration").add_subparsers(
        dest="action", required=True
    )
    p = ts.add_parser("generate", parents=[common])
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--dmax", type=int, default=DEFAULT_D_MAX)
    p.set_defaults(run=lambda a: service.generate(a.level, a.dmax))
    p = ts.add_parser("upto", parents=[common])
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--dmax", type=int, default=DEFAULT_D_MAX)
    p.set_defaults(run=lambda a: service.generate_upto(a.max_order, a.dmax))
    p = ts.add_parser("descend", parents=[common])
    p.add_argument("entries", type=int, nargs="+")
    p.set_defaults(run=lambda a: service.descend(a.entries))

    p = commands.add_parser("discrepancy", parents=[common])
    p.add_argument("entries", type=int, nargs="+")
    p.set_defaults(run=lambda a: service.discrepancy(a.entries))

    p = commands.add_parser("plurigenus", parents=[common])
    p.add_argument("entries", type=int, nargs="+")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--chi", type=int, default=I_SURFACE_CHI)
    p.set_defaults(run=lambda a: service.plurigenus(a.entries, a.m, a.chi))

    p = commands.add_parser("hilbert", parents=[common])
    p.add_argument("--weights", type=int_list, required=True)
    p.add_argument("--relations", type=int_list, default=[])
    p.add_argument("--coeff", type=int, default=None)
    p.add_argument("--upto", type=int, default=10)
    p.add_argument("--compare", type=series_arg, default=None, metavar="W:R")
    p.add_argument(
        "--plurigenera", type=int, nargs=3, default=None, metavar=("CHI", "K2", "MMAX")
    )
    p.set_defaults(
        run=lambda a: service.hilbert(
            a.weights, a.relations, a.upto, a.coeff, a.compare, a.plurigenera
        )
    )

    fns = commands.add_parser("fn", help="Hirzebruch surfaces").add_subparsers(
        dest="action", required=True
    )
    p = fns.add_parser("intersect", aliases=["intersection"], parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("cls", type=fn_class_arg)
    p.add_argument("other", type=fn_class_arg)
    p.set_defaults(run=lambda a: service.fn_intersect(_fn(a), _fn(a, "other")))
    for name, method in (
        ("h0", service.fn_h0),
        ("genus", service.fn_genus),
        ("dbound", service.fn_dbound),
        ("cover", service.fn_cover),
        ("splittings", service.fn_splittings),
    ):
        p = fns.add_parser(name, parents=[common])
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--class", dest="cls", type=fn_class_arg, required=True)
        p.set_defaults(run=lambda a, method=method: method(_fn(a)))
    p = fns.add_parser("canonical", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=lambda a: service.fn_canonical(a.n))
    p = fns.add_parser("moduli", parents=[common])
    p.add_argument("case", choices=[c.value for c in fn.ModuliCase])
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(run=lambda a: service.fn_moduli(a.case, a.d))

    p = commands.add_parser("census", parents=[common])
    p.add_argument(
        "--levels", type=int_list, default=list(range(CENSUS_MAX_LEVEL + 1))
    )
    p.add_argument("--dmax", type=int, default=DEFAULT_D_MAX)
    p.set_defaults(run=lambda a: service.census(a.levels, a.dmax))

    p = commands.add_parser("verify", parents=[common])
    p.add_argument("type", help='"1/18(1,5)" or "18,5"')
    p.set_defaults(run=lambda a: service.verify(a.type))

    p = commands.add_parser("schema", parents=[common])
    p.set_defaults(run=None)
    return parser


# --- text renderers -----------------------------------------------------


def _rational(r: Dict) -> str:
    return str(r["num"]) if r["den"] == 1 else f"{r['num']}/{r['den']}"


def _entries(entries: Sequence[int]) -> str:
    return str(TString.of(*entries))


def _expand(res: Dict) -> List[str]:
    return [_entries(res["tstring"])]


def _eval(res: Dict) -> List[str]:
    return [f"{res['N']}/{res['Q']}"]


def _classify(res: Dict) -> List[str]:
    if res["kind"] == "rational_double_point":
        return ["rational double point"]
    if res["kind"] == "not_t":
        return [f"not a T-singularity: 1/{res['N']}(1,{res['Q']})"]
    q = res["quotient"]
    return [f"T-singularity d={q['d']} n={q['n']} a={q['a']}"]


def _strings(res: Dict) -> List[str]:
    return [_entries(s) for s in res["strings"]]


def _discrepancy(res: Dict) -> List[str]:
    lines = [
        "(" + ", ".join(_rational(c) for c in res["coefficients"]) + ")",
        f"index {res['cartier_index']}",
    ]
    if res["kx_squared"] is not None:
        lines.append(f"K^2 = {_rational(res['kx_squared'])}")
    return lines


def _plurigenus(res: Dict) -> List[str]:
    return [
        f"P_{res['m']} = {_rational(res['value'])}",
        f"correction {_rational(res['correction'])}",
    ]


def _hilbert(res: Dict) -> List[str]:
    coefficients = res["coefficients"]
    # json mode may turn the degree keys into strings
    degrees = sorted(coefficients, key=int)
    if len(degrees) == 1 and int(degrees[0]) != 0:
        lines = [str(coefficients[degrees[0]])]
    else:
        lines = [
            res["rational_function"],
            ", ".join(str(coefficients[k]) for k in degrees),
        ]
    if res["equal_to_other"] is not None:
        lines.append(f"equal: {str(res['equal_to_other']).lower()}")
    if res["matches_plurigenera"] is not None:
        lines.append(f"matches plurigenera: {str(res['matches_plurigenera']).lower()}")
        if res["first_mismatch"] is not None:
            lines.append(f"first mismatch at m={res['first_mismatch']}")
    return lines


def _fn_value(res: Dict) -> List[str]:
    return [str(res["value"])]


def _moduli(res: Dict) -> List[str]:
    lines = [str(res["moduli"])]
    if res["d"] is not None:
        lines.append(
            f"d={res['d']} expected codimension {res['expected_codimension']}, "
            f"excess {res['excess']}"
        )
    return lines


def _fn_class(res: Dict) -> List[str]:
    return [f"{res['label']} on F_{res['n']}"]


def _cover(res: Dict) -> List[str]:
    return [
        f"chi={res['chi']} K^2={res['k_self']} p_g={res['p_g']} q={res['q']} "
        f"K+L={res['adjoint']['label']}"
    ]


def _splittings(res: Dict) -> List[str]:
    lines = []
    for s in res["splittings"]:
        line = f"m={s['m']} d={s['d']} D1={s['d1']['label']} D2={s['d2']['label']}"
        if s["case"]:
            line += f" ({s['case']})"
        lines.append(line)
    return lines


def _theorem_rows(rows: List[Dict]) -> List[List[str]]:
    out = []
    for r in rows:
        q = r["quotient"]
        label = q["label"]
        if r["family_d_max"]:
            label = f"1/4d(1,2d-1), d<={r['family_d_max']}"
        out.append(
            [
                str(r["cartier_index"]),
                label,
                r["construction"] or "",
                str(r["moduli_dim"]) if r["moduli_dim"] is not None else "",
                r["component"],
            ]
        )
    return out


THEOREM_HEADERS = (
    "Cartier index",
    "T-singularity",
    "Construction",
    "Moduli",
    "Component",
)
LEMMA_HEADERS = ("r-d", "n", "K^2", "Singularity", "T-strings")
RECORD_HEADERS = ("n", "d", "Singularity", "T-string", "Verdict", "Detail")


def _record_detail(r: Dict) -> str:
    if r["verdict"] == "excluded":
        return r["reason"] or ""
    if r["verdict"] == "admitted":
        detail = f"{r['construction']}, moduli {r['moduli_dim']}"
        return detail + (f"; {r['note']}" if r["note"] else "")
    return r["verdict"]


def _census_tables(res: Dict, md: bool) -> List[str]:
    def table(headers, rows):
        if md:
            return markdown_table(headers, rows)
        return ["  ".join(row) for row in rows]

    lines: List[str] = []
    if res["theorem"]:
        lines += ["# Classification"] if md else ["classification:"]
        lines += table(THEOREM_HEADERS, _theorem_rows(res["theorem"]))
        lines.append("")
    lines += ["# Cases by r - d"] if md else ["cases by r - d:"]
    lines += table(
        LEMMA_HEADERS,
        [
            [
                str(r["r_minus_d"]),
                str(r["n"]),
                str(r["k2_resolution"]),
                r["quotient"],
                " or ".join(r["strings"]),
            ]
            for r in res["lemma"]
        ],
    )
    lines.append("")
    lines += ["# Candidates"] if md else ["candidates:"]
    lines += table(
        RECORD_HEADERS,
        [
            [
                str(r["cartier_index"]),
                str(r["quotient"]["d"]),
                r["quotient"]["label"],
                _entries(r["tstring"]),
                r["verdict"],
                _record_detail(r),
            ]
            for r in res["records"]
        ],
    )
    return lines


def _verify(res: Dict, md: bool = False) -> List[str]:
    if md:
        lines = [f"# {res['quotient']}: {res['construction']}"]
        lines += markdown_table(
            ("Check", "Expected", "Actual", "Passed"),
            [
                [c["name"], c["expected"], c["actual"], "yes" if c["passed"] else "no"]
                for c in res["checks"]
            ],
        )
        return lines
    lines = [f"{res['quotient']} via {res['construction']}"]
    for c in res["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        lines.append(
            f"{status} {c['name']}: expected {c['expected']}, got {c['actual']}"
        )
    lines.append("all checks passed" if res["passed"] else "verification failed")
    return lines


RENDERERS: Dict[str, Callable[[Dict], List[str]]] = {
    "hj expand": _expand,
    "hj eval": _eval,
    "hj classify": _classify,
    "tstring generate": _strings,
    "tstring upto": _strings,
    "tstring descend": _strings,
    "discrepancy": _discrepancy,
    "plurigenus": _plurigenus,
    "hilbert": _hilbert,
    "fn intersect": _fn_value,
    "fn h0": _fn_value,
    "fn genus": _fn_value,
    "fn dbound": _fn_value,
    "fn moduli": _moduli,
    "fn canonical": _fn_class,
    "fn cover": _cover,
    "fn splittings": _splittings,
}


def render(envelope: OutputEnvelope, fmt: str) -> str:
    """
    Render an envelope as text, markdown or JSON
    """
    if fmt == "json":
        return envelope.model_dump_json(indent=2)
    res = envelope.model_dump(mode="json")["result"]
    if envelope.command == "census":
        lines = _census_tables(res, md=fmt == "md")
    elif envelope.command == "verify":
        lines = _verify(res, md=fmt == "md")
    else:
        lines = RENDERERS[envelope.command](res)
    return "\n".join(lines)


def schema_document() -> str:
    return json.dumps(OutputEnvelope.model_json_schema(), indent=2, sort_keys=True)


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _emit(text: str, out: Optional[Path], envelope: Optional[OutputEnvelope]) -> None:
    if out is None:
        print(text)
        return
    if out.is_dir():
        if envelope is None or envelope.command != "census":
            raise DomainError(
                f"--out {out} is a directory; only census writes into one"
            )
        (out / "census.json").write_text(envelope.model_dump_json(indent=2) + "\n")
        logger.info("wrote %s", out / "census.json")
        print(text)
        return
    out.write_text(text + "\n")
    logger.info("wrote %s", out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point; returns the process exit code
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.run is None:
            _emit(schema_document(), args.out, None)
            return 0
        envelope = args.run(args)
        _emit(render(envelope, args.format), args.out, envelope)
    except DomainError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except InvariantError as e:
        logger.exception("internal check failed")
        print(f"internal error: {e.detail}", file=sys.stderr)
        return e.exit_code
    return 0
