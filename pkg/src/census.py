"""
Classification engine for I-surfaces with one non-canonical T-singularity

Candidates are T-strings with r - d <= 2. Arithmetic filters are computed;
geometric exclusions are table data with their stated reasons.
"""

import concurrent.futures
import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import sympy as sp

from src import exceptional_lattice as lattice
from src import hilbert_series as hs
from src import hirzebruch as fn
from src import hj_strings as hj
from src.exceptions import DomainError, InvariantError
from src.models import (
    CensusRecord,
    CheckResult,
    LemmaRow,
    QuotientOut,
    SmoothabilityEntry,
    VerificationReport,
)
from src.schema import (
    CENSUS_MAX_LEVEL,
    CENSUS_WORKERS,
    DEFAULT_D_MAX,
    I_SURFACE_CHI,
    I_SURFACE_K2,
    I_SURFACE_PG,
    MAIN_COMPONENT_DIM,
    VERIFY_M_MAX,
    Component,
    Construction,
    QuotientType,
    Smoothable,
    TString,
    Verdict,
)
from src.utils import format_rational

logger = logging.getLogger(__name__)


REASONS: Dict[str, str] = {
    "genus-bound": "we have $d\\le 32$",
    "wahl-9": "section of the fibration with a double point, which is impossible",
    "long-chain-3": "the curve $A$ intersects a $(-2)$ curve, which is not possible",
    "level-2-unique": "the singularity must be of type $\\frac{1}{25}(1,14)$",
}

ANCHORS: Dict[str, str] = {
    "genus-bound": "genus bound on the bicanonical branch curve",
    "wahl-9": "index-3 case analysis, string [5,2]",
    "long-chain-3": "index-3 case analysis, strings [4,2,...,2,3,2]",
    "level-2-unique": "cited classification for r - d = 2",
    "level-bound": "cited bound r - d <= 2",
}

CITED_NOTE = "cited constraint: r - d <= 2 and uniqueness of 1/25(1,14) at r - d = 2"
OPEN_NOTE = "bound-admissible, construction open"
SMOOTHABLE_ALL = SmoothabilityEntry(degeneration="all", smoothable=Smoothable.yes)

CONSTRUCTION_CHAINS: Dict[Construction, Optional[TString]] = {
    Construction.double_cover_f2: None,
    Construction.elliptic_i2_blowup: TString.of(4, 3, 2),
    Construction.elliptic_two_blowups: TString.of(3, 5, 2),
}

CONSTRUCTION_CURVES: Dict[Construction, Tuple[str, ...]] = {
    Construction.elliptic_i2_blowup: ("A", "B", "C"),
    Construction.elliptic_two_blowups: ("A", "B", "C"),
}

EXPECTED_PULLBACK: Dict[Construction, Optional[Tuple[sp.Rational, ...]]] = {
    Construction.double_cover_f2: None,  # all coefficients 1/2
    Construction.elliptic_i2_blowup: (
        sp.Rational(2, 3),
        sp.Rational(2, 3),
        sp.Rational(1, 3),
    ),
    Construction.elliptic_two_blowups: (
        sp.Rational(3, 5),
        sp.Rational(4, 5),
        sp.Rational(2, 5),
    ),
}

CONSTRUCTION_LABELS: Dict[Construction, str] = {
    Construction.double_cover_f2: "double cover of F_2 branched on |4σ0+2Γ|",
    Construction.elliptic_i2_blowup: (
        "elliptic surface with (-3)-section and I2 fibre, one blow-up"
    ),
    Construction.elliptic_two_blowups: (
        "elliptic surface with (-3)-section, two blow-ups on a singular fibre"
    ),
}


def quotient_out(q: QuotientType) -> QuotientOut:
    return QuotientOut(N=q.N, Q=q.Q, d=q.d, n=q.n, a=q.a, label=q.label)


def _pending_record(s: TString) -> CensusRecord:
    cls = hj.classify_string(s)
    if not cls.is_t:
        raise InvariantError(f"generated string {s} is not a T-string")
    q = cls.quotient
    level = len(s) - q.d
    return CensusRecord(
        cartier_index=q.n,
        quotient=quotient_out(q),
        tstring=list(s.entries),
        level=level,
        k2_resolution=int(lattice.k2_resolution(I_SURFACE_K2, len(s), q.d)),
        cited=level == CENSUS_MAX_LEVEL,
    )


def enumerate_candidates(level: int, d_max: int) -> List[CensusRecord]:
    """
    One pending record per quotient type reached at this level
    """
    if level < 0:
        raise DomainError(f"level must be >= 0, got {level}")
    if level > CENSUS_MAX_LEVEL:
        raise DomainError(
            f"level {level} exceeds the cited bound r - d <= {CENSUS_MAX_LEVEL}"
        )
    records: List[CensusRecord] = []
    seen = set()
    for s in hj.generate(level, d_max):
        key = hj.quotient_key(*hj.evaluate(s))
        if key in seen:
            continue
        seen.add(key)
        records.append(_pending_record(s))
    logger.debug("level %d, d_max %d: %d candidates", level, d_max, len(records))
    return records


# --- verdict table ------------------------------------------------------


def _is_index2_family(entries: Sequence[int]) -> bool:
    if list(entries) == [4]:
        return True
    return (
        len(entries) >= 2
        and entries[0] == 3
        and entries[-1] == 3
        and all(b == 2 for b in entries[1:-1])
    )


def _is_long_chain_3(entries: Sequence[int]) -> bool:
    """
    [4, 2^k, 3, 2] with k >= 1
    """
    return (
        len(entries) >= 4
        and entries[0] == 4
        and entries[-2:] == [3, 2]
        and all(b == 2 for b in entries[1:-2])
    )


@dataclass(frozen=True)
class Rule:
    key: str
    level: int
    matches: Callable[[List[int]], bool]
    verdict: Verdict
    reason_key: Optional[str] = None
    construction: Optional[Construction] = None


RULES: Tuple[Rule, ...] = (
    Rule(
        "index-2-family",
        0,
        _is_index2_family,
        Verdict.admitted,
        construction=Construction.double_cover_f2,
    ),
    Rule("wahl-9", 1, lambda e: e == [5, 2], Verdict.excluded, "wahl-9"),
    Rule(
        "index-3-short",
        1,
        lambda e: e == [4, 3, 2],
        Verdict.admitted,
        construction=Construction.elliptic_i2_blowup,
    ),
    Rule("long-chain-3", 1, _is_long_chain_3, Verdict.excluded, "long-chain-3"),
    Rule(
        "index-5",
        2,
        lambda e: e == [2, 5, 3],
        Verdict.admitted,
        construction=Construction.elliptic_two_blowups,
    ),
    Rule("level-2-other", 2, lambda e: True, Verdict.excluded, "level-2-unique"),
)


def _match_rule(record: CensusRecord) -> Optional[Rule]:
    forward = list(record.tstring)
    backward = forward[::-1]
    for rule in RULES:
        if rule.level != record.level:
            continue
        if rule.matches(forward) or rule.matches(backward):
            return rule
    return None


def _admitted_data(record: CensusRecord, construction: Construction) -> Dict:
    """
    Moduli, component and smoothability of an admitted type
    """
    if construction == Construction.double_cover_f2:
        d = record.quotient.d
        moduli = fn.moduli_for_d(d)
        data = {
            "moduli_dim": moduli,
            "component": Component.main_component_codim,
            "smoothable": [SMOOTHABLE_ALL],
        }
        if moduli is None:
            data["note"] = OPEN_NOTE
        else:
            data["codimension"] = MAIN_COMPONENT_DIM - moduli
            if moduli == MAIN_COMPONENT_DIM - 1:
                data["component"] = Component.main_component_divisor
        return data

    if construction == Construction.elliptic_i2_blowup:
        moduli = fn.moduli_count(fn.ModuliCase.f6_nodal_branch)
        return {
            "moduli_dim": moduli,
            "codimension": MAIN_COMPONENT_DIM - moduli,
            "component": Component.main_component_divisor,
            "smoothable": [SMOOTHABLE_ALL],
        }

    moduli = fn.moduli_count(fn.ModuliCase.f6_smooth_branch)
    return {
        "moduli_dim": moduli,
        "component": Component.new_component,
        "smoothable": [
            SmoothabilityEntry(degeneration="nodal fibre", smoothable=Smoothable.no),
            SmoothabilityEntry(
                degeneration="cuspidal fibre", smoothable=Smoothable.conjectural
            ),
        ],
        "note": "cuspidal degeneration conjecturally joins the main component",
    }


def resolve(record: CensusRecord, bound: int) -> CensusRecord:
    """
    Apply the arithmetic filter and the verdict table to one record
    """
    rule = _match_rule(record)
    if rule is None:
        logger.warning(
            "no rule for %s at level %d", record.quotient.label, record.level
        )
        return record.model_copy(update={"verdict": Verdict.unresolved})

    if rule.verdict == Verdict.excluded:
        return record.model_copy(
            update={
                "verdict": Verdict.excluded,
                "reason": REASONS[rule.reason_key],
                "anchor": ANCHORS[rule.reason_key],
            }
        )

    if rule.construction == Construction.double_cover_f2 and record.quotient.d > bound:
        return record.model_copy(
            update={
                "verdict": Verdict.excluded,
                "reason": REASONS["genus-bound"],
                "anchor": ANCHORS["genus-bound"],
            }
        )

    update = {"verdict": Verdict.admitted, "construction": rule.construction}
    update.update(_admitted_data(record, rule.construction))
    if record.cited:
        note = update.get("note")
        update["note"] = f"{note}; {CITED_NOTE}" if note else CITED_NOTE
    return record.model_copy(update=update)


def _sort_key(record: CensusRecord):
    q = record.quotient
    return record.cartier_index, q.d, q.N, q.Q


def apply_filters(
    records: Sequence[CensusRecord], workers: int = CENSUS_WORKERS
) -> List[CensusRecord]:
    """
    Resolve pending records concurrently; output sorted by (index, d)
    """
    bound = fn.d_bound(fn.bicanonical_branch())
    resolved: List[CensusRecord] = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(resolve, record, bound) for record in records]
        for f in concurrent.futures.as_completed(futures):
            resolved.append(f.result())
    resolved.sort(key=_sort_key)
    return resolved


def run_census(
    levels: Sequence[int] = (0, 1, 2),
    d_max: int = DEFAULT_D_MAX,
    workers: int = CENSUS_WORKERS,
) -> List[CensusRecord]:
    pending: List[CensusRecord] = []
    for level in levels:
        pending.extend(enumerate_candidates(level, d_max))
    records = apply_filters(pending, workers=workers)
    counts = {v.value: sum(r.verdict == v for r in records) for v in Verdict}
    logger.info("census levels=%s d_max=%d: %s", list(levels), d_max, counts)
    return records


def main_theorem_table(d_max: int = DEFAULT_D_MAX) -> List[CensusRecord]:
    """
    One admitted row per Cartier index; the index-2 row covers the whole family
    """
    admitted = [r for r in run_census(d_max=d_max) if r.verdict == Verdict.admitted]
    rows: List[CensusRecord] = []
    for index in sorted({r.cartier_index for r in admitted}):
        family = [r for r in admitted if r.cartier_index == index]
        head = min(family, key=_sort_key)
        if index == 2:
            head = head.model_copy(
                update={"family_d_max": max(r.quotient.d for r in family), "note": None}
            )
        rows.append(head)
    return rows


LEMMA_ROWS: Tuple[Tuple[int, int, int, str, Tuple[str, ...], TString], ...] = (
    (0, 2, 0, "1/4d(1,2d-1)", ("[4]", "[3,3]", "[3,2,...,2,3]"), TString.of(4)),
    (1, 3, -1, "1/18(1,5)", ("[4,3,2]",), TString.of(4, 3, 2)),
    (2, 5, -2, "1/25(1,14)", ("[2,5,3]",), TString.of(2, 5, 3)),
)


def lemma_table() -> List[LemmaRow]:
    """
    Cases by r - d, with K^2 of the resolution recomputed from a representative
    """
    rows = []
    for r_minus_d, n, k2, label, strings, representative in LEMMA_ROWS:
        cls = hj.classify_string(representative)
        if not cls.is_t or cls.quotient.n != n:
            raise InvariantError(f"{representative} does not have index {n}")
        recomputed = lattice.k2_resolution(
            I_SURFACE_K2, len(representative), cls.quotient.d
        )
        if recomputed != k2 or len(representative) - cls.quotient.d != r_minus_d:
            raise InvariantError(
                f"K^2 mismatch in row r-d={r_minus_d}: {recomputed} != {k2}"
            )
        rows.append(
            LemmaRow(
                r_minus_d=r_minus_d,
                n=n,
                k2_resolution=k2,
                quotient=label,
                strings=list(strings),
            )
        )
    return rows


# --- verification -------------------------------------------------------


def _check(name: str, expected, actual) -> CheckResult:
    return CheckResult(
        name=name,
        passed=expected == actual,
        expected=_show(expected),
        actual=_show(actual),
    )


def _show(value) -> str:
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_show(v) for v in value) + ")"
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, (int, sp.Rational)):
        return format_rational(value)
    return str(value)


def verify_construction(record: CensusRecord) -> VerificationReport:
    """
    Cross-check an admitted type against every module
    """
    if record.verdict != Verdict.admitted or record.construction is None:
        raise DomainError(f"{record.quotient.label} is not an admitted census type")
    construction = Construction(record.construction)
    recorded = TString(tuple(record.tstring))
    chain = CONSTRUCTION_CHAINS[construction] or recorded
    checks: List[CheckResult] = [
        _check(
            "construction chain is the recorded string up to orientation",
            True,
            chain in (recorded, hj.mirror(recorded)),
        )
    ]

    cls = hj.classify_string(chain)
    d = cls.quotient.d
    k_self = int(lattice.k2_resolution(I_SURFACE_K2, len(chain), d))
    cfg = lattice.chain_config(
        chain, I_SURFACE_CHI, k_self, CONSTRUCTION_CURVES.get(construction)
    )
    delta = lattice.discrepancies(cfg)
    expected = EXPECTED_PULLBACK[construction] or tuple(
        sp.Rational(1, 2) for _ in range(len(chain))
    )
    checks.append(_check("pullback coefficients", expected, delta.coeffs))
    checks.append(
        _check("Cartier index", record.cartier_index, lattice.cartier_index(delta))
    )
    k2_x = lattice.kx_squared(cfg, delta)
    checks.append(_check("K_X^2", I_SURFACE_K2, k2_x))
    checks.append(
        _check("(K+Delta)^2 expanded", k2_x, lattice.self_intersection(cfg, delta))
    )
    for m in range(2, VERIFY_M_MAX + 1):
        checks.append(
            _check(f"correction term m={m}", 0, lattice.correction_term(cfg, delta, m))
        )
        checks.append(
            _check(
                f"plurigenus m={m}",
                I_SURFACE_CHI + m * (m - 1) // 2 * I_SURFACE_K2,
                lattice.plurigenus(I_SURFACE_CHI, k2_x, cfg, delta, m),
            )
        )

    if construction == Construction.double_cover_f2:
        cover = fn.double_cover(fn.BICANONICAL_BASE, fn.bicanonical_branch())
        checks.append(_check("p_g of the double cover of F_2", I_SURFACE_PG, cover.p_g))
        checks.append(
            _check("chi of the double cover of F_2", I_SURFACE_CHI, cover.chi)
        )
        checks.append(_check("K^2 of the minimal resolution", k_self, cover.k_self))
        checks.append(
            _check(
                "d within the genus bound",
                True,
                d <= fn.d_bound(fn.bicanonical_branch()),
            )
        )
    else:
        cover = fn.double_cover(fn.ELLIPTIC_BASE, fn.elliptic_branch())
        checks.append(
            _check("p_g of the elliptic double cover of F_6", I_SURFACE_PG, cover.p_g)
        )
        checks.append(_check("K^2 of the minimal elliptic surface", 0, cover.k_self))
        checks.append(
            _check("adjoint class is a ruling", fn.FnClass.ruling(6), cover.adjoint)
        )

    if construction == Construction.elliptic_i2_blowup:
        ring = hs.index3_canonical_ring()
        subring = hs.index3_low_degree_subring()
        checks.append(
            _check(
                "canonical ring series equals the hypersurface series",
                True,
                hs.equal(ring, hs.gorenstein_canonical_ring()),
            )
        )
        checks.append(
            _check(
                "canonical ring matches the plurigenera",
                True,
                hs.matches_plurigenera(ring, I_SURFACE_CHI, I_SURFACE_K2, VERIFY_M_MAX),
            )
        )
        checks.append(
            _check("S_4 = R_4", hs.coefficient(ring, 4), hs.coefficient(subring, 4))
        )
        checks.append(_check("dim S_5", 12, hs.coefficient(subring, 5)))
        checks.append(_check("dim R_5", 13, hs.coefficient(ring, 5)))

    if record.moduli_dim is not None:
        case = (
            fn.ModuliCase.f6_nodal_branch
            if construction == Construction.elliptic_i2_blowup
            else fn.ModuliCase.f6_smooth_branch
            if construction == Construction.elliptic_two_blowups
            else None
        )
        recomputed = fn.moduli_for_d(d) if case is None else fn.moduli_count(case)
        checks.append(_check("moduli count", record.moduli_dim, recomputed))

    return VerificationReport(
        quotient=record.quotient.label,
        construction=construction,
        checks=checks,
        passed=all(c.passed for c in checks),
    )


_TYPE_PATTERNS = (
    re.compile(r"^1/(\d+)\(1,\s*(\d+)\)$"),
    re.compile(r"^(\d+)\s*[,/]\s*(\d+)$"),
)


def parse_type(text: str) -> Tuple[int, int]:
    """
    Accepts "1/18(1,5)", "18,5" or "18/5"
    """
    for pattern in _TYPE_PATTERNS:
        found = pattern.match(text.strip())
        if found:
            return int(found.group(1)), int(found.group(2))
    raise DomainError(f"cannot parse singularity type {text!r}; use 1/N(1,Q) or N,Q")


def find_admitted(N: int, Q: int, d_max: int = DEFAULT_D_MAX) -> CensusRecord:
    if not 0 < Q < N:
        raise DomainError(f"Q out of range: need 0 < Q < {N}, got {Q}")
    cls = hj.classify_string(hj.expand(N, Q))
    if not cls.is_t:
        raise DomainError(f"1/{N}(1,{Q}) is not a non-canonical T-singularity")
    d = cls.quotient.d
    if d > d_max:
        raise DomainError(
            f"1/{N}(1,{Q}) has d={d}, outside the census range d <= {d_max}"
        )
    key = hj.quotient_key(N, Q)
    for record in run_census(d_max=d_max):
        if hj.quotient_key(record.quotient.N, record.quotient.Q) == key:
            if record.verdict != Verdict.admitted:
                verdict = Verdict(record.verdict).value
                raise DomainError(f"1/{N}(1,{Q}) is {verdict}: {record.reason}")
            return record
    raise DomainError(f"1/{N}(1,{Q}) is not a census candidate")
