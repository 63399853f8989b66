"""
Service layer module
"""

import logging
from typing import List, Optional, Sequence, Tuple

from src import census
from src import exceptional_lattice as lattice
from src import hilbert_series as hs
from src import hirzebruch as fn
from src import hj_strings as hj
from src.exceptions import DomainError
from src.models import (
    CensusResult,
    ClassifyResult,
    CoverResult,
    DiscrepancyResult,
    ExpandResult,
    FnClassOut,
    FnValueResult,
    HilbertResult,
    ModuliResult,
    OutputEnvelope,
    PlurigenusResult,
    SplittingOut,
    SplittingsResult,
    StringsResult,
)
from src.schema import (
    CENSUS_MAX_LEVEL,
    CENSUS_WORKERS,
    DEFAULT_D_MAX,
    I_SURFACE_CHI,
    I_SURFACE_K2,
    Construction,
    TString,
)
from src.utils import rational_out

logger = logging.getLogger(__name__)


CITE_HJ = "Hirzebruch-Jung expansion of N/Q"
CITE_T = "T-singularities 1/dn^2(1,dna-1) and their iteration from [4], [3,2,...,2,3]"
CITE_DISCREPANCY = "pullback f*K_X = K + Delta solved on the exceptional chain"
CITE_PLURIGENUS = "plurigenus formula chi + m(m-1)/2 K^2 + correction"
CITE_HILBERT = "Hilbert series of weighted complete intersections"
CITE_FN = (
    "intersection theory on F_n: Gamma^2 = 0, Gamma.sigma_inf = 1, sigma_inf^2 = -n"
)
CITE_COVER = (
    "double cover formulas: chi = 2 + L(K+L)/2, K^2 = 2(K+L)^2, p_g = h0(K) + h0(K+L)"
)
CITE_BOUND = "genus bound on the branch curve: d <= 2 p_a + 2"
CITE_MODULI = (
    "moduli count: projective dimension of the branch system minus dim Aut(F_n)"
)
CITE_CENSUS = "census by r - d with r - d <= 2 taken as a cited constraint"


def fn_class_out(c: fn.FnClass) -> FnClassOut:
    x, y = c.to_sigma0()
    return FnClassOut(n=c.n, sigma0=x, ruling=y, label=c.label)


def _case_value(s: fn.Splitting) -> Optional[str]:
    case = fn.splitting_case(s)
    return case.value if case else None


def parse_entries(entries: Sequence[int]) -> TString:
    if not entries:
        raise DomainError("a string needs at least one entry")
    return TString.of(*entries)


class Service:
    def __init__(self, workers: int = CENSUS_WORKERS) -> None:
        """
        Init worker count for the census
        """
        self._workers = workers

    # --- hj ---------------------------------------------------------------

    def expand(self, N: int, Q: int) -> OutputEnvelope:
        """
        Method to expand N/Q into its string
        """
        s = hj.expand(N, Q)
        return OutputEnvelope(
            command="hj expand",
            inputs={"N": N, "Q": Q},
            result=ExpandResult(N=N, Q=Q, tstring=list(s.entries)),
            citations=[CITE_HJ],
        )

    def evaluate(self, entries: Sequence[int]) -> OutputEnvelope:
        s = parse_entries(entries)
        N, Q = hj.evaluate(s)
        return OutputEnvelope(
            command="hj eval",
            inputs={"tstring": list(s.entries)},
            result=ExpandResult(N=N, Q=Q, tstring=list(s.entries)),
            citations=[CITE_HJ],
        )

    def classify(self, entries: Sequence[int]) -> OutputEnvelope:
        """
        Method to classify a string as RDP, T-singularity or neither
        """
        s = parse_entries(entries)
        N, Q = hj.evaluate(s)
        cls = hj.classify_string(s)
        return OutputEnvelope(
            command="hj classify",
            inputs={"tstring": list(s.entries)},
            result=ClassifyResult(
                tstring=list(s.entries),
                N=N,
                Q=Q,
                kind=cls.kind,
                quotient=census.quotient_out(cls.quotient) if cls.is_t else None,
            ),
            citations=[CITE_HJ, CITE_T],
        )

    # --- tstring ----------------------------------------------------------

    def _strings(
        self, command: str, inputs: dict, strings: List[TString]
    ) -> OutputEnvelope:
        return OutputEnvelope(
            command=command,
            inputs=inputs,
            result=StringsResult(
                count=len(strings), strings=[list(s.entries) for s in strings]
            ),
            citations=[CITE_T],
        )

    def generate(self, level: int, d_max: int) -> OutputEnvelope:
        return self._strings(
            "tstring generate",
            {"level": level, "d_max": d_max},
            hj.generate(level, d_max),
        )

    def generate_upto(self, max_order: int, d_max: int) -> OutputEnvelope:
        return self._strings(
            "tstring upto",
            {"max_order": max_order, "d_max": d_max},
            hj.generate_upto(max_order, d_max),
        )

    def descend(self, entries: Sequence[int]) -> OutputEnvelope:
        """
        Method to walk a string back to its index-2 seed
        """
        s = parse_entries(entries)
        path = [s]
        parent = hj.descend(s)
        while parent is not None:
            path.append(parent)
            parent = hj.descend(parent)
        return self._strings("tstring descend", {"tstring": list(s.entries)}, path)

    # --- exceptional lattice ---------------------------------------------

    def _chain(self, entries: Sequence[int]) -> Tuple[TString, Optional[int]]:
        """
        Chain with the K^2 of the resolution when it is a T-string
        """
        s = parse_entries(entries)
        cls = hj.classify_string(s)
        if not cls.is_t:
            return s, None
        return s, int(lattice.k2_resolution(I_SURFACE_K2, len(s), cls.quotient.d))

    def discrepancy(self, entries: Sequence[int]) -> OutputEnvelope:
        """
        Method to compute the pullback coefficients of K_X
        """
        s, k_self = self._chain(entries)
        cfg = lattice.chain_config(s, I_SURFACE_CHI, k_self or 0)
        delta = lattice.discrepancies(cfg)
        k2 = lattice.kx_squared(cfg, delta) if k_self is not None else None
        return OutputEnvelope(
            command="discrepancy",
            inputs={"tstring": list(s.entries)},
            result=DiscrepancyResult(
                tstring=list(s.entries),
                coefficients=[rational_out(c) for c in delta.coeffs],
                cartier_index=lattice.cartier_index(delta),
                k_self=k_self,
                kx_squared=rational_out(k2) if k2 is not None else None,
            ),
            citations=[CITE_DISCREPANCY],
        )

    def plurigenus(
        self, entries: Sequence[int], m: int, chi: int = I_SURFACE_CHI
    ) -> OutputEnvelope:
        s, k_self = self._chain(entries)
        if k_self is None:
            raise DomainError(f"{s} is not the string of a non-canonical T-singularity")
        cfg = lattice.chain_config(s, chi, k_self)
        delta = lattice.discrepancies(cfg)
        k2_x = lattice.kx_squared(cfg, delta)
        value = lattice.plurigenus(chi, k2_x, cfg, delta, m)
        return OutputEnvelope(
            command="plurigenus",
            inputs={"tstring": list(s.entries), "m": m, "chi": chi},
            result=PlurigenusResult(
                tstring=list(s.entries),
                m=m,
                chi=chi,
                k2_x=rational_out(k2_x),
                correction=rational_out(lattice.correction_term(cfg, delta, m)),
                value=rational_out(value),
            ),
            citations=[CITE_DISCREPANCY, CITE_PLURIGENUS],
        )

    # --- hilbert series --------------------------------------------------

    def hilbert(
        self,
        weights: Sequence[int],
        relations: Sequence[int] = (),
        upto: int = 10,
        coeff: Optional[int] = None,
        compare: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
        plurigenera: Optional[Tuple[int, int, int]] = None,
    ) -> OutputEnvelope:
        """
        Method to expand a Hilbert series and run the optional comparisons
        """
        h = hs.series(weights, relations)
        if coeff is not None:
            coefficients = {coeff: hs.coefficient(h, coeff)}
        else:
            coefficients = dict(enumerate(hs.coefficients(h, upto)))

        equal_to_other = None
        if compare is not None:
            equal_to_other = hs.equal(h, hs.series(*compare))

        matches, mismatch = None, None
        if plurigenera is not None:
            chi, k2, m_max = plurigenera
            mismatch = hs.first_mismatch(h, chi, k2, m_max)
            matches = mismatch is None

        inputs = {"weights": list(weights), "relations": list(relations)}
        if coeff is not None:
            inputs["coeff"] = coeff
        else:
            inputs["upto"] = upto
        if compare is not None:
            inputs["compare"] = {
                "weights": list(compare[0]),
                "relations": list(compare[1]),
            }
        if plurigenera is not None:
            inputs["plurigenera"] = list(plurigenera)

        return OutputEnvelope(
            command="hilbert",
            inputs=inputs,
            result=HilbertResult(
                weights=list(h.generator_weights),
                relations=list(h.relation_degrees),
                rational_function=str(h),
                coefficients=coefficients,
                equal_to_other=equal_to_other,
                matches_plurigenera=matches,
                first_mismatch=mismatch,
            ),
            citations=[CITE_HILBERT] + ([CITE_PLURIGENUS] if plurigenera else []),
        )

    # --- hirzebruch ------------------------------------------------------

    def _value(
        self, quantity: str, classes: List[fn.FnClass], value: int
    ) -> OutputEnvelope:
        return OutputEnvelope(
            command=f"fn {quantity}",
            inputs={"n": classes[0].n, "classes": [c.label for c in classes]},
            result=FnValueResult(
                quantity=quantity,
                classes=[fn_class_out(c) for c in classes],
                value=value,
            ),
            citations=[CITE_FN],
        )

    def fn_intersect(self, c1: fn.FnClass, c2: fn.FnClass) -> OutputEnvelope:
        return self._value("intersect", [c1, c2], fn.intersect(c1, c2))

    def fn_h0(self, c: fn.FnClass) -> OutputEnvelope:
        return self._value("h0", [c], fn.h0(c))

    def fn_genus(self, c: fn.FnClass) -> OutputEnvelope:
        return self._value("genus", [c], fn.arithmetic_genus(c))

    def fn_dbound(self, c: fn.FnClass) -> OutputEnvelope:
        envelope = self._value("dbound", [c], fn.d_bound(c))
        return envelope.model_copy(update={"citations": [CITE_FN, CITE_BOUND]})

    def fn_canonical(self, n: int) -> OutputEnvelope:
        k = fn.canonical_class(n)
        return OutputEnvelope(
            command="fn canonical",
            inputs={"n": n},
            result=fn_class_out(k),
            citations=[CITE_FN],
        )

    def fn_cover(self, branch: fn.FnClass) -> OutputEnvelope:
        """
        Method to compute the invariants of a double cover of F_n
        """
        inv = fn.double_cover(branch.n, branch)
        return OutputEnvelope(
            command="fn cover",
            inputs={"n": branch.n, "branch": branch.label},
            result=CoverResult(
                base_n=branch.n,
                branch=fn_class_out(branch),
                adjoint=fn_class_out(inv.adjoint),
                chi=inv.chi,
                k_self=inv.k_self,
                p_g=inv.p_g,
                q=inv.q,
            ),
            citations=[CITE_FN, CITE_COVER],
        )

    def fn_splittings(self, total: fn.FnClass) -> OutputEnvelope:
        splittings = fn.enumerate_splittings(total.n, total)
        return OutputEnvelope(
            command="fn splittings",
            inputs={"n": total.n, "class": total.label},
            result=SplittingsResult(
                total=fn_class_out(total),
                splittings=[
                    SplittingOut(
                        d1=fn_class_out(s.d1),
                        d2=fn_class_out(s.d2),
                        m=s.m,
                        d=s.d,
                        case=_case_value(s),
                    )
                    for s in splittings
                ],
            ),
            citations=[CITE_FN, CITE_BOUND],
        )

    def fn_moduli(self, case: str, d: Optional[int] = None) -> OutputEnvelope:
        try:
            moduli_case = fn.ModuliCase(case)
        except ValueError:
            options = ", ".join(c.value for c in fn.ModuliCase)
            raise DomainError(f"unknown moduli case {case!r}; choose from {options}")
        value = fn.moduli_count(moduli_case, d)
        family_d = fn.moduli_d(moduli_case, d)
        codimension = excess = None
        if family_d is not None:
            codimension = fn.expected_codimension(family_d)
            excess = fn.moduli_excess(family_d, value)
        inputs = {"case": moduli_case.value}
        if d is not None:
            inputs["d"] = d
        return OutputEnvelope(
            command="fn moduli",
            inputs=inputs,
            result=ModuliResult(
                case=moduli_case.value,
                d=family_d,
                moduli=value,
                expected_codimension=codimension,
                excess=excess,
            ),
            citations=[CITE_MODULI],
        )

    # --- census ----------------------------------------------------------

    def census(
        self, levels: Sequence[int] = (0, 1, 2), d_max: int = DEFAULT_D_MAX
    ) -> OutputEnvelope:
        """
        Method to run the census and build the classification and lemma tables
        """
        levels = sorted(set(levels))
        if any(level > CENSUS_MAX_LEVEL for level in levels):
            raise DomainError(
                f"census levels are bounded by r - d <= {CENSUS_MAX_LEVEL}"
            )
        records = census.run_census(levels, d_max, workers=self._workers)
        theorem = (
            census.main_theorem_table(d_max)
            if list(levels) == [0, 1, 2]
            else []
        )
        return OutputEnvelope(
            command="census",
            inputs={"levels": levels, "d_max": d_max},
            result=CensusResult(
                levels=levels,
                d_max=d_max,
                theorem=theorem,
                lemma=census.lemma_table(),
                records=records,
            ),
            citations=[CITE_CENSUS, CITE_BOUND, CITE_MODULI]
            + sorted(set(r.anchor for r in records if r.anchor)),
        )

    def verify(self, singularity: str) -> OutputEnvelope:
        """
        Method to cross-check an admitted type against all modules
        """
        N, Q = census.parse_type(singularity)
        record = census.find_admitted(N, Q)
        report = census.verify_construction(record)
        if not report.passed:
            failed = [c.name for c in report.checks if not c.passed]
            logger.warning("verification of %s failed: %s", report.quotient, failed)
        return OutputEnvelope(
            command="verify",
            inputs={"type": singularity, "N": N, "Q": Q},
            result=report,
            citations=[
                census.CONSTRUCTION_LABELS[Construction(report.construction)],
                CITE_DISCREPANCY,
                CITE_PLURIGENUS,
            ],
        )
