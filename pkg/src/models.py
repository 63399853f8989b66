"""
Output models: the envelope, census rows and per-command payloads
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.schema import Component, Construction, Smoothable, StringKind, Verdict


class APIModel(BaseModel):
    model_config = ConfigDict(use_enum_values=True, frozen=True)


class RationalOut(APIModel):
    num: int
    den: int = Field(gt=0)


class QuotientOut(APIModel):
    N: int
    Q: int
    d: int
    n: int
    a: int
    label: str


class SmoothabilityEntry(APIModel):
    degeneration: str
    smoothable: Smoothable


class CensusRecord(APIModel):
    cartier_index: int
    quotient: QuotientOut
    tstring: List[int]
    level: int  # r - d
    k2_resolution: int
    verdict: Verdict = Verdict.pending
    reason: Optional[str] = None
    anchor: Optional[str] = None
    cited: bool = False
    construction: Optional[Construction] = None
    moduli_dim: Optional[int] = None
    component: Component = Component.not_applicable
    codimension: Optional[int] = None
    smoothable: List[SmoothabilityEntry] = Field(default_factory=list)
    family_d_max: Optional[int] = None
    note: Optional[str] = None


class LemmaRow(APIModel):
    r_minus_d: int
    n: int
    k2_resolution: int
    quotient: str
    strings: List[str]


class CheckResult(APIModel):
    name: str
    passed: bool
    expected: str
    actual: str


class VerificationReport(APIModel):
    quotient: str
    construction: Construction
    checks: List[CheckResult]
    passed: bool


class CensusResult(APIModel):
    levels: List[int]
    d_max: int
    theorem: List[CensusRecord]
    lemma: List[LemmaRow]
    records: List[CensusRecord]


class ExpandResult(APIModel):
    N: int
    Q: int
    tstring: List[int]


class ClassifyResult(APIModel):
    tstring: List[int]
    N: int
    Q: int
    kind: StringKind
    quotient: Optional[QuotientOut] = None


class StringsResult(APIModel):
    count: int
    strings: List[List[int]]


class DiscrepancyResult(APIModel):
    tstring: List[int]
    coefficients: List[RationalOut]
    cartier_index: int
    k_self: Optional[int] = None
    kx_squared: Optional[RationalOut] = None


class PlurigenusResult(APIModel):
    tstring: List[int]
    m: int
    chi: int
    k2_x: RationalOut
    correction: RationalOut
    value: RationalOut


class HilbertResult(APIModel):
    weights: List[int]
    relations: List[int]
    rational_function: str
    coefficients: Dict[int, int]
    equal_to_other: Optional[bool] = None
    matches_plurigenera: Optional[bool] = None
    first_mismatch: Optional[int] = None


class FnClassOut(APIModel):
    n: int
    sigma0: int
    ruling: int
    label: str


class FnValueResult(APIModel):
    quantity: str
    classes: List[FnClassOut]
    value: int


class ModuliResult(APIModel):
    case: str
    d: Optional[int] = None
    moduli: int
    expected_codimension: Optional[int] = None
    excess: Optional[int] = None


class CoverResult(APIModel):
    base_n: int
    branch: FnClassOut
    adjoint: FnClassOut
    chi: int
    k_self: int
    p_g: int
    q: int


class SplittingOut(APIModel):
    d1: FnClassOut
    d2: FnClassOut
    m: int
    d: int
    case: Optional[str] = None


class SplittingsResult(APIModel):
    total: FnClassOut
    splittings: List[SplittingOut]


class OutputEnvelope(BaseModel):
    command: str
    inputs: Dict[str, Any]
    result: Any
    citations: List[str]
