import hashlib
import json
from fractions import Fraction
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import config
from .errors import InputError
from .exactnum import Matrix, scalar_from_json
from .repdata import RepData
from .reptools import ModularRep

COMMANDS = (
    "validate",
    "expand",
    "det-check",
    "hyper-check",
    "dual",
    "shift",
    "basis",
    "invert",
    "gf-check",
    "dims",
    "form-basis",
    "rep-audit",
    "reduce",
)

NEEDS_DATA = {"validate", "expand", "det-check", "hyper-check", "dual", "shift", "basis", "invert", "gf-check", "form-basis"}
NEEDS_REP = {"dims", "rep-audit", "reduce"}


class CyclotomicModel(BaseModel):
    """sum(c * zeta_N**e) with exact string coefficients"""

    conductor: int = Field(..., ge=1)
    terms: list[tuple[int, Union[int, str]]] = []


Scalar = Union[int, str, CyclotomicModel]


def _scalar(value: Scalar):
    if isinstance(value, CyclotomicModel):
        value = value.model_dump()
    return scalar_from_json(value)


def _matrix(rows: list[list[Scalar]]) -> Matrix:
    return Matrix([[_scalar(x) for x in row] for row in rows])


class RepDataModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lam: list[Union[int, str]] = Field(..., alias="lambda", min_length=1)
    X: list[list[Scalar]]

    @field_validator("lam")
    @classmethod
    def exact_rationals(cls, value):
        for x in value:
            try:
                Fraction(str(x))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"'{x}' is not an exact rational") from exc
        return value

    def to_domain(self) -> RepData:
        return RepData(tuple(Fraction(str(x)) for x in self.lam), _matrix(self.X))


class ModularRepModel(BaseModel):
    conductor: int = Field(..., ge=1)
    S: list[list[Scalar]]
    T_diag: list[Scalar] = Field(..., min_length=1)

    def to_domain(self) -> ModularRep:
        return ModularRep(self.conductor, _matrix(self.S), tuple(_scalar(t) for t in self.T_diag))


class PrincipalPartTerm(BaseModel):
    component: int = Field(..., ge=0)
    order: int = Field(..., ge=1)
    coefficient: Union[int, str] = 1


class PrincipalPartModel(BaseModel):
    terms: list[PrincipalPartTerm] = []

    def to_domain(self) -> dict:
        part: dict = {}
        for term in self.terms:
            key = (term.component, term.order)
            part[key] = part.get(key, Fraction(0)) + Fraction(str(term.coefficient))
        return {key: value for key, value in part.items() if value}


class JobInput(BaseModel):
    """Input document: exponent data, representation matrices and a principal part, each optional"""

    model_config = ConfigDict(populate_by_name=True)

    lam: Optional[list[Union[int, str]]] = Field(default=None, alias="lambda")
    X: Optional[list[list[Scalar]]] = None
    rep: Optional[ModularRepModel] = None
    principal_part: Optional[list[PrincipalPartTerm]] = None

    @model_validator(mode="after")
    def lambda_with_x(self):
        if (self.lam is None) != (self.X is None):
            raise ValueError("'lambda' and 'X' must be given together")
        return self

    @property
    def has_data(self) -> bool:
        return self.lam is not None

    def repdata(self) -> RepData:
        if self.lam is None:
            raise InputError("input has no 'lambda' and 'X'")
        return RepDataModel(lam=self.lam, X=self.X).to_domain()

    def modular_rep(self) -> Optional[ModularRep]:
        return self.rep.to_domain() if self.rep is not None else None

    def part(self) -> dict:
        return PrincipalPartModel(terms=self.principal_part or []).to_domain()


class JobSpec(BaseModel):
    command: Literal[COMMANDS]
    input: JobInput
    order: int = Field(default_factory=lambda: config.DEFAULT_ORDER, ge=1)
    max_pole: int = Field(default_factory=lambda: config.DEFAULT_MAX_POLE, ge=1)
    bi_order: Optional[tuple[int, int]] = None
    blocks: Optional[list[int]] = None
    component: Optional[int] = None
    pair: Optional[tuple[int, int]] = None
    weight: Optional[str] = None
    output: Optional[str] = None

    @model_validator(mode="after")
    def required_fields(self):
        cap = config.MAX_ORDER
        orders = [self.order, self.max_pole, *(self.bi_order or ())]
        if any(n < 1 for n in orders):
            raise ValueError("orders must be positive")
        if any(n > cap for n in orders):
            raise ValueError(f"orders are capped at {cap} (VVMF_MAX_ORDER)")
        if self.command in NEEDS_DATA and not self.input.has_data:
            raise ValueError(f"'{self.command}' needs 'lambda' and 'X'")
        if self.command in NEEDS_REP and self.input.rep is None:
            raise ValueError(f"'{self.command}' needs 'rep'")
        if self.command == "shift" and self.pair is None:
            raise ValueError("'shift' needs a pair i,j")
        if self.command == "invert" and self.input.principal_part is None:
            raise ValueError("'invert' needs 'principal_part'")
        if self.command in ("dims", "form-basis") and self.weight is None:
            raise ValueError(f"'{self.command}' needs a weight")
        if self.command == "gf-check" and self.bi_order is None:
            self.bi_order = (self.order, self.max_pole)
        return self

    def digest(self) -> str:
        payload = self.model_dump(mode="json", by_alias=True, exclude={"output"})
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


class CheckModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(..., alias="pass")
    lhs: Any = None
    rhs: Any = None
    detail: str = ""


class ReportModel(BaseModel):
    command: str
    inputs_digest: str
    status: int
    results: Any = None
    checks: list[CheckModel] = []
    error: Optional[dict] = None

    def to_json(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)


def parse_job(doc: dict) -> JobSpec:
    try:
        return JobSpec.model_validate(doc)
    except ValidationError as exc:
        errors = [{"loc": list(e["loc"]), "msg": e["msg"]} for e in exc.errors()]
        raise InputError("invalid job", errors=errors) from exc


def parse_input(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    return doc
