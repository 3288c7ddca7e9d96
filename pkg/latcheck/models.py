"""Pydantic models for catalog records and verification reports."""

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from latcheck.torsion.isometry import Outcome

Entry = Union[int, str]
Severity = Literal["error", "warning", "info"]


# -- catalog records ---------------------------------------------------


class LatticeRecord(BaseModel):
    """Named lattice given by its Gram matrix."""

    gram: list[list[int]]
    provenance: str


class DiscRecord(BaseModel):
    """Discriminant form as generator orders plus rational q/b values."""

    orders: list[int]
    q: list[str]
    b: list[list[str]]


class GenusRecord(BaseModel):
    """Genus known only through signature and discriminant form."""

    signature: tuple[int, int]
    disc: Optional[DiscRecord] = None
    negated_disc_of: Optional[str] = Field(
        default=None, description="recipe whose discriminant form, negated, is this one"
    )
    provenance: str


class HostRecord(BaseModel):
    """Lattice with named basis vectors, described by a recipe."""

    recipe: str
    basis: list[str]
    provenance: str


class ClassRecord(BaseModel):
    """Named vector of a host, possibly depending on a parameter."""

    host: str
    expr: str
    param: Optional[str] = None
    provenance: str


class SummandRecord(BaseModel):
    """One summand of a glue model."""

    recipe: str
    names: list[str]


class GlueModelRecord(BaseModel):
    """Overlattice of a direct sum given by glue vectors."""

    summands: list[SummandRecord]
    vectors: list[str]
    alternative_factors: list[int] = Field(default_factory=list)
    exceptional: list[str] = Field(default_factory=list, description="names of the exceptional (-2)-classes")
    provenance: str


class InvolutionRecord(BaseModel):
    """Integral matrix acting on column vectors of a host."""

    host: str
    matrix: list[list[int]]
    invariant: str
    coinvariant: str
    invariant_rank: int = Field(ge=0)
    provenance: str


class EmbeddingRecord(BaseModel):
    """Explicit images of a lattice's basis in a host."""

    host: str
    source: str
    vectors: dict[str, str]
    reference: Optional[str] = None
    wall_squares: list[int] = Field(default_factory=list)
    exceptional: list[str] = Field(default_factory=list, description="host names of the exceptional (-2)-classes")
    provenance: str


class PushforwardRecord(BaseModel):
    """Image of an invariant lattice under a quotient map."""

    source: str
    degree: int = Field(ge=1)
    generators: list[str]
    image: str
    primitive: bool = True
    provenance: str


class BorderRecord(BaseModel):
    """Family bordered by one extra generator pairing 2 with the first basis vector."""

    family: str
    corner: int


class FamilyRecord(BaseModel):
    """Parametric Gram matrix of a table family."""

    param: str
    gram: Optional[list[list[Entry]]] = None
    bordered: Optional[BorderRecord] = None

    @model_validator(mode="after")
    def _one_source(self) -> "FamilyRecord":
        if (self.gram is None) == (self.bordered is None):
            raise ValueError("family needs exactly one of gram or bordered")
        return self


class SourceRecord(BaseModel):
    """Row of a family table a quotient row is pushed forward from."""

    table: str
    rows: list[str] = Field(description="candidate rows; the first whose congruence admits the parameter")
    param: str
    pushforward: Optional[str] = Field(default=None, description="quotient map carrying the source polarization to H^2")


class RowRecord(BaseModel):
    """One printed row of a classification table."""

    id: str
    label: str
    ns: str
    t: str
    param: str = "d"
    congruence: Optional[tuple[int, int]] = Field(
        default=None, description="(modulus, residue) constraint on the row parameter"
    )
    minimum: dict[str, int] = Field(default_factory=dict)
    derived: dict[str, str] = Field(default_factory=dict)
    square: Optional[str] = None
    index: int = Field(default=1, ge=1)
    polarization: Optional[str] = None
    t_corrected: Optional[str] = None
    erratum: Optional[str] = None
    mjh: bool = False
    source: Optional[SourceRecord] = None
    halved: bool = False
    star: Optional[str] = None
    fixed_class: Optional[str] = None


class TableRecord(BaseModel):
    """Classification table with its families and rows."""

    kind: Literal["families", "orbifolds", "mixed"]
    title: str
    ambient: str
    host: Optional[str] = None
    columns: list[str]
    families: dict[str, FamilyRecord] = Field(default_factory=dict)
    rows: list[RowRecord]
    provenance: str


class RelationRecord(BaseModel):
    """Residue-indexed relation between table parameters."""

    variable: str
    modulus: int = Field(ge=1)
    values: dict[str, list[str]]
    provenance: str


class PartialGramRecord(BaseModel):
    """Linear system for the Gram matrix of auxiliary vectors."""

    host: str
    unknowns: list[str]
    fixed: dict[str, int] = Field(default_factory=dict)
    definitions: dict[str, str] = Field(default_factory=dict)
    generators: list[str]
    target: str
    expected: str
    provenance: str


class QuotientRecord(BaseModel):
    """Pushforward image extended by the classes of new exceptional divisors."""

    pushforward: str
    extra: str
    expected: str
    compare_degree_with: Optional[str] = None
    provenance: str


class IsomorphismRecord(BaseModel):
    """Two recipes claimed to describe isometric lattices."""

    left: str
    right: str
    provenance: str


# -- reports -----------------------------------------------------------


class CheckResult(BaseModel):
    """Outcome of one check on one row."""

    name: str
    status: Outcome
    severity: Severity = "error"
    detail: str = ""
    witness: Optional[str] = None


class RowReport(BaseModel):
    """All checks run for one row at one parameter value."""

    target: str
    row: str
    param: Optional[int] = None
    label: str = ""
    columns: dict[str, str] = Field(default_factory=dict)
    flags: list[str] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)

    def add(self, name: str, status: Outcome, detail: str = "", **kwargs) -> CheckResult:
        check = CheckResult(name=name, status=status, detail=detail, **kwargs)
        self.checks.append(check)
        return check

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status is Outcome.FAIL and c.severity == "error"]

    @property
    def warnings(self) -> list[CheckResult]:
        return [
            c
            for c in self.checks
            if c.severity != "info"
            and (c.status is Outcome.UNKNOWN or (c.status is Outcome.FAIL and c.severity == "warning"))
        ]

    def sort_key(self) -> tuple[str, str, int]:
        return (self.target, self.row, -1 if self.param is None else self.param)
