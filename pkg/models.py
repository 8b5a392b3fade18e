"""
Data models for the metabelian-top analysis
Defines abelian structures, verdicts, Coxeter type tags, file schemas, reports and service messages
"""

from enum import Enum
from math import gcd
from typing import Any, Dict, List, Optional
import uuid

from pydantic import BaseModel, Field, field_validator, model_validator


class StructureKind(Enum):
    """Shapes an abelian group can be reported in"""
    TRIVIAL = "trivial"
    FREE_FINITE = "free_finite"
    # not finitely generated; countable
    COUNTABLY_INFINITE = "countably_infinite"
    UNKNOWN = "unknown"


class VerdictStatus(Enum):
    """Finite presentability of a metabelian top"""
    FINITELY_PRESENTED = "finitely_presented"
    INFINITELY_RELATED = "infinitely_related"
    INCONCLUSIVE = "inconclusive"


class CoxeterFamily(Enum):
    """Families of irreducible finite Coxeter systems"""
    A = "A"
    B = "B"
    D = "D"
    E = "E"
    F = "F"
    H = "H"
    I2 = "I2"


def invariant_factors(orders: List[int]) -> List[int]:
    """Invariant factors of a direct sum of cyclic groups of the given orders"""
    values = sorted(abs(d) for d in orders if abs(d) > 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                a, b = values[i], values[j]
                if b % a:
                    g = gcd(a, b)
                    values[i], values[j] = g, a * b // g
                    changed = True
        values = sorted(d for d in values if d > 1)
    return values


class AbelianStructure(BaseModel):
    """Verdict on the isomorphism type of an abelian group, with its derivation trace"""
    kind: StructureKind
    rank: int = 0
    torsion: List[int] = Field(default_factory=list)
    certificate: List[str] = Field(default_factory=list)

    class Config:
        use_enum_values = True

    @field_validator("torsion")
    @classmethod
    def check_invariant_factors(cls, torsion: List[int]) -> List[int]:
        for i, d in enumerate(torsion):
            if d <= 1:
                raise ValueError(f"torsion entries must exceed 1, got {d}")
            if i and d % torsion[i - 1]:
                raise ValueError(f"torsion {torsion} violates the divisibility chain")
        return torsion

    @classmethod
    def trivial(cls, note: Optional[str] = None) -> "AbelianStructure":
        return cls(kind=StructureKind.TRIVIAL, certificate=[note] if note else [])

    @classmethod
    def free(cls, rank: int, torsion: Optional[List[int]] = None,
             note: Optional[str] = None) -> "AbelianStructure":
        torsion = list(torsion or [])
        if rank == 0 and not torsion:
            return cls.trivial(note)
        return cls(kind=StructureKind.FREE_FINITE, rank=rank, torsion=torsion,
                   certificate=[note] if note else [])

    @classmethod
    def countably_infinite(cls, note: Optional[str] = None) -> "AbelianStructure":
        return cls(kind=StructureKind.COUNTABLY_INFINITE, certificate=[note] if note else [])

    @classmethod
    def unknown(cls, note: Optional[str] = None) -> "AbelianStructure":
        return cls(kind=StructureKind.UNKNOWN, certificate=[note] if note else [])

    def with_notes(self, notes: List[str]) -> "AbelianStructure":
        return self.model_copy(update={"certificate": list(self.certificate) + list(notes)})

    def direct_sum(self, other: "AbelianStructure") -> "AbelianStructure":
        """Structure of the direct sum; a summand that is not finitely generated dominates"""
        notes = list(self.certificate) + list(other.certificate)
        if self.is_countably_infinite or other.is_countably_infinite:
            return AbelianStructure.countably_infinite().with_notes(notes)
        if self.is_unknown or other.is_unknown:
            return AbelianStructure.unknown().with_notes(notes)
        torsion = invariant_factors(list(self.torsion) + list(other.torsion))
        return AbelianStructure.free(self.rank + other.rank, torsion).with_notes(notes)

    @property
    def is_trivial(self) -> bool:
        return self.kind == StructureKind.TRIVIAL.value

    @property
    def is_free_finite(self) -> bool:
        return self.kind == StructureKind.FREE_FINITE.value

    @property
    def is_countably_infinite(self) -> bool:
        return self.kind == StructureKind.COUNTABLY_INFINITE.value

    @property
    def is_unknown(self) -> bool:
        return self.kind == StructureKind.UNKNOWN.value

    @property
    def is_finitely_generated(self) -> bool:
        return self.is_trivial or self.is_free_finite

    def describe(self) -> str:
        """One-line summary used in reports"""
        if self.is_trivial:
            return "Γ' perfect"
        if self.is_free_finite:
            text = f"Γ'_ab: free abelian rank {self.rank}"
            if self.torsion:
                text += " ⊕ " + " ⊕ ".join(f"ℤ/{d}" for d in self.torsion)
            return text
        if self.is_countably_infinite:
            return "Γ'_ab: countably infinite rank"
        return "Γ'_ab: unknown"


class Verdict(BaseModel):
    """Finite-presentability verdict with the rule that produced it"""
    status: VerdictStatus
    reason: str
    data: Dict[str, Any] = Field(default_factory=dict)
    polycyclic: Optional[bool] = None
    trace: List[str] = Field(default_factory=list)

    class Config:
        use_enum_values = True

    @model_validator(mode="after")
    def decisive_verdicts_carry_data(self) -> "Verdict":
        if self.status != VerdictStatus.INCONCLUSIVE.value and not self.data:
            raise ValueError("decisive verdicts must carry certificate data")
        return self

    @property
    def is_finitely_presented(self) -> bool:
        return self.status == VerdictStatus.FINITELY_PRESENTED.value

    @property
    def is_infinitely_related(self) -> bool:
        return self.status == VerdictStatus.INFINITELY_RELATED.value

    @property
    def is_decisive(self) -> bool:
        return self.status != VerdictStatus.INCONCLUSIVE.value

    def describe(self) -> str:
        labels = {
            VerdictStatus.FINITELY_PRESENTED.value: "finitely presented",
            VerdictStatus.INFINITELY_RELATED.value: "infinitely related",
            VerdictStatus.INCONCLUSIVE.value: "inconclusive",
        }
        return f"metabelian top: {labels[self.status]}"


class TypeTag(BaseModel):
    """Name of an irreducible finite Coxeter type, e.g. A4 or I2(5)"""
    family: CoxeterFamily
    parameter: int

    class Config:
        use_enum_values = True
        frozen = True

    @model_validator(mode="after")
    def check_parameter_range(self) -> "TypeTag":
        allowed = {
            "A": lambda n: n >= 1,
            "B": lambda n: n >= 2,
            "D": lambda n: n >= 4,
            "E": lambda n: n in (6, 7, 8),
            "F": lambda n: n == 4,
            "H": lambda n: n in (3, 4),
            "I2": lambda n: n >= 3,
        }
        if not allowed[self.family](self.parameter):
            raise ValueError(f"parameter {self.parameter} out of range for family {self.family}")
        return self

    def __str__(self) -> str:
        if self.family == CoxeterFamily.I2.value:
            return f"I2({self.parameter})"
        return f"{self.family}{self.parameter}"


class GraphEdge(BaseModel):
    """Edge of a defining graph; absent pairs carry label 2"""
    u: str
    v: str
    label: int

    @field_validator("label")
    @classmethod
    def label_at_least_three(cls, label: int) -> int:
        if label < 3:
            raise ValueError(f"stored edges need labels >= 3, got {label}")
        return label


class GraphFile(BaseModel):
    """On-disk schema of a labelled defining graph"""
    name: Optional[str] = None
    vertices: List[str]
    edges: List[GraphEdge] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_graph(self) -> "GraphFile":
        if not self.vertices:
            raise ValueError("a graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        known = set(self.vertices)
        seen = set()
        for index, edge in enumerate(self.edges):
            if edge.u not in known or edge.v not in known:
                raise ValueError(f"edges[{index}] joins unknown vertex {edge.u!r} or {edge.v!r}")
            if edge.u == edge.v:
                raise ValueError(f"edges[{index}] is a self-loop at {edge.u!r}")
            pair = frozenset((edge.u, edge.v))
            if pair in seen:
                raise ValueError(f"edges[{index}] duplicates the pair {edge.u!r}-{edge.v!r}")
            seen.add(pair)
        return self


class OneRelatorFile(BaseModel):
    """On-disk schema of a two-generator one-relator presentation"""
    name: Optional[str] = None
    generators: List[str]
    relator: str
    expected: Optional[VerdictStatus] = None

    class Config:
        use_enum_values = True


class PipelineStep(BaseModel):
    """One named stage of a report with its intermediate values"""
    name: str
    summary: str
    data: Dict[str, Any] = Field(default_factory=dict)


class Report(BaseModel):
    """Result of one command, renderable as text or JSON"""
    command: str
    input: Dict[str, Any] = Field(default_factory=dict)
    window: Optional[int] = None
    headline: str = ""
    steps: List[PipelineStep] = Field(default_factory=list)
    structure: Optional[AbelianStructure] = None
    verdict: Optional[Verdict] = None
    exit_code: int = 0

    def add_step(self, name: str, summary: str, **data: Any) -> PipelineStep:
        step = PipelineStep(name=name, summary=summary, data=data)
        self.steps.append(step)
        return step

    def render_text(self) -> str:
        lines = [self.headline]
        if self.window is not None:
            lines.append(f"  window: {self.window}")
        for step in self.steps:
            lines.append(f"  [{step.name}] {step.summary}")
        if self.verdict is not None:
            lines.append(f"  rule: {self.verdict.reason}")
            lines.extend(f"    {line}" for line in self.verdict.trace)
        return "\n".join(lines)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


class AnalysisRequest(BaseModel):
    """Service request message"""
    id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    method: str
    params: Dict[str, Any] = Field(default_factory=dict)


class AnalysisResponse(BaseModel):
    """Service response message"""
    id: str
    result: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
    error_kind: Optional[str] = None
