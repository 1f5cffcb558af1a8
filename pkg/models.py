from pydantic import BaseModel, Field, ValidationError, field_validator
from typing import Dict, List, Optional, Sequence, Tuple, Type, TypeVar
from fractions import Fraction
import json

from utils.config import FORMAT_VERSION
from utils.error_handler import FormatError
from utils.heart_graph import Heart, HNData, ProbeEntry
from utils.qp_core import Arrow, GradedQuiver, PathSum, Potential, Quiver, QuiverWithPotential
from utils.rep_stab import CentralChargeVector, Representation
from utils.surface_lab import DiscTriangulation

ModelT = TypeVar("ModelT", bound=BaseModel)


def _fraction_text(value: Fraction) -> str:
    return str(value) if value.denominator != 1 else str(value.numerator)


class ArrowModel(BaseModel):
    id: str
    src: str
    tgt: str


class PotentialTermModel(BaseModel):
    coeff: str = "1"
    cycle: List[str]

    @field_validator("coeff")
    @classmethod
    def coeff_is_rational(cls, value: str) -> str:
        try:
            Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"'{value}' is not a rational number p/q")
        return value


class QPFile(BaseModel):
    format_version: int = FORMAT_VERSION
    vertices: List[str]
    arrows: List[ArrowModel] = Field(default_factory=list)
    potential: List[PotentialTermModel] = Field(default_factory=list)


class RepresentationFile(BaseModel):
    format_version: int = FORMAT_VERSION
    qp: QPFile
    p: int = 2
    dim: List[int]
    mats: Dict[str, List[List[int]]] = Field(default_factory=dict)


class HeartFile(BaseModel):
    format_version: int = FORMAT_VERSION
    qp: QPFile
    classes: List[List[int]]
    levels: Optional[List[Optional[int]]] = None


class TriangulationFile(BaseModel):
    format_version: int = FORMAT_VERSION
    m: int
    arcs: List[Tuple[int, int]] = Field(default_factory=list)


class HNDataModel(BaseModel):
    phi_minus: float
    phi_plus: float
    mass: float


class ProbeEntryModel(BaseModel):
    cls: List[int]
    first: HNDataModel
    second: HNDataModel


class ProbeFile(BaseModel):
    format_version: int = FORMAT_VERSION
    entries: List[ProbeEntryModel]


class GradedArrowModel(BaseModel):
    id: str
    src: str
    tgt: str
    degree: int


class PathTermModel(BaseModel):
    coeff: str
    path: List[str]


class DifferentialModel(BaseModel):
    arrow: str
    terms: List[PathTermModel] = Field(default_factory=list)


class GradedQuiverFile(BaseModel):
    format_version: int = FORMAT_VERSION
    N: int
    vertices: List[str]
    arrows: List[GradedArrowModel]
    differential: List[DifferentialModel]


# -- Reading and writing ------------------------------------------------------------

def load_model(path: str, model: Type[ModelT]) -> ModelT:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return parse_model(handle.read(), model, path)
    except OSError as e:
        raise FormatError(path=path, detail=e.strerror or str(e)) from None


def parse_model(text: str, model: Type[ModelT], source: str = "<input>") -> ModelT:
    try:
        parsed = model.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "document"
        raise FormatError(path=source, detail=f"{where}: {first['msg']}") from None
    if parsed.format_version != FORMAT_VERSION:
        raise FormatError(path=source, detail=f"format_version {parsed.format_version} is not {FORMAT_VERSION}")
    return parsed


def dump_model(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=False) + "\n"


# -- Conversions --------------------------------------------------------------------

def qp_from_file(data: QPFile) -> QuiverWithPotential:
    quiver = Quiver(tuple(data.vertices), tuple(Arrow(a.id, a.src, a.tgt) for a in data.arrows))
    potential = Potential.from_terms((Fraction(t.coeff), t.cycle) for t in data.potential)
    return QuiverWithPotential(quiver, potential)


def qp_to_file(qp: QuiverWithPotential) -> QPFile:
    return QPFile(
        vertices=list(qp.vertices),
        arrows=[ArrowModel(id=a.id, src=a.source, tgt=a.target) for a in qp.quiver.arrows],
        potential=[PotentialTermModel(coeff=_fraction_text(c), cycle=list(w)) for c, w in qp.potential.terms],
    )


def representation_from_file(data: RepresentationFile) -> Representation:
    return Representation(qp_from_file(data.qp), data.p, tuple(data.dim), dict(data.mats))


def representation_to_file(rep: Representation) -> RepresentationFile:
    return RepresentationFile(
        qp=qp_to_file(rep.qp),
        p=rep.p,
        dim=list(rep.dim),
        mats={arrow_id: matrix.tolist() for arrow_id, matrix in rep.mats.items()},
    )


def heart_from_file(data: HeartFile) -> Heart:
    levels = tuple(data.levels) if data.levels is not None else None
    return Heart(qp_from_file(data.qp), tuple(tuple(row) for row in data.classes), levels)


def heart_to_file(heart: Heart) -> HeartFile:
    return HeartFile(
        qp=qp_to_file(heart.qp),
        classes=[list(row) for row in heart.classes],
        levels=list(heart.levels),
    )


def triangulation_from_file(data: TriangulationFile) -> DiscTriangulation:
    return DiscTriangulation(data.m, tuple(tuple(arc) for arc in data.arcs))


def triangulation_to_file(T: DiscTriangulation) -> TriangulationFile:
    return TriangulationFile(m=T.m, arcs=[tuple(arc) for arc in T.arcs])


def probe_from_file(data: ProbeFile) -> List[ProbeEntry]:
    return [
        ProbeEntry(tuple(e.cls), HNData(**e.first.model_dump()), HNData(**e.second.model_dump()))
        for e in data.entries
    ]


def probe_to_file(entries: Sequence[ProbeEntry]) -> ProbeFile:
    return ProbeFile(entries=[
        ProbeEntryModel(cls=list(e.cls), first=HNDataModel(**e.first._asdict()),
                        second=HNDataModel(**e.second._asdict()))
        for e in entries
    ])


def _path_terms(value: PathSum) -> List[PathTermModel]:
    return [PathTermModel(coeff=_fraction_text(c), path=list(p)) for p, c in value.terms]


def graded_quiver_to_file(graded: GradedQuiver) -> GradedQuiverFile:
    return GradedQuiverFile(
        N=graded.N,
        vertices=list(graded.vertices),
        arrows=[GradedArrowModel(id=a.id, src=a.source, tgt=a.target, degree=a.degree) for a in graded.arrows],
        differential=[DifferentialModel(arrow=name, terms=_path_terms(value)) for name, value in graded.differential],
    )


def path_sum_to_json(value: PathSum) -> List[Dict]:
    return [term.model_dump() for term in _path_terms(value)]


def parse_central_charge(text: str, backend: str = "exact", tolerance: Optional[float] = None) -> CentralChargeVector:
    """'re,im;re,im;…' with rational or decimal entries, one pair per simple."""
    pairs = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise FormatError(path=text, detail=f"'{chunk}' is not a re,im pair")
        try:
            pairs.append(tuple(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError):
            raise FormatError(path=text, detail=f"'{chunk}' is not numeric") from None
    kwargs = {} if tolerance is None else {"tolerance": tolerance}
    return CentralChargeVector(tuple(pairs), backend, **kwargs)


def parse_class(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise FormatError(path=text, detail="a class is a comma separated list of integers") from None
