"""
Pydantic models for the JSON document format and conversion to the
computational objects.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from ribbon.cocycle import CellComplexData
from ribbon.eta import BoundingData, EquivariantHermitianForm
from ribbon.exceptions import DocumentError, FormError, GroupError, LinalgError, PairingError
from ribbon.groups import AbelianGroup, GroupHom, from_presentation
from ribbon.laurent import FiniteLaurentModule
from ribbon.linalg import IntMatrix
from ribbon.logging_config import get_logger
from ribbon.moves import MoveDecoration, MoveTriple, apply_pass_move
from ribbon.pairing import FarberLevineStructure, TorsionPairing
from ribbon.seifert import SeifertBundle

logger = get_logger(__name__)

Matrix = List[List[int]]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GroupSpec(StrictModel):
    """Z/d_1 + ... + Z/d_k + Z^r in canonical form."""

    free_rank: int = Field(0, ge=0)
    torsion: List[int] = Field(default_factory=list, description="Invariant factors d_1 | d_2 | ...")

    def to_group(self) -> AbelianGroup:
        return AbelianGroup(self.free_rank, tuple(self.torsion))

    @classmethod
    def of(cls, group: AbelianGroup) -> "GroupSpec":
        return cls(free_rank=group.free_rank, torsion=list(group.torsion))


class SeifertBundlePayload(StrictModel):
    h1_v: GroupSpec
    h1_y: GroupSpec
    pushoff_pos: Matrix = Field(..., description="H1(Y) generators x H1(V) generators")
    pushoff_neg: Matrix
    linking_matrix: Matrix
    iota: Union[Literal["derive"], Matrix] = "derive"


class LaurentModulePayload(StrictModel):
    group: GroupSpec
    tau: Matrix


class FLStructurePayload(StrictModel):
    group: GroupSpec
    tau: Matrix
    pairing: List[List[str]] = Field(..., description='Values as "p/q" strings')


class DecorationPayload(StrictModel):
    pos_gt: List[int]
    neg_gt: List[int]
    pos_lt: List[int]
    neg_lt: List[int]


class MoveTriplePayload(StrictModel):
    middle: SeifertBundlePayload
    decoration: DecorationPayload
    child_gt: Optional[SeifertBundlePayload] = None
    child_lt: Optional[SeifertBundlePayload] = None


class BoundingDataPayload(StrictModel):
    modulus: int = Field(..., ge=1)
    form: List[List[List[int]]] = Field(..., description="n x n entries of d coefficients")
    multiplicity: int = Field(1, ge=1)
    sigma_w: int


class CellComplexPayload(StrictModel):
    cells: List[int] = Field(..., min_length=3)
    boundary_1: Matrix
    boundary_2: Matrix
    cycles: List[List[int]] = Field(default_factory=list)


class DocumentBase(StrictModel):
    format_version: Literal[1]
    name: str = Field(..., min_length=1)
    description: str = ""


class SeifertBundleDocument(DocumentBase):
    kind: Literal["seifert_bundle"]
    payload: SeifertBundlePayload


class LaurentModuleDocument(DocumentBase):
    kind: Literal["laurent_module"]
    payload: LaurentModulePayload


class FLStructureDocument(DocumentBase):
    kind: Literal["fl_structure"]
    payload: FLStructurePayload


class MoveTripleDocument(DocumentBase):
    kind: Literal["move_triple"]
    payload: MoveTriplePayload


class BoundingDataDocument(DocumentBase):
    kind: Literal["bounding_data"]
    payload: BoundingDataPayload


class CellComplexDocument(DocumentBase):
    kind: Literal["cell_complex"]
    payload: CellComplexPayload


Document = Annotated[
    Union[
        SeifertBundleDocument,
        LaurentModuleDocument,
        FLStructureDocument,
        MoveTripleDocument,
        BoundingDataDocument,
        CellComplexDocument,
    ],
    Field(discriminator="kind"),
]

_document_adapter: TypeAdapter = TypeAdapter(Document)


def parse_document(text: str) -> DocumentBase:
    """Validate a JSON document; any failure becomes DocumentError."""
    try:
        return _document_adapter.validate_json(text)
    except ValidationError as e:
        raise DocumentError(f"Invalid document: {e.error_count()} error(s)\n{e}") from e


def load_document(path: Union[str, Path]) -> DocumentBase:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"Cannot read {path}: {e}") from e
    logger.debug(f"Loading document {path}")
    return parse_document(text)


def dump_document(doc: DocumentBase) -> str:
    """Canonical JSON: 2-space indent, model field order, trailing newline."""
    data = doc.model_dump(mode="json")
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


# Conversion to computational objects


def _matrix(rows: Matrix, cols: int) -> IntMatrix:
    if any(len(r) != cols for r in rows):
        raise DocumentError(f"Matrix rows must all have {cols} entries")
    return IntMatrix.from_rows(rows, cols=cols)


def _square(rows: Matrix) -> IntMatrix:
    return _matrix(rows, len(rows))


def bundle_from_payload(name: str, p: SeifertBundlePayload, description: str = "") -> SeifertBundle:
    h1_v, h1_y = p.h1_v.to_group(), p.h1_y.to_group()
    for label, m in (("pushoff_pos", p.pushoff_pos), ("pushoff_neg", p.pushoff_neg)):
        if len(m) != h1_y.ngens:
            raise DocumentError(f"{label} needs {h1_y.ngens} rows, got {len(m)}")
    lam = _square(p.linking_matrix)
    iota = None
    if p.iota != "derive":
        iota = _matrix(p.iota, from_presentation(lam)[0].ngens)
    return SeifertBundle(
        name=name,
        h1_v=h1_v,
        h1_y=h1_y,
        pushoff_pos=_matrix(p.pushoff_pos, h1_v.ngens),
        pushoff_neg=_matrix(p.pushoff_neg, h1_v.ngens),
        linking_matrix=lam,
        iota=iota,
        description=description,
    )


def bundle_payload(bundle: SeifertBundle) -> SeifertBundlePayload:
    return SeifertBundlePayload(
        h1_v=GroupSpec.of(bundle.h1_v),
        h1_y=GroupSpec.of(bundle.h1_y),
        pushoff_pos=bundle.pushoff_pos.to_list(),
        pushoff_neg=bundle.pushoff_neg.to_list(),
        linking_matrix=bundle.linking_matrix.to_list(),
        iota="derive" if bundle.iota is None else bundle.iota.to_list(),
    )


def module_from_payload(p: LaurentModulePayload) -> FiniteLaurentModule:
    group = p.group.to_group()
    return FiniteLaurentModule(group, GroupHom(group, group, _matrix(p.tau, group.ngens)))


def fl_structure_from_payload(p: FLStructurePayload) -> FarberLevineStructure:
    group = p.group.to_group()
    module = FiniteLaurentModule(group, GroupHom(group, group, _matrix(p.tau, group.ngens)))
    try:
        pairing = TorsionPairing.from_values(group, p.pairing)
    except ValueError as e:
        raise DocumentError(str(e)) from e
    return FarberLevineStructure(module, pairing)


def decoration_from_payload(p: DecorationPayload) -> MoveDecoration:
    return MoveDecoration(tuple(p.pos_gt), tuple(p.neg_gt), tuple(p.pos_lt), tuple(p.neg_lt))


def triple_from_payload(name: str, p: MoveTriplePayload) -> MoveTriple:
    """Rebuild the children from the decoration and check any stored copies."""
    middle = bundle_from_payload(name, p.middle)
    triple = apply_pass_move(middle, decoration_from_payload(p.decoration))
    for label, stored, rebuilt in (
        ("child_gt", p.child_gt, triple.child_gt),
        ("child_lt", p.child_lt, triple.child_lt),
    ):
        if stored is not None and stored != bundle_payload(rebuilt):
            raise DocumentError(f"{label} does not match the child built from the decoration")
    return triple


def triple_document(triple: MoveTriple, description: str = "") -> MoveTripleDocument:
    dec = triple.decoration
    return MoveTripleDocument(
        format_version=1,
        kind="move_triple",
        name=triple.name,
        description=description,
        payload=MoveTriplePayload(
            middle=bundle_payload(triple.middle),
            decoration=DecorationPayload(
                pos_gt=list(dec.pos_gt),
                neg_gt=list(dec.neg_gt),
                pos_lt=list(dec.pos_lt),
                neg_lt=list(dec.neg_lt),
            ),
            child_gt=bundle_payload(triple.child_gt),
            child_lt=bundle_payload(triple.child_lt),
        ),
    )


def bundle_document(bundle: SeifertBundle) -> SeifertBundleDocument:
    return SeifertBundleDocument(
        format_version=1,
        kind="seifert_bundle",
        name=bundle.name,
        description=bundle.description,
        payload=bundle_payload(bundle),
    )


def bounding_from_payload(p: BoundingDataPayload) -> BoundingData:
    form = EquivariantHermitianForm(len(p.form), p.modulus, p.form)
    return BoundingData(form, p.multiplicity, p.sigma_w)


def complex_from_payload(p: CellComplexPayload) -> CellComplexData:
    c0, c1, c2 = p.cells[:3]
    if len(p.boundary_1) != c0 or len(p.boundary_2) != c1:
        raise DocumentError("Boundary matrices do not match the cell counts")
    return CellComplexData(
        tuple(p.cells),
        _matrix(p.boundary_1, c1),
        _matrix(p.boundary_2, c2),
        tuple(tuple(z) for z in p.cycles),
    )


def to_domain(doc: DocumentBase):
    """Convert a parsed document to the object its kind describes."""
    try:
        if isinstance(doc, SeifertBundleDocument):
            return bundle_from_payload(doc.name, doc.payload, doc.description)
        if isinstance(doc, LaurentModuleDocument):
            return module_from_payload(doc.payload)
        if isinstance(doc, FLStructureDocument):
            return fl_structure_from_payload(doc.payload)
        if isinstance(doc, MoveTripleDocument):
            return triple_from_payload(doc.name, doc.payload)
        if isinstance(doc, BoundingDataDocument):
            return bounding_from_payload(doc.payload)
        if isinstance(doc, CellComplexDocument):
            return complex_from_payload(doc.payload)
    except (GroupError, LinalgError, FormError, PairingError) as e:
        raise DocumentError(f"{doc.name}: {e}") from e
    raise DocumentError(f"Unsupported document kind {doc.kind!r}")
