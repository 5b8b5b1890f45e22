import hashlib
from typing import Annotated, Any, Dict, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError, model_validator

from src.core.errors import InvalidSpec


class TorusSpec(BaseModel):
    kind: Literal["torus"] = "torus"
    d: int = Field(ge=1)   # dimension
    n: int = Field(ge=2)   # side length

    def label(self) -> str:
        return f"Torus(d={self.d},n={self.n})"


class HypercubeSpec(BaseModel):
    kind: Literal["hypercube"] = "hypercube"
    n: int = Field(ge=1)   # dimension

    def label(self) -> str:
        return f"Hypercube({self.n})"


class CompleteSpec(BaseModel):
    kind: Literal["complete"] = "complete"
    n: int = Field(ge=2)

    def label(self) -> str:
        return f"Complete({self.n})"


class CycleSpec(BaseModel):
    kind: Literal["cycle"] = "cycle"
    n: int = Field(ge=3)

    def label(self) -> str:
        return f"Cycle({self.n})"


class RandomRegularSpec(BaseModel):
    kind: Literal["random_regular"] = "random_regular"
    d: int = Field(ge=1)
    n: int = Field(ge=2)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_pairing(self) -> "RandomRegularSpec":
        if (self.d * self.n) % 2 != 0:
            raise ValueError(f"d*n must be even, got d={self.d}, n={self.n}")
        if self.d >= self.n:
            raise ValueError(f"d must be smaller than n, got d={self.d}, n={self.n}")
        return self

    def label(self) -> str:
        return f"RandomRegular(d={self.d},n={self.n},seed={self.seed})"


class PercolationBallSpec(BaseModel):
    kind: Literal["percolation_ball"] = "percolation_ball"
    d: int = Field(ge=1)
    n: int = Field(ge=1)            # box radius
    p: float = Field(gt=0.0, le=1.0)  # open probability
    seed: int = Field(default=0, ge=0)

    def label(self) -> str:
        return f"PercolationBall(d={self.d},n={self.n},p={self.p},seed={self.seed})"


class StarSpec(BaseModel):
    """Center 0 with ``arms`` paths of ``length`` vertices; length 1 is the plain star."""

    kind: Literal["star"] = "star"
    arms: int = Field(ge=2)
    length: int = Field(default=1, ge=1)

    def label(self) -> str:
        return f"Star(arms={self.arms},length={self.length})"


class SymmetricTranspositionsSpec(BaseModel):
    kind: Literal["symmetric_transpositions"] = "symmetric_transpositions"
    n: int = Field(ge=2, le=6)

    def label(self) -> str:
        return f"SymmetricTranspositions({self.n})"


class LamplighterSpec(BaseModel):
    kind: Literal["lamplighter"] = "lamplighter"
    base: "FamilySpec"

    def label(self) -> str:
        return f"Lamplighter({self.base.label()})"


FamilySpec = Annotated[
    Union[
        TorusSpec,
        HypercubeSpec,
        CompleteSpec,
        CycleSpec,
        RandomRegularSpec,
        PercolationBallSpec,
        StarSpec,
        SymmetricTranspositionsSpec,
        LamplighterSpec,
    ],
    Field(discriminator="kind"),
]

LamplighterSpec.model_rebuild()

_FAMILY_ADAPTER = TypeAdapter(FamilySpec)

VERTEX_TRANSITIVE_KINDS = frozenset({"torus", "hypercube", "complete", "cycle", "symmetric_transpositions"})


def parse_family(data: Dict[str, Any]) -> FamilySpec:
    """
    Validate a plain mapping into a FamilySpec.

    Args:
        data: Mapping with a ``kind`` key and the family's parameters

    Returns:
        The validated specification

    Raises:
        InvalidSpec: If the parameters violate the family's invariants
    """
    try:
        return _FAMILY_ADAPTER.validate_python(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise InvalidSpec(f"invalid family spec {data!r}: {problems}") from e


def family_digest(spec: FamilySpec) -> str:
    """Content hash of a specification, used as a cache key."""
    return hashlib.sha256(spec.model_dump_json().encode("utf-8")).hexdigest()
