"""JSON path files.

    {"mass": 1.0, "closed": true, "steps": 1000,
     "segments": [
        {"type": "circle", "rho": 0.75, "theta": 1.5707963267948966,
         "phi_start": 0.0, "phi_end": 6.283185307179586, "steps": 10000},
        {"type": "geodesic", "from": [rho, theta, phi] or [p0, p1, p2, p3], "to": ..., "steps": 1000},
        {"type": "sampled", "points": [[p0, p1, p2, p3], ...], "steps": 1000}
     ]}

Angles are radians. ``steps`` is optional per segment and at top level.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, field_validator

from .errors import DomainError
from .paths import CircleArc, GeodesicSegment, PathSpec, SampledCurve


class PathFileError(DomainError):
    pass


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


def _point_shape(v):
    if len(v) not in (3, 4):
        raise ValueError("point must be [rho, theta, phi] or a four-vector [p0, p1, p2, p3]")
    return v


class CircleModel(_Strict):
    type: Literal["circle"]
    rho: float = Field(ge=0)
    theta: float
    phi_start: float
    phi_end: float
    steps: Optional[PositiveInt] = None


class GeodesicModel(_Strict):
    type: Literal["geodesic"]
    start: List[float] = Field(alias="from")
    end: List[float] = Field(alias="to")
    steps: Optional[PositiveInt] = None

    _shape = field_validator("start", "end")(_point_shape)


class SampledModel(_Strict):
    type: Literal["sampled"]
    points: List[List[float]] = Field(min_length=2)
    steps: Optional[PositiveInt] = None

    @field_validator("points")
    @classmethod
    def _four_vectors(cls, v):
        for p in v:
            if len(p) != 4:
                raise ValueError("sampled points must be four-vectors")
        return v


SegmentModel = Annotated[Union[CircleModel, GeodesicModel, SampledModel], Field(discriminator="type")]


class PathFileModel(_Strict):
    mass: PositiveFloat
    closed: bool = False
    steps: PositiveInt = 1000
    segments: List[SegmentModel] = Field(min_length=1)

    def to_path(self) -> PathSpec:
        segs = []
        for s in self.segments:
            if isinstance(s, CircleModel):
                segs.append(CircleArc(s.rho, s.theta, s.phi_start, s.phi_end, s.steps))
            elif isinstance(s, GeodesicModel):
                segs.append(GeodesicSegment(tuple(s.start), tuple(s.end), s.steps))
            else:
                segs.append(SampledCurve(tuple(tuple(p) for p in s.points), s.steps))
        return PathSpec(self.mass, segs, self.steps, self.closed)


def _describe(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        loc = ".".join(str(x) for x in e["loc"]) or "<root>"
        lines.append(f"{loc}: {e['msg']}")
    return "; ".join(lines)


def parse_path(text: str, source: str = "<path>") -> PathSpec:
    """Parse and validate a path file; every failure is a PathFileError naming the location."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PathFileError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        model = PathFileModel.model_validate(raw)
    except ValidationError as exc:
        raise PathFileError(f"{source}: {_describe(exc)}") from None
    try:
        path = model.to_path()
        path.validate()
    except DomainError as exc:
        raise PathFileError(f"{source}: {exc}") from None
    return path


def load_path(filename) -> PathSpec:
    p = Path(filename)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise PathFileError(f"{filename}: {exc.strerror}") from None
    return parse_path(text, str(filename))
