from pydantic import BaseModel, Field, model_validator
from typing import Optional, List, Literal


class NetSpec(BaseModel):
    """
    Description of a digital net: Sobol' (b = 2), a higher order polynomial
    lattice, or the plain-text net format (`text`).
    """
    kind: Literal["sobol", "hopl", "text"] = "sobol"
    s: Optional[int] = Field(None, ge=1, le=1111)
    m: Optional[int] = Field(None, ge=1, le=30)
    b: int = Field(2, ge=2)
    n: Optional[int] = Field(None, ge=1, description="Modulus degree (hopl); defaults to m")
    modulus: Optional[List[int]] = Field(None, description="Coefficients of p, constant term first")
    q: Optional[List[List[int]]] = Field(None, description="Generating vector, one coefficient list per coordinate")
    text: Optional[str] = Field(None, description="Net description: header `b s m R has_continuation`, then matrix rows")
    depth: Optional[int] = Field(None, ge=1, le=64)

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == "text":
            if not self.text:
                raise ValueError("kind 'text' needs the net description in `text`")
        elif self.s is None or self.m is None:
            raise ValueError(f"kind {self.kind!r} needs s and m")
        return self


class PointsRequest(BaseModel):
    """Schema for generating the points of a net."""
    net: NetSpec
    antithetic: bool = False
    exact: bool = False


class PointsResponse(BaseModel):
    """Point coordinates; exact values are returned as 'numerator/denominator' strings."""
    b: int
    s: int
    n_points: int
    points: List[List[float]] = Field(default_factory=list)
    exact_points: Optional[List[List[str]]] = None


class DualRequest(BaseModel):
    """Schema for enumerating the dual net up to index b^K - 1."""
    net: NetSpec
    resolution: int = Field(..., ge=0, le=24)
    antithetic: bool = False


class DualResponse(BaseModel):
    resolution: int
    count: int
    indices: List[List[int]]
