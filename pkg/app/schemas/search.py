from pydantic import BaseModel, Field
from typing import Optional, List, Literal
from datetime import datetime


class SearchRequest(BaseModel):
    """Schema for a generating-vector search."""
    b: int = Field(2, ge=2)
    n: int = Field(..., ge=1, le=20)
    m: int = Field(..., ge=1, le=20)
    s: int = Field(..., ge=1)
    alpha: int = Field(2, ge=2)
    lam: float = Field(1.0, gt=0, le=1)
    weights: str = Field("product:1", min_length=1)
    strategy: Literal["exhaustive", "random"] = "exhaustive"
    trials: int = Field(1000, ge=1)
    seed: int = 0
    truncation: Optional[int] = Field(None, ge=1)
    modulus: Optional[List[int]] = Field(None, description="Coefficients of p; default is the smallest irreducible")
    save: bool = True


class SearchRunResponse(BaseModel):
    """Schema for a search result, stored or not."""
    id: Optional[int] = None
    created_at: Optional[datetime] = None
    b: int
    n: int
    m: int
    s: int
    alpha: int
    lam: float
    weights: str
    strategy: str
    trials: Optional[int]
    seed: Optional[int]
    truncation: int
    modulus: List[int]
    generating_vector: List[List[int]]
    truncated_bound: float
    tail_bound: float
    certified_bound: float

    class Config:
        from_attributes = True
