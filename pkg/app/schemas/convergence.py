from pydantic import BaseModel, Field, model_validator
from typing import Optional, List, Dict, Literal
from datetime import datetime


class ConvergenceRequest(BaseModel):
    """Schema for a convergence study of a test integrand."""
    func: Literal["f1", "f2", "f3"] = "f1"
    s: int = Field(..., ge=1, le=1111)
    theta: float = Field(0.1, gt=0)
    zeta: float = Field(1.0, gt=0)
    w: float = Field(0.5, gt=0)
    generator: Literal["sobol", "hopl"] = "sobol"
    m_from: int = Field(..., ge=1, le=24)
    m_to: int = Field(..., ge=1, le=24)
    variant: Literal["plain", "antithetic", "both"] = "both"
    b: int = Field(2, ge=2)
    modulus: Optional[List[int]] = None
    q: Optional[List[List[int]]] = None
    save: bool = True

    @model_validator(mode="after")
    def check_range(self):
        if self.m_to < self.m_from:
            raise ValueError("m_to must not be smaller than m_from")
        return self


class ConvergenceRowSchema(BaseModel):
    variant: str
    m: int
    N: int
    abs_error: float


class ConvergenceRunResponse(BaseModel):
    """Schema for a convergence study, stored or not."""
    id: Optional[int] = None
    created_at: Optional[datetime] = None
    func: str
    params: Dict[str, float]
    generator: str
    m_from: int
    m_to: int
    slopes: Dict[str, Optional[float]]
    rows: List[ConvergenceRowSchema]

    class Config:
        from_attributes = True
