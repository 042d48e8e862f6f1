from pydantic import BaseModel, Field

from app.schemas.net import NetSpec


class WCERequest(BaseModel):
    """Schema for comparing worst-case errors of a net and its antithetic net."""
    net: NetSpec
    alpha: int = Field(2, ge=2, le=4)
    weights: str = Field("product:1", min_length=1)


class WCEResponse(BaseModel):
    n_plain: int
    wce_plain: float
    n_antithetic: int
    wce_antithetic: float
    residual: float

    class Config:
        from_attributes = True
