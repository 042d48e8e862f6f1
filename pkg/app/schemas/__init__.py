from app.schemas.net import NetSpec, PointsRequest, PointsResponse, DualRequest, DualResponse
from app.schemas.search import SearchRequest, SearchRunResponse
from app.schemas.wce import WCERequest, WCEResponse
from app.schemas.convergence import (
    ConvergenceRequest,
    ConvergenceRowSchema,
    ConvergenceRunResponse,
)

__all__ = [
    "NetSpec",
    "PointsRequest",
    "PointsResponse",
    "DualRequest",
    "DualResponse",
    "SearchRequest",
    "SearchRunResponse",
    "WCERequest",
    "WCEResponse",
    "ConvergenceRequest",
    "ConvergenceRowSchema",
    "ConvergenceRunResponse",
]
