from fastapi import APIRouter

from app.schemas.net import DualRequest, DualResponse, PointsRequest, PointsResponse
from app.services.qmc_service import NetService

router = APIRouter(prefix="/nets", tags=["Digital Nets"])


@router.post("/points", response_model=PointsResponse)
def net_points(request: PointsRequest):
    """
    Generate the points of a digital net.

    - **net**: Sobol' (`kind=sobol`, b = 2) or polynomial lattice (`kind=hopl` with modulus and q)
    - **antithetic**: Append the all-ones column, giving b^(m+1) points
    - **exact**: Also return each coordinate as an exact fraction
    """
    return NetService.points(request)


@router.post("/dual", response_model=DualResponse)
def net_dual(request: DualRequest):
    """
    Enumerate the dual net over all index vectors with every k_j < b^resolution.

    Indices are returned in lexicographic order.
    """
    return NetService.dual(request)
