from fastapi import APIRouter

from app.schemas.wce import WCERequest, WCEResponse
from app.services.qmc_service import WCEService

router = APIRouter(prefix="/wce", tags=["Worst-Case Error"])


@router.post("", response_model=WCEResponse)
def worst_case_error(request: WCERequest):
    """
    Exact worst-case errors of a net and of its antithetic net in the weighted
    Sobolev space of smoothness alpha.
    """
    return WCEResponse.model_validate(WCEService.compare(request))
