from typing import List

from fastapi import APIRouter, Depends, HTTPException, status
from sqlalchemy.orm import Session

from app.core.database import get_db
from app.schemas.convergence import ConvergenceRequest, ConvergenceRunResponse
from app.services.qmc_service import ConvergenceService
from app.services.run_store import RunStore

router = APIRouter(prefix="/convergence", tags=["Convergence"])


@router.post("", response_model=ConvergenceRunResponse)
def convergence(
    request: ConvergenceRequest,
    db: Session = Depends(get_db),
):
    """
    Integration errors of f1, f2 or f3 for m = m_from..m_to.

    - **variant**: `plain`, `antithetic` (b^(m+1) points) or `both`
    - **generator**: `sobol`, or `hopl` with modulus and q

    Returns the error rows and the fitted slope of log error against log N per variant.
    """
    _, fields = ConvergenceService.study(request)
    if request.save:
        return RunStore.record_convergence(db, fields)
    return ConvergenceRunResponse(**fields)


@router.get("/runs", response_model=List[ConvergenceRunResponse])
def list_convergence_runs(db: Session = Depends(get_db)):
    """
    List stored convergence studies, most recent first.
    """
    return RunStore.list_convergence(db)


@router.get("/runs/{run_id}", response_model=ConvergenceRunResponse)
def get_convergence_run(run_id: int, db: Session = Depends(get_db)):
    run = RunStore.get_convergence(db, run_id)
    if not run:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail="Convergence run not found"
        )
    return run
