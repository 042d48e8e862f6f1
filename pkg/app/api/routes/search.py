from typing import List
from fastapi import APIRouter, Depends, HTTPException, status
from sqlalchemy.orm import Session

from app.core.database import get_db
from app.schemas.search import SearchRequest, SearchRunResponse
from app.services.qmc_service import SearchService
from app.services.run_store import RunStore

router = APIRouter(prefix="/search", tags=["Lattice Search"])


@router.post("", response_model=SearchRunResponse)
def search(
    request: SearchRequest,
    db: Session = Depends(get_db),
):
    """
    Search a generating vector q for the antithetic polynomial lattice with modulus p.

    - **b, n, m, s**: Prime base, modulus degree, net size b^m and dimension
    - **alpha, lam**: Smoothness and exponent of the bound (1/alpha < lam <= 1)
    - **weights**: `product:g`, `product:g1,...`, `geometric:c` or `map:1=0.5;1,2=0.25`
    - **strategy**: `exhaustive` over all q, or `random` with `trials` and `seed`
    - **truncation**: Index bound K of the truncated sum (default n + 4)
    - **modulus**: Coefficients of p; default is the smallest irreducible of degree n

    Returns q and the truncated bound, tail bound and their certified sum.
    """
    fields = SearchService.search(request)
    if request.save:
        return RunStore.record_search(db, fields)
    return SearchRunResponse(**fields)


@router.get("/runs", response_model=List[SearchRunResponse])
def list_search_runs(db: Session = Depends(get_db)):
    """
    List stored search runs, most recent first.
    """
    return RunStore.list_searches(db)


@router.get("/runs/{run_id}", response_model=SearchRunResponse)
def get_search_run(run_id: int, db: Session = Depends(get_db)):
    run = RunStore.get_search(db, run_id)
    if not run:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail="Search run not found"
        )
    return run
