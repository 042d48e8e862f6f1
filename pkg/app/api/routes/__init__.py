from fastapi import APIRouter
from app.api.routes import nets, search, wce, convergence

api_router = APIRouter()

# Include route modules
api_router.include_router(nets.router)
api_router.include_router(search.router)
api_router.include_router(wce.router)
api_router.include_router(convergence.router)

__all__ = ["api_router"]
