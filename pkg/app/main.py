import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request, status
from fastapi.responses import JSONResponse

from app.core.config import settings
from app.core.database import init_db, close_db
from app.core.exceptions import EnumerationLimitError, QMCError
from app.core.logging import configure_logging
from app.api.routes import api_router

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Lifespan context manager for startup and shutdown events.
    """
    configure_logging(settings.LOG_LEVEL)
    logger.info("starting %s", settings.APP_NAME)
    init_db()
    logger.info("run database ready at %s", settings.DATABASE_URL)
    yield
    logger.info("shutting down %s", settings.APP_NAME)
    close_db()


# Create FastAPI application
app = FastAPI(
    title=settings.APP_NAME,
    description="Digital nets, b-adic antithetic sampling and polynomial lattice search",
    version=settings.API_VERSION,
    lifespan=lifespan,
)


@app.exception_handler(QMCError)
async def qmc_error_handler(request: Request, exc: QMCError):
    code = (
        status.HTTP_413_REQUEST_ENTITY_TOO_LARGE
        if isinstance(exc, EnumerationLimitError)
        else status.HTTP_400_BAD_REQUEST
    )
    logger.info("%s %s rejected: %s", request.method, request.url.path, exc)
    return JSONResponse(status_code=code, content={"detail": str(exc)})


# Include API routes
app.include_router(api_router, prefix=f"/api/{settings.API_VERSION}")


@app.get("/")
async def root():
    """
    Root endpoint - API health check.
    """
    return {
        "message": f"Welcome to {settings.APP_NAME}",
        "version": settings.API_VERSION,
        "docs": "/docs",
        "status": "running",
    }


@app.get("/health")
async def health_check():
    """
    Health check endpoint for monitoring.
    """
    return {
        "status": "healthy",
        "app": settings.APP_NAME,
        "version": settings.API_VERSION,
    }
