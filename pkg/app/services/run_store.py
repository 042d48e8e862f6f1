from typing import List, Optional
from sqlalchemy.orm import Session

from app.models.run import ConvergenceRun, SearchRun


class RunStore:
    """Service for persisting and reading run records."""

    @staticmethod
    def record_search(db: Session, fields: dict) -> SearchRun:
        run = SearchRun(**fields)
        db.add(run)
        db.commit()
        db.refresh(run)
        return run

    @staticmethod
    def list_searches(db: Session, limit: int = 100) -> List[SearchRun]:
        """
        Most recent search runs first.
        """
        return db.query(SearchRun).order_by(SearchRun.id.desc()).limit(limit).all()

    @staticmethod
    def get_search(db: Session, run_id: int) -> Optional[SearchRun]:
        return db.query(SearchRun).filter(SearchRun.id == run_id).first()

    @staticmethod
    def record_convergence(db: Session, fields: dict) -> ConvergenceRun:
        run = ConvergenceRun(**fields)
        db.add(run)
        db.commit()
        db.refresh(run)
        return run

    @staticmethod
    def list_convergence(db: Session, limit: int = 100) -> List[ConvergenceRun]:
        return db.query(ConvergenceRun).order_by(ConvergenceRun.id.desc()).limit(limit).all()

    @staticmethod
    def get_convergence(db: Session, run_id: int) -> Optional[ConvergenceRun]:
        return db.query(ConvergenceRun).filter(ConvergenceRun.id == run_id).first()
