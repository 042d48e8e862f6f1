from app.models.run import SearchRun, ConvergenceRun

__all__ = ["SearchRun", "ConvergenceRun"]
