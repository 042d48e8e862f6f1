from datetime import datetime
from sqlalchemy import Column, Integer, String, DateTime, Float, JSON
from app.core.database import Base


class SearchRun(Base):
    """A completed generating-vector search for an antithetic polynomial lattice."""

    __tablename__ = "search_runs"

    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime, default=datetime.utcnow)

    # Lattice parameters
    b = Column(Integer, nullable=False)
    n = Column(Integer, nullable=False)
    m = Column(Integer, nullable=False)
    s = Column(Integer, nullable=False)

    # Bound parameters
    alpha = Column(Integer, nullable=False)
    lam = Column(Float, nullable=False)
    weights = Column(String, nullable=False)
    truncation = Column(Integer, nullable=False)

    # Strategy
    strategy = Column(String, nullable=False)
    trials = Column(Integer, nullable=True)
    seed = Column(Integer, nullable=True)

    # Result; polynomials as coefficient lists, constant term first
    modulus = Column(JSON, nullable=False)
    generating_vector = Column(JSON, nullable=False)
    truncated_bound = Column(Float, nullable=False)
    tail_bound = Column(Float, nullable=False)
    certified_bound = Column(Float, nullable=False)

    def __repr__(self):
        return f"<SearchRun {self.id} b={self.b} n={self.n} m={self.m} s={self.s}>"


class ConvergenceRun(Base):
    """Errors and fitted slopes of one convergence study."""

    __tablename__ = "convergence_runs"

    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime, default=datetime.utcnow)
    func = Column(String, nullable=False)
    params = Column(JSON, default=dict)
    generator = Column(String, nullable=False)
    m_from = Column(Integer, nullable=False)
    m_to = Column(Integer, nullable=False)
    slopes = Column(JSON, default=dict)  # variant -> slope or null
    rows = Column(JSON, default=list)

    def __repr__(self):
        return f"<ConvergenceRun {self.id} {self.func} {self.generator} m={self.m_from}..{self.m_to}>"
