import numpy as np
import pytest
from fastapi.testclient import TestClient
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from app.main import app
from app.core.database import Base, get_db
from app.qmc.net import DigitalNet, GeneratingMatrix

# Test database setup
SQLALCHEMY_TEST_DATABASE_URL = "sqlite:///./test.db"

engine = create_engine(
    SQLALCHEMY_TEST_DATABASE_URL, connect_args={"check_same_thread": False}
)
TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


def override_get_db():
    try:
        db = TestingSessionLocal()
        yield db
    finally:
        db.close()


@pytest.fixture(scope="function")
def test_db():
    """Create test database and tables."""
    import app.models  # noqa: F401

    Base.metadata.create_all(bind=engine)
    yield
    Base.metadata.drop_all(bind=engine)


@pytest.fixture(scope="function")
def client(test_db):
    """Create test client with database override."""
    app.dependency_overrides[get_db] = override_get_db
    with TestClient(app) as test_client:
        yield test_client
    app.dependency_overrides.clear()


@pytest.fixture
def rng():
    """Seeded generator for randomized property tests."""
    return np.random.default_rng(20240611)


def random_net(rng, b, s, m, rows=None, depth=8, continuation=False):
    """Digital net with uniformly random generating matrices."""
    rows = rows if rows is not None else depth
    matrices = []
    for _ in range(s):
        explicit = rng.integers(0, b, size=(rows, m))
        tail = tuple(int(v) for v in rng.integers(0, b, size=m)) if continuation else None
        matrices.append(
            GeneratingMatrix(
                b=b, m=m, rows=tuple(tuple(int(v) for v in r) for r in explicit), continuation=tail
            )
        )
    return DigitalNet(b=b, m=m, matrices=tuple(matrices), depth=depth)


@pytest.fixture
def make_net():
    """Factory for random digital nets."""
    return random_net


@pytest.fixture
def search_request_data():
    """Small exhaustive search payload."""
    return {
        "b": 2,
        "n": 2,
        "m": 2,
        "s": 2,
        "alpha": 2,
        "lam": 1.0,
        "weights": "product:1",
        "strategy": "exhaustive",
    }
