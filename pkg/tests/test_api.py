import pytest
from fastapi import status

API = "/api/v1"


def _sobol(s=1, m=2, **extra):
    return {"kind": "sobol", "s": s, "m": m, **extra}


def test_root_and_health(client):
    """Test service metadata endpoints."""
    assert client.get("/").status_code == status.HTTP_200_OK
    response = client.get("/health")
    assert response.status_code == status.HTTP_200_OK
    assert response.json()["status"] == "healthy"


def test_sobol_points(client):
    """Test point generation in natural order."""
    response = client.post(f"{API}/nets/points", json={"net": _sobol()})

    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert data["n_points"] == 4
    assert data["points"] == [[0.0], [0.5], [0.25], [0.75]]
    assert data["exact_points"] is None


def test_antithetic_points_exact(client):
    """Test exact coordinates of the antithetic net."""
    response = client.post(
        f"{API}/nets/points", json={"net": _sobol(), "antithetic": True, "exact": True}
    )

    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert data["n_points"] == 8
    assert [p[0] for p in data["exact_points"]] == ["0/1", "1/2", "1/4", "3/4", "1/1", "1/2", "3/4", "1/4"]


def test_hopl_points(client):
    """Test polynomial lattice points."""
    net = {"kind": "hopl", "s": 1, "m": 2, "b": 2, "modulus": [1, 1, 1], "q": [[1]]}
    response = client.post(f"{API}/nets/points", json={"net": net})

    assert response.status_code == status.HTTP_200_OK
    assert sorted(p[0] for p in response.json()["points"]) == [0.0, 0.25, 0.5, 0.75]


def test_hopl_without_generating_vector(client):
    """Test that a polynomial lattice needs q."""
    net = {"kind": "hopl", "s": 1, "m": 2, "b": 2}
    response = client.post(f"{API}/nets/points", json={"net": net})

    assert response.status_code == status.HTTP_400_BAD_REQUEST
    assert "generating vector" in response.json()["detail"]


def test_sobol_rejects_other_bases(client):
    """Test that Sobol' nets are binary."""
    response = client.post(f"{API}/nets/points", json={"net": _sobol(b=3)})
    assert response.status_code == status.HTTP_400_BAD_REQUEST


def test_invalid_net_size(client):
    """Test schema validation of m."""
    response = client.post(f"{API}/nets/points", json={"net": _sobol(m=0)})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY


def test_dual_enumeration(client):
    """Test dual nets of the one-dimensional Sobol' net and its antithetic net."""
    response = client.post(f"{API}/nets/dual", json={"net": _sobol(), "resolution": 4})

    assert response.status_code == status.HTTP_200_OK
    assert response.json()["indices"] == [[0], [4], [8], [12]]

    response = client.post(
        f"{API}/nets/dual", json={"net": _sobol(), "resolution": 4, "antithetic": True}
    )
    assert response.json()["indices"] == [[0], [12]]
    assert response.json()["count"] == 2


def test_dual_enumeration_guard(client):
    """Test that oversized enumerations are refused."""
    response = client.post(f"{API}/nets/dual", json={"net": _sobol(s=3), "resolution": 20})

    assert response.status_code == status.HTTP_413_REQUEST_ENTITY_TOO_LARGE
    assert "exceeds the limit" in response.json()["detail"]


def test_search_and_runs(client, search_request_data):
    """Test a stored exhaustive search."""
    response = client.post(f"{API}/search", json=search_request_data)

    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert data["id"] is not None
    assert data["modulus"] == [1, 1, 1]
    assert len(data["generating_vector"]) == 2
    assert data["truncation"] == 6
    assert data["certified_bound"] == pytest.approx(data["truncated_bound"] + data["tail_bound"])
    assert data["trials"] is None

    runs = client.get(f"{API}/search/runs").json()
    assert [run["id"] for run in runs] == [data["id"]]

    response = client.get(f"{API}/search/runs/{data['id']}")
    assert response.status_code == status.HTTP_200_OK
    assert response.json()["generating_vector"] == data["generating_vector"]


def test_search_without_saving(client, search_request_data):
    """Test that save=false leaves the run store empty."""
    response = client.post(f"{API}/search", json={**search_request_data, "save": False})

    assert response.status_code == status.HTTP_200_OK
    assert response.json()["id"] is None
    assert client.get(f"{API}/search/runs").json() == []


def test_random_search(client, search_request_data):
    """Test that a seeded random search is reproducible."""
    payload = {**search_request_data, "strategy": "random", "trials": 5, "seed": 3, "save": False}
    first = client.post(f"{API}/search", json=payload).json()
    second = client.post(f"{API}/search", json=payload).json()

    assert first["generating_vector"] == second["generating_vector"]
    assert first["trials"] == 5


def test_search_run_not_found(client):
    """Test missing search runs."""
    response = client.get(f"{API}/search/runs/999")

    assert response.status_code == status.HTTP_404_NOT_FOUND
    assert response.json()["detail"] == "Search run not found"


@pytest.mark.parametrize(
    "override",
    [{"lam": 0.4}, {"weights": "bogus:1"}, {"modulus": [1, 0, 0, 1]}],
    ids=["lambda", "weights", "modulus-degree"],
)
def test_search_rejects_bad_parameters(client, search_request_data, override):
    """Test parameter errors."""
    response = client.post(f"{API}/search", json={**search_request_data, **override})
    assert response.status_code == status.HTTP_400_BAD_REQUEST


def test_search_space_guard(client, search_request_data):
    """Test that exhaustive searches beyond the candidate limit are refused."""
    response = client.post(f"{API}/search", json={**search_request_data, "n": 11})
    assert response.status_code == status.HTTP_413_REQUEST_ENTITY_TOO_LARGE


def test_worst_case_error(client):
    """Test the worst-case error comparison."""
    response = client.post(f"{API}/wce", json={"net": _sobol(s=2, m=3)})

    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert data["n_plain"] == 8
    assert data["n_antithetic"] == 16
    assert data["wce_plain"] > 0
    assert data["wce_antithetic"] > 0


def test_convergence_runs(client):
    """Test a stored convergence study."""
    payload = {"func": "f1", "s": 2, "m_from": 2, "m_to": 5}
    response = client.post(f"{API}/convergence", json=payload)

    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert len(data["rows"]) == 8
    assert set(data["slopes"]) == {"plain", "antithetic"}
    assert data["params"] == {"theta": 0.1, "zeta": 1.0}

    assert [run["id"] for run in client.get(f"{API}/convergence/runs").json()] == [data["id"]]
    response = client.get(f"{API}/convergence/runs/{data['id']}")
    assert response.status_code == status.HTTP_200_OK
    assert response.json()["rows"] == data["rows"]


def test_convergence_with_polynomial_lattice(client):
    """Test the hopl generator."""
    payload = {
        "func": "f2", "s": 2, "w": 0.5, "generator": "hopl", "m_from": 1, "m_to": 3,
        "variant": "antithetic", "modulus": [1, 1, 0, 1], "q": [[1], [0, 1, 1]], "save": False,
    }
    response = client.post(f"{API}/convergence", json=payload)

    assert response.status_code == status.HTTP_200_OK
    assert [row["N"] for row in response.json()["rows"]] == [4, 8, 16]


def test_convergence_bad_range(client):
    """Test that m_to may not precede m_from."""
    response = client.post(f"{API}/convergence", json={"s": 2, "m_from": 5, "m_to": 3})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY


def test_convergence_run_not_found(client):
    """Test that an unknown convergence run id returns 404."""
    response = client.get(f"{API}/convergence/runs/42")
    assert response.status_code == status.HTTP_404_NOT_FOUND


def test_points_from_net_description(client):
    """Test points of a net sent in the plain-text net format."""
    net = {"kind": "text", "text": "2 1 2 2 0\n1 0\n0 1\n"}
    response = client.post(f"{API}/nets/points", json={"net": net})

    assert response.status_code == status.HTTP_200_OK
    assert response.json()["points"] == [[0.0], [0.5], [0.25], [0.75]]


def test_net_description_required(client):
    """Test that kind 'text' without a description is rejected."""
    response = client.post(f"{API}/nets/points", json={"net": {"kind": "text"}})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY


def test_malformed_net_description(client):
    """Test that a malformed description is a client error."""
    response = client.post(f"{API}/nets/points", json={"net": {"kind": "text", "text": "2 1\n"}})
    assert response.status_code == status.HTTP_400_BAD_REQUEST
