import pytest

import web_server
from utils import load_graph


@pytest.fixture
def client(monkeypatch, service):
    monkeypatch.setattr(web_server, "service", service)
    web_server.app.config["TESTING"] = True
    return web_server.app.test_client()


def graph_body(graph_path, name):
    return load_graph(graph_path(name)).to_file().model_dump()


def test_index(client):
    assert "/api/homology" in client.get("/").get_json()["endpoints"]


def test_fixtures(client):
    listing = client.get("/api/fixtures").get_json()
    assert "H4" in listing["graphs"]


def test_classify(client, graph_path):
    response = client.post("/api/classify", json=graph_body(graph_path, "E6"))
    assert response.status_code == 200
    assert response.get_json()["headline"] == "finite type: E6; abelianization rank 1"


def test_homology_with_window(client, graph_path):
    body = graph_body(graph_path, "A3")
    body["window"] = 4
    data = client.post("/api/homology", json=body).get_json()
    assert data["window"] == 4
    assert data["structure"]["rank"] == 2


def test_homology_by_fixture_name(client):
    data = client.post("/api/homology", json={"fixture": "B2"}).get_json()
    assert data["verdict"]["status"] == "infinitely_related"


def test_onerel(client):
    data = client.post("/api/onerel", json={"generators": ["a", "t"], "relator": "t a^2 t^-1 a^-3"}).get_json()
    assert data["verdict"]["status"] == "infinitely_related"


def test_alexander(client):
    data = client.post("/api/alexander", json={"poly": "1 - 3*t + t^2"}).get_json()
    assert data["verdict"]["polycyclic"] is True


@pytest.mark.parametrize("path, body, status", [
    ("/api/classify", {"vertices": ["a", "a"]}, 400),
    ("/api/alexander", {}, 400),
    ("/api/onerel", {"generators": ["x", "y", "z"], "relator": "x y z"}, 422),
])
def test_error_status(client, path, body, status):
    response = client.post(path, json=body)
    assert response.status_code == status
    assert "error" in response.get_json()
