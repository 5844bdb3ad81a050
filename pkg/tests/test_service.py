"""HTTP service endpoints via the in-process test client."""

import pytest
from fastapi.testclient import TestClient

from polyfuse import __version__
from polyfuse.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": __version__}


def test_builtins_catalog(client):
    payload = client.get("/builtins").json()
    by_name = {entry["name"]: entry for entry in payload["algebras"]}
    assert set(by_name) == {"boson", "su2", "su11", "higgs", "quadratic"}
    assert by_name["su2"]["order"] == 1
    assert by_name["su2"]["phi_text"] == "2*P0"
    assert by_name["quadratic"]["centrals"] == ["a", "b", "c"]
    assert by_name["boson"]["phi"]["terms"] == [
        {"p0_power": 0, "coeff": [{"symbols": {}, "rational": "-1"}]}]


def test_check_ok(client):
    response = client.post("/check", json={"source": "phi su2; g boson;"})
    assert response.json() == {"ok": True, "statements": 2, "error": None}


def test_check_parse_error_positions(client):
    payload = client.post("/check", json={"source": "phi nope;"}).json()
    assert payload["ok"] is False
    error = payload["error"]
    assert (error["line"], error["col"]) == (1, 5)
    assert "unknown identifier" in error["message"]
    assert "a defined algebra name" in error["expected"]


def test_eval_text(client):
    payload = client.post("/eval", json={"source": "phi su11;"}).json()
    assert payload["ok"] is True
    assert "phi su11 = -2*P0" in payload["output"]
    assert payload["report"] is None


def test_eval_json_format(client):
    payload = client.post(
        "/eval", json={"source": "order higgs;", "format": "json"}).json()
    assert payload["report"]["results"][0]["value"] == 3
    assert payload["output"] is None


def test_eval_latex_format(client):
    payload = client.post(
        "/eval", json={"source": "phi boson;", "format": "latex"}).json()
    assert "phi boson = -1" in payload["output"]


def test_eval_execution_error(client):
    payload = client.post("/eval", json={"source": "verify higgs;"}).json()
    assert payload["ok"] is False
    assert "no finite matrix model" in payload["error"]


def test_eval_parse_error(client):
    payload = client.post("/eval", json={"source": "phi ="}).json()
    assert payload["ok"] is False
    assert payload["parse_error"]["line"] == 1


def test_eval_with_params(client):
    payload = client.post("/eval", json={
        "source": "verify su2;", "params": {"j": "7/2"}}).json()
    assert payload["ok"] is True
    assert "j=7/2" in payload["output"]


def test_eval_bad_param_value(client):
    payload = client.post("/eval", json={
        "source": "phi su2;", "params": {"j": "banana"}}).json()
    assert payload["ok"] is False
    assert "not an exact rational" in payload["error"]


def test_verify_endpoint_pass(client):
    payload = client.post("/verify", json={
        "source": "verify su2 with (j = 2); verify boson;"}).json()
    assert payload["ok"] is True
    assert payload["verifications"] == 2
    assert payload["failures"] == []
    reports = payload["report"]["results"]
    assert all(entry["pass"] for entry in reports)


def test_verify_endpoint_structure(client):
    payload = client.post("/verify", json={
        "source": "verify fuse(J, su2, su11) with "
                  "(j = 3/2, k = 1, cutoff = 12);"}).json()
    result = payload["report"]["results"][0]
    assert result["tolerances"]["relations"] == 1e-9
    entries = result["reports"][0]["entries"]
    assert {e["relation"] for e in entries} == \
        {"[P0,P+]-P+", "[P0,P-]+P-", "[P+,P-]-phi(P0)"}
    assert all(e["interior"] < 1e-9 for e in entries)


def test_verify_endpoint_no_verify_statements(client):
    payload = client.post("/verify", json={"source": "phi su2;"}).json()
    assert payload["ok"] is True
    assert payload["verifications"] == 0


def test_request_validation(client):
    assert client.post("/eval", json={}).status_code == 422
    assert client.post("/eval", json={"source": "phi su2;",
                                      "format": "yaml"}).status_code == 422


def test_openapi_lists_routes(client):
    paths = client.get("/openapi.json").json()["paths"]
    assert {"/check", "/eval", "/verify", "/builtins", "/health"} <= set(paths)
