import importlib

import pytest

from app import app
from qwonder.cli import COMMANDS
from qwonder.engine_config import EngineConfig
from qwonder.errors import InvariantViolation
from qwonder.verification import SUITES


@pytest.fixture
def client():
    app.config['TESTING'] = True
    with app.test_client() as client:
        yield client


def test_health(client):
    response = client.get('/')
    assert response.status_code == 200
    data = response.get_json()
    assert data['status'] == 'ok'
    assert 'nf' in data['commands']
    assert 'confluence' in data['suites']


def test_normal_form(client):
    response = client.post('/api/nf', json={'context': 'sl2', 'expr': 'd*a'})
    assert response.status_code == 200
    assert response.get_json()['text'] == "1 + q^-1*b*c"


def test_unknown_subcommand(client):
    response = client.post('/api/frobnicate', json={})
    assert response.status_code == 404


def test_body_must_be_an_object(client):
    response = client.post('/api/nf', json=['a'])
    assert response.status_code == 400


def test_user_errors_are_bad_requests(client):
    response = client.post('/api/nf', json={'context': 'sl2', 'expr': 'a +'})
    assert response.status_code == 400
    data = response.get_json()
    assert data['line'] == 1
    response = client.post('/api/nf', json={'context': 'sl2'})
    assert response.status_code == 400


def test_invariant_violations_are_server_errors(client, monkeypatch):
    def blow_up(params):
        raise InvariantViolation("broken")

    monkeypatch.setitem(COMMANDS, 'nf', blow_up)
    response = client.post('/api/nf', json={'expr': 'a'})
    assert response.status_code == 500
    assert response.get_json()['error'] == 'broken'


def test_torsion_needs_an_inline_module(client):
    response = client.post('/api/torsion', json={'module': '/etc/passwd'})
    assert response.status_code == 400
    module = {
        'algebra': 'mat2',
        'generators': [{'label': 'e', 'degree': 0}],
        'relations': [{'e': 'a'}, {'e': 'b'}, {'e': 'c'}, {'e': 'd'}],
    }
    response = client.post('/api/torsion', json={'module': module, 'horizon': 4})
    assert response.status_code == 200
    assert response.get_json()['verdict'] == 'torsion'


def test_dims(client):
    response = client.post('/api/dims', json={'presentation': 'mat2', 'degree': 2})
    assert response.status_code == 200
    assert response.get_json()['dimension'] == 10


def test_verify_suite(client):
    response = client.get('/api/verify/confluence')
    assert response.status_code == 200
    data = response.get_json()
    assert data['passed'] is True
    assert client.get('/api/verify/nonsense').status_code == 404


def test_failing_suite_reports_passed_false(client, monkeypatch):
    monkeypatch.setitem(SUITES, 'broken', lambda: [{'name': 'x', 'passed': False, 'detail': ''}])
    response = client.get('/api/verify/broken')
    assert response.status_code == 200
    assert response.get_json()['passed'] is False


def test_serverless_entry_point_loads_the_engine_config():
    handler = importlib.import_module('api.index')
    assert handler.app is app
    assert handler.config == EngineConfig.get_all_config()
