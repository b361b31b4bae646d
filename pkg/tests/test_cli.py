import json

import pytest

from qwonder.cli import COMMANDS, main, run_command
from qwonder.errors import StepBudgetExceeded, UserInputError
from qwonder.verification import SUITES


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_nf_prints_compact_json(capsys):
    code, data, out = _run(capsys, ['nf', 'sl2', 'd*a'])
    assert code == 0
    assert data['text'] == "1 + q^-1*b*c"
    assert data['context'] == 'sl2'
    assert out.count('\n') == 1


def test_pretty_output(capsys):
    code, data, out = _run(capsys, ['nf', 'mat2', 'a', '--pretty'])
    assert code == 0
    assert out.count('\n') > 1


def test_syntax_errors_exit_with_one(capsys):
    code, data, _ = _run(capsys, ['nf', 'sl2', 'a +'])
    assert code == 1
    assert data['line'] == 1
    assert 'column' in data


def test_user_errors_exit_with_one(capsys):
    code, data, _ = _run(capsys, ['nf', 'sl2', 'a^-1'])
    assert code == 1
    assert 'error' in data


def test_invariant_violations_exit_with_two(capsys, monkeypatch):
    def blow_up(params):
        raise StepBudgetExceeded("budget of 1 rewrite steps exhausted")

    monkeypatch.setitem(COMMANDS, 'nf', blow_up)
    code, data, _ = _run(capsys, ['nf', 'sl2', 'a'])
    assert code == 2
    assert 'budget' in data['error']


def test_failed_suites_exit_with_three(capsys, monkeypatch):
    monkeypatch.setitem(SUITES, 'broken', lambda: [{'name': 'x', 'passed': False, 'detail': ''}])
    code, data, _ = _run(capsys, ['verify', 'broken'])
    assert code == 3
    assert data['passed'] is False


def test_verify_a_passing_suite(capsys):
    code, data, _ = _run(capsys, ['verify', 'centrality'])
    assert code == 0
    assert data['passed'] is True


def test_mul(capsys):
    code, data, _ = _run(capsys, ['mul', 'sl2', 'a', 'd'])
    assert code == 0
    assert data['text'] == "1 + q*b*c"


def test_q_eval(capsys):
    code, data, _ = _run(capsys, ['nf', 'mat2', 'q*a', '--q-eval', '2'])
    assert code == 0
    assert data['specialized']['q'] == '2'
    assert 'q' not in data['specialized']['text']
    code, data, _ = _run(capsys, ['nf', 'mat2', 'q*a', '--q-eval', 'x'])
    assert code == 1


def test_pw(capsys):
    code, data, _ = _run(capsys, ['pw', 'a'])
    assert code == 0
    assert data['coordinates'] == [{'n': 1, 'row': 0, 'col': 0, 'coeff': '1'}]
    assert data['levels'][0]['level'] == 1


def test_rees_and_gr_products(capsys):
    code, data, _ = _run(capsys, ['rees-mul', 'az', 'dz'])
    assert code == 0
    assert data['context'] == 'vinberg'
    code, data, _ = _run(capsys, ['gr-mul', 'empty', 'a', 'd'])
    assert code == 0
    code, other, _ = _run(capsys, ['nf', 'gr0', 'q*b*c'])
    assert data['text'] == other['text']


def test_phi(capsys):
    code, data, _ = _run(capsys, ['phi', 'empty', 'a'])
    assert code == 0
    assert data['text'] == "(a)|(a)"


def test_poisson(capsys):
    code, data, _ = _run(capsys, ['poisson', 'a', 'd'])
    assert code == 0
    assert data['text'].replace(' ', '') == '2*b*c'
    code, data, _ = _run(capsys, ['poisson', '--context', 'mat2', 'a', 'b'])
    assert code == 0
    assert data['passed'] is True


def test_dims(capsys):
    code, data, _ = _run(capsys, ['dims', 'mat2', '3'])
    assert code == 0
    assert data['dimension'] == 20
    assert [row['dimension'] for row in data['table']] == [1, 4, 10, 20]
    code, data, _ = _run(capsys, ['dims', 'sl2', '2'])
    assert data['dimension'] == 10
    code, data, _ = _run(capsys, ['dims', 'p1p1', '1,1'])
    assert data['dimension'] == 4


def test_veronese(capsys):
    code, data, _ = _run(capsys, ['veronese', 'mat2', '1', '3'])
    assert code == 0
    assert data['dimensions'] == [1, 4, 10, 20]


def test_torsion_from_a_module_file(capsys, tmp_path):
    path = tmp_path / 'augmentation.json'
    path.write_text(json.dumps({
        'algebra': 'mat2',
        'generators': [{'label': 'e', 'degree': 0}],
        'relations': [{'e': 'a'}, {'e': 'b'}, {'e': 'c'}, {'e': 'd'}],
    }))
    code, data, _ = _run(capsys, ['torsion', str(path), '--horizon', '4'])
    assert code == 0
    assert data['verdict'] == 'torsion'
    code, data, _ = _run(capsys, ['torsion', str(tmp_path / 'missing.json')])
    assert code == 1


def test_run_command_rejects_unknown_names():
    with pytest.raises(UserInputError):
        run_command('frobnicate', {})
