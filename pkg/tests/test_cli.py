import json

import pytest

from source.data.formats import write_netlist
from source.misc.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, argument_parser, main, synth_config
from source.model.circuit import Circuit, Gate


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize('argv, expected', [
    (['--ndcm', '18'], '108'),
    (['--n5', '19'], '4'),
    (['--max-disjoint', '19'], '3'),
    (['--catalan', '4'], '12'),
    (['--block', 'S3', '--lines', '3'], '336'),
])
def test_count(capsys, argv, expected):
    code, out, _ = run(capsys, 'count', *argv)
    assert code == EXIT_OK
    assert out.strip() == expected


def test_count_index(capsys):
    code, out, _ = run(capsys, 'count', '--index', '2:3', '--length', '4')
    assert code == EXIT_OK
    assert out.splitlines() == ['ordered: 16', 'inequivalent: 12']


def test_count_usage_errors(capsys):
    for argv in (['count', '--index', '2:3'], ['count', '--block', 'P22'], ['count'],
                 ['count', '--ndcm', '7', '--n5', '7'], ['gen', 'lfsr', '3']):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == EXIT_USAGE


@pytest.mark.parametrize('argv', [
    ['--ndcm', '5'],
    ['--n5', '1'],
    ['--max-disjoint', '-3'],
    ['--catalan', '1'],
    ['--index', '2:1', '--length', '1'],
])
def test_count_domain_error(capsys, argv):
    code, _, err = run(capsys, 'count', *argv)
    assert code == EXIT_USAGE
    assert err.startswith('Error:')


def test_decompose(capsys):
    code, out, _ = run(capsys, 'decompose', '(1,2,3,4,5,6,7)(8,9,10)', '--limit', '2')
    assert code == EXIT_OK
    assert out.splitlines() == [
        '(1,2,3,4,5,6,7): 7 decompositions',
        '  (1,2,3,4,5)(6,7,1) | levels [1, 2] | valid True',
        '  (2,3,4,5,6)(7,1,2) | levels [1, 2] | valid True',
        '(8,9,10): elementary, no decomposition needed',
    ]


def test_gen_synth_verify(capsys, tmp_path):
    perm, netlist, report = tmp_path / 'hwb4.perm', tmp_path / 'hwb4.real', tmp_path / 'hwb4.json'

    assert run(capsys, 'gen', 'hwb', '4', '-o', str(perm))[0] == EXIT_OK
    assert perm.read_text(encoding='utf-8').startswith('n=4\nperm: 0 2 4 ')

    code, _, err = run(capsys, 'synth', str(perm), '-o', str(netlist), '--report', str(report), '--max-decomps', '2')
    assert code == EXIT_OK
    assert 'Quantum cost' in err
    assert json.loads(report.read_text(encoding='utf-8'))['extra_lines'] == 0

    code, out, _ = run(capsys, 'verify', str(netlist), str(perm))
    assert code == EXIT_OK
    assert out.startswith('Verified')


def test_synth_to_stdout(capsys, tmp_path):
    perm = tmp_path / 'even.perm'
    run(capsys, 'gen', 'random-even', '3', '--seed', '2', '-o', str(perm))
    code, out, _ = run(capsys, 'synth', str(perm), '--budget-ms', '0', '--no-postopt')
    assert code == EXIT_OK
    assert out.startswith('.version 1.0\n.numvars 3\n')


def test_verify_mismatch(capsys, tmp_path):
    perm, netlist = tmp_path / 'hwb3.perm', tmp_path / 'empty.real'
    run(capsys, 'gen', 'hwb', '3', '-o', str(perm))
    netlist.write_text(write_netlist(Circuit(3)), encoding='utf-8')

    code, _, err = run(capsys, 'verify', str(netlist), str(perm))
    assert code == EXIT_MISMATCH
    assert 'Mismatch' in err


def test_parse_error_exit(capsys, tmp_path):
    perm = tmp_path / 'bad.perm'
    perm.write_text('n=3\ncycles: (0,1)(1,2)\n', encoding='utf-8')
    code, _, err = run(capsys, 'synth', str(perm))
    assert code == EXIT_USAGE
    assert 'line 2, column 15' in err


def test_missing_file_exit(capsys, tmp_path):
    code, _, _ = run(capsys, 'cost', str(tmp_path / 'missing.real'))
    assert code == EXIT_USAGE


def test_cost(capsys, tmp_path):
    netlist = tmp_path / 'c4.real'
    netlist.write_text(write_netlist(Circuit(4, (Gate.make(3, 0, 1, 2),))), encoding='utf-8')

    assert run(capsys, 'cost', str(netlist))[1].strip() == 'Lines: 4 | Gates: 1 | Quantum cost: 13'
    assert run(capsys, 'cost', str(netlist), '--cost-model', 'unit')[1].strip() == 'Lines: 4 | Gates: 1 | Quantum cost: 1'


def test_config_precedence(tmp_path):
    config = tmp_path / 'synth.json'
    config.write_text(json.dumps({'max_decomps_per_cycle': 3, 'pairing': 'trivial', 'seed': 9}), encoding='utf-8')

    cfg = synth_config(argument_parser(['synth', 'p.perm', '--config', str(config), '--max-decomps', '5']))
    assert cfg.max_decomps_per_cycle == 5
    assert cfg.pairing == 'trivial'
    assert cfg.seed == 9
    assert cfg.budget_ms is None

    cfg = synth_config(argument_parser(['synth', 'p.perm', '--config', str(config), '--budget-ms', '50']))
    assert cfg.max_decomps_per_cycle == 3
    assert cfg.budget_ms == 50


def test_unknown_config_key(capsys, tmp_path):
    config, perm = tmp_path / 'synth.json', tmp_path / 'id.perm'
    config.write_text(json.dumps({'budget': 5}), encoding='utf-8')
    perm.write_text('n=2\nperm: 0 1 2 3\n', encoding='utf-8')

    code, _, err = run(capsys, 'synth', str(perm), '--config', str(config))
    assert code == EXIT_USAGE
    assert 'budget' in err
