"""
Tests for the command-line front end
"""
import hashlib
import json

import pytest

import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def manifest_of(err: str) -> dict:
    return json.loads(err.strip().splitlines()[-1])


def test_appendix_b_csv(capsys):
    code, out, err = run(capsys, 'appendix-b', '--n-max', '2')
    assert code == cli.EXIT_OK
    lines = out.splitlines()
    assert lines[0] == ','.join(cli.APPENDIX_B_COLUMNS)
    assert lines[1] == '1,0.6,1.66666666667,1.06666666667,2,-0.0546875,0.0625'
    assert len(lines) == 3
    manifest = manifest_of(err)
    assert manifest['command'] == 'appendix-b'
    assert manifest['version'] == cli.__version__
    assert manifest['sha256'] == hashlib.sha256(out.encode('utf-8')).hexdigest()


def test_appendix_b_json(capsys):
    code, out, _ = run(capsys, 'appendix-b', '--n-max', '3', '--format', 'json')
    assert code == cli.EXIT_OK
    rows = json.loads(out)
    assert [row['n'] for row in rows] == [1, 2, 3]
    assert rows[0]['measure'] == pytest.approx(16.0 / 15.0)


def test_fig1_is_deterministic(capsys):
    argv = ['fig1', '--gammas', '1', '2', '--x-min', '0.2', '--x-max', '0.6', '--points', '3',
            '--trajectory-points', '101']
    code, first, err_first = run(capsys, *argv)
    assert code == cli.EXIT_OK
    lines = first.splitlines()
    assert lines[0] == ','.join(cli.FIG1_COLUMNS)
    assert len(lines) == 7
    assert lines[1].startswith('1,0.2,1,0.25,')
    _, second, err_second = run(capsys, *argv)
    assert first == second
    assert manifest_of(err_first)['sha256'] == manifest_of(err_second)['sha256']


@pytest.mark.parametrize('argv', [
    ['fig1', '--x-min', '0', '--points', '3'],
    ['fig1', '--gammas', '0.5', '--points', '3'],
    ['fig1', '--x-min', '0.7', '--x-max', '0.3'],
    ['appendix-b', '--n-max', '0'],
    ['appendix-b', '--trajectory-points', '2'],
    ['appendix-b', '--trajectory-points', '0'],
    ['probe', '--x', '0'],
    ['probe', '--scheme', 'mfg', '--x', '1e-7', '--gamma', '2'],
    ['no-such-command'],
])
def test_invalid_input_exits_with_usage_code(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == cli.EXIT_USAGE
    assert out == ''


def test_table1_csv(capsys):
    code, out, _ = run(capsys, 'table1', '--trajectory-points', '201')
    assert code == cli.EXIT_OK
    lines = out.splitlines()
    assert lines[0] == ','.join(cli.TABLE1_COLUMNS)
    assert lines[1].startswith('fg,0.25,1,geodesic,minimal,maximal,')
    assert lines[2].startswith('mfg,0.3,2,non-geodesic,non-minimal,non-maximal,')


@pytest.mark.parametrize('fmt,marker', [('markdown', '# Type of motion'), ('html', '<table>')])
def test_table1_reports(capsys, fmt, marker):
    code, out, _ = run(capsys, 'table1', '--format', fmt, '--trajectory-points', '201')
    assert code == cli.EXIT_OK
    assert marker in out


def test_table1_contradiction_exits_inconsistent(capsys, monkeypatch):
    monkeypatch.setattr(cli, 'check_table1', lambda rows: ['fg: motion computed x, expected y'])
    code, out, _ = run(capsys, 'table1', '--trajectory-points', '201')
    assert code == cli.EXIT_INCONSISTENT
    assert out.startswith('scheme,')


def test_probe_fg(capsys):
    code, out, _ = run(capsys, 'probe', '--scheme', 'fg', '--x', '0.25', '--trajectory-points', '201')
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload['t_star'] == pytest.approx(2.0 * 3.141592653589793)
    assert payload['eta_closed'] == 1.0
    assert payload['efficiency']['eta'] == pytest.approx(1.0, abs=1e-9)
    assert payload['geodesicity']['verdict'] == 'geodesic'
    assert payload['geodesicity']['mapping_parity'] == 'odd'
    assert 'trajectory' not in payload


def test_probe_mfg_with_trajectory(capsys):
    code, out, _ = run(capsys, 'probe', '--scheme', 'mfg', '--x', '0.3', '--gamma', '2',
                       '--trajectory-points', '101', '--emit-trajectory')
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload['geodesicity']['verdict'] == 'non-geodesic'
    assert payload['eta_closed'] < 1.0
    assert len(payload['trajectory']) == 101
    t, re_w, im_w, re_r, im_r = payload['trajectory'][0]
    assert t == 0.0
    assert re_w ** 2 + im_w ** 2 + re_r ** 2 + im_r ** 2 == pytest.approx(1.0, abs=1e-10)


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / 'windows.csv'
    code, out, err = run(capsys, 'appendix-b', '--n-max', '1', '--out', str(target))
    assert code == cli.EXIT_OK
    assert out == ''
    data = target.read_text(encoding='utf-8')
    assert data.startswith('n,i_minus')
    assert manifest_of(err)['sha256'] == hashlib.sha256(data.encode('utf-8')).hexdigest()


def test_bad_environment_exits_with_usage_code(capsys, monkeypatch):
    monkeypatch.setenv('QSG_TRAJECTORY_POINTS', 'plenty')
    code, _, _ = run(capsys, 'appendix-b')
    assert code == cli.EXIT_USAGE
    monkeypatch.delenv('QSG_TRAJECTORY_POINTS')
    monkeypatch.setenv('QSG_LOG_LEVEL', 'LOUD')
    code, _, _ = run(capsys, 'appendix-b')
    assert code == cli.EXIT_USAGE


def test_fig1_with_default_grid(capsys, monkeypatch):
    """The default grid includes x = 0.5, where A + B = 0 at gamma = 2"""
    monkeypatch.setenv('QSG_TRAJECTORY_POINTS', '101')
    monkeypatch.setenv('QSG_DEFAULT_STEPS', '1000')
    code, out, _ = run(capsys, 'fig1')
    assert code == cli.EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 1 + 3 * 99
    assert any(line.startswith('2,0.5,') for line in lines)
    rows = [line.split(',') for line in lines[1:]]
    assert all(row[2] == '1' for row in rows if row[0] == '1')
    assert all(all(cell not in ('', 'nan', 'inf') for cell in row) for row in rows)


def test_oracle_block_follows_step_setting(capsys, monkeypatch):
    monkeypatch.setenv('QSG_DEFAULT_STEPS', '2000')
    code, out, _ = run(capsys, 'probe', '--scheme', 'mfg', '--x', '0.5', '--gamma', '2',
                       '--trajectory-points', '101')
    assert code == cli.EXIT_OK
    oracle = json.loads(out)['oracle']
    assert oracle['steps'] == 2000
    assert 0.0 <= oracle['terminal_infidelity'] <= 1e-8


def test_bad_step_setting_exits_with_usage_code(capsys, monkeypatch):
    monkeypatch.setenv('QSG_DEFAULT_STEPS', 'garbage')
    code, out, _ = run(capsys, 'probe', '--x', '0.25', '--trajectory-points', '201')
    assert code == cli.EXIT_USAGE
    assert out == ''


def test_arithmetic_failure_exits_inconsistent(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise ZeroDivisionError('float division by zero')

    monkeypatch.setattr(cli, 'sweep', broken)
    code, out, _ = run(capsys, 'fig1', '--points', '3')
    assert code == cli.EXIT_INCONSISTENT
    assert out == ''
