import os, json
import pytest

from src.runner import (RosterError, RosterRunner, VerificationReport, parse_roster,
                        load_roster, power_residues, sweep_values, emit_report, report_digest, report_frame,
                        run_roster, prime_table)

pjoin = os.path.join

def write_roster(tmp_path, data, name='roster.json'):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)

def test_empty_roster():
    assert parse_roster(None) == ({}, [])
    assert parse_roster({'seed': 3, 'targets': []}) == ({'seed': 3}, [])
    assert RosterRunner([])() == []

@pytest.mark.parametrize('data', [
    ['not', 'a', 'mapping'],
    {'target': []},
    {'targets': ['A5']},
    {'targets': [{'kind': 'xNyN', 'params': {'N': 2}}]},
    {'targets': [{'group': 'A5', 'kind': 'x^N'}]},
    {'targets': [{'group': 'A5', 'kind': 'xNyN', 'expect': 'yes'}]},
    {'targets': [{'group': 'A5', 'kind': 'xNyN', 'params': [2]}]},
    {'targets': [{'group': 'A5', 'kind': 'xNyN', 'colour': 'red'}]},
])
def test_roster_schema(data):
    with pytest.raises(RosterError):
        parse_roster(data)

def test_roster_defaults():
    settings, targets = parse_roster({'seed': 7, 'threads': 2, 'targets': [
        {'group': 'A5', 'kind': 'xNyN', 'params': {'N': 12}},
        {'name': 'table', 'kind': 'prime-table', 'seed': 1},
    ]})
    assert settings == {'seed': 7, 'threads': 2}
    assert targets[0].name == 'A5 xNyN' and targets[0].seed == 7
    assert targets[1].group is None and targets[1].seed == 1 and targets[1].group_label == 'table'

def test_load_roster_resolves_tables(tmp_path, templates):
    (tmp_path / 'C4.ctab').write_text(open(pjoin(templates, 'C4.ctab')).read())
    path = tmp_path / 'roster.yaml'
    path.write_text('targets:\n  - {group: {table: C4.ctab}, kind: k-2elements, params: {k: 1}}\n')
    _, targets = load_roster(str(path))
    assert targets[0].group['table'] == str(tmp_path / 'C4.ctab')
    assert targets[0].group_label == 'table:C4.ctab'
    bad = tmp_path / 'bad.yaml'
    bad.write_text('targets: [\n')
    with pytest.raises(RosterError):
        load_roster(str(bad))

def test_power_residues():
    assert power_residues([2, 3], 6) == [1, 2, 3, 4, 6]
    assert power_residues([5], 30) == [1, 5, 25]
    assert power_residues([], 30) == [1]

def test_sweep_values():
    assert sweep_values({'N': 12}, 60, 30) == [12]
    assert sweep_values({'sweep': {'primes': [2, 3]}}, 24, 6) == [1, 2, 3, 4, 6]
    values = sweep_values({'sweep': {'pairs': True}}, 60, 30)
    assert values == sorted(values) and 1 in values and all(1 <= v <= 30 for v in values)
    assert sweep_values({'sweep': {'pairs': True}}, 8, 4) == [1, 2, 4]
    with pytest.raises(RosterError):
        sweep_values({}, 60, 30)

def test_runner_targets(tmp_path, templates):
    path = write_roster(tmp_path, {'seed': 0, 'targets': [
        {'name': 'exponent', 'group': 'A5', 'kind': 'xNyN', 'params': {'N': 30}, 'expect': 'not-surjective'},
        {'name': 'sweep', 'group': 'A5', 'kind': 'xNyN', 'params': {'sweep': {'primes': [2, 3]}}},
        {'name': 'two 2-elements', 'group': 'A5', 'kind': 'k-2elements', 'params': {'k': 2, 'method': 'both'},
         'expect': 'surjective'},
        {'name': 'file', 'group': {'table': pjoin(templates, 'C4.ctab')}, 'kind': 'k-2elements',
         'params': {'k': 1}, 'expect': 'surjective'},
        {'name': 'proportion', 'group': 'A5', 'kind': 'proportion', 'params': {'primes': [2, 5]}, 'expect': 'pass'},
        {'name': 'half', 'group': 'A5', 'kind': 'half-criterion', 'params': {'primes': [2, 5]}, 'expect': 'fail'},
        {'name': 'bad method', 'group': 'A5', 'kind': 'xNyN', 'params': {'N': 2, 'method': 'guess'},
         'expect': 'surjective'},
    ]})
    cache = str(tmp_path / 'cache')
    reports = run_roster(path, cache_dir=cache, quiet=True)
    by_name = {r.name: r for r in reports}
    assert [r.name for r in reports][0] == 'exponent'
    exponent = by_name['exponent']
    assert exponent.matches and exponent.missed == ['2A', '3A', '5A', '5B']
    residues = by_name['sweep'].details['residues']
    assert by_name['sweep'].status == 'surjective' and 1 in residues and all(N % 5 for N in residues)
    assert by_name['two 2-elements'].matches
    assert by_name['file'].matches and by_name['file'].group == 'table:C4.ctab'
    assert by_name['proportion'].details == {'proportion': '13/20'}
    assert by_name['half'].matches
    bad = by_name['bad method']
    assert bad.status == 'error' and not bad.matches and bad.details['error'] == 'RosterError'
    assert os.path.exists(pjoin(cache, 'A5.ctab'))
    # the second run reads the stored table
    again = run_roster(path, cache_dir=cache, quiet=True)
    assert again[0].cache_hits >= 1
    assert report_digest(again) == report_digest(reports)

def test_parallel_runs_keep_order(tmp_path):
    targets = [{'name': f't{N}', 'group': 'S4', 'kind': 'xNyN', 'params': {'N': N, 'method': 'brute-force'}}
               for N in (1, 2, 3, 4, 6, 12)]
    path = write_roster(tmp_path, {'targets': targets})
    serial = run_roster(path, threads=1, quiet=True)
    parallel = run_roster(path, threads=3, quiet=True)
    assert [r.name for r in parallel] == [f't{N}' for N in (1, 2, 3, 4, 6, 12)]
    assert report_digest(serial) == report_digest(parallel)
    assert serial[0].status == 'surjective' and serial[-1].status == 'not-surjective'

def test_seed_override(tmp_path):
    path = write_roster(tmp_path, {'seed': 4, 'targets': [{'group': 'C3', 'kind': 'xNyN', 'params': {'N': 1}}]})
    assert run_roster(path, quiet=True)[0].seed == 4
    assert run_roster(path, seed=9, quiet=True)[0].seed == 9

def test_emit_report():
    reports = [VerificationReport('a', 'A5', 'xNyN', {'N': 30}, 'not-surjective', 0, missed=['2A'],
                                  expect='not-surjective'),
               VerificationReport('b', 'A5', 'proportion', {}, 'pass', 0)]
    data = json.loads(emit_report(reports, 'json'))
    assert [d['name'] for d in data] == ['a', 'b'] and all(d['matches'] for d in data)
    text = emit_report(reports, 'markdown')
    assert text.startswith('# wmCheck report')
    assert '| a | A5 | xNyN | not-surjective | not-surjective |' in text
    assert 'No targets.' in emit_report([], 'markdown')
    assert list(report_frame(reports)['matches']) == [True, True]
    with pytest.raises(ValueError):
        emit_report(reports, 'html')

def test_digest_ignores_timing():
    a = VerificationReport('a', 'A5', 'xNyN', {'N': 30}, 'not-surjective', 0, elapsed=1.5, cache_hits=0)
    b = VerificationReport('a', 'A5', 'xNyN', {'N': 30}, 'not-surjective', 0, elapsed=0.2, cache_hits=3)
    c = VerificationReport('a', 'A5', 'xNyN', {'N': 30}, 'surjective', 0)
    assert report_digest([a]) == report_digest([b]) != report_digest([c])

def test_prime_table_rows():
    rows = prime_table(['SL'], [4], [3, 4, 6])
    assert [r['q'] for r in rows] == [3, 4]
    assert all(r['ok'] for r in rows)

@pytest.mark.slow
def test_example_roster(tmp_path, templates):
    reports = run_roster(pjoin(templates, 'roster_example.json'), cache_dir=str(tmp_path), quiet=True)
    assert all(r.matches for r in reports), [r.name for r in reports if not r.matches]
