import os
import pytest

from src.cyclo import Cyclotomic
from src.chartab import TableSyntaxError, TableSemanticError
from src.tabfile import parse_table, write_table, cache_path, load_cached, store_cached, read_table_file

pjoin = os.path.join

@pytest.fixture
def c4_text(templates):
    with open(pjoin(templates, 'C4.ctab'), 'r') as f:
        return f.read()

def test_parse_template(templates):
    T = read_table_file(pjoin(templates, 'C4.ctab'))
    assert T.label == 'C4' and T.k == 4 and T.exponent == 4
    assert T.degrees == [1, 1, 1, 1]
    assert T.value(1, 1) == Cyclotomic.root(4)
    assert T.powermaps == {2: [0, 2, 0, 2]}
    assert parse_table(write_table(T)) == T

def test_written_table_reads_back(tables):
    T = tables('A5')
    again = parse_table(write_table(T))
    assert again == T and again.fusion is None

@pytest.mark.parametrize('old, new, line, column', [
    ('order 4', 'order four', 3, 7),
    ('exponent 4', 'exponnt 4', 4, 1),
    ('sizes 1 1 1 1', 'sizes 1 1 1', 6, 12),
    ('char 3 1 -E^1 -1 E^1', 'char 3 1 -E^1 -1 E^x', 13, 18),
])
def test_syntax_errors(c4_text, old, new, line, column):
    with pytest.raises(TableSyntaxError) as info:
        parse_table(c4_text.replace(old, new))
    assert (info.value.line, info.value.column) == (line, column)

def test_bad_literal_column(c4_text):
    with pytest.raises(TableSyntaxError) as info:
        parse_table(c4_text.replace('char 1 1 E^1 -1 -E^1', 'char 1 1 E^1 -1 -E^'))
    assert info.value.line == 11 and info.value.column == 17

@pytest.mark.parametrize('old, new, invariant', [
    ('sizes 1 1 1 1', 'sizes 1 1 1 2', 'class sizes'),
    ('char 1 1 E^1 -1 -E^1', 'char 1 1 E^1 -1 E^1', 'orthogonality'),
    ('powermap 2 0 2 0 2\n', '', 'powermap incomplete'),
    ('inverse 0 3 2 1', 'inverse 0 2 3 1', 'inverse map'),
    ('orders 1 4 2 4', 'orders 1 4 2 8', 'exponent'),
])
def test_semantic_errors(c4_text, old, new, invariant):
    with pytest.raises(TableSemanticError) as info:
        parse_table(c4_text.replace(old, new))
    assert info.value.invariant == invariant

def test_unvalidated_parse(c4_text):
    T = parse_table(c4_text.replace('sizes 1 1 1 1', 'sizes 1 1 1 2'), validate=False)
    assert T.sizes == [1, 1, 1, 2]

def test_cache(tmp_path, templates):
    T = read_table_file(pjoin(templates, 'C4.ctab'))
    assert load_cached(str(tmp_path), 'C4') is None
    path = store_cached(str(tmp_path), T)
    assert path == cache_path(str(tmp_path), 'C4')
    assert load_cached(str(tmp_path), 'C4') == T
    assert os.path.basename(cache_path(str(tmp_path), 'SL2(5)')) == 'SL2_5_.ctab'

@pytest.mark.parametrize('data, line, column', [(b'\xff\xfe', 1, 1), (b'# C4\ngroup C\xe94\n', 2, 8)])
def test_undecodable_file(tmp_path, data, line, column):
    path = tmp_path / 'bad.ctab'
    path.write_bytes(data)
    with pytest.raises(TableSyntaxError) as info:
        read_table_file(str(path))
    assert (info.value.line, info.value.column) == (line, column)
    assert 'UTF-8' in str(info.value)
