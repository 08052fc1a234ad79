import os
import re

from src.cyclo import parse_cyclotomic
from src.chartab import CharacterTable, TableSyntaxError, TableSemanticError, validate_table

pjoin = os.path.join

_KEYWORDS = ('group', 'order', 'exponent', 'classes', 'sizes', 'orders', 'inverse', 'powermap', 'char')
_INT = re.compile(r'-?\d+$')

def _tokens(line: str) -> list:
    """(column, token) pairs, columns 1-based."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r'\S+', line)]

def _int(tok, lineno: int) -> int:
    col, text = tok
    if not _INT.match(text):
        raise TableSyntaxError(f'expected an integer, found {text!r}', lineno, col)
    return int(text)

def _ints(toks, lineno: int, count: int, what: str) -> list:
    if len(toks) != count:
        col = toks[count][0] if len(toks) > count else (toks[-1][0] + len(toks[-1][1]) if toks else 1)
        raise TableSyntaxError(f'{what} needs {count} entries, found {len(toks)}', lineno, col)
    return [_int(t, lineno) for t in toks]

def parse_table(text: str, validate: bool = True) -> CharacterTable:
    """Read a character table in the line-based `.ctab` format.

    Parameters:
    - text (str): file contents; blank lines and lines starting with '#' are skipped.
    - validate (bool): run every table invariant before returning.

    Return
    - table (CharacterTable): the parsed table.
    Raises TableSyntaxError (with line and column) or TableSemanticError naming the violated invariant."""
    header = {}
    powermaps, chars = {}, {}
    k = None
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip('\r')
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        last = lineno
        toks = _tokens(line)
        col, key = toks[0]
        rest = toks[1:]
        if key not in _KEYWORDS:
            raise TableSyntaxError(f'unknown keyword {key!r}', lineno, col)
        if key == 'group':
            if len(rest) != 1:
                raise TableSyntaxError('group takes exactly one label', lineno, col)
            header['group'] = rest[0][1]
        elif key in ('order', 'exponent', 'classes'):
            if key in header:
                raise TableSyntaxError(f'duplicate {key} line', lineno, col)
            header[key] = _ints(rest, lineno, 1, key)[0]
            if key == 'classes':
                k = header[key]
        elif key in ('sizes', 'orders', 'inverse'):
            if k is None:
                raise TableSyntaxError(f'{key} before classes', lineno, col)
            header[key] = _ints(rest, lineno, k, key)
        elif key == 'powermap':
            if k is None or 'exponent' not in header:
                raise TableSyntaxError('powermap before classes/exponent', lineno, col)
            if not rest:
                raise TableSyntaxError('powermap needs a prime', lineno, col)
            p = _int(rest[0], lineno)
            if p in powermaps:
                raise TableSyntaxError(f'duplicate powermap {p}', lineno, rest[0][0])
            powermaps[p] = _ints(rest[1:], lineno, k, f'powermap {p}')
        else:
            if k is None or 'exponent' not in header:
                raise TableSyntaxError('char before classes/exponent', lineno, col)
            if not rest:
                raise TableSyntaxError('char needs an index', lineno, col)
            i = _int(rest[0], lineno)
            if i in chars:
                raise TableSyntaxError(f'duplicate char {i}', lineno, rest[0][0])
            if len(rest) - 1 != k:
                raise TableSyntaxError(f'char {i} needs {k} values, found {len(rest) - 1}', lineno, rest[0][0])
            row = []
            for vcol, vtext in rest[1:]:
                try:
                    row.append(parse_cyclotomic(vtext, header['exponent']))
                except ValueError as e:
                    raise TableSyntaxError(str(e), lineno, vcol)
            chars[i] = row
    for key in ('group', 'order', 'exponent', 'classes', 'sizes', 'orders', 'inverse'):
        if key not in header:
            raise TableSyntaxError(f'missing {key} line', last + 1, 1)
    if sorted(chars) != list(range(k)):
        raise TableSemanticError('class count', f'expected characters 0..{k - 1}, found {len(chars)}')
    T = CharacterTable(header['group'], header['order'], header['exponent'], header['sizes'], header['orders'],
                       header['inverse'], powermaps, [chars[i] for i in range(k)])
    if validate:
        validate_table(T)
    return T

def write_table(T: CharacterTable) -> str:
    lines = [f'group {T.label}', f'order {T.order}', f'exponent {T.exponent}', f'classes {T.k}',
             'sizes ' + ' '.join(map(str, T.sizes)),
             'orders ' + ' '.join(map(str, T.orders)),
             'inverse ' + ' '.join(map(str, T.inverse))]
    for p in sorted(T.powermaps):
        lines.append(f'powermap {p} ' + ' '.join(map(str, T.powermaps[p])))
    for i, row in enumerate(T.values):
        lines.append(f'char {i} ' + ' '.join(v.literal() for v in row))
    return '\n'.join(lines) + '\n'

def _read_text(path: str) -> str:
    with open(os.path.expanduser(path), 'rb') as f:
        data = f.read()
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as e:
        line = data.count(b'\n', 0, e.start) + 1
        column = e.start - data.rfind(b'\n', 0, e.start)
        raise TableSyntaxError(f'invalid UTF-8 byte {data[e.start]:#04x}', line, column) from e

# cache
def cache_path(cache_dir: str, label: str) -> str:
    safe = re.sub(r'[^A-Za-z0-9_.+-]', '_', label)
    return pjoin(os.path.expanduser(cache_dir), f'{safe}.ctab')

def load_cached(cache_dir: str, label: str):
    """Cached table for `label`, re-validated, or None when absent."""
    path = cache_path(cache_dir, label)
    if not os.path.exists(path):
        return None
    return parse_table(_read_text(path))

def store_cached(cache_dir: str, T: CharacterTable) -> str:
    path = cache_path(cache_dir, T.label)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(write_table(T))
    return path

def read_table_file(path: str) -> CharacterTable:
    return parse_table(_read_text(path))
