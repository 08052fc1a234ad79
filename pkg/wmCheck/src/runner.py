import os, json, time, hashlib, asyncio, threading
import yaml
import sympy
import pandas as pd
from dataclasses import dataclass, field as dc_field, asdict
from fractions import Fraction

from src.catalog import parse_designator
from src.chartab import dixon_schneider, check_orthogonality
from src.groups import Element, EnumeratedGroup
from src.tabfile import load_cached, store_cached, read_table_file
from src.words import ClassView, WordCheckResult, check_xNyN, check_xNyNzN, check_k_2element_cover, \
    check_condition_PN, check_pq_products, check_cycle_products, check_triple_class, \
    check_det_constrained_triples, half_criterion, proportion_divisible, real_odd_power_check
from src.construct import construction_suite
from src.breakdec import sample_bound_check
from src.primes import special_primes, order_polynomial, scan_lemma_pair, NotCovered
from src import param

ROSTER_KEYS = {'seed', 'threads', 'cache_dir', 'targets'}
TARGET_KEYS = {'name', 'group', 'kind', 'params', 'expect', 'seed'}
WORD_KINDS = ('xNyN', 'xNyNzN', 'k-2elements', 'P(N)', 'Pu(N)', 'pq-products', 'cycle-products', 'triple-class',
              'det-triples', 'real-odd-power')
SUITE_KINDS = ('construction-suite', 'bound-sample', 'prime-table', 'lemma-pair-scan', 'half-criterion',
               'proportion')
KINDS = WORD_KINDS + SUITE_KINDS
VOLATILE_FIELDS = ('elapsed', 'cache_hits')     # excluded from the determinism digest

class RosterError(ValueError):
    """Raised for rosters that do not parse or do not follow the schema."""

@dataclass
class VerificationTarget:
    name: str
    group: object
    kind: str
    params: dict = dc_field(default_factory=dict)
    expect: str = None
    seed: int = 0

    @property
    def group_label(self) -> str:
        if isinstance(self.group, str):
            return self.group
        if isinstance(self.group, dict) and 'table' in self.group:
            return f'table:{os.path.basename(self.group["table"])}'
        return self.name

@dataclass
class VerificationReport:
    name: str
    group: str
    kind: str
    params: dict
    status: str
    seed: int
    witnesses: dict = dc_field(default_factory=dict)
    missed: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)
    expect: str = None
    cache_hits: int = 0
    elapsed: float = 0.0
    version: str = param.VERSION

    @property
    def matches(self) -> bool:
        if self.expect is None:
            return self.status != 'error'
        return self.status == self.expect

    def as_dict(self) -> dict:
        out = asdict(self)
        out['matches'] = self.matches
        return out

def _plain(value):
    """JSON-safe copy with exact rationals as strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set)):
        items = sorted(value) if isinstance(value, set) else value
        return [_plain(v) for v in items]
    if hasattr(value, 'item'):
        return value.item()
    return value

# roster parsing
def parse_roster(data: dict) -> tuple:
    """(settings, targets) from a parsed roster; unknown keys raise RosterError."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise RosterError('roster must be a mapping')
    unknown = set(data) - ROSTER_KEYS
    if unknown:
        raise RosterError(f'unknown roster key {sorted(unknown)[0]!r}')
    settings = {k: data[k] for k in ('seed', 'threads', 'cache_dir') if k in data}
    targets = []
    for i, t in enumerate(data.get('targets') or []):
        if not isinstance(t, dict):
            raise RosterError(f'target {i} is not a mapping')
        unknown = set(t) - TARGET_KEYS
        if unknown:
            raise RosterError(f'unknown key {sorted(unknown)[0]!r} in target {t.get("name", i)}')
        for key in ('group', 'kind'):
            if key not in t and not (key == 'group' and t.get('kind') in ('prime-table', 'lemma-pair-scan',
                                                                         'construction-suite')):
                raise RosterError(f'target {t.get("name", i)} lacks {key!r}')
        if t['kind'] not in KINDS:
            raise RosterError(f'unknown check kind {t["kind"]!r}')
        if t.get('expect') is not None and t['expect'] not in param.statusColor:
            raise RosterError(f'unknown expected status {t["expect"]!r}')
        params = t.get('params') or {}
        if not isinstance(params, dict):
            raise RosterError(f'params of target {t.get("name", i)} must be a mapping')
        targets.append(VerificationTarget(t.get('name', f'{t.get("group", "")} {t["kind"]}'.strip()),
                                          t.get('group'), t['kind'], params, t.get('expect'),
                                          int(t.get('seed', settings.get('seed', 0)))))
    return settings, targets

def load_roster(path: str) -> tuple:
    """Parse a roster file; relative table paths are read relative to the roster's directory."""
    path = os.path.expanduser(path)
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise RosterError(f'{path}: {e}')
    settings, targets = parse_roster(data)
    base = os.path.dirname(os.path.abspath(path))
    for t in targets:
        if isinstance(t.group, dict) and 'table' in t.group and not os.path.isabs(t.group['table']):
            t.group = dict(t.group, table=os.path.join(base, t.group['table']))
    return settings, targets

# N sweeps
def power_residues(primes, exponent: int) -> list:
    """{prod p^a mod exponent : a >= 0} over the given primes, with residue 0 written as the exponent itself
    (x^N depends only on N mod the exponent)."""
    reach = {1 % exponent}
    for p in primes:
        powers, x = set(), 1 % exponent
        while x not in powers:
            powers.add(x)
            x = x * p % exponent
        reach = {a * b % exponent for a in reach for b in powers}
    return sorted(r if r else exponent for r in reach)

def sweep_values(params: dict, order: int, exponent: int) -> list:
    """N values of a target: params N, or a sweep over residues of p^a q^b modulo the exponent for one prime
    pair ('primes') or every pair of primes dividing the order ('pairs': true)."""
    if 'N' in params:
        return [int(params['N'])]
    sweep = params.get('sweep')
    if not sweep:
        raise RosterError('word targets need N or sweep')
    if sweep.get('pairs'):
        ps = sympy.primefactors(order)
        pairs = [(p, q) for i, p in enumerate(ps) for q in ps[i + 1:]] or [tuple(ps)]
    else:
        pairs = [tuple(sweep['primes'])]
    out = set()
    for pair in pairs:
        out.update(power_residues(pair, exponent))
    return sorted(out)

class RosterRunner():
    """Execute the targets of a roster, caching character tables, and collect one report per target."""
    def __init__(self, targets: list, cache_dir: str = None, threads: int = 1, quiet: bool = False,
                 cap: int = param.ENUMERATION_CAP):
        """Parameters:
        - targets (list): VerificationTarget objects, reported in this order.
        - cache_dir (str): directory of cached .ctab tables; None disables the cache.
        - threads (int): targets run concurrently up to this many.
        - quiet (bool): suppress progress lines."""
        self.targets = targets
        self.cache_dir = cache_dir
        self.threads = max(1, int(threads))
        self.quiet = quiet
        self.cap = cap
        self.__groups = {}
        self.__tables = {}
        self.__lock = threading.Lock()

    def __call__(self) -> list:
        if not self.targets:
            return []
        if self.threads == 1:
            return [self.run_target(t) for t in self.targets]
        return asyncio.run(self.__gather())

    async def __gather(self):
        gate = asyncio.Semaphore(self.threads)
        async def one(t):
            async with gate:
                return await asyncio.to_thread(self.run_target, t)
        return await asyncio.gather(*[one(t) for t in self.targets])

    def run_target(self, target: VerificationTarget) -> VerificationReport:
        start = time.perf_counter()
        report = VerificationReport(target.name, target.group_label, target.kind, _plain(target.params), 'error',
                                    target.seed, expect=target.expect)
        try:
            self.__dispatch(target, report)
        except Exception as e:
            report.status = 'error'
            report.details = {'error': type(e).__name__, 'message': str(e)}
        report.elapsed = round(time.perf_counter() - start, 3)
        if not self.quiet:
            mark = '' if report.matches else f' (expected {target.expect})'
            print(f'[wmcheck] {target.name} {target.kind} ... {param.statusColor[report.status]}{mark}')
        return report

    # group and table sources
    def group(self, target: VerificationTarget) -> tuple:
        """(GroupSource or None, EnumeratedGroup) of a target, enumerated once per label."""
        spec = target.group
        if isinstance(spec, str):
            source = parse_designator(spec)
            key = source.label
        elif isinstance(spec, dict) and 'generators' in spec:
            source, key = None, target.name
        else:
            raise RosterError(f'target {target.name} names no enumerable group')
        with self.__lock:
            if key not in self.__groups:
                if source is not None:
                    self.__groups[key] = source.build(self.cap, seed=target.seed + 1)
                else:
                    n = int(spec['degree'])
                    gens = [Element.from_cycles(c, n) for c in spec['generators']]
                    self.__groups[key] = EnumeratedGroup(gens, self.cap, key)
            return source, self.__groups[key]

    def table(self, target: VerificationTarget, report: VerificationReport, fresh: bool = False) -> tuple:
        """(CharacterTable, EnumeratedGroup or None). Tables are read from the target's table file, the cache
        (rechecked by the orthogonality relations) or computed and stored."""
        spec = target.group
        if isinstance(spec, dict) and 'table' in spec:
            return read_table_file(spec['table']), None
        source, G = self.group(target)
        label = G.label
        with self.__lock:
            T = self.__tables.get(label)
            if T is not None and not (fresh and T.fusion is None):
                report.cache_hits += 1
                return T, G
            if not fresh and self.cache_dir is not None:
                T = load_cached(self.cache_dir, label)
                if T is not None:
                    check_orthogonality(T)
                    report.cache_hits += 1
                    self.__tables[label] = T
                    return T, G
        T = dixon_schneider(G, target.seed)
        with self.__lock:
            self.__tables[label] = T
            if self.cache_dir is not None:
                store_cached(self.cache_dir, T)
        return T, G

    def __view_target(self, target: VerificationTarget, report: VerificationReport) -> tuple:
        """(target for the word checks, group passed for re-verification) by params method."""
        method = target.params.get('method', 'character-formula')
        if method == 'brute-force':
            return self.group(target)[1], None
        if method == 'both':
            return self.table(target, report, fresh=True)
        if method != 'character-formula':
            raise RosterError(f'unknown method {method!r}')
        return self.table(target, report)[0], None

    # dispatch
    def __dispatch(self, target: VerificationTarget, report: VerificationReport):
        kind, params = target.kind, target.params
        if kind in ('xNyN', 'xNyNzN', 'real-odd-power'):
            data, G = self.__view_target(target, report)
            Ns = sweep_values(params, data.order, data.exponent)
            check = {'xNyN': check_xNyN, 'xNyNzN': check_xNyNzN, 'real-odd-power': real_odd_power_check}[kind]
            results = [check(data, N, G) for N in Ns]
            self.__sweep_report(report, results, Ns, len(Ns) > 1 or 'sweep' in params)
        elif kind == 'k-2elements':
            data, G = self.__view_target(target, report)
            self.__word_report(report, check_k_2element_cover(data, int(params.get('k', 3)), G))
        elif kind in ('P(N)', 'Pu(N)'):
            source, G = self.group(target)
            if source is None or source.spec is None:
                raise RosterError(f'{kind} needs a GL or GU designator')
            self.__word_report(report, check_condition_PN(source.spec, G, int(params['N']), kind == 'Pu(N)'))
        elif kind == 'pq-products':
            data, G = self.__view_target(target, report)
            self.__word_report(report, check_pq_products(data, int(params['p']), int(params['q']), G))
        elif kind == 'cycle-products':
            self.__word_report(report, check_cycle_products(self.group(target)[1], int(params['ell'])))
        elif kind == 'triple-class':
            T, G = self.table(target, report)
            names = ClassView(T).names
            s = params['class']
            s = names.index(s) if isinstance(s, str) else int(s)
            self.__word_report(report, check_triple_class(T, s))
        elif kind == 'det-triples':
            source, G = self.group(target)
            if source is None or source.spec is None:
                raise RosterError('det-triples needs a GL or GU designator')
            self.__word_report(report, check_det_constrained_triples(source.spec, G))
        elif kind in ('half-criterion', 'proportion'):
            data = self.table(target, report)[0] if params.get('method') == 'character-formula' \
                else self.group(target)[1]
            primes = [int(p) for p in params['primes']]
            if kind == 'proportion':
                report.status = 'pass'
                report.details = {'proportion': str(proportion_divisible(data, primes))}
            else:
                out = half_criterion(data, primes)
                report.status = 'pass' if out['holds'] else 'fail'
                report.details = _plain(out)
        elif kind == 'construction-suite':
            rows = construction_suite(params.get('families', ['GL', 'GU', 'Sp', 'SO']),
                                      params.get('dims', list(range(1, 13))),
                                      params.get('q', [3, 5, 7, 9, 11, 13, 17]))
            frame = pd.DataFrame(rows)
            bad = frame[frame['failed'].map(len) > 0] if len(frame) else frame
            report.status = 'pass' if len(bad) == 0 else 'fail'
            report.details = {'certificates': len(frame),
                              'per family': frame.groupby('family').size().to_dict() if len(frame) else {},
                              'failures': _plain(bad.to_dict('records'))}
        elif kind == 'bound-sample':
            source = parse_designator(target.group)
            out = sample_bound_check(source.spec, params['check'], int(params.get('samples', param.BOUND_SAMPLES)),
                                     target.seed)
            report.status = 'pass' if out.ok else 'fail'
            report.details = out.as_dict()
            report.details['tally'] = out.tally().to_dict('records')
        elif kind == 'prime-table':
            rows = prime_table(params.get('families', ['SL', 'SU', 'Sp', 'Spin', 'Spin+', 'Spin-']),
                               params.get('dims', list(range(2, 13))), params.get('q', list(range(2, 10))))
            frame = pd.DataFrame(rows)
            bad = frame[~frame['ok']] if len(frame) else frame
            report.status = 'pass' if len(bad) == 0 else 'fail'
            report.details = {'rows': _plain(frame.to_dict('records')), 'failures': len(bad)}
        elif kind == 'lemma-pair-scan':
            found = scan_lemma_pair(int(params.get('q_max', 9)), int(params.get('n_max', 40)),
                                    int(params.get('n_min', 13)))
            report.status = 'pass' if not found else 'fail'
            report.details = {'violations': _plain(found)}

    def __word_report(self, report: VerificationReport, result: WordCheckResult):
        out = _plain(result.as_dict())
        report.status = result.status
        report.witnesses = out.pop('witnesses')
        report.missed = out.pop('missed')
        report.details = out

    def __sweep_report(self, report: VerificationReport, results: list, Ns: list, sweep: bool):
        if not sweep:
            self.__word_report(report, results[0])
            return
        statuses = [r.status for r in results]
        if 'inconclusive' in statuses:
            report.status = 'inconclusive'
        else:
            report.status = 'surjective' if all(s == 'surjective' for s in statuses) else 'not-surjective'
        failures = {str(N): r.missed_names for N, r in zip(Ns, results) if r.status != 'surjective'}
        report.missed = sorted({name for names in failures.values() for name in names})
        report.details = {'residues': Ns, 'failures': failures, 'method': results[0].method}


def prime_table(families, dims, qs) -> list:
    """Special primes for every covered (family, dimension, q) with the divisibility and primitivity checks."""
    rows = []
    for family in families:
        for n in dims:
            for q in qs:
                if len(sympy.factorint(q)) != 1:
                    continue
                try:
                    sp = special_primes(family, n, q)
                except NotCovered:
                    continue
                p = sympy.primefactors(q)[0]
                order = order_polynomial(family, n, q)
                divides = all(order % r == 0 for r in sp.primes)
                exps = {r: int(sympy.n_order(p, r)) for r in sp.primes}
                rows.append({'family': family, 'n': n, 'q': q, **sp.as_dict(), 'orders mod r': exps,
                             'ok': divides and p not in sp.primes})
    return rows

# reports
def report_frame(reports: list) -> pd.DataFrame:
    return pd.DataFrame([{'name': r.name, 'group': r.group, 'kind': r.kind, 'status': r.status,
                          'expect': r.expect, 'matches': r.matches, 'elapsed': r.elapsed} for r in reports])

def emit_report(reports: list, format: str = 'json') -> str:
    """Serialize reports as JSON (one object per target, keys sorted) or a markdown summary with the per-kind
    status counts followed by one line per target."""
    if format == 'json':
        return json.dumps([_plain(r.as_dict()) for r in reports], indent=2, sort_keys=True)
    if format != 'markdown':
        raise ValueError(f'unknown report format {format!r}')
    lines = ['# wmCheck report', '']
    frame = report_frame(reports)
    if frame.empty:
        return '\n'.join(lines + ['No targets.', ''])
    counts = frame.groupby(['kind', 'status']).size().unstack(fill_value=0)
    lines += ['| kind | ' + ' | '.join(counts.columns) + ' |', '|---' * (len(counts.columns) + 1) + '|']
    for kind, row in counts.iterrows():
        lines.append(f'| {kind} | ' + ' | '.join(str(int(v)) for v in row) + ' |')
    lines += ['', '| target | group | kind | status | expected |', '|---|---|---|---|---|']
    for r in reports:
        lines.append(f'| {r.name} | {r.group} | {r.kind} | {r.status} | {r.expect or ""} |')
    return '\n'.join(lines) + '\n'

def report_digest(reports: list) -> str:
    """sha256 of the JSON report without timing and cache fields."""
    data = []
    for r in reports:
        d = _plain(r.as_dict())
        for key in VOLATILE_FIELDS:
            d.pop(key, None)
        data.append(d)
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()

def run_roster(path: str, cache_dir: str = None, threads: int = None, seed: int = None, quiet: bool = False,
               cap: int = param.ENUMERATION_CAP) -> list:
    """Run every target of the roster at `path`; arguments override the roster's own settings.

    Return
    - reports (list): VerificationReport per target in roster order."""
    settings, targets = load_roster(path)
    if seed is not None:
        for t in targets:
            t.seed = seed
    runner = RosterRunner(targets, cache_dir if cache_dir is not None else settings.get('cache_dir'),
                          threads if threads is not None else settings.get('threads', 1), quiet, cap)
    return runner()
