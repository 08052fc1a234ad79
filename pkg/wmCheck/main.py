import os, yaml, sys, json, argparse

pjoin = os.path.join

file_dir = os.path.dirname(os.path.abspath(__file__))
if file_dir not in sys.path:
    sys.path.append(file_dir)

from src.catalog import parse_designator
from src.chartab import dixon_schneider
from src.tabfile import load_cached, store_cached, write_table, read_table_file
from src.construct import construct
from src.ff import parse_literal
from src.primes import special_primes
from src.runner import run_roster, emit_report, VerificationReport
from src import linalg, param

SETTINGS_FILE = pjoin(os.path.expanduser('~'), '.wmcheck', 'settings.yaml')

def create_default_config(settings_file: str = SETTINGS_FILE, cache_dir: str = None):
    """Create the settings file with the default cache directory, thread count, seed and report format. Only
    needs to be set up once."""
    if cache_dir is None:
        print(f"Directory for cached character tables (empty for {param.default_settings['cache_dir']}):")
        cache_dir = input().strip() or param.default_settings['cache_dir']
    settings = dict(param.default_settings, cache_dir=cache_dir)
    os.makedirs(os.path.dirname(settings_file), exist_ok=True)
    with open(settings_file, 'w') as f:
        yaml.dump(settings, f, default_flow_style=False)
    print(f"Settings file created at {settings_file}")
    return settings

def load_config(settings_file: str = SETTINGS_FILE):
    """Load the settings file from the default location, or None when it does not exist."""
    if os.path.exists(settings_file):
        with open(settings_file, 'r') as f:
            settings = yaml.safe_load(f)
        return settings
    return None

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='wmcheck', description='exact word-map surjectivity checks')
    parser.add_argument('--config', help='roster file (JSON or YAML) for verify')
    parser.add_argument('--cache-dir', help='directory of cached character tables')
    parser.add_argument('--seed', type=int, help='seed for randomized steps')
    parser.add_argument('--threads', type=int, help='targets run concurrently')
    parser.add_argument('--format', choices=('json', 'markdown'), help='report format')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('enumerate', help='enumerate a group and print its classes')
    p.add_argument('group', help='designator such as A5, SL2(5), PSU3(3)')

    p = sub.add_parser('chartab', help='compute (or load) a character table')
    p.add_argument('group', help='designator, or a .ctab file to validate')
    p.add_argument('--output', help='write the table here as well as to the cache')

    p = sub.add_parser('verify', help='run a roster of verification targets')
    p.add_argument('--output', help='write the report to this file')
    p.add_argument('--quiet', action='store_true')

    p = sub.add_parser('construct', help='print a regular 2-element and its certificate')
    p.add_argument('family', choices=('GL', 'GU', 'Sp', 'SO'))
    p.add_argument('n', type=int, help='dimension (half dimension for Sp)')
    p.add_argument('q', type=int)
    p.add_argument('--eps', type=int, default=1, choices=(1, -1))
    p.add_argument('--delta', default='1', help='determinant code or literal p^k:[...], spinor norm for SO')

    p = sub.add_parser('primes', help='special primes of a group of Lie type')
    p.add_argument('family')
    p.add_argument('n', type=int)
    p.add_argument('q', type=int)

    p = sub.add_parser('report', help='re-render a JSON report')
    p.add_argument('path')
    return parser

def _settings(args) -> dict:
    settings = dict(param.default_settings)
    settings.update(load_config() or {})
    for key in ('cache_dir', 'seed', 'threads', 'format'):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    return settings

def _delta(text: str, family: str):
    if family == 'SO' or ':' not in text:
        return int(text)
    return parse_literal(text)

def main_func(argv=None) -> int:
    """Main function to run the program; returns the exit code."""
    args = build_parser().parse_args(argv)
    settings = _settings(args)

    if args.command == 'enumerate':
        G = parse_designator(args.group).build(settings['enumeration_cap'], seed=settings['seed'] + 1)
        summary = G.summary()
        if settings['format'] == 'json':
            print(json.dumps(summary, indent=2))
        else:
            print(f"{summary['label']}: order {summary['order']}, {summary['classes']} classes, "
                  f"exponent {summary['exponent']}")
            for c, (s, o) in enumerate(zip(summary['sizes'], summary['orders'])):
                print(f"  class {c}: size {s}, element order {o}")
        return 0

    if args.command == 'chartab':
        if os.path.exists(args.group):
            T = read_table_file(args.group)
            print(f"{T.label}: table of {T.k} classes passes validation")
            return 0
        G = parse_designator(args.group).build(settings['enumeration_cap'], seed=settings['seed'] + 1)
        T = load_cached(settings['cache_dir'], G.label)
        if T is None:
            T = dixon_schneider(G, settings['seed'])
            path = store_cached(settings['cache_dir'], T)
            print(f"Table cached at {path}")
        text = write_table(T)
        if args.output:
            with open(args.output, 'w', encoding='utf-8') as f:
                f.write(text)
        print(text, end='')
        return 0

    if args.command == 'verify':
        if not args.config:
            print("verify needs --config with a roster file")
            return 2
        reports = run_roster(args.config, settings['cache_dir'], settings['threads'], args.seed,
                             quiet=args.quiet, cap=settings['enumeration_cap'])
        text = emit_report(reports, settings['format'])
        if args.output:
            with open(args.output, 'w', encoding='utf-8') as f:
                f.write(text)
        else:
            print(text, end='' if text.endswith('\n') else '\n')
        failed = [r.name for r in reports if not r.matches]
        if failed:
            print(f"{len(failed)} target(s) did not match: {', '.join(failed)}")
        return 0 if not failed else 1

    if args.command == 'construct':
        g, cert = construct(args.family, args.n, args.q, args.eps, _delta(args.delta, args.family))
        print(linalg.format_matrix(g.field, g.data))
        print(json.dumps(cert.summary(), indent=2, default=str))
        return 0

    if args.command == 'primes':
        sp = special_primes(args.family, args.n, args.q)
        print(json.dumps(sp.as_dict(), indent=2))
        return 0

    if args.command == 'report':
        with open(args.path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        reports = [VerificationReport(**{k: v for k, v in d.items() if k != 'matches'}) for d in data]
        print(emit_report(reports, settings['format']), end='')
        return 0 if all(r.matches for r in reports) else 1
    return 1

if __name__ == "__main__":
    sys.exit(main_func())
