from colorama import Fore

VERSION = '0.1.0'

# field arithmetic
FULL_TABLE_LIMIT = 256          # full add/mul tables up to this order
LOG_TABLE_LIMIT = 1 << 16       # exp/log tables for vectorized multiplication
DLOG_LIMIT = 1 << 24            # discrete_log refuses larger fields

# enumeration and sampling
ENUMERATION_CAP = 20_000_000
CHUNK = 1 << 16                 # batch size for vectorized group products
COMMUTANT_LIMIT = 1 << 24       # q^d bound for brute-force centralizer enumeration
DIXON_RETRIES = 32
SPLIT_RETRIES = 64
PIECE_RETRIES = 512             # random searches for one nondegenerate summand
DECOMPOSITION_MAX_DIM = 12
BOUND_SAMPLES = 10_000

default_settings = {
    'cache_dir': '~/.wmcheck/cache',
    'threads': 1,
    'seed': 0,
    'format': 'json',
    'enumeration_cap': ENUMERATION_CAP,
}

statusColor = {'surjective': Fore.GREEN + 'SURJECTIVE' + Fore.RESET,
               'not-surjective': Fore.RED + 'NOT SURJECTIVE' + Fore.RESET,
               'inconclusive': Fore.YELLOW + 'INCONCLUSIVE' + Fore.RESET,
               'pass': Fore.GREEN + 'PASS' + Fore.RESET,
               'fail': Fore.RED + 'FAIL' + Fore.RESET,
               'error': Fore.MAGENTA + 'ERROR' + Fore.RESET}

# Zsygmondy exceptions other than n = 1, a = 2 and n = 2 with a + 1 a power of 2
zsygmondy_exceptions = {(2, 6)}

# rows fixed by hand, keyed by (family, dimension, q)
special_rows = {('Sp', 24, 2): (241, 13, 7),
                ('Sp', 12, 2): (13, 3, 7)}

# substitutes for the excluded linear/unitary cases, keyed by (family, n, q)
special_substitutes = {('SL', 4, 4): (17, 7),
                       ('SU', 6, 4): (41, 7),
                       ('SU', 7, 4): (113, 7),
                       ('SL', 6, 2): (31,),
                       ('SL', 7, 2): (127,),
                       ('SU', 4, 2): (5,)}

# excluded (n, q) pairs per family: n is the dimension for SL/SU and the half dimension otherwise;
# they resolve through special_substitutes or special_rows, or are not covered
special_exclusions = {'SL': {(6, 2), (7, 2), (4, 4)},
                      'SU': {(7, 4), (4, 2), (6, 4)},
                      'Sp': {(3, 4), (6, 2), (12, 2)},
                      'Spin+': {(4, 2)},
                      'Spin-': {(4, 2)}}

# groups Sp_n(q) / Omega^e_n(q) that are not perfect, keyed by (family, dimension, q);
# Omega^+-_2 and the trivial groups are handled by rule
imperfect_classical = {('Sp', 2, 2), ('Sp', 2, 3), ('Sp', 4, 2),
                       ('Omega', 3, 3), ('Omega+', 4, 2), ('Omega+', 4, 3)}

