import os, sys
import pytest

pjoin = os.path.join

file_dir = os.path.dirname(os.path.abspath(__file__))
src_dir = os.path.dirname(file_dir)
if src_dir not in sys.path:
    sys.path.append(src_dir)

from src.catalog import parse_designator
from src.chartab import dixon_schneider

TEMPLATES = pjoin(src_dir, 'templates')

def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive checks on the larger desk groups')

@pytest.fixture(scope='session')
def groups():
    """Enumerated groups by designator, built once per session."""
    cache = {}
    def get(label):
        if label not in cache:
            cache[label] = parse_designator(label).build()
        return cache[label]
    return get

@pytest.fixture(scope='session')
def tables(groups):
    cache = {}
    def get(label):
        if label not in cache:
            cache[label] = dixon_schneider(groups(label), seed=0)
        return cache[label]
    return get

@pytest.fixture(scope='session')
def templates():
    return TEMPLATES
