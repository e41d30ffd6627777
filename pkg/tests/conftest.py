from pathlib import Path

import pytest

from cutsets.network import load_network

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def ex1():
    """Example network with d starting in state 2."""
    return load_network(MODELS / "example1.an")


@pytest.fixture(scope="session")
def ex1_d1():
    """Same network with d starting in state 1 (the context the worked valuation uses)."""
    return load_network(MODELS / "example1_d1.an")


def locals_of(net, *names):
    return frozenset(net.parse_local(n) for n in names)


def fam(net, *sets):
    """Family of local-state sets from strings like "b=1,c=2"."""
    return {net.parse_locals(s) for s in sets}
