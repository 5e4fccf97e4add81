from pathlib import Path

import numpy as np
import pytest

import codednet as cn

DATA = Path(cn.__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def hamming() -> cn.LinearCode:
    return cn.load_code(DATA / "hamming_7_4_3.code")


@pytest.fixture(scope="session")
def code_n10_d3() -> cn.LinearCode:
    """A [10, 4, 3] binary code: the length-7 distance-3 generator padded
    with three always-zero output symbols."""
    base = cn.load_code(DATA / "hamming_7_4_3.code")
    rows = [list(r) for r in base.generator] + [[0, 0, 0, 0]] * 3
    return cn.LinearCode(cn.PrimeField(2), rows)


@pytest.fixture(scope="session")
def figure1() -> cn.SocialNetwork:
    return cn.load_edge_list(DATA / "figure1.edges")[0]


@pytest.fixture(scope="session")
def figure3() -> cn.SocialNetwork:
    return cn.load_edge_list(DATA / "figure3.edges")[0]


@pytest.fixture(scope="session")
def ccp_chain() -> cn.SocialNetwork:
    return cn.load_edge_list(DATA / "ccp2012_sample.edges")[0]


def rep_code(n: int, q: int = 2) -> cn.LinearCode:
    """Length-n repetition code over F_q (k=1, d=n)."""
    return cn.LinearCode(cn.PrimeField(q), [[1]] * n)


def path_graph(length: int) -> cn.SocialNetwork:
    verts = [str(i) for i in range(length + 1)]
    return cn.SocialNetwork(list(zip(verts, verts[1:])))


def path_of(net_path_len: int) -> cn.Path:
    return cn.Path(tuple(str(i) for i in range(net_path_len + 1)))


def random_connected_graph(rng: np.random.Generator, n: int, extra_edges: int):
    """Random tree plus extra edges; vertex names '0'..'n-1'."""
    edges = []
    for v in range(1, n):
        edges.append((str(int(rng.integers(0, v))), str(v)))
    existing = {tuple(sorted(e)) for e in edges}
    attempts = 0
    while extra_edges > 0 and attempts < 50 * extra_edges:
        attempts += 1
        a, b = rng.integers(0, n, size=2)
        if a == b:
            continue
        key = tuple(sorted((str(int(a)), str(int(b)))))
        if key in existing:
            continue
        existing.add(key)
        edges.append(key)
        extra_edges -= 1
    return cn.SocialNetwork(edges)
