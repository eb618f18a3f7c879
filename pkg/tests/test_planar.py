import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest

from oracles import random_canonical_factorization
from oscillax.errors import (
    FeasibilityExceeded,
    ParamOutOfRange,
    ShapeMismatch,
    TrackMismatch,
)
from oscillax.exponent import generate_z1, generate_z2
from oscillax.matrix import mat_mul, minor
from oscillax.planar import (
    INFINITE_COPIES,
    Layer,
    PlanarNetwork,
    build_network,
    concat,
    concat_copies,
    enumerate_path_families,
    export_dot,
    min_copies_lower_corner,
    minor_via_paths,
    network_to_json_dict,
    strip_u_diagonals,
)
from oscillax.seb import compose, identity_factorization, neville_factorize
from oscillax.verify import corpus_matrices

M = corpus_matrices()

GOLDEN = Path(__file__).parent / "golden"


def single_down_layer(n, i, weight=1):
    return PlanarNetwork(n=n, layers=(Layer("down", index=i, weight=weight),))


def test_build_network_elim3_structure():
    net = build_network(neville_factorize(M["elim3"]))
    kinds = [(l.kind, l.index) for l in net.layers]
    assert kinds == [
        ("down", 3),
        ("down", 2),
        ("down", 3),
        ("scale", None),
        ("up", 3),
        ("up", 2),
        ("up", 3),
    ]


def test_build_network_diagonal_only():
    net = build_network(identity_factorization(4))
    assert len(net.layers) == 1
    assert net.layers[0].kind == "scale"


def test_elementary_diagram_families():
    # single lower diagram: sources {i-1, i} to sinks {i-1, i} admit one
    # family of weight one; sources {1, i} to sinks {1, i-1} weight q
    net = single_down_layer(4, 3, Fraction(7))
    fams = enumerate_path_families(net, (2, 3), (2, 3))
    assert len(fams) == 1 and fams[0].weight == 1
    fams = enumerate_path_families(net, (1, 3), (1, 2))
    assert len(fams) == 1 and fams[0].weight == 7
    assert minor_via_paths(net, (2, 3), (2, 3)) == 1
    assert minor_via_paths(net, (1, 3), (1, 2)) == 7


def test_net4_path_values():
    a = M["net4"]
    net = build_network(neville_factorize(a))
    assert minor_via_paths(net, (2,), (4,)) == Fraction(1, 10)
    assert len(enumerate_path_families(net, (2,), (4,))) == 1
    assert minor_via_paths(net, (2,), (2,)) == 4
    assert len(enumerate_path_families(net, (2,), (2,))) == 2
    assert minor_via_paths(net, (1, 3), (2, 3)) == 5
    fams = enumerate_path_families(net, (1, 3), (2, 3))
    assert len(fams) == 3
    assert sum(f.weight for f in fams) == 5


def test_paths_match_minors_exhaustively():
    rng = random.Random(73)
    for _ in range(8):
        n = rng.randint(2, 5)
        f = random_canonical_factorization(n, rng)
        a = compose(f)
        net = build_network(f)
        for p in range(1, n + 1):
            for rows in itertools.combinations(range(1, n + 1), p):
                for cols in itertools.combinations(range(1, n + 1), p):
                    assert minor_via_paths(net, rows, cols) == minor(a, rows, cols)


def test_enumeration_matches_sweep():
    rng = random.Random(79)
    for _ in range(6):
        n = rng.randint(2, 4)
        f = random_canonical_factorization(n, rng)
        net = build_network(f)
        for p in range(1, n + 1):
            for rows in itertools.combinations(range(1, n + 1), p):
                for cols in itertools.combinations(range(1, n + 1), p):
                    fams = enumerate_path_families(net, rows, cols)
                    assert sum(f.weight for f in fams) == minor_via_paths(
                        net, rows, cols
                    )


def test_family_paths_are_vertex_disjoint():
    net = build_network(neville_factorize(M["net4"]))
    for fam in enumerate_path_families(net, (1, 3), (2, 3)):
        for step in range(len(net.layers) + 1):
            occupied = [path[step] for path in fam.paths]
            assert len(set(occupied)) == len(occupied)


def test_concat_is_multiplication():
    rng = random.Random(83)
    fa = random_canonical_factorization(3, rng)
    fb = random_canonical_factorization(3, rng)
    a, b = compose(fa), compose(fb)
    ab = mat_mul(a, b)
    net = concat(build_network(fa), build_network(fb))
    for i in range(1, 4):
        for j in range(1, 4):
            assert minor_via_paths(net, (i,), (j,)) == ab[i - 1, j - 1]
    assert minor_via_paths(net, (1, 2), (2, 3)) == minor(ab, (1, 2), (2, 3))


def test_concat_identity_and_mismatch():
    net = build_network(neville_factorize(M["elim3"]))
    empty = PlanarNetwork(n=3, layers=())
    assert concat(net, empty) == net
    with pytest.raises(TrackMismatch):
        concat(net, PlanarNetwork(n=4, layers=()))


def test_two_copies_exp4_corner_family_weight_zero():
    f = neville_factorize(M["exp4"])
    net = concat_copies(build_network(f), 2)
    assert minor_via_paths(net, (2, 3, 4), (1, 2, 3)) == 0


def test_strip_u_diagonals():
    f = neville_factorize(M["elim3"])
    net = build_network(f)
    stripped = strip_u_diagonals(net)
    assert [l.kind for l in stripped.layers] == ["down", "down", "down", "scale"]
    assert strip_u_diagonals(stripped) == stripped


def test_min_copies_invariant_under_strip():
    f = neville_factorize(M["net4"])
    net = build_network(f)
    for c in (1, 2, 3):
        assert min_copies_lower_corner(net, c) == min_copies_lower_corner(
            strip_u_diagonals(net), c
        )


def test_min_copies_chain_shapes():
    # single ascending chain: the corner entry needs n-1 copies
    for n in (4, 5):
        net = build_network(generate_z2(n, n, {n - 1}, seed=3))
        assert min_copies_lower_corner(net, 1) == n - 1
    # full lower side reaches the largest corner in one copy
    net = build_network(generate_z1(5, 5, seed=4))
    assert min_copies_lower_corner(net, 4) == 1
    # single full descending chain, largest corner of n=4 takes 3 copies
    net = build_network(generate_z1(4, 2, seed=5))
    assert min_copies_lower_corner(net, 3) == 3


def test_min_copies_unreachable_is_infinite():
    net = build_network(identity_factorization(4))
    assert min_copies_lower_corner(net, 1) == INFINITE_COPIES
    with pytest.raises(ParamOutOfRange):
        min_copies_lower_corner(net, 4)


def test_sweep_validation():
    net = build_network(identity_factorization(3))
    with pytest.raises(ShapeMismatch):
        minor_via_paths(net, (1, 2), (1,))
    big = PlanarNetwork(n=9, layers=())
    with pytest.raises(FeasibilityExceeded):
        minor_via_paths(big, (1,), (1,))


def test_export_dot_deterministic():
    net = build_network(neville_factorize(M["elim3"]))
    assert export_dot(net) == export_dot(net)


def test_export_dot_diagonal_count_elim3():
    # three lower and three upper diagonals, one per nonzero multiplier
    net = build_network(neville_factorize(M["elim3"]))
    dot = export_dot(net)
    down = [l for l in dot.splitlines() if "_t3 -> " in l and "_t2;" in l or "_t3 -> " in l and "_t2 [" in l]
    up = [l for l in dot.splitlines() if "_t2 -> " in l and ("_t3;" in l or "_t3 [" in l)]
    assert len(down) == 2 and len(up) == 2  # index-3 diagonals each way
    assert sum(1 for layer in net.layers if layer.kind in ("down", "up")) == 6


def test_export_dot_diag_only():
    dot = export_dot(build_network(identity_factorization(2)))
    assert "c0_t1 -> c1_t1" in dot and "c0_t2 -> c1_t2" in dot
    assert "label" not in dot  # unit weights are unlabeled


def test_export_dot_golden():
    net = build_network(neville_factorize(M["net4"]))
    golden = (GOLDEN / "net4_network.dot").read_text()
    assert export_dot(net) == golden


def test_network_json_dump():
    net = build_network(neville_factorize(M["elim3"]))
    doc = network_to_json_dict(net)
    assert doc["n"] == 3
    assert doc["layers"][0] == {"diag": "down", "i": 3, "w": "1"}
    assert doc["layers"][3]["diag"] == "horizontal"
