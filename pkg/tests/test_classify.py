import random

import pytest

from oracles import random_canonical_factorization
from oscillax.classify import (
    classify,
    corner_minors,
    is_irreducible,
    is_oscillatory,
    is_tn,
    is_tp,
    is_tp_given_tn,
)
from oscillax.errors import FeasibilityExceeded, NotTN
from oscillax.matrix import Matrix, mat_mul, mat_pow, minor, minor_levels
from oscillax.seb import compose
from oscillax.verify import corpus_matrices

M = corpus_matrices()


def test_is_tn_corpus():
    assert is_tn(M["net4"]).ok
    verdict = is_tn(Matrix([[1, 2], [3, 1]]))
    assert not verdict.ok
    assert verdict.witness.rows == (1, 2)
    assert verdict.witness.cols == (1, 2)
    assert verdict.witness.value == -5


def test_is_tn_rectangular():
    assert is_tn(Matrix([[1, 2, 3], [1, 3, 6]])).ok
    verdict = is_tn(Matrix([[1, 2, 3], [2, 3, 4]]))
    assert not verdict.ok and verdict.witness.value == -1


def test_random_factorization_products_are_tn():
    rng = random.Random(31)
    for _ in range(50):
        n = rng.randint(2, 5)
        f = random_canonical_factorization(n, rng)
        assert is_tn(compose(f)).ok


def test_is_tp_corpus():
    verdict = is_tp(M["exp4"])
    assert not verdict.ok
    assert (verdict.witness.rows, verdict.witness.cols) == ((2, 3), (1, 2))
    assert verdict.witness.value == 0
    assert not is_tp(Matrix.identity(3)).ok
    assert is_tp(mat_pow(M["exp4"], 3)).ok


def test_corner_minors_identity():
    vals = dict(corner_minors(Matrix.identity(3)))
    from oscillax.classify import CornerSpec

    assert vals[CornerSpec("lower-left", 1)] == 0
    assert vals[CornerSpec("lower-left", 2)] == 0
    assert vals[CornerSpec("lower-left", 3)] == 1
    assert len(vals) == 5


def test_corner_minors_net4_zero_corner():
    vals = dict(corner_minors(M["net4"]))
    from oscillax.classify import CornerSpec

    assert vals[CornerSpec("lower-left", 1)] == 0  # entry (4, 1)


def test_corner_shortcut_matches_full_scan():
    assert not is_tp_given_tn(M["net4"])
    assert not is_tp_given_tn(Matrix.identity(4))
    rng = random.Random(37)
    for _ in range(40):
        n = rng.randint(2, 5)
        a = compose(random_canonical_factorization(n, rng))
        assert is_tp_given_tn(a) == is_tp(a).ok


def test_is_tp_given_tn_verify_raises():
    with pytest.raises(NotTN):
        is_tp_given_tn(Matrix([[1, 2], [3, 1]]), verify=True)


def test_random_tp_matrix_has_positive_corners():
    rng = random.Random(41)
    from oscillax.seb import SEBFactorization, multiplier_count
    from fractions import Fraction

    n = 4
    k = multiplier_count(n)
    f = SEBFactorization(
        n,
        tuple(Fraction(rng.randint(1, 9)) for _ in range(k)),
        tuple(Fraction(rng.randint(1, 4)) for _ in range(n)),
        tuple(Fraction(rng.randint(1, 9)) for _ in range(k)),
    )
    a = compose(f)
    assert is_tp(a).ok
    assert all(v > 0 for _, v in corner_minors(a))


def test_is_irreducible():
    assert not is_irreducible(Matrix.diagonal([1, 2]))
    tri = Matrix([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
    assert is_irreducible(tri)
    assert is_irreducible(M["net4"])


def test_is_oscillatory_methods():
    for method in ("definition", "gk", "irreducible", "seb", "all"):
        assert is_oscillatory(M["net4"], method)
        assert not is_oscillatory(Matrix.identity(3), method)
    assert is_oscillatory(M["basic4"], "all")


def test_oscillatory_methods_agree_on_seeded_inputs():
    rng = random.Random(43)
    for _ in range(30):
        n = rng.randint(2, 5)
        if rng.random() < 0.5:
            a = compose(random_canonical_factorization(n, rng))
        else:
            a = Matrix([[rng.randint(0, 3) for _ in range(n)] for _ in range(n)])
        # raises MethodDisagreement if the four criteria split
        is_oscillatory(a, "all")


def test_feasibility_cap():
    big = Matrix.identity(9)
    with pytest.raises(FeasibilityExceeded):
        is_tn(big)
    with pytest.raises(FeasibilityExceeded):
        is_tn(big, cap=8)
    assert is_tn(big, cap=9).ok


def test_principal_minors_of_itn_positive():
    import itertools

    rng = random.Random(47)
    for _ in range(10):
        n = rng.randint(2, 4)
        a = compose(random_canonical_factorization(n, rng))
        for p in range(1, n + 1):
            for alpha in itertools.combinations(range(1, n + 1), p):
                assert minor(a, alpha, alpha) > 0


def test_tn_closed_under_product():
    rng = random.Random(53)
    for _ in range(10):
        n = rng.randint(2, 4)
        a = compose(random_canonical_factorization(n, rng))
        b = compose(random_canonical_factorization(n, rng))
        assert is_tn(mat_mul(a, b)).ok


def test_tp_times_invertible_tn_is_tp():
    from fractions import Fraction
    from oscillax.seb import SEBFactorization, multiplier_count

    rng = random.Random(59)
    n = 3
    k = multiplier_count(n)
    tp = compose(
        SEBFactorization(
            n,
            tuple(Fraction(rng.randint(1, 9)) for _ in range(k)),
            tuple(Fraction(rng.randint(1, 4)) for _ in range(n)),
            tuple(Fraction(rng.randint(1, 9)) for _ in range(k)),
        )
    )
    assert is_tp(tp).ok
    for _ in range(10):
        b = compose(random_canonical_factorization(n, rng))
        assert is_tp(mat_mul(tp, b)).ok
        assert is_tp(mat_mul(b, tp)).ok


def test_scan_tables_match_minor_kernel():
    rng = random.Random(61)
    a = Matrix([[rng.randint(-2, 4) for _ in range(4)] for _ in range(4)])
    for p, table in minor_levels(a):
        for (rows, cols), value in table.items():
            assert value == minor(a, rows, cols)


def test_two_by_two_end_to_end():
    # the smallest admissible dimension: an oscillatory 2x2 is already TP
    a = Matrix([[1, 1], [1, 2]])
    rep = classify(a)
    assert rep.is_tn and rep.is_tp and rep.is_oscillatory
    assert rep.is_basic_oscillatory is True  # one multiplier per side
    from oscillax.exponent import exponent_bruteforce, exponent_via_theorem

    assert exponent_bruteforce(a).r == 1
    assert exponent_via_theorem(a).r == 1


def test_classification_report():
    rep = classify(M["net4"])
    assert rep.is_tn and rep.is_invertible and rep.is_oscillatory
    assert not rep.is_tp
    assert rep.is_basic_oscillatory is False
    assert rep.tp_witness is not None
    doc = rep.to_json_dict()
    assert doc["is_oscillatory"] is True
    rep2 = classify(M["basic4"])
    assert rep2.is_basic_oscillatory is True
    rep3 = classify(Matrix([[1, 2], [3, 1]]))
    assert not rep3.is_tn and rep3.is_basic_oscillatory is None
