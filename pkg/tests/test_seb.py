import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_canonical_factorization
from oscillax.errors import (
    IndexOutOfRange,
    NotITN,
    NotNormalizable,
    ShapeMismatch,
)
from oscillax.matrix import Matrix, mat_mul
from oscillax.seb import (
    FactorizationClass,
    SEBFactorization,
    classify_factorization,
    compose,
    eb_matrix,
    ebd,
    ebl,
    ebu,
    factorization_from_text,
    factorization_to_json_dict,
    factorization_from_json_dict,
    factorization_to_text,
    identity_factorization,
    multiplier_count,
    neville_factorize,
    normalize_commutation,
    pack_parameters,
    parse_factor_text,
    w_q_form,
    x_offset,
)
from oscillax.verify import corpus_matrices

M = corpus_matrices()


def test_eb_matrix_known_value():
    assert eb_matrix("L", 2, 4, 3) == Matrix([[1, 0, 0], [4, 1, 0], [0, 0, 1]])


def test_eb_matrix_zero_is_identity():
    assert eb_matrix("L", 3, 0, 4) == Matrix.identity(4)
    assert eb_matrix("U", 2, 0, 4) == Matrix.identity(4)


def test_eb_matrix_transpose_relation():
    assert eb_matrix("U", 3, 2, 3) == eb_matrix("L", 3, 2, 3).transpose()


def test_eb_matrix_index_range():
    with pytest.raises(IndexOutOfRange):
        eb_matrix("L", 1, 1, 3)
    with pytest.raises(IndexOutOfRange):
        eb_matrix("U", 4, 1, 3)


def test_eb_inverse_relation():
    for i in (2, 3, 4):
        prod = mat_mul(eb_matrix("L", i, 5, 4), eb_matrix("L", i, -5, 4))
        assert prod == Matrix.identity(4)


def test_neville_elim3():
    f = neville_factorize(M["elim3"])
    assert f.l == (1, 2, 3)
    assert f.d == (1, 2, 3)
    assert f.u == (1, 1, 2)
    assert compose(f) == M["elim3"]


def test_neville_identity():
    f = neville_factorize(Matrix.identity(4))
    assert all(x == 0 for x in f.l) and all(x == 0 for x in f.u)
    assert f.d == (1, 1, 1, 1)


def test_neville_basic4():
    f = neville_factorize(M["basic4"])
    assert (
        factorization_to_text(f) == "L3(1) L2(2) L4(3) D(1,1,1,1) U3(4) U4(5) U2(6)"
    )


def test_neville_rejects_non_itn():
    with pytest.raises(NotITN):
        neville_factorize(Matrix([[1, 2], [3, 1]]))  # negative determinant
    with pytest.raises(NotITN):
        neville_factorize(Matrix([[0, 1], [1, 0]]))  # zero pivot, nonzero below
    with pytest.raises(NotITN):
        neville_factorize(Matrix([[1, 1], [1, 1]]))  # singular
    with pytest.raises(ShapeMismatch):
        neville_factorize(Matrix([[1, 2, 3], [4, 5, 6]]))


def test_compose_diagonal_only():
    f = SEBFactorization(3, (0, 0, 0), (2, 3, 4), (0, 0, 0))
    assert compose(f) == Matrix.diagonal([2, 3, 4])


def test_roundtrip_on_canonical_random():
    rng = random.Random(67)
    for _ in range(60):
        n = rng.randint(2, 5)
        f = random_canonical_factorization(n, rng)
        assert neville_factorize(compose(f)) == f


def test_all_positive_roundtrip_n5():
    rng = random.Random(71)
    n = 5
    k = multiplier_count(n)
    f = SEBFactorization(
        n,
        tuple(Fraction(rng.randint(1, 9)) for _ in range(k)),
        tuple(Fraction(rng.randint(1, 4)) for _ in range(n)),
        tuple(Fraction(rng.randint(1, 9)) for _ in range(k)),
    )
    assert neville_factorize(compose(f)) == f


def test_noncanonical_zero_pattern_refactorizes_differently():
    # uniqueness holds in elimination-canonical coordinates only: a flat
    # vector whose chain supports are not anchored runs composes to the
    # same matrix as its canonical form but is not reproduced verbatim
    f_odd = SEBFactorization(4, (0,) * 6, (1,) * 4, (5, 0, 6, 0, 4, 0))
    a = compose(f_odd)
    g = neville_factorize(a)
    assert compose(g) == a
    assert g != f_odd


def test_pack_offsets_n4():
    assert x_offset(2, 4) == 1
    assert x_offset(3, 4) == 4
    assert x_offset(4, 4) == 6
    f = identity_factorization(4)
    packed = pack_parameters(f)
    assert [len(packed.l_vectors[i]) for i in (2, 3, 4)] == [3, 2, 1]


def test_pack_slices_n3():
    f = SEBFactorization(3, (10, 11, 12), (1, 1, 1), (0, 0, 0))
    packed = pack_parameters(f)
    assert packed.l_vectors[2] == (10, 11)
    assert packed.l_vectors[3] == (12,)


def test_pack_exp5_values():
    packed = pack_parameters(neville_factorize(M["exp5"]))
    assert packed.l_vectors[3] == (3, 4, 2)
    assert packed.l_vectors[4] == (2, 1)
    assert packed.l_vectors[5] == (2,)


def test_wq_form():
    f = neville_factorize(M["elim3"])
    wq = w_q_form(f)
    assert str(wq) == "W2(1,2) W3(3) D(1,2,3) Q3(2) Q2(1,1)"
    assert str(w_q_form(identity_factorization(3))) == "D(1,1,1)"
    f4 = neville_factorize(M["exp4"])
    assert str(w_q_form(f4)) == "W2(1,3,2) Q3(1,2) Q2(1,2,1)"


def test_classify_factorization():
    assert (
        classify_factorization(neville_factorize(M["basic4"]))
        is FactorizationClass.BASIC_OSCILLATORY
    )
    n, k = 3, 3
    all_pos = SEBFactorization(n, (1,) * k, (1,) * n, (1,) * k)
    assert classify_factorization(all_pos) is FactorizationClass.TP
    assert (
        classify_factorization(identity_factorization(4))
        is FactorizationClass.ITN_ONLY
    )
    osc = neville_factorize(M["net4"])
    assert classify_factorization(osc) is FactorizationClass.OSCILLATORY


def test_factorization_class_matches_composition():
    from oscillax.classify import is_oscillatory, is_tp

    rng = random.Random(73)
    for _ in range(30):
        n = rng.randint(2, 5)
        f = random_canonical_factorization(n, rng)
        a = compose(f)
        label = classify_factorization(f)
        assert (label is FactorizationClass.TP) == is_tp(a).ok
        assert (
            label
            in (
                FactorizationClass.TP,
                FactorizationClass.BASIC_OSCILLATORY,
                FactorizationClass.OSCILLATORY,
            )
        ) == is_oscillatory(a, "definition")


def test_normalize_reordering_example():
    facs = [ebu(5, 1), ebu(4, 2), ebu(3, 4), ebu(5, 6), ebu(2, 7), ebu(4, 9)]
    f = normalize_commutation(facs, n=5)
    assert f.u_chain(5) == (1,)
    assert f.u_chain(4) == (2, 6)
    assert f.u_chain(3) == (4, 9, 0)
    assert f.u_chain(2) == (7, 0, 0, 0)
    product = Matrix.identity(5)
    for fac in facs:
        product = mat_mul(product, fac.matrix(5))
    assert compose(f) == product


def test_normalize_canonical_input_unchanged():
    f = neville_factorize(M["elim3"])
    assert normalize_commutation(f.factor_sequence()) == f


def test_normalize_commuting_swap():
    one = normalize_commutation([ebl(4, 3), ebl(2, 5)], n=4)
    other = normalize_commutation([ebl(2, 5), ebl(4, 3)], n=4)
    assert one == other
    assert compose(one) == mat_mul(eb_matrix("L", 4, 3, 4), eb_matrix("L", 2, 5, 4))


def test_normalize_rejections():
    with pytest.raises(NotNormalizable):
        normalize_commutation([ebu(3, 2), ebl(3, 5)], n=3)
    with pytest.raises(NotNormalizable):
        normalize_commutation([ebu(2, 1), ebd((1, 2))], n=2)
    with pytest.raises(NotNormalizable):
        normalize_commutation([ebd((2, 1)), ebl(2, 1)], n=2)
    with pytest.raises(NotNormalizable):
        # adjacent lower indices in the wrong order for the canonical shape
        normalize_commutation([ebl(2, 1), ebl(3, 2), ebl(2, 4)], n=3)


def test_normalize_recovers_canonical_after_commuting_shuffle():
    def commutes(f1, f2):
        if f1.kind == "D" or f2.kind == "D":
            return False
        if f1.kind == f2.kind:
            return abs(f1.index - f2.index) > 1
        return f1.index != f2.index

    for trial in range(40):
        rng = random.Random(trial)
        n = rng.randint(2, 5)
        f = random_canonical_factorization(n, rng)
        seq = list(f.factor_sequence())
        for _ in range(30):
            if len(seq) < 2:
                break
            i = rng.randrange(len(seq) - 1)
            if commutes(seq[i], seq[i + 1]):
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
        assert normalize_commutation(seq, n=n) == f


def test_normalize_drops_identities():
    f = normalize_commutation([ebl(2, 0), ebd((1, 1)), ebu(2, 3)], n=2)
    assert f.l == (0,) and f.u == (3,)


def test_text_format_roundtrip():
    f = neville_factorize(M["elim3"])
    text = factorization_to_text(f)
    assert factorization_from_text(text) == f
    assert factorization_to_text(identity_factorization(3)) == "D(1,1,1)"


def test_text_format_jacobi_order():
    # ascending lower chain commutes into canonical slots
    f = factorization_from_text("L2(1) L3(2) L4(3) D(1,1,1,1) U4(3) U3(2) U2(1)")
    a = compose(f)
    seq = [str(x) for x in f.factor_sequence()]
    assert seq == ["L2(1)", "L3(2)", "L4(3)", "D(1,1,1,1)", "U4(3)", "U3(2)", "U2(1)"]
    assert neville_factorize(a) == f


def test_parse_factor_text_errors():
    from oscillax.errors import MalformedNumber

    with pytest.raises(MalformedNumber):
        parse_factor_text("L3(1) nonsense D(1,1,1)")


def test_json_roundtrip():
    f = neville_factorize(M["net4"])
    doc = factorization_to_json_dict(f)
    assert factorization_from_json_dict(doc) == f
    assert doc["n"] == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5))
def test_roundtrip_property(seed, n):
    rng = random.Random(seed)
    f = random_canonical_factorization(n, rng)
    assert neville_factorize(compose(f)) == f
