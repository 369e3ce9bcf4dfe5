import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernel_equiv import (
    FieldSpec,
    SymmetricKernel,
    conjugate_kernel,
    dump_kernel,
    gen_cd_kernel,
    gen_random_kernel,
    gen_sine_kernel,
    load_kernel,
)
from kernel_equiv.errors import (
    AsymmetryError,
    DuplicatePoints,
    FieldMismatch,
    LengthMismatch,
    ParseError,
)
from kernel_equiv.kernels import orthonormal_legendre, random_sign_vector

RAT = FieldSpec.rational()


def rat(rows):
    return SymmetricKernel.from_values(rows, RAT)


def test_load_all_ones():
    K = load_kernel(b'{"field":"rational","n":2,"entries":[["1","1"],["1","1"]]}')
    assert K.n == 2
    assert K.entries == ((Fraction(1),) * 2,) * 2
    assert K.labels == ("0", "1")


def test_load_nested_field_declaration_and_labels():
    K = load_kernel(
        '{"field":{"field":"gfp","p":7},"n":2,"labels":["a","b"],"entries":[[1,8],[1,3]]}'
    )
    assert K.spec == FieldSpec.gfp(7)
    assert K.labels == ("a", "b")
    assert K[0, 1] == 1


def test_load_asymmetric():
    with pytest.raises(AsymmetryError) as info:
        load_kernel('{"field":"rational","n":2,"entries":[["1","1"],["2","1"]]}')
    assert (info.value.i, info.value.j) == (0, 1)


@pytest.mark.parametrize(
    "text",
    [
        '{"field":"gfp","p":4,"n":1,"entries":[[1]]}',
        '{"field":"rational","n":0,"entries":[]}',
        '{"field":"rational","n":2,"entries":[["1"]]}',
        '{"field":"rational","entries":[["1"]]}',
        '{"field":"rational","n":1,"entries":[["1"]],"labels":[1]}',
        '{"field":"rational","n":2,"entries":[["1","0"],["0","1"]],"labels":["a","a"]}',
        "not json",
        "[1, 2]",
    ],
)
def test_load_parse_errors(text):
    with pytest.raises(ParseError):
        load_kernel(text)


def test_load_field_mismatch():
    with pytest.raises(FieldMismatch):
        load_kernel('{"field":"rational","n":1,"entries":[[0.5]]}')


@pytest.mark.parametrize(
    "spec", [RAT, FieldSpec.gfp(2), FieldSpec.gfp(7), FieldSpec.approx(1e-10, 1e-8)]
)
@pytest.mark.parametrize("seed", range(5))
def test_round_trip(spec, seed):
    K = gen_random_kernel(6, spec, 0.6, seed)
    text = dump_kernel(K)
    K2 = load_kernel(text)
    assert K2 == K
    assert dump_kernel(K2) == text


def test_round_trip_keeps_labels():
    K = SymmetricKernel.from_values([[1, 2], [2, 3]], RAT, labels=("x", "y"))
    assert load_kernel(dump_kernel(K)).labels == ("x", "y")


def test_conjugate_examples():
    K = rat([[1, 1], [1, 1]])
    assert conjugate_kernel(K, (1, -1)) == rat([[1, -1], [-1, 1]])
    assert conjugate_kernel(K, (1, 1)) == K
    D = rat([[2, 0], [0, 3]])
    assert conjugate_kernel(D, (1, -1)) == D


def test_conjugate_length_mismatch():
    with pytest.raises(LengthMismatch):
        conjugate_kernel(rat([[1, 1], [1, 1]]), (1,))


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 7),
    density=st.sampled_from([0.3, 0.7, 1.0]),
    seed=st.integers(0, 2**32),
    gseed=st.integers(0, 2**32),
    spec=st.sampled_from([RAT, FieldSpec.gfp(5), FieldSpec.approx()]),
)
def test_conjugation_properties(n, density, seed, gseed, spec):
    K = gen_random_kernel(n, spec, density, seed)
    g = random_sign_vector(n, gseed)
    Q = conjugate_kernel(K, g)
    # validated construction succeeds: Q is symmetric and in the field
    SymmetricKernel(Q.entries, spec)
    assert conjugate_kernel(Q, g) == K
    for i in range(n):
        assert Q[i, i] == K[i, i]
        for j in range(n):
            assert spec.mul(Q[i, j], Q[i, j]) == spec.mul(K[i, j], K[i, j])
            assert spec.is_zero(Q[i, j]) == spec.is_zero(K[i, j])


def test_random_kernel_is_deterministic():
    a = gen_random_kernel(3, RAT, 1.0, 42)
    b = gen_random_kernel(3, RAT, 1.0, 42)
    assert a == b
    assert dump_kernel(a) == dump_kernel(b)
    assert gen_random_kernel(1, FieldSpec.gfp(3), 0.5, 7).n == 1


def test_random_rational_entry_range():
    K = gen_random_kernel(12, RAT, 1.0, 5)
    for row in K.entries:
        for a in row:
            assert a != 0
            # a = p/q reduced from p in [-9, 9], q in [1, 9]
            assert abs(a.numerator) <= 9 and 1 <= a.denominator <= 9


def test_random_kernel_zero_fraction():
    spec = FieldSpec.gfp(7)
    zeros = total = 0
    for seed in range(10_000):
        K = gen_random_kernel(5, spec, 0.3, seed)
        for i in range(5):
            for j in range(i + 1, 5):
                total += 1
                zeros += K[i, j] == 0
    assert abs(zeros / total - 0.7) <= 0.05


def test_sine_kernel_examples():
    assert gen_sine_kernel([0.0]).entries == ((1.0,),)
    K = gen_sine_kernel([0.0, 0.5])
    assert K[0, 1] == pytest.approx(2 / math.pi, abs=1e-15)
    assert K[1, 0] == K[0, 1]
    assert gen_sine_kernel([0.0, 1.0])[0, 1] == 0.0
    assert K.spec.kind == "approx"


def test_sine_kernel_duplicates():
    with pytest.raises(DuplicatePoints):
        gen_sine_kernel([0.1, 0.1])


def test_legendre_orthonormality():
    # Gauss-Legendre quadrature is exact for these polynomial products.
    nodes, weights = np.polynomial.legendre.leggauss(10)
    phis = np.array([orthonormal_legendre(5, x) for x in nodes])
    gram = (phis * weights[:, None]).T @ phis
    np.testing.assert_allclose(gram, np.eye(5), atol=1e-12)


def test_cd_kernel_examples():
    K = gen_cd_kernel(1, [-0.3, 0.2, 0.9])
    for row in K.entries:
        for a in row:
            assert a == pytest.approx(0.5, abs=1e-15)
    K2 = gen_cd_kernel(2, [0.0, 0.5])
    assert K2[0, 1] == pytest.approx(0.5, abs=1e-15)
    assert K2[1, 1] == pytest.approx(0.5 + 1.5 * 0.25, abs=1e-15)


def test_cd_kernel_is_psd():
    K = gen_cd_kernel(3, [-1.0, 0.0, 1.0])
    eig = np.linalg.eigvalsh(np.array(K.entries))
    assert eig.min() >= -1e-12


def test_cd_kernel_errors():
    with pytest.raises(DuplicatePoints):
        gen_cd_kernel(2, [0.0, 0.0])
    with pytest.raises(ValueError):
        gen_cd_kernel(0, [0.0])
