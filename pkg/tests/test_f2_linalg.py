import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floerfix.f2_linalg import ComplexError, GradedComplex, SparseBoolMatrix, homology_ranks, rank


def oracle_rank(rows):
    """Gaussian elimination on lists of 0/1 lists, first-nonzero pivoting."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                m[i] = [a ^ b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def random_dense(rng, rows, cols, density):
    return [[1 if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]


def test_identity_rank():
    assert rank(SparseBoolMatrix.identity(3)) == 3


def test_zero_rank():
    assert rank(SparseBoolMatrix.zeros(4, 7)) == 0


def test_random_20x20_against_dense_oracle():
    rng = random.Random(20)
    for _ in range(50):
        a = random_dense(rng, 20, 20, rng.choice((0.05, 0.1, 0.3, 0.5)))
        assert rank(SparseBoolMatrix.from_dense(a)) == oracle_rank(a)


@pytest.mark.parametrize("shape", [(70, 90), (120, 80), (200, 200)])
def test_sparse_path_against_dense_oracle(shape):
    # above the dense cutoff the column reducer is used
    rng = random.Random(shape[0])
    for density in (0.01, 0.05, 0.3):
        a = random_dense(rng, *shape, density)
        assert rank(SparseBoolMatrix.from_dense(a)) == oracle_rank(a)


def test_low_rank_product_sparse_path():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 2, (150, 12))
    b = rng.integers(0, 2, (12, 140))
    prod = (a @ b) % 2
    assert rank(SparseBoolMatrix.from_dense(prod)) == oracle_rank(prod.tolist()) <= 12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 80), st.integers(1, 80), st.integers(0, 2**32 - 1))
def test_rank_transpose_invariant(rows, cols, seed):
    rng = np.random.default_rng(seed)
    m = SparseBoolMatrix.from_dense(rng.random((rows, cols)) < 0.15)
    r = rank(m)
    assert r == rank(m.transpose())
    assert 0 <= r <= min(rows, cols)


def test_from_coo_reduces_mod_two_and_rejects_duplicates():
    m = SparseBoolMatrix.from_coo(2, 2, [0, 0, 1], [0, 0, 1])
    assert m.entries() == {(1, 1)}
    with pytest.raises(ValueError):
        SparseBoolMatrix.from_coo(2, 2, [0, 0], [1, 1], reduce=False)
    with pytest.raises(ValueError):
        SparseBoolMatrix.from_entries(2, 2, [(2, 0)])


def test_matmul_mod_two():
    a = SparseBoolMatrix.from_dense([[1, 1], [0, 1]])
    assert (a @ a).to_dense().tolist() == [[1, 0], [0, 1]]


def test_zero_differentials():
    c = GradedComplex({0: 2, 1: 3}, {(1, 0): SparseBoolMatrix.zeros(2, 3)})
    assert homology_ranks(c) == {0: 2, 1: 3}


def test_acyclic_pair():
    c = GradedComplex({0: 1, 1: 1}, {(1, 0): SparseBoolMatrix.identity(1)})
    assert homology_ranks(c) == {0: 0, 1: 0}


def test_rejects_nonzero_square():
    d1 = SparseBoolMatrix.identity(1)
    with pytest.raises(ComplexError):
        GradedComplex({0: 1, 1: 1, 2: 1}, {(2, 1): d1, (1, 0): d1})
    c = GradedComplex({0: 1, 1: 1, 2: 1}, {(2, 1): d1, (1, 0): d1}, check=False)
    with pytest.raises(ComplexError):
        homology_ranks(c)


def test_rejects_mismatched_shape():
    with pytest.raises(ComplexError):
        GradedComplex({0: 2, 1: 3}, {(1, 0): SparseBoolMatrix.zeros(3, 2)})


def random_complex(rng, dims):
    """Chain complex C_k -> C_{k-1} with d o d = 0 by construction.

    d_1 is a random product A.B; for k > 1, d_k = K.B where the columns of K
    span ker(d_{k-1}), so every column of d_k is a cycle.
    """
    mats = {}
    for k in range(1, len(dims)):
        src, dst = dims[k], dims[k - 1]
        if k == 1:
            inner = rng.randint(0, min(src, dst))
            left = np.array(random_dense(rng, dst, inner, 0.5), dtype=np.int64).reshape(dst, inner)
        else:
            ker = _kernel_basis(mats[k - 1])
            left = np.array(ker, dtype=np.int64).reshape(len(ker), dst).T
            inner = left.shape[1]
        right = np.array(random_dense(rng, inner, src, 0.5), dtype=np.int64).reshape(inner, src)
        mats[k] = (left @ right) % 2
    return mats


def _kernel_basis(m):
    rows, cols = m.shape
    basis = []
    for bits in itertools.product((0, 1), repeat=cols):
        v = np.array(bits, dtype=np.int64)
        if not ((m @ v) % 2).any() and v.any():
            if _independent(basis, v):
                basis.append(v)
    return basis


def _independent(basis, v):
    return oracle_rank([b.tolist() for b in basis] + [v.tolist()]) == len(basis) + 1


def brute_force_homology(dims, mats):
    """Enumerate every chain vector to count cycles and boundaries."""
    out = {}
    for k, n in enumerate(dims):
        vecs = [np.array(b, dtype=np.int64) for b in itertools.product((0, 1), repeat=n)]
        if k in mats:
            cycles = sum(1 for v in vecs if not ((mats[k] @ v) % 2).any())
        else:
            cycles = 2**n
        if k + 1 in mats:
            src = dims[k + 1]
            images = {
                tuple((mats[k + 1] @ np.array(b, dtype=np.int64)) % 2)
                for b in itertools.product((0, 1), repeat=src)
            }
            boundaries = len(images)
        else:
            boundaries = 1
        out[k] = (cycles // boundaries).bit_length() - 1
    return out


def test_homology_against_exhaustive_enumeration():
    rng = random.Random(12)
    for _ in range(25):
        dims = [rng.randint(1, 5) for _ in range(rng.randint(2, 4))]
        while sum(dims) > 12:
            dims[rng.randrange(len(dims))] -= 1
        dims = [max(d, 1) for d in dims]
        mats = random_complex(rng, dims)
        cx = GradedComplex(
            {k: n for k, n in enumerate(dims)},
            {(k, k - 1): SparseBoolMatrix.from_dense(m) for k, m in mats.items()},
        )
        assert homology_ranks(cx) == brute_force_homology(dims, mats)


def test_euler_characteristic_and_permutation_invariance():
    rng = random.Random(3)
    for _ in range(20):
        dims = [rng.randint(1, 4) for _ in range(3)]
        mats = random_complex(rng, dims)
        diffs = {(k, k - 1): SparseBoolMatrix.from_dense(m) for k, m in mats.items()}
        cx = GradedComplex(dict(enumerate(dims)), diffs)
        h = homology_ranks(cx)
        assert sum((-1) ** k * v for k, v in h.items()) == cx.euler_characteristic(lambda k: k)

        perms = {k: rng.sample(range(n), n) for k, n in enumerate(dims)}
        permuted = {(s, t): d.permute(perms[t], perms[s]) for (s, t), d in diffs.items()}
        assert homology_ranks(GradedComplex(dict(enumerate(dims)), permuted)) == h


def test_threads_do_not_change_results():
    rng = random.Random(9)
    mats = random_complex(rng, [4, 5, 4])
    cx = GradedComplex(dict(enumerate([4, 5, 4])), {(k, k - 1): SparseBoolMatrix.from_dense(m) for k, m in mats.items()})
    assert homology_ranks(cx, threads=1) == homology_ranks(cx, threads=8)
