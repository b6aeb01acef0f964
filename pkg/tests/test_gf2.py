import numpy as np
import pytest

from denselab.errors import ContractViolationError
from denselab.gf2 import BitMatrix, BitVector, RankTracker, mul, random_dense, rank


def tracker_from(vectors):
    t = RankTracker(len(vectors[0]))
    results = [t.insert(BitVector.from_bits(v)) for v in vectors]
    return t, results


class TestBitVector:
    def test_roundtrip(self):
        v = BitVector.from_bits([1, 0, 1, 1, 0])
        assert v.to_bits() == [1, 0, 1, 1, 0]
        assert len(v) == 5
        assert v[0] == 1 and v[1] == 0

    def test_xor_self_is_zero(self):
        v = BitVector.from_bits([1, 1, 0, 1])
        assert (v ^ v).is_zero()

    def test_bits_beyond_length_rejected(self):
        with pytest.raises(ContractViolationError):
            BitVector(2, 0b100)

    def test_xor_length_mismatch(self):
        with pytest.raises(ContractViolationError):
            BitVector(2, 1) ^ BitVector(3, 1)


class TestRank:
    def test_identity(self):
        assert rank(BitMatrix.identity(3)) == 3

    def test_zero_matrix(self):
        assert rank(BitMatrix(4, 7)) == 0

    def test_dependent_rows(self):
        # hand elimination: second row equals the first
        assert rank(BitMatrix.from_rows([[1, 1], [1, 1]])) == 1

    def test_empty(self):
        assert rank(BitMatrix(0, 5)) == 0
        assert rank(BitMatrix(5, 0)) == 0

    def test_matches_tracker_in_any_row_order(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            rows = int(rng.integers(1, 9))
            cols = int(rng.integers(1, 9))
            m = random_dense(rows, cols, rng)
            r = rank(m)
            order = rng.permutation(rows)
            t = RankTracker(cols)
            got = sum(t.insert(m.row(int(i))) for i in order)
            assert got == r == t.rank

    def test_product_rank_bound(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a = random_dense(int(rng.integers(1, 8)), int(rng.integers(1, 8)), rng)
            b = random_dense(a.cols, int(rng.integers(1, 8)), rng)
            assert rank(mul(a, b)) <= min(rank(a), rank(b))


class TestMul:
    def test_identity_left(self):
        rng = np.random.default_rng(3)
        b = random_dense(2, 5, rng)
        assert mul(BitMatrix.identity(2), b) == b

    def test_row_selection_xor(self):
        a = BitMatrix.from_rows([[1, 1]])
        b = BitMatrix.identity(2)
        assert mul(a, b).to_rows() == [[1, 1]]

    def test_hand_product(self):
        a = BitMatrix.from_rows([[1, 1], [0, 1]])
        b = BitMatrix.from_rows([[1, 0], [1, 1]])
        assert mul(a, b).to_rows() == [[0, 1], [1, 1]]

    def test_dimension_mismatch(self):
        with pytest.raises(ContractViolationError):
            mul(BitMatrix(2, 3), BitMatrix(2, 2))

    def test_matches_naive_entrywise(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = random_dense(int(rng.integers(1, 7)), int(rng.integers(1, 7)), rng)
            b = random_dense(a.cols, int(rng.integers(1, 7)), rng)
            got = mul(a, b).to_rows()
            ar, br = a.to_rows(), b.to_rows()
            want = [
                [sum(ar[i][t] & br[t][j] for t in range(a.cols)) & 1 for j in range(b.cols)]
                for i in range(a.rows)
            ]
            assert got == want


class TestTrackerInsert:
    def test_standard_basis(self):
        _, res = tracker_from([[1, 0], [0, 1]])
        assert res == [True, True]

    def test_duplicate_rejected(self):
        _, res = tracker_from([[1, 1], [1, 1]])
        assert res == [True, False]

    def test_xor_of_two_rejected(self):
        t, res = tracker_from([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        assert res == [True, True, False]
        assert t.rank == 2

    def test_rank_increments_exactly_on_true(self):
        rng = np.random.default_rng(5)
        t = RankTracker(6)
        r = 0
        for _ in range(40):
            v = BitVector(6, int(rng.integers(0, 64)))
            before = t.rank
            if t.insert(v):
                r += 1
                assert t.rank == before + 1
            else:
                assert t.rank == before
        assert t.rank == r

    def test_length_mismatch(self):
        t = RankTracker(3)
        with pytest.raises(ContractViolationError):
            t.insert(BitVector.from_bits([1, 0]))

    def test_pivots_strictly_increasing_and_reduced(self):
        rng = np.random.default_rng(9)
        t = RankTracker(10)
        for _ in range(30):
            t.insert(BitVector(10, int(rng.integers(0, 1024))))
        piv = t.pivots
        assert piv == sorted(set(piv))
        # fully reduced: every basis row is zero at all other pivot columns
        for p in piv:
            row = t._row[p]
            for q in piv:
                if q != p:
                    assert not (row >> q) & 1


class TestExpressInSpan:
    def test_standard_basis(self):
        t, _ = tracker_from([[1, 0], [0, 1]])
        assert t.express_in_span(BitVector.from_bits([1, 1])).to_bits() == [1, 1]

    def test_xor_pair(self):
        t, _ = tracker_from([[1, 1, 0], [0, 1, 1]])
        assert t.express_in_span(BitVector.from_bits([1, 0, 1])).to_bits() == [1, 1]

    def test_outside_span(self):
        t, _ = tracker_from([[1, 0]])
        assert t.express_in_span(BitVector.from_bits([0, 1])) is None

    def test_roundtrip_over_accepted_originals(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            dim = int(rng.integers(2, 12))
            t = RankTracker(dim)
            originals = []
            for _ in range(int(rng.integers(1, 14))):
                bits = int(rng.integers(0, 1 << dim))
                if t.insert(BitVector(dim, bits)):
                    originals.append(bits)
            probe = BitVector(dim, int(rng.integers(0, 1 << dim)))
            coeffs = t.express_in_span(probe)
            if coeffs is None:
                # genuinely outside: adding it must grow the rank
                t2 = RankTracker(dim)
                for b in originals:
                    t2.insert(BitVector(dim, b))
                assert t2.insert(probe)
            else:
                assert coeffs.length == len(originals)
                acc = 0
                for i, bit in enumerate(coeffs.to_bits()):
                    if bit:
                        acc ^= originals[i]
                assert acc == probe.bits

    def test_length_mismatch(self):
        t = RankTracker(3)
        with pytest.raises(ContractViolationError):
            t.express_in_span(BitVector.from_bits([1]))


class TestRandomDense:
    def test_degenerate_shapes(self):
        rng = np.random.default_rng(0)
        m = random_dense(0, 5, rng)
        assert m.rows == 0 and m.cols == 5
        assert random_dense(3, 0, rng).row_bits == [0, 0, 0]

    def test_column_ones_count_binomial(self):
        rng = np.random.default_rng(77)
        m = random_dense(1000, 1, rng)
        ones = sum(m.row_bits)
        sigma = (1000 * 0.25) ** 0.5
        assert abs(ones - 500) <= 4 * sigma

    def test_same_seed_identical(self):
        a = random_dense(20, 33, np.random.default_rng(4242))
        b = random_dense(20, 33, np.random.default_rng(4242))
        assert a == b


class TestDensityThroughProducts:
    def test_rank_of_product_with_dense_square(self):
        # T with observed rank g times a dense square M keeps g dense rows,
        # so rank(T*M) >= g - s may fail only with frequency about 2^-s.
        from denselab.ranklaws import StructuredSpec, gen_structured

        rng = np.random.default_rng(314)
        s = 4
        trials = 3000
        fails = 0
        spec = StructuredSpec.square(2, 4)
        for _ in range(trials):
            t_mat = gen_structured(spec, rng)
            m = random_dense(t_mat.cols, t_mat.cols, rng)
            g = rank(t_mat)
            if rank(mul(t_mat, m)) < g - s:
                fails += 1
        slack = (np.log(2e6) / (2 * trials)) ** 0.5
        assert fails / trials <= 2.0**-s + slack
