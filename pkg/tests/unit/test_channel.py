import unittest

from rankmetric.channel import (
    ChannelError,
    ChannelSpec,
    corrupt,
    inject_rank_error,
    make_kk_received,
    random_codeword,
)
from rankmetric.gabidulin import GabidulinCode, syndrome
from rankmetric.kk import KKCode, lift
from rankmetric.matrix import BitMatrix, rank, rank_distance, rank_of, subspace_distance
from rankmetric.utils.helpers import SplitMix64


class TestInjectRankError(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.code = GabidulinCode.from_preset("g8")
        cls.x = random_codeword(cls.code, SplitMix64(1))

    def test_rank(self):
        for tau in range(self.code.n + 1):
            r, error = inject_rank_error(self.code, self.x, tau, seed=tau)
            self.assertEqual(rank_distance(r, self.x), tau)
            self.assertEqual(error.tau, tau)
            self.assertEqual(rank_of(error.E), tau)
            self.assertEqual(rank_of(error.L), tau)
            self.assertEqual([a ^ b for a, b in zip(r, self.x)], error.word(self.code.n))

    def test_locators(self):
        _, error = inject_rank_error(self.code, self.x, 2, seed=9)
        for X, L in zip(error.X, error.L):
            expected = 0
            for i, h in enumerate(self.code.h):
                if L >> i & 1:
                    expected ^= h
            self.assertEqual(X, expected)

    def test_deterministic(self):
        a = inject_rank_error(self.code, self.x, 2, seed=42)
        b = inject_rank_error(self.code, self.x, 2, seed=42)
        c = inject_rank_error(self.code, self.x, 2, seed=43)
        self.assertEqual(a, b)
        self.assertNotEqual(a[0], c[0])

    def test_zero_rank(self):
        r, error = inject_rank_error(self.code, self.x, 0, seed=0)
        self.assertEqual(r, self.x)
        self.assertEqual(error.as_dict(), {"tau": 0, "X": [], "E": [], "L": []})

    def test_out_of_range(self):
        with self.assertRaises(ChannelError):
            inject_rank_error(self.code, self.x, -1, seed=0)
        with self.assertRaises(ChannelError):
            inject_rank_error(self.code, self.x, 9, seed=0)


class TestMakeKKReceived(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.code = KKCode.from_preset("g8")
        cls.x = random_codeword(cls.code.inner, SplitMix64(2))

    def test_shape_and_ranks(self):
        received, instance = make_kk_received(self.code, self.x, 1, 2, 1, seed=5)
        self.assertEqual(received.shape, (8 - 2 + 1, 16))
        self.assertEqual(rank(received), received.rows)
        self.assertEqual(rank(received.columns(0, 8)), 6)
        self.assertEqual(len(instance.erasures), 2)
        self.assertEqual(rank_of(instance.E + instance.D), 2)
        for L in instance.L:
            for u in instance.erasures:
                self.assertFalse(L >> u & 1)

    def test_error_free(self):
        received, instance = make_kk_received(self.code, self.x, 0, 0, 0, seed=6)
        self.assertEqual(subspace_distance(received, lift(self.code, self.x)), 0)
        self.assertEqual(instance.erasures, ())

    def test_distance(self):
        # erasures shrink and deviations grow the received space
        received, _ = make_kk_received(self.code, self.x, 0, 3, 1, seed=7)
        self.assertEqual(subspace_distance(received, lift(self.code, self.x)), 4)

    def test_deterministic(self):
        a, ia = make_kk_received(self.code, self.x, 1, 1, 1, seed=8)
        b, ib = make_kk_received(self.code, self.x, 1, 1, 1, seed=8)
        self.assertEqual(a, b)
        self.assertEqual(ia, ib)

    def test_sidecar(self):
        _, instance = make_kk_received(self.code, self.x, 1, 1, 2, seed=10)
        record = instance.as_dict()
        self.assertEqual(
            sorted(record), ["D", "E", "L", "delta", "epsilon", "erasures", "mu", "seed", "x"]
        )
        self.assertEqual(record["x"], list(self.x))
        self.assertEqual(len(record["D"]), 2)
        self.assertEqual(record["seed"], 10)

    def test_infeasible(self):
        for ranks in ((-1, 0, 0), (0, 9, 0), (3, 6, 0), (0, 0, 9), (5, 0, 4), (0, 8, 0)):
            with self.assertRaises(ChannelError, msg=str(ranks)):
                make_kk_received(self.code, self.x, *ranks, seed=0)

    def test_bare_code(self):
        received, _ = make_kk_received(self.code.inner, self.x, 0, 1, 0, seed=3)
        self.assertEqual(received.shape, (7, 16))


class TestCorrupt(unittest.TestCase):

    def test_dispatch(self):
        code = KKCode.from_preset("g8")
        x = random_codeword(code.inner, SplitMix64(3))
        r, error = corrupt(code, x, ChannelSpec(seed=1, tau=2))
        self.assertIsInstance(r, list)
        self.assertEqual(error.tau, 2)
        self.assertNotEqual(syndrome(code.inner, r), [0] * 4)
        received, instance = corrupt(code, x, ChannelSpec(seed=1, mu=1, delta=1))
        self.assertIsInstance(received, BitMatrix)
        self.assertEqual((instance.mu, instance.delta), (1, 1))

    def test_spec(self):
        self.assertTrue(ChannelSpec(mu=1).is_kk)
        self.assertFalse(ChannelSpec(tau=1).is_kk)
        self.assertEqual(ChannelSpec(seed=3, tau=1).as_dict(), {"seed": 3, "tau": 1})
        self.assertEqual(
            ChannelSpec(seed=3, epsilon=1).as_dict(),
            {"seed": 3, "epsilon": 1, "mu": 0, "delta": 0},
        )
