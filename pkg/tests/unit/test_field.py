import unittest

import galois

from rankmetric.field import (
    BasisKind,
    FieldError,
    FieldMismatchError,
    FieldSpec,
    build_mo_structure,
    conjugates,
    convert_basis,
    find_normal_element,
    get_field,
    is_irreducible,
    xor_rank,
)
from rankmetric.utils.helpers import SplitMix64

G8_H = (2, 4, 16, 169, 24, 233, 205, 130)


class TestFieldSpec(unittest.TestCase):

    def test_valid(self):
        spec = FieldSpec(8, 0x1A9)
        self.assertEqual(spec.basis_kind, BasisKind.POLYNOMIAL)
        self.assertIsNone(spec.normal_generator)

    def test_reducible(self):
        # x^4 + x^2 + 1 = (x^2 + x + 1)^2
        with self.assertRaises(FieldError):
            FieldSpec(4, 0b10101)

    def test_wrong_degree(self):
        with self.assertRaises(FieldError):
            FieldSpec(8, 0x13)
        with self.assertRaises(FieldError):
            FieldSpec(1, 0b11)
        with self.assertRaises(FieldError):
            FieldSpec(65, (1 << 65) | 1)

    def test_normal_requires_generator(self):
        with self.assertRaises(FieldError):
            FieldSpec(4, 0x13, BasisKind.NORMAL)
        with self.assertRaises(FieldError):
            FieldSpec(4, 0x13, BasisKind.POLYNOMIAL, 3)

    def test_non_normal_generator(self):
        # 1 has the single conjugate 1
        with self.assertRaises(FieldError):
            FieldSpec(4, 0x13, BasisKind.NORMAL, 1)

    def test_text_record(self):
        spec = FieldSpec.normal(8, 0x1A9)
        text = spec.to_text()
        self.assertTrue(text.startswith("8 0x1a9 normal 0x"))
        self.assertEqual(FieldSpec.from_text(text), spec)
        self.assertEqual(FieldSpec.from_text("16 0x1100B polynomial"), FieldSpec(16, 0x1100B))

    def test_malformed_text_record(self):
        with self.assertRaises(FieldError):
            FieldSpec.from_text("8 0x1a9")
        with self.assertRaises(FieldError):
            FieldSpec.from_text("8 zz polynomial")

    def test_dict(self):
        spec = FieldSpec(8, 0x1A9)
        self.assertEqual(
            spec.as_dict(), {"m": 8, "prime_poly": "0x1a9", "basis": "polynomial"}
        )
        self.assertEqual(FieldSpec.from_dict(spec.as_dict()), spec)
        self.assertEqual(FieldSpec.from_dict({"m": 8, "prime_poly": 425}), spec)


class TestPolynomialField(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.f = get_field(FieldSpec(8, 0x1A9))

    def test_worked_example_values(self):
        self.assertEqual(self.f.mul(16, 16), 169)
        self.assertEqual(self.f.inv(2), 212)
        self.assertEqual(self.f.mul(2, 212), 1)

    def test_frobenius_cycles_h(self):
        for j, h in enumerate(G8_H):
            self.assertEqual(self.f.frobenius(h, 1), G8_H[(j + 1) % 8])

    def test_frobenius_inverse(self):
        for a in (1, 2, 77, 255):
            self.assertEqual(self.f.frobenius(self.f.frobenius(a, 3), -3), a)
            self.assertEqual(self.f.frobenius(a, 8), a)

    def test_every_inverse(self):
        for a in range(1, 256):
            self.assertEqual(self.f.mul(a, self.f.inv(a)), 1)

    def test_zero_inverse(self):
        with self.assertRaises(ZeroDivisionError):
            self.f.inv(0)

    def test_check(self):
        with self.assertRaises(FieldError):
            self.f.check(256)
        with self.assertRaises(FieldError):
            self.f.check(-1)

    def test_shared_instance(self):
        self.assertIs(get_field(FieldSpec(8, 0x1A9)), self.f)

    def test_against_galois(self):
        GF = galois.GF(2**8, irreducible_poly=0x1A9)
        rng = SplitMix64(5)
        for _ in range(200):
            a, b = rng.bits(8), rng.bits(8)
            self.assertEqual(self.f.mul(a, b), int(GF(a) * GF(b)))
            if a:
                self.assertEqual(self.f.inv(a), int(GF(a) ** -1))

    def test_exhaustive_against_galois(self):
        f = get_field(FieldSpec(4, 0x13))
        GF = galois.GF(2**4, irreducible_poly=0x13)
        for a in range(16):
            for b in range(16):
                self.assertEqual(f.mul(a, b), int(GF(a) * GF(b)))
            if a:
                self.assertEqual(f.inv(a), int(GF(a) ** -1))

    def test_element_operators(self):
        a, b = self.f(16), self.f(16)
        self.assertEqual(int(a * b), 169)
        self.assertEqual(int(a + b), 0)
        self.assertEqual(int(self.f(2).inverse()), 212)
        self.assertEqual(int((a * b) / b), 16)
        self.assertEqual(int(self.f(16).frobenius(1)), 169)
        self.assertFalse(self.f(0))

    def test_element_mismatch(self):
        other = get_field(FieldSpec(8, 0x11B))
        with self.assertRaises(FieldMismatchError):
            self.f(3) * other(3)


class TestNormalField(unittest.TestCase):

    def test_find_normal_element(self):
        for m, poly in ((4, 0x13), (8, 0x1A9)):
            g = find_normal_element(m, poly)
            self.assertEqual(xor_rank(conjugates(g, poly)), m)

    def test_frobenius_is_rotation(self):
        for m, poly in ((4, 0x13), (5, 0x25), (8, 0x1A9)):
            f = get_field(FieldSpec.normal(m, poly))
            mask = (1 << m) - 1
            for a in range(1 << m):
                rotated = ((a << 1) | (a >> (m - 1))) & mask
                self.assertEqual(f.square(a), rotated)

    def test_one_is_all_ones(self):
        f = get_field(FieldSpec.normal(8, 0x1A9))
        self.assertEqual(f.one(), 255)
        self.assertEqual(f.to_polynomial(f.one()), 1)

    def test_multiplication_matches_polynomial_basis(self):
        poly_field = get_field(FieldSpec(8, 0x1A9))
        normal_field = get_field(FieldSpec.normal(8, 0x1A9))
        to_normal = [convert_basis(a, poly_field, normal_field) for a in range(256)]
        for a in range(256):
            na = to_normal[a]
            for b in range(256):
                product = normal_field.mul(na, to_normal[b])
                self.assertEqual(product, to_normal[poly_field.mul(a, b)])
            if a:
                self.assertEqual(normal_field.inv(na), to_normal[poly_field.inv(a)])

    def test_two_element_basis_products(self):
        # GF(4) over x^2 + x + 1 with generator x: 1 = x + x^2 is 0b11
        spec = FieldSpec.normal(2, 0b111)
        self.assertEqual(spec.normal_generator, 2)
        f = get_field(spec)
        self.assertEqual(f.one(), 0b11)
        self.assertEqual(f.mul(0b01, 0b01), 0b10)
        self.assertEqual(f.mul(0b01, 0b10), 0b11)
        self.assertEqual(f.mul(0b10, 0b10), 0b01)
        structure = build_mo_structure(spec)
        self.assertEqual(structure.mult_matrices[0], (0b10, 0b11))
        self.assertEqual(structure.cn, 3)

    def test_mo_structure(self):
        structure = build_mo_structure(FieldSpec.normal(8, 0x1A9))
        self.assertEqual(len(structure.mult_matrices), 8)
        # a normal basis multiplier has at least 2m - 1 product terms per output bit
        self.assertGreaterEqual(structure.cn, 15)
        for matrix in structure.mult_matrices:
            for i in range(8):
                for j in range(8):
                    self.assertEqual(matrix[i] >> j & 1, matrix[j] >> i & 1)

    def test_mo_structure_requires_generator(self):
        with self.assertRaises(FieldError):
            build_mo_structure(FieldSpec(8, 0x1A9))

    def test_convert_mismatch(self):
        with self.assertRaises(FieldError):
            convert_basis(3, get_field(FieldSpec(8, 0x1A9)), get_field(FieldSpec(8, 0x11B)))


class TestPolynomials(unittest.TestCase):

    def test_irreducible(self):
        for poly in (0x13, 0x25, 0x1A9, 0x11B, 0x1100B):
            self.assertTrue(is_irreducible(poly))
        self.assertFalse(is_irreducible(0b10101))
        self.assertFalse(is_irreducible(0b110))

    def test_xor_rank(self):
        self.assertEqual(xor_rank([2, 4, 3, 5]), 3)
        self.assertEqual(xor_rank([1, 2, 4, 8]), 4)
        self.assertEqual(xor_rank([]), 0)
        self.assertEqual(xor_rank([0, 0]), 0)


class TestFieldAxioms(unittest.TestCase):

    SPECS = (
        FieldSpec(8, 0x1A9),
        FieldSpec.normal(8, 0x1A9),
        FieldSpec(16, 0x1100B),
    )

    def test_ring_axioms(self):
        for seed, spec in enumerate(self.SPECS):
            f = get_field(spec)
            rng = SplitMix64(seed)
            with self.subTest(spec=spec.to_text()):
                for _ in range(10_000):
                    a, b, c = rng.bits(f.m), rng.bits(f.m), rng.bits(f.m)
                    self.assertEqual(f.mul(a, b), f.mul(b, a))
                    self.assertEqual(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)))
                    self.assertEqual(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c))
                    self.assertEqual(f.mul(a, f.one()), a)

    def test_frobenius_is_additive_and_multiplicative(self):
        for seed, spec in enumerate(self.SPECS):
            f = get_field(spec)
            rng = SplitMix64(100 + seed)
            with self.subTest(spec=spec.to_text()):
                for _ in range(1000):
                    a, b = rng.bits(f.m), rng.bits(f.m)
                    i = rng.below(f.m)
                    self.assertEqual(
                        f.frobenius(a ^ b, i), f.frobenius(a, i) ^ f.frobenius(b, i)
                    )
                    self.assertEqual(
                        f.frobenius(f.mul(a, b), i),
                        f.mul(f.frobenius(a, i), f.frobenius(b, i)),
                    )
                    self.assertEqual(f.frobenius(a, 1), f.mul(a, a))
