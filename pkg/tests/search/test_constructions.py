from unittest import TestCase

from zerosum import PreconditionError, parse
from zerosum.detect import spectrum
from zerosum.search import (
    family_block,
    infinite_family,
    lemma30_witnesses,
    prime_power_block,
    verify_construction,
)


class LongAvoidersTestCase(TestCase):
    def test_k_2(self):
        s, r = lemma30_witnesses(2, 6)
        self.assertEqual(s, parse("2,1^2,-1^4", 2))
        self.assertEqual(r, s)

    def test_k_3(self):
        s, r = lemma30_witnesses(3, 60)
        self.assertEqual(s, parse("3^14,2^3,-1^48", 3))
        self.assertEqual(r, parse("3^2,2^19,-1^44", 3))

    def test_lengths_and_avoidance(self):
        for k, t in ((2, 6), (3, 60), (4, 420), (5, 2520)):
            with self.subTest(k=k, t=t):
                for seq in lemma30_witnesses(k, t):
                    self.assertEqual(seq.length, t + k * (k - 1) - 1)
                    self.assertTrue(verify_construction(seq, t).avoiding)

    def test_rejects_k_1(self):
        with self.assertRaises(PreconditionError):
            lemma30_witnesses(1, 2)

    def test_rejects_missing_divisibility(self):
        with self.assertRaisesRegex(PreconditionError, "must divide 30"):
            lemma30_witnesses(3, 30)


class PrimePowerBlockTestCase(TestCase):
    def test_blocks(self):
        self.assertEqual(prime_power_block(1, 2), parse("1,-1", 1))
        self.assertEqual(prime_power_block(2, 3), parse("2,-1^2", 2))
        self.assertEqual(prime_power_block(3, 4), parse("1^3,-3", 3))
        self.assertEqual(prime_power_block(5, 8), parse("3^5,-5^3", 5))

    def test_block_spectrum(self):
        for k, q in ((1, 2), (2, 3), (3, 4), (3, 5), (4, 7), (5, 8), (5, 9)):
            with self.subTest(k=k, q=q):
                block = prime_power_block(k, q)
                self.assertEqual(block.length, q)
                self.assertEqual(spectrum(block.power(3)).lengths, [0, q, 2 * q, 3 * q])


class FamilyTestCase(TestCase):
    def test_family_block(self):
        result = family_block(3, 30)
        self.assertEqual(result.divisor, 4)
        self.assertEqual(result.prime_power, 4)
        self.assertEqual(result.description, "(1^3,-3)^[x]")

    def test_family_block_k_5(self):
        result = family_block(5, 420)
        self.assertEqual(result.divisor, 8)
        self.assertEqual(result.block, parse("3^5,-5^3", 5))

    def test_infinite_family(self):
        self.assertEqual(infinite_family(1, 3, 5), parse("1^5,-1^5", 1))

    def test_spectrum_misses_t(self):
        for k, t in ((1, 3), (2, 4), (3, 45), (5, 420)):
            block = family_block(k, t).block
            for x in range(1, 51):
                with self.subTest(k=k, t=t, x=x):
                    seq = infinite_family(k, t, x)
                    result = spectrum(seq)
                    expected = [p * block.length for p in range(x + 1)]
                    self.assertEqual(result.lengths, expected)
                    self.assertNotIn(t, result)

    def test_rejects_finite_case(self):
        with self.assertRaises(PreconditionError):
            family_block(2, 6)

    def test_rejects_nonpositive_x(self):
        with self.assertRaises(PreconditionError):
            infinite_family(1, 3, 0)


class VerifyConstructionTestCase(TestCase):
    def test_contains(self):
        report = verify_construction(parse("1,-1", 1), 2)
        self.assertTrue(report.contains)
        self.assertFalse(report.avoiding)

    def test_avoiding(self):
        report = verify_construction(parse("3^14,2^3,-1^48", 3), 60)
        self.assertEqual(
            report.as_dict(),
            {"t": 60, "sum": 0, "length": 65, "contains": False, "avoiding": True},
        )

    def test_nonzero_sum_is_not_avoiding(self):
        report = verify_construction(parse("2,-1", 2), 2)
        self.assertFalse(report.contains)
        self.assertFalse(report.avoiding)
