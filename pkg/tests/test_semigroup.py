"""Unit tests for the semigroup models, chains and axiom checks."""

import unittest
from fractions import Fraction
from unittest.mock import patch

from cuf.base import CheckStatus, ModelMismatch, NotMonotone, UnsupportedChainForm
from cuf.semigroup import (
    INF,
    Compact,
    HalfLineModel,
    KqModel,
    LscFn,
    LscPosetModel,
    Mobius,
    NbarModel,
    ProductModel,
    RationalChain,
    Real,
    Soft,
    TableModel,
    Vector,
    ZModel,
    check_axioms,
    check_semigroup_almost_unperforated,
    check_strong_divisibility,
    is_strongly_soft,
    seeded_fault_table,
    sup_chain,
    t4_table,
)
from cuf.semigroup.elements import parse_value


class TestElements(unittest.TestCase):
    """Test element construction and payload validation."""

    def test_float_payload_rejected(self):
        """Test that floating point payloads are refused."""
        with self.assertRaises(TypeError):
            Compact(1.5)

    def test_soft_zero_rejected(self):
        """Test that a soft element needs a positive payload."""
        with self.assertRaises(ValueError):
            Soft(0)

    def test_string_payload_parsed_exactly(self):
        """Test that 'p/q' strings become fractions."""
        self.assertEqual(Soft("1/2").value, Fraction(1, 2))
        self.assertEqual(str(Soft("2/4")), "soft:1/2")

    def test_zero_denominator_rejected(self):
        """Test a zero denominator is a ValueError, not a ZeroDivisionError."""
        with self.assertRaises(ValueError):
            parse_value("1/0")
        with self.assertRaises(ValueError):
            ZModel().parse("soft:3/0")

    def test_infinity_arithmetic(self):
        """Test ∞ absorbs addition and 0·∞ = 0."""
        self.assertIs(INF + Fraction(3), INF)
        self.assertEqual(0 * INF, 0)
        self.assertTrue(INF > Fraction(10 ** 9))


class TestZModel(unittest.TestCase):
    """Test the mixed compact/soft order of Z."""

    def setUp(self):
        self.Z = ZModel()

    def test_soft_below_equal_compact(self):
        """Test Soft(t) ≤ Compact(n) iff t ≤ n."""
        self.assertTrue(self.Z.leq(Soft(1), Compact(1)))
        self.assertFalse(self.Z.leq(Compact(1), Soft(1)))

    def test_compact_below_larger_soft(self):
        """Test Compact(n) ≤ Soft(t) iff n < t."""
        self.assertTrue(self.Z.leq(Compact(1), Soft(Fraction(3, 2))))

    def test_mixed_addition_is_soft(self):
        """Test that adding a soft element gives a soft element."""
        self.assertEqual(self.Z.add(Compact(1), Soft(Fraction(1, 2))), Soft(Fraction(3, 2)))
        self.assertEqual(self.Z.add(Compact(1), Compact(2)), Compact(3))

    def test_way_below(self):
        """Test compacts are way below themselves while softs are not."""
        self.assertTrue(self.Z.way_below(Compact(1), Compact(1)))
        self.assertFalse(self.Z.way_below(Soft(1), Soft(1)))
        self.assertTrue(self.Z.way_below(Compact(0), Soft(1)))
        self.assertTrue(self.Z.is_compact(Compact(2)))

    def test_infinite_compact_is_soft_infinity(self):
        """Test that Compact(∞) canonicalizes to Soft(∞)."""
        self.assertEqual(self.Z.canonical(Compact(INF)), Soft(INF))

    def test_non_integer_compact_is_foreign(self):
        """Test that Compact(1/2) is not an element of Z."""
        self.assertFalse(self.Z.contains(Compact(Fraction(1, 2))))
        with self.assertRaises(ModelMismatch):
            self.Z.add(Compact(Fraction(1, 2)), Compact(1))

    def test_parse_and_format(self):
        """Test the scenario element syntax."""
        self.assertEqual(self.Z.parse("inf"), Soft(INF))
        self.assertEqual(self.Z.parse("3"), Compact(3))
        self.assertEqual(self.Z.parse("soft:1/2"), Soft(Fraction(1, 2)))
        self.assertEqual(self.Z.format(Soft(Fraction(1, 2))), "soft:1/2")
        self.assertEqual(self.Z.format(Soft(INF)), "inf")

    def test_grid_is_sorted_and_monotone(self):
        """Test the grid contains zero and grows with depth."""
        small, large = self.Z.grid(2), self.Z.grid(3)
        self.assertEqual(small[0], Compact(0))
        self.assertTrue(set(small) <= set(large))
        self.assertEqual(len(small), len(set(small)))


class TestScalarModels(unittest.TestCase):
    """Test N̄, [0,∞] and K_q."""

    def test_nbar_infinity(self):
        """Test ∞ in N̄ absorbs multiples and is not compact."""
        N = NbarModel()
        self.assertEqual(N.multiply(2, Compact(INF)), Compact(INF))
        self.assertEqual(N.infinite_multiple(Compact(0)), Compact(0))
        self.assertFalse(N.way_below(Compact(INF), Compact(INF)))

    def test_nbar_parse(self):
        """Test N̄ accepts bare and tagged compacts only."""
        N = NbarModel()
        self.assertEqual(N.parse("compact:2"), N.parse("2"))
        with self.assertRaises(ValueError):
            N.parse("soft:1")

    def test_half_line_order(self):
        """Test s ≪ t iff s < t or s = 0 on the half line."""
        H = HalfLineModel()
        self.assertFalse(H.leq(Real(1), Real(Fraction(1, 2))))
        self.assertFalse(H.way_below(Real(1), Real(1)))
        self.assertTrue(H.way_below(Real(0), Real(0)))
        self.assertEqual(H.parse("1/2"), Real(Fraction(1, 2)))

    def test_kq_compacts_respect_primes(self):
        """Test only q-smooth denominators are compact in K_q."""
        K = KqModel([2])
        self.assertEqual(K.parse("compact:1/2"), Compact(Fraction(1, 2)))
        with self.assertRaises(ModelMismatch):
            K.parse("compact:1/3")

    def test_kq_rejects_composite(self):
        """Test the prime set is validated."""
        with self.assertRaises(ValueError):
            KqModel([4])
        with self.assertRaises(ValueError):
            KqModel([])


class TestCompositeModels(unittest.TestCase):
    """Test products and lsc functions."""

    def test_product_parse_format(self):
        """Test bracketed product syntax."""
        ZZ = ProductModel([ZModel(), ZModel()])
        a = ZZ.parse("[compact:1, soft:1/2]")
        self.assertEqual(a, Vector((Compact(1), Soft(Fraction(1, 2)))))
        self.assertEqual(ZZ.format(a), "[compact:1, soft:1/2]")

    def test_product_is_componentwise(self):
        """Test order and way-below act per coordinate."""
        ZZ = ProductModel([ZModel(), ZModel()])
        a = Vector((Compact(1), Soft(1)))
        b = Vector((Compact(1), Soft(2)))
        self.assertTrue(ZZ.way_below(a, b))
        self.assertFalse(ZZ.way_below(b, a))
        self.assertEqual(ZZ.add(a, b), Vector((Compact(2), Soft(3))))

    def test_product_grid_reaches_depth(self):
        """Test single-coordinate vectors appear at the full depth."""
        NN = ProductModel([NbarModel(), NbarModel()])
        grid = NN.grid(4)
        self.assertIn(Vector((Compact(2), Compact(0))), grid)
        self.assertIn(Vector((Compact(0), Compact(4))), grid)
        self.assertIn(Vector((Compact(1), Compact(1))), grid)
        self.assertTrue(set(NN.grid(3)) <= set(grid))
        self.assertTrue(NN.search_is_exhaustive(Vector((Compact(3), Compact(0))), 4))
        self.assertFalse(NN.search_is_exhaustive(Vector((Compact(3), Compact(2))), 4))

    def test_lsc_grid_reaches_depth(self):
        """Test single-level lsc functions appear at the full depth."""
        L = LscPosetModel(["a", "b"], [("a", "b")])
        grid = L.grid(4)
        self.assertIn(L.canonical(LscFn((0, 3))), grid)
        self.assertIn(L.canonical(LscFn((4, 4))), grid)
        self.assertTrue(all(L.is_monotone(f.values) for f in grid))

    def test_lsc_rejects_non_monotone(self):
        """Test lsc functions must respect the poset order."""
        L = LscPosetModel(["a", "b"], [("a", "b")])
        with self.assertRaises(ModelMismatch):
            L.canonical(LscFn((2, 1)))
        self.assertEqual(L.format(L.parse("lsc(1,inf)")), "lsc(1,inf)")

    def test_lsc_way_below_needs_finite_values(self):
        """Test f ≪ g iff f ≤ g and f is finite everywhere."""
        L = LscPosetModel(["a", "b"], [("a", "b")])
        self.assertTrue(L.way_below(LscFn((1, 2)), LscFn((1, INF))))
        self.assertFalse(L.way_below(LscFn((1, INF)), LscFn((1, INF))))

    def test_lsc_cycle_rejected(self):
        """Test a cyclic poset relation is refused."""
        with self.assertRaises(ValueError):
            LscPosetModel(["a", "b"], [("a", "b"), ("b", "a")])


class TestTables(unittest.TestCase):
    """Test finite table models."""

    def test_t4_sums(self):
        """Test x + x = top with x and y incomparable."""
        T = t4_table()
        x, y, top = T.parse("x"), T.parse("y"), T.parse("top")
        self.assertEqual(T.add(x, x), top)
        self.assertFalse(T.leq(x, y))
        self.assertTrue(T.leq(x, top))

    def test_missing_sum_rejected(self):
        """Test an incomplete addition table is refused."""
        with self.assertRaises(ValueError):
            TableModel(["0", "a", "b"], {("a", "a"): "b"})

    def test_unknown_name(self):
        """Test parsing a name outside the carrier."""
        with self.assertRaises(ValueError):
            t4_table().parse("z")


class TestChains(unittest.TestCase):
    """Test closed-form suprema."""

    def test_soft_chain_sup(self):
        """Test t·d/(d+1) increases to Soft(t)."""
        chain = RationalChain("soft", Mobius.approaching(Fraction(2)))
        self.assertEqual(sup_chain(ZModel(), chain), Soft(2))

    def test_unbounded_compact_chain(self):
        """Test d ↦ Compact(d) has supremum ∞ in Z and N̄."""
        chain = RationalChain("compact", Mobius(1, 0, 0, 1))
        self.assertEqual(sup_chain(ZModel(), chain), Soft(INF))
        self.assertEqual(sup_chain(NbarModel(), chain), Compact(INF))

    def test_decreasing_chain_rejected(self):
        """Test a decreasing payload raises NotMonotone."""
        chain = RationalChain("soft", Mobius(0, 1, 1, 0))
        with self.assertRaises(NotMonotone):
            sup_chain(ZModel(), chain)

    def test_mobius_approaching(self):
        """Test the approaching family and its limit."""
        rate = Mobius.approaching(Fraction(1, 2))
        self.assertEqual(rate.at(1), Fraction(1, 4))
        self.assertEqual(rate.limit(), Fraction(1, 2))
        self.assertIs(Mobius.approaching(INF).limit(), INF)


class TestAxioms(unittest.TestCase):
    """Test bounded axiom and pureness checks on models."""

    def test_builtin_models_pass(self):
        """Test the built-in scalar models satisfy the axioms."""
        for model in (ZModel(), NbarModel(), HalfLineModel(), t4_table()):
            report = check_axioms(model, 3)
            self.assertEqual(report.status, CheckStatus.PASS, report.message)
            self.assertGreater(report.instances, 0)

    def test_seeded_fault_fails(self):
        """Test the faulty table is caught with a counterexample."""
        report = check_axioms(seeded_fault_table(), 4)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertTrue(report.exact)
        self.assertIn("law", report.metadata)
        self.assertTrue(report.counterexample)

    def test_o2_chain_without_closed_form(self):
        """Test an approximating chain with no closed-form supremum fails O2 instead of raising."""
        Z = ZModel()
        with patch.object(ZModel, "sample_chains", return_value=[]), \
                patch("cuf.semigroup.axioms.sup_chain", side_effect=UnsupportedChainForm("no closed form")):
            report = check_axioms(Z, 2)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertEqual(report.metadata["law"], "o2-supremum")
        self.assertEqual(report.counterexample["error"], "no closed form")

    def test_strong_softness(self):
        """Test softs are strongly soft and nonzero compacts are not."""
        Z = ZModel()
        self.assertTrue(is_strongly_soft(Z, Soft(1), 4))
        self.assertFalse(is_strongly_soft(Z, Compact(1), 4))
        self.assertFalse(is_strongly_soft(Z, Compact(1), 4, use_closed_form=False))

    def test_t4_is_perforated(self):
        """Test 3x ≤ 2y in T4 while x ≰ y."""
        report = check_semigroup_almost_unperforated(t4_table(), 4, 3)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertEqual(report.counterexample, {"x": "x", "y": "y", "m": "2"})

    def test_strong_divisibility(self):
        """Test Z is strongly divisible and N̄ is not."""
        self.assertEqual(check_strong_divisibility(ZModel(), 3, 3).status, CheckStatus.PASS)
        report = check_strong_divisibility(NbarModel(), 3, 3)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertEqual(report.counterexample, {"x": "1", "k": "2"})


if __name__ == '__main__':
    unittest.main()
