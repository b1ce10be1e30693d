"""Unit tests for the brute-force oracles and the lemma suite."""

import unittest

from cuf.base import CheckStatus
from cuf.morphisms import GraphMorphism, Identity
from cuf.oracle import brute_morphism_check, brute_order_oracle, check_order_agreement, order_disagreements
from cuf.oracle.suite import LemmaSuiteConfig, lemma_suite
from cuf.semigroup import Compact, HalfLineModel, NbarModel, Soft, TableIdx, ZModel, t4_table


class TestOrderOracle(unittest.TestCase):
    """Test the chain-dominance order oracle."""

    def test_mixed_order(self):
        """Test the oracle sees Soft(1) ≤ Compact(1) but not the converse."""
        Z = ZModel()
        self.assertTrue(brute_order_oracle(Z, Soft(1), Compact(1), 3))
        self.assertFalse(brute_order_oracle(Z, Compact(1), Soft(1), 3))

    def test_way_below(self):
        """Test compacts are way below themselves and softs are not."""
        Z = ZModel()
        self.assertTrue(brute_order_oracle(Z, Compact(1), Compact(1), 3, mode="way_below"))
        self.assertFalse(brute_order_oracle(Z, Soft(1), Soft(1), 3, mode="way_below"))

    def test_unknown_mode(self):
        """Test the mode is validated."""
        with self.assertRaises(ValueError):
            brute_order_oracle(ZModel(), Compact(0), Compact(1), 3, mode="below")

    def test_closed_forms_agree(self):
        """Test closed-form order relations match the oracle on small grids."""
        for model in (ZModel(), NbarModel(), HalfLineModel(), t4_table()):
            report = check_order_agreement(model, 3)
            self.assertEqual(report.status, CheckStatus.PASS, report.counterexample)
            self.assertEqual(order_disagreements(model, 3, limit=1), [])

    def test_table_order_from_relations(self):
        """Test the table order is rebuilt from the generating relations, so a corrupted closure is caught."""
        T = t4_table()
        x, top = T.index["x"], T.index["top"]
        T.below = frozenset(pair for pair in T.below if pair != (x, top))
        self.assertTrue(brute_order_oracle(T, TableIdx(x), TableIdx(top), 3))
        self.assertFalse(brute_order_oracle(T, TableIdx(top), TableIdx(x), 3))
        self.assertIn(("leq", TableIdx(x), TableIdx(top)), order_disagreements(T, 3))
        self.assertEqual(check_order_agreement(T, 3).status, CheckStatus.FAIL)


class TestBruteMorphism(unittest.TestCase):
    """Test the brute check of tabulated maps."""

    def test_tabulated_identity(self):
        """Test a tabulated identity passes."""
        graph = GraphMorphism.tabulate(Identity(ZModel()), 3)
        report = brute_morphism_check(graph, 3)
        self.assertEqual(report.status, CheckStatus.PASS)
        self.assertTrue(report.exact)

    def test_corrupted_entry(self):
        """Test changing one image is detected."""
        graph = GraphMorphism.tabulate(Identity(ZModel()), 3).with_entry(Compact(1), Compact(2))
        report = brute_morphism_check(graph, 3)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertIn(report.metadata["law"], ("monotonicity", "additivity"))


class TestLemmaSuite(unittest.TestCase):
    """Test the aggregated lemma suite."""

    def test_empty_catalog(self):
        """Test an empty model list passes vacuously."""
        report = lemma_suite(LemmaSuiteConfig(models=[]))
        self.assertEqual(report.status, CheckStatus.PASS)
        self.assertEqual(report.instances, 0)
        self.assertEqual(report.metadata["pairs"], [])

    def test_unknown_model(self):
        """Test unknown model names are rejected."""
        with self.assertRaises(ValueError):
            lemma_suite(LemmaSuiteConfig(models=["Banach"]))

    def test_unknown_pair(self):
        """Test unknown pair names are rejected."""
        with self.assertRaises(ValueError):
            lemma_suite(LemmaSuiteConfig(models=["Z"], pairs=["(nope, nope)"]))

    def test_small_catalog(self):
        """Test the suite over Z and the half line has no unexpected section."""
        cfg = LemmaSuiteConfig(models=["Z", "HalfLine"], depth=3, samples=4, frac_bound=4)
        report = lemma_suite(cfg)
        self.assertNotEqual(report.status, CheckStatus.FAIL, report.message)
        self.assertFalse(any(section.unexpected for section in report.details))
        self.assertIn("Z", report.metadata["models"])

    def test_negative_controls_fail_as_expected(self):
        """Test the negative controls fail and are marked as expected failures."""
        cfg = LemmaSuiteConfig(models=["Nbar", "T4", "Faulty"], depth=3, samples=2, frac_bound=3)
        report = lemma_suite(cfg)
        controls = [s for s in report.details if s.expected == CheckStatus.FAIL]
        self.assertTrue(controls)
        for section in controls:
            self.assertEqual(section.status, CheckStatus.FAIL, section.check)
            self.assertFalse(section.unexpected)

    def test_seed_determinism(self):
        """Test equal seeds give equal outcomes."""
        cfg = LemmaSuiteConfig(models=["Z"], depth=3, samples=5, frac_bound=5, seed=11)
        first, second = lemma_suite(cfg), lemma_suite(cfg)
        self.assertEqual([s.status for s in first.details], [s.status for s in second.details])
        self.assertEqual([s.instances for s in first.details], [s.instances for s in second.details])
        self.assertEqual(first.counterexample, second.counterexample)


if __name__ == '__main__':
    unittest.main()
