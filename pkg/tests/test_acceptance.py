"""
Acceptance sweeps over the built-in catalog at larger depths.

These take tens of seconds; set CU_FACTOR_SLOW=1 to run them.
"""

import itertools
import os
import unittest
from fractions import Fraction
from pathlib import Path

from cuf.base import CheckStatus, NoWitnessFound, UnsupportedChainForm
from cuf.catalog import builtin_models, builtin_pairs
from cuf.cli.runner import run_scenario
from cuf.cli.scenario import load_scenario
from cuf.config import Config
from cuf.factorization import alpha_eval, alpha_eval_oracle, ceiling_bound, check_z_extension
from cuf.morphisms import SoftScale
from cuf.oracle import check_order_agreement
from cuf.oracle.suite import LemmaSuiteConfig, lemma_suite
from cuf.semigroup import INF, HalfLineModel, KqModel, NbarModel, Soft, ZModel

SLOW = os.getenv("CU_FACTOR_SLOW", "").lower() in ("1", "true", "yes")
CORPUS = Path(__file__).parent.parent / "corpus"


@unittest.skipUnless(SLOW, "set CU_FACTOR_SLOW=1 for acceptance sweeps")
class TestOrderAcceptance(unittest.TestCase):
    """Test closed-form orders and model laws at depth."""

    def test_order_agreement(self):
        """Test closed-form ≤ and ≪ match the chain oracle at depth 6, and K_2 at depth 8."""
        for model, depth in ((ZModel(), 6), (NbarModel(), 6), (HalfLineModel(), 6), (KqModel([2]), 8)):
            with self.subTest(model=model.name):
                report = check_order_agreement(model, depth)
                self.assertEqual(report.status, CheckStatus.PASS, report.counterexample)

    def test_canonical_idempotent(self):
        """Test canonical is idempotent on every built-in grid."""
        for name, model in builtin_models().items():
            for a in model.grid(6):
                with self.subTest(model=name, a=str(a)):
                    self.assertEqual(model.canonical(model.canonical(a)), a)

    def test_addition_monotone(self):
        """Test a ≤ b implies a + c ≤ b + c on the scalar and product grids."""
        models = builtin_models()
        for name in ("Z", "Nbar", "HalfLine", "Kq2", "ZxZ"):
            S = models[name]
            grid, shifts = S.grid(6), S.grid(3)
            for a, b in itertools.product(grid, repeat=2):
                if not S.leq(a, b):
                    continue
                for c in shifts:
                    self.assertTrue(S.leq(S.add(a, c), S.add(b, c)), f"{name}: {a} <= {b} shifted by {c}")


@unittest.skipUnless(SLOW, "set CU_FACTOR_SLOW=1 for acceptance sweeps")
class TestAlphaAcceptance(unittest.TestCase):
    """Test α against its oracle and the ceiling bound."""

    def test_oracle_agreement(self):
        """Test exact oracle values equal the closed form for t with denominators up to 8."""
        ts = sorted({Soft(Fraction(k, q)) for q in range(1, 9) for k in (1, q + 1, 2 * q + 1, 3 * q - 1)},
                    key=str) + [Soft(INF)]
        compared = 0
        for name, p in builtin_pairs().items():
            for x in p.source.grid(2)[:5]:
                for t in ts:
                    result = alpha_eval_oracle(p, x, t, 6)
                    self.assertTrue(p.target.leq(result.value, ceiling_bound(p, x, t)), f"{name} {x} {t}")
                    if not result.exact:
                        continue
                    try:
                        closed = alpha_eval(p, x, t)
                    except (NoWitnessFound, UnsupportedChainForm):
                        continue
                    compared += 1
                    self.assertEqual(result.value, closed, f"{name} x={x} t={t}")
        self.assertGreater(compared, 500)

    def test_glued_maps_agree_with_brute_check(self):
        """Test the extension criterion matches the brute check on glued maps Z → Z."""
        Z, H = ZModel(), HalfLineModel()
        rates = [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), 1, Fraction(3, 2), 2, 3, 4]
        maps = [(c1, SoftScale(H, Z, rate)) for c1 in Z.grid(2) for rate in rates]
        self.assertGreaterEqual(len(maps), 50)
        for c1, gamma in maps:
            with self.subTest(c1=str(c1), gamma=gamma.name):
                report = check_z_extension(c1, gamma, 4)
                self.assertTrue(report.metadata["agrees_with_brute"], report.message)


@unittest.skipUnless(SLOW, "set CU_FACTOR_SLOW=1 for acceptance sweeps")
class TestSuiteAcceptance(unittest.TestCase):
    """Test the default lemma suite and the scenario corpus."""

    def test_default_lemma_suite(self):
        """Test the default suite covers at least 200 instances without an unexpected section."""
        report = lemma_suite(LemmaSuiteConfig())
        self.assertGreaterEqual(report.instances, 200)
        unexpected = [s.check for s in report.details if s.unexpected]
        self.assertEqual(unexpected, [])

    def test_corpus_exit_status(self):
        """Test every corpus scenario meets its declared expectations."""
        paths = sorted(CORPUS.glob("*.cus"))
        self.assertTrue(paths)
        config = Config(jobs=1, log_level="WARNING", include_timing=False)
        for path in paths:
            with self.subTest(path.name):
                outcome = run_scenario(load_scenario(path), config, persist=False)
                failing = [(r.check, r.metadata.get("line")) for r in outcome.reports if r.unexpected]
                self.assertEqual(outcome.exit_status, 0, failing)


if __name__ == '__main__':
    unittest.main()
