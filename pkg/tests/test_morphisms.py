"""Unit tests for the morphism catalog and morphism checks."""

import unittest
from fractions import Fraction

from cuf.base import CheckStatus, ModelMismatch, NoWitnessFound
from cuf.catalog import (
    UnknownKind,
    build_morphism,
    builtin_models,
    builtin_pairs,
    morphism_kind,
)
from cuf.morphisms import (
    Glued,
    GraphMorphism,
    Identity,
    Infinite,
    Injection,
    MorphismKind,
    MultiplyBy,
    NatToSoft,
    Projection,
    Sigma,
    SoftEmbedding,
    Zero,
    check_almost_unperforated,
    check_cu_morphism,
    check_generalized_cu_morphism,
    check_pure,
    check_q_rational,
    check_soft_morphism,
    compose,
    divisibility_witness,
    table_map,
)
from cuf.semigroup import (
    INF,
    Compact,
    HalfLineModel,
    KqModel,
    Mobius,
    NbarModel,
    ProductModel,
    RationalChain,
    Soft,
    Vector,
    ZModel,
    sup_chain,
    t4_table,
)


class TestCatalogMaps(unittest.TestCase):
    """Test evaluation of the catalog morphisms."""

    def setUp(self):
        self.Z = ZModel()
        self.N = NbarModel()
        self.H = HalfLineModel()

    def test_sigma(self):
        """Test σ sends compacts to their soft counterparts and fixes 0."""
        sigma = Sigma(self.Z)
        self.assertEqual(sigma.apply(Compact(2)), Soft(2))
        self.assertEqual(sigma.apply(Compact(0)), Compact(0))
        self.assertEqual(sigma.apply(Soft(Fraction(1, 3))), Soft(Fraction(1, 3)))
        self.assertFalse(sigma.declared_cu_morphism)

    def test_nat_to_soft(self):
        """Test n ↦ Soft(n) and ∞ ↦ Soft(∞)."""
        f = NatToSoft(self.N, self.Z)
        self.assertEqual(f.apply(Compact(3)), Soft(3))
        self.assertEqual(f.apply(Compact(INF)), Soft(INF))

    def test_nat_to_soft_needs_nbar(self):
        """Test nat_to_soft refuses a domain other than N̄."""
        with self.assertRaises(ModelMismatch):
            NatToSoft(self.Z, self.Z)

    def test_soft_embedding_is_cu(self):
        """Test the embedding of the half line is declared a Cu-morphism."""
        f = SoftEmbedding(self.H, self.Z)
        self.assertTrue(f.declared_cu_morphism)
        self.assertEqual(f.apply(self.H.parse("1/2")), Soft(Fraction(1, 2)))

    def test_zero_and_infinite(self):
        """Test the constant zero map and x ↦ ∞·x."""
        self.assertEqual(Zero(self.Z, self.N).apply(Soft(2)), Compact(0))
        self.assertEqual(Infinite(self.Z).apply(Compact(2)), Soft(INF))
        self.assertEqual(Infinite(self.Z).apply(Compact(0)), Compact(0))

    def test_projection_and_injection(self):
        """Test coordinate maps of a product."""
        ZZ = ProductModel([self.Z, self.Z])
        self.assertEqual(Projection(ZZ, 1).apply(Vector((Compact(1), Soft(1)))), Soft(1))
        self.assertEqual(Injection(ZZ, 0).apply(Compact(2)), Vector((Compact(2), Compact(0))))
        with self.assertRaises(ValueError):
            Projection(ZZ, 2)

    def test_compose(self):
        """Test g ∘ f applies f first."""
        f = compose(Sigma(self.Z), MultiplyBy(self.Z, 2))
        self.assertEqual(f.apply(Compact(1)), Soft(2))
        self.assertFalse(f.declared_cu_morphism)

    def test_compose_mismatch(self):
        """Test composing across different models fails."""
        with self.assertRaises(ModelMismatch):
            compose(Identity(self.N), Identity(self.Z))

    def test_glued(self):
        """Test the glued map on compacts and softs."""
        g = Glued(self.Z, Compact(1), SoftEmbedding(self.H, self.Z))
        self.assertEqual(g.apply(Compact(3)), Compact(3))
        self.assertEqual(g.apply(Soft(Fraction(1, 2))), Soft(Fraction(1, 2)))

    def test_map_chain_keeps_closed_form(self):
        """Test the image of a soft chain under multiplication by 2."""
        chain = RationalChain("soft", Mobius.approaching(Fraction(1)))
        image = MultiplyBy(self.Z, 2).map_chain(chain)
        self.assertEqual(sup_chain(self.Z, image), Soft(2))

    def test_table_map_is_partial(self):
        """Test graph morphisms are only defined on their graph."""
        T = t4_table()
        f = table_map(T, T, [("0", "0"), ("x", "x")])
        self.assertTrue(f.defined(T.parse("x")))
        self.assertFalse(f.defined(T.parse("y")))
        with self.assertRaises(ModelMismatch):
            f.apply(T.parse("y"))


class TestCatalogBuilders(unittest.TestCase):
    """Test building morphisms from scenario parameters."""

    def test_build_multiply_by(self):
        """Test multiply_by with a factor parameter."""
        Z = ZModel()
        f = build_morphism(MorphismKind.MULTIPLY_BY, {"domain": "Z", "factor": "3"}, {"Z": Z}, {})
        self.assertEqual(f.apply(Compact(1)), Compact(3))

    def test_cu_override(self):
        """Test the cu parameter overrides the declared flag."""
        models = {"N": NbarModel(), "Z": ZModel()}
        f = build_morphism(MorphismKind.NAT_TO_SOFT, {"domain": "N", "codomain": "Z", "cu": "true"}, models, {})
        self.assertTrue(f.declared_cu_morphism)

    def test_unknown_kind(self):
        """Test unknown morphism kinds are reported."""
        with self.assertRaises(UnknownKind):
            morphism_kind("bogus")

    def test_builtin_pairs_compose(self):
        """Test every built-in pair is composable and uniquely named."""
        pairs = builtin_pairs(builtin_models())
        self.assertEqual(len(pairs), 10)
        for name, pair in pairs.items():
            self.assertEqual(pair.name, name)
            self.assertEqual(pair.phi1.codomain, pair.phi2.domain)


class TestMorphismChecks(unittest.TestCase):
    """Test the bounded morphism property checks."""

    def test_identity_is_cu(self):
        """Test the identity of Z is a Cu-morphism."""
        report = check_cu_morphism(Identity(ZModel()), 4)
        self.assertEqual(report.status, CheckStatus.PASS, report.message)
        self.assertEqual(len(report.details), 1)

    def test_sigma_is_generalized(self):
        """Test σ preserves order, addition and suprema."""
        report = check_generalized_cu_morphism(Sigma(ZModel()), 4)
        self.assertEqual(report.status, CheckStatus.PASS, report.message)

    def test_nat_to_soft_is_not_cu(self):
        """Test 1 ≪ 1 in N̄ is not preserved by nat_to_soft."""
        report = check_cu_morphism(NatToSoft(NbarModel(), ZModel()), 4)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertIsNotNone(report.counterexample)

    def test_identity_z_pure(self):
        """Test the identity of Z is almost unperforated and almost divisible."""
        report = check_pure(Identity(ZModel()), 4, 3, 3)
        self.assertEqual(report.status, CheckStatus.PASS, report.message)
        self.assertEqual([d.check for d in report.details],
                         ["check_almost_unperforated", "check_almost_divisible"])

    def test_nbar_not_pure(self):
        """Test almost divisibility of N̄ fails at x' = x = 1, k = 2."""
        report = check_pure(Identity(NbarModel()), 4, 2, 4)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertEqual(report.counterexample, {"x'": "1", "x": "1", "k": "2"})

    def test_parallel_sweep_same_result(self):
        """Test the worker count does not change the outcome."""
        f = Identity(NbarModel())
        serial = check_pure(f, 4, 2, 4, jobs=1)
        parallel = check_pure(f, 4, 2, 4, jobs=3)
        self.assertEqual(serial.counterexample, parallel.counterexample)
        self.assertEqual(serial.instances, parallel.instances)

    def test_t4_perforated(self):
        """Test the identity of T4 is not almost unperforated."""
        report = check_almost_unperforated(Identity(t4_table()), 4, 3)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertTrue(report.exact)

    def test_divisibility_witness(self):
        """Test the soft-division witness in Z and its absence in N̄."""
        Z = ZModel()
        self.assertEqual(divisibility_witness(Identity(Z), 2, Compact(1), Compact(1)), Soft(Fraction(1, 2)))
        with self.assertRaises(NoWitnessFound):
            divisibility_witness(Identity(NbarModel()), 2, Compact(1), Compact(1))

    def test_q_rational(self):
        """Test the identity of K_2 is q-rational while that of Z is not."""
        primes = [2]
        self.assertEqual(check_q_rational(Identity(KqModel(primes)), primes, 4).status, CheckStatus.PASS)
        report = check_q_rational(Identity(ZModel()), primes, 4)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertEqual(report.metadata["law"], "q-divisibility")

    def test_soft_morphism(self):
        """Test σ lands in soft elements and the identity does not."""
        self.assertEqual(check_soft_morphism(Sigma(ZModel()), 4).status, CheckStatus.PASS)
        self.assertEqual(check_soft_morphism(Identity(ZModel()), 4).status, CheckStatus.FAIL)

    def test_tabulated_graph(self):
        """Test a tabulated identity is defined on the grid."""
        Z = ZModel()
        graph = GraphMorphism.tabulate(Identity(Z), 3)
        for a in Z.grid(3):
            self.assertTrue(graph.defined(a))
            self.assertEqual(graph.apply(a), a)


if __name__ == '__main__':
    unittest.main()
