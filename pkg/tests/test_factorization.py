"""Unit tests for witness sets, α and its rational and soft variants."""

import unittest
from fractions import Fraction

from cuf.base import (
    CheckStatus,
    ModelMismatch,
    NoWitnessFound,
    NotADivisor,
    PreconditionViolated,
    SoftnessViolated,
    UnsupportedChainForm,
)
from cuf.catalog import builtin_pairs
from cuf.factorization import (
    FactorPair,
    MuSpec,
    alpha_eval,
    alpha_eval_oracle,
    alpha_q_eval,
    alpha_soft_eval,
    build_witness_chain,
    check_z_extension,
    lemma_almunpf_check,
    mu_contains,
    mu_sample,
    omega_n_eval,
    single_map_pair,
    ceiling_bound,
    verify_alpha_bimorphism,
    verify_alpha_q,
    verify_soft_identity,
)
from cuf.factorization.alpha import schedule
from cuf.morphisms import Identity, MultiplyBy, NatToSoft, SoftEmbedding
from cuf.semigroup import INF, Compact, HalfLineModel, KqModel, NbarModel, Soft, ZModel


class TestMuSets(unittest.TestCase):
    """Test μ((k,n), x′, x) membership and sampling."""

    def setUp(self):
        self.Z = ZModel()
        self.spec = MuSpec(1, 2, Compact(0), Compact(1))

    def test_parameters_validated(self):
        """Test k and n must be positive."""
        with self.assertRaises(PreconditionViolated):
            MuSpec(0, 1, Compact(0), Compact(1))

    def test_membership(self):
        """Test 2·Soft(1/2) ≤ 1 while 2·1 is not."""
        self.assertTrue(mu_contains(self.Z, self.spec, Soft(Fraction(1, 2))))
        self.assertFalse(mu_contains(self.Z, self.spec, Compact(1)))

    def test_sample(self):
        """Test the sampled set is the grid part of μ in canonical order."""
        sample = mu_sample(self.Z, self.spec, 4)
        self.assertEqual(sample[0], Compact(0))
        self.assertIn(Soft(Fraction(1, 4)), sample)
        self.assertIn(Soft(Fraction(1, 2)), sample)
        self.assertNotIn(Soft(Fraction(3, 4)), sample)
        self.assertNotIn(Compact(1), sample)

    def test_unordered_bounds(self):
        """Test x′ must lie below x."""
        with self.assertRaises(PreconditionViolated):
            mu_sample(self.Z, MuSpec(1, 1, Compact(2), Compact(1)), 4)


class TestFactorPair(unittest.TestCase):
    """Test factor pair construction and role validation."""

    def test_mismatch(self):
        """Test φ₁ must land where φ₂ starts."""
        with self.assertRaises(ModelMismatch):
            FactorPair(Identity(NbarModel()), Identity(ZModel()))

    def test_default_name(self):
        """Test the generated pair name."""
        id_z = Identity(ZModel())
        self.assertEqual(FactorPair(id_z, id_z).name, "(id_Z, id_Z)")

    def test_validate(self):
        """Test the roles hold for Z and fail for N̄."""
        id_z = Identity(ZModel())
        self.assertEqual(FactorPair(id_z, id_z).validate(4, 3, 3).status, CheckStatus.PASS)
        id_n = Identity(NbarModel())
        self.assertEqual(FactorPair(id_n, id_n).validate(4, 2, 4).status, CheckStatus.FAIL)

    def test_single_map_pair(self):
        """Test factoring one map through its domain."""
        f = MultiplyBy(ZModel(), 2)
        pair = single_map_pair(f, "domain", 4, 3, 3)
        self.assertEqual(pair.phi1.kind.value, "identity")
        self.assertIs(pair.phi2, f)
        with self.assertRaises(ValueError):
            single_map_pair(f, "sideways", 4)
        with self.assertRaises(PreconditionViolated):
            single_map_pair(Identity(NbarModel()), "domain", 4, 2, 4)


class TestSchedule(unittest.TestCase):
    """Test the fraction schedule of witness chains."""

    def test_gap_condition(self):
        """Test k_d/n_d < k_{d+1}/(n_{d+1}+1) and the values d/(d+1)."""
        fractions = schedule(Fraction(1), 10)
        for d, (k, n) in enumerate(fractions, start=1):
            self.assertEqual(Fraction(k, n), Fraction(d, d + 1))
        for (k1, n1), (k2, n2) in zip(fractions, fractions[1:]):
            self.assertLess(Fraction(k1, n1), Fraction(k2, n2 + 1))

    def test_infinite_target(self):
        """Test the schedule for ∞ runs through the integers."""
        values = [Fraction(k, n) for k, n in schedule(INF, 5)]
        self.assertEqual(values, [Fraction(d) for d in range(1, 6)])


class TestAlpha(unittest.TestCase):
    """Test evaluation of α."""

    def setUp(self):
        self.Z = ZModel()
        self.N = NbarModel()
        self.id_z = Identity(self.Z)
        self.identity_pair = FactorPair(self.id_z, self.id_z)
        self.soft_pair = FactorPair(NatToSoft(self.N, self.Z), self.id_z)

    def test_compact_parameter(self):
        """Test α(x, m) = m·φ₂φ₁(x)."""
        self.assertEqual(alpha_eval(self.identity_pair, Compact(2), Compact(3)), Compact(6))
        self.assertEqual(alpha_eval(self.identity_pair, Compact(1), Compact(1)), Compact(1))

    def test_zero_arguments(self):
        """Test α vanishes when either argument is zero."""
        self.assertEqual(alpha_eval(self.identity_pair, Compact(0), Soft(2)), Compact(0))
        self.assertEqual(alpha_eval(self.identity_pair, Compact(2), Compact(0)), Compact(0))

    def test_soft_parameter(self):
        """Test α(1, Soft(1/2)) = Soft(1/2) for the identity pair."""
        self.assertEqual(alpha_eval(self.identity_pair, Compact(1), Soft(Fraction(1, 2))), Soft(Fraction(1, 2)))

    def test_soft_one_below_compact_one(self):
        """Test α(x, Soft(1)) is the soft part of φ₂φ₁(x)."""
        self.assertEqual(alpha_eval(self.identity_pair, Compact(1), Soft(1)), Soft(1))

    def test_nat_to_soft(self):
        """Test α(2, Soft(1)) = Soft(2) through nat_to_soft."""
        self.assertEqual(alpha_eval(self.soft_pair, Compact(2), Soft(1)), Soft(2))

    def test_oracle_agrees(self):
        """Test the enumeration oracle settles the same value."""
        result = alpha_eval_oracle(self.soft_pair, Compact(2), Soft(1), 12)
        self.assertEqual(result.value, Soft(2))
        self.assertTrue(result.exact)
        half = alpha_eval_oracle(self.identity_pair, Compact(1), Soft(Fraction(1, 2)), 12)
        self.assertEqual(half, (Soft(Fraction(1, 2)), True))

    def test_oracle_limit_beyond_grid(self):
        """Test the oracle settles limits larger than its grids."""
        result = alpha_eval_oracle(self.identity_pair, Compact(3), Soft(6), 8)
        self.assertEqual(result, (Soft(18), True))
        doubled = FactorPair(self.id_z, MultiplyBy(self.Z, 2))
        result = alpha_eval_oracle(doubled, Compact(2), Soft(Fraction(5, 3)), 8)
        self.assertEqual(result, (Soft(Fraction(20, 3)), True))
        self.assertEqual(alpha_eval(doubled, Compact(2), Soft(Fraction(5, 3))), Soft(Fraction(20, 3)))

    def test_oracle_sweep_agrees(self):
        """Test every exact oracle value over the catalog pairs equals the closed form."""
        ts = sorted({Soft(Fraction(k, q)) for q in range(1, 9) for k in (1, 2 * q + 1)}, key=str) + [Soft(INF)]
        exact = 0
        for name, p in builtin_pairs().items():
            for x in p.source.grid(2)[:6]:
                for t in ts:
                    with self.subTest(pair=name, x=str(x), t=str(t)):
                        result = alpha_eval_oracle(p, x, t, 4)
                        self.assertTrue(p.target.leq(result.value, ceiling_bound(p, x, t)))
                        if not result.exact:
                            continue
                        try:
                            closed = alpha_eval(p, x, t)
                        except (NoWitnessFound, UnsupportedChainForm):
                            continue
                        exact += 1
                        self.assertEqual(result.value, closed)
        self.assertGreater(exact, 100)

    def test_witness_chain(self):
        """Test the witness chain comes from soft division."""
        chain = build_witness_chain(self.identity_pair, Compact(1), Fraction(1), depth=6, chain_depth=6)
        self.assertTrue(chain.from_soft_division)
        self.assertEqual(len(chain.ys), 6)
        self.assertEqual(len(chain.fractions), 6)

    def test_ceiling_bound(self):
        """Test α(x, t) ≤ ⌈t⌉·φ₂φ₁(x)."""
        bound = ceiling_bound(self.identity_pair, Compact(1), Soft(Fraction(3, 2)))
        self.assertEqual(bound, Compact(2))
        value = alpha_eval(self.identity_pair, Compact(1), Soft(Fraction(3, 2)))
        self.assertTrue(self.Z.leq(value, bound))
        self.assertEqual(ceiling_bound(self.identity_pair, Compact(1), Soft(INF)), Soft(INF))

    def test_verify_bimorphism(self):
        """Test α of the identity pair is a generalized Cu-bimorphism."""
        report = verify_alpha_bimorphism(self.identity_pair, 4)
        self.assertEqual(report.status, CheckStatus.PASS, report.message)
        self.assertTrue(report.metadata["joint_checked"])

    def test_verify_bimorphism_rejects_roles(self):
        """Test a pair failing its role check is reported as a precondition failure."""
        id_n = Identity(self.N)
        report = verify_alpha_bimorphism(FactorPair(id_n, id_n), 4, k_max=2)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertTrue(report.metadata["precondition"])


class TestVariants(unittest.TestCase):
    """Test the rational and soft variants."""

    def setUp(self):
        self.K = KqModel([2])
        self.id_k = Identity(self.K)
        self.rational_pair = FactorPair(self.id_k, self.id_k)
        Z = ZModel()
        self.soft_pair = FactorPair(NatToSoft(NbarModel(), Z), Identity(Z))
        self.identity_pair = FactorPair(Identity(Z), Identity(Z))

    def test_alpha_q(self):
        """Test α_q(1, 3/2) = 3/2 on the dyadic rationals."""
        t = Compact(Fraction(3, 2))
        self.assertEqual(alpha_q_eval(self.rational_pair, Compact(1), t, [2]), t)
        self.assertEqual(alpha_q_eval(self.rational_pair, Compact(1), Compact(1), [2]), Compact(1))

    def test_omega_needs_divisor(self):
        """Test ω_3 is refused for the prime set {2}."""
        with self.assertRaises(NotADivisor):
            omega_n_eval(self.rational_pair, Compact(1), 3, [2])

    def test_omega_halves(self):
        """Test ω_2(1) = 1/2."""
        self.assertEqual(omega_n_eval(self.rational_pair, Compact(1), 2, [2]), Compact(Fraction(1, 2)))

    def test_verify_alpha_q(self):
        """Test the identity and extension conditions of α_q."""
        report = verify_alpha_q(self.rational_pair, [2], 4)
        self.assertEqual(report.status, CheckStatus.PASS, report.message)

    def test_alpha_soft(self):
        """Test the soft identity through nat_to_soft."""
        self.assertEqual(alpha_soft_eval(self.soft_pair, Compact(2), 1), Soft(2))

    def test_alpha_soft_violation(self):
        """Test the identity pair misses Compact(1) at Soft(1)."""
        with self.assertRaises(SoftnessViolated):
            alpha_soft_eval(self.identity_pair, Compact(1), 1)

    def test_verify_soft_identity(self):
        """Test the soft identity holds for nat_to_soft and not for the identity."""
        self.assertEqual(verify_soft_identity(self.soft_pair, 4).status, CheckStatus.PASS)
        report = verify_soft_identity(self.identity_pair, 4)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertTrue(report.metadata["precondition"])


class TestExtension(unittest.TestCase):
    """Test gluing maps out of Z and the two-fraction lemma."""

    def setUp(self):
        self.Z = ZModel()
        self.embed = SoftEmbedding(HalfLineModel(), self.Z)

    def test_extension_holds(self):
        """Test 1 ↦ 1 together with the soft embedding extends."""
        report = check_z_extension(Compact(1), self.embed, 6)
        self.assertEqual(report.status, CheckStatus.PASS, report.message)
        self.assertIn("agrees_with_brute", report.metadata)

    def test_extension_fails(self):
        """Test 1 ↦ 2 breaks γ(1) ≤ γ(1+ε)."""
        report = check_z_extension(Compact(2), self.embed, 6)
        self.assertEqual(report.status, CheckStatus.FAIL)
        self.assertIn("epsilon", report.counterexample)

    def test_extension_needs_half_line(self):
        """Test the soft-part map must start from the half line."""
        with self.assertRaises(PreconditionViolated):
            check_z_extension(Compact(1), Identity(self.Z), 4)

    def test_lemma_instance(self):
        """Test witness sets for 1/2 and 2/1 compare through the identity."""
        report = lemma_almunpf_check(Identity(self.Z), 1, 2, 2, 1, Compact(1), Compact(2), 4, Compact(2))
        self.assertEqual(report.status, CheckStatus.PASS, report.message)
        self.assertTrue(report.metadata["way_below_checked"])

    def test_lemma_fraction_order(self):
        """Test the fractions must satisfy k1/n1 < k2/(n2+1)."""
        with self.assertRaises(PreconditionViolated):
            lemma_almunpf_check(Identity(self.Z), 1, 1, 1, 1, Compact(1), Compact(2), 4)


if __name__ == '__main__':
    unittest.main()
