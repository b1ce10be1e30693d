"""
Witness sets, the α bimorphism of a factor pair and its rational and soft variants.
"""
from cuf.factorization.alpha import (
    FactorPair,
    OracleValue,
    WitnessChain,
    alpha_eval,
    alpha_eval_oracle,
    build_witness_chain,
    single_map_pair,
    ceiling_bound,
    verify_alpha_bimorphism,
)
from cuf.factorization.extension import check_z_extension, lemma_almunpf_check
from cuf.factorization.mu import MuSpec, mu_contains, mu_sample
from cuf.factorization.rational import alpha_q_eval, omega_n_eval, verify_alpha_q
from cuf.factorization.soft import alpha_soft_eval, verify_soft_identity

__all__ = [
    "MuSpec", "mu_contains", "mu_sample",
    "FactorPair", "WitnessChain", "OracleValue", "build_witness_chain",
    "alpha_eval", "alpha_eval_oracle", "ceiling_bound", "verify_alpha_bimorphism", "single_map_pair",
    "check_z_extension", "lemma_almunpf_check",
    "omega_n_eval", "alpha_q_eval", "verify_alpha_q",
    "alpha_soft_eval", "verify_soft_identity",
]
