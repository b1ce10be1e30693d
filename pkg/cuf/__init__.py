"""
cu-factor: exact Cu-semigroup models, pureness checks and the factorization
machinery of pure morphisms, with a scenario-driven command line.
"""
from cuf.base import CheckReport, CheckStatus, CuError
from cuf.config import Config

__version__ = "0.1.0"

__all__ = ['CheckReport', 'CheckStatus', 'CuError', 'Config', '__version__']
