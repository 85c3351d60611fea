"""Exact orbifold Jacobian algebras of invertible polynomials over Q(zeta_24)."""

__version__ = "0.1.0"
