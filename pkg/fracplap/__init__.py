"""
fracplap - Numerical evaluation of the fractional p-Laplacian

This package evaluates the fractional p-Laplacian (-Delta)_p^s of smooth bounded
functions through four equivalent representations:
- Direct: symmetrized principal-value integral
- Semigroup: heat-semigroup splitting
- Extension: Poisson-kernel extension and y -> 0 limit
- Balakrishnan: resolvent formula

It also provides the normalization constants, a finite-difference operator with
Bessel weights, a spectral-type operator on an interval, Gagliardo seminorms and
a pipeline that cross-checks the representations against each other.
"""

__version__ = "0.1.0"
