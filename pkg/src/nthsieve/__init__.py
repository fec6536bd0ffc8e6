"""n-th order Hecke characters over Q(zeta3) and Q(i): symbols, L-functions, large sieve, double Dirichlet series."""

__version__ = "0.1.0"
