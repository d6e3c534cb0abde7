"""Missing mass of functions of discrete distributions.

Submodules: gfunction (the functions g), distributions (known supports and
exact expectations), empirical (occupancy profiles), estimators (Good-Turing
and friends), ustar_engine (moment maxima and variational constants),
tail_bounds (concentration bound families), risk_lab (seeded Monte Carlo),
cli (command-line entry point).
"""

__version__ = "0.1.0"
