"""Numerical companion to the value distribution of log zeta(sigma + it) for
1/2 < sigma <= 1: the random Euler product model, its moments and tails,
empirical sampling of zeta on vertical lines, rectangle discrepancy and
a-point counts.

Modules are imported on demand; ``zetalab.cli`` is the command-line
entry point.
"""

__version__ = "0.1.0"
