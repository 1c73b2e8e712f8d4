"""hypolab: a desk-scale numerical laboratory for degenerate operators.

Computable ingredients of the hypoellipticity toolbox: averaged-positivity
and stopping-time scans of degenerate weights, ground-state growth probes
for the associated Schrodinger family, barrier-verified elliptic and
parabolic spectral profiles, a dyadic spectral calculus on finite
surrogates, and the explicit interpolation constants tying them together.
"""

__version__ = "0.1.0"
