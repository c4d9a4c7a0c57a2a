"""Shared test helpers."""

import math

import pytest


def approx_rel(expected, rel):
    """pytest.approx with a strictly relative tolerance.

    pytest.approx's default abs=1e-12 silently swallows comparisons between
    small-magnitude SI values (momenta ~1e-28 kg m/s and the like), so every
    precision claim on such values must zero it out.
    """
    return pytest.approx(expected, rel=rel, abs=0.0)


# CODATA-2018 oracle constants, written out here independently of the package.
H_EXACT = 6.62607015e-34
HBAR = H_EXACT / (2.0 * math.pi)
C = 2.99792458e8
E_CHARGE = 1.602176634e-19
KB = 1.380649e-23
ALPHA = 7.2973525693e-3
M_E = 9.1093837015e-31
AMU = 1.66053906660e-27
