"""Independent verdict oracle for the golden instances.

Deliberately shares no code with ``simma``: each rule is the textbook
iff-statement for one family, applied with plain exponent arithmetic.
"""
import math


def fractional_stable(alpha, gamma, sigma2=0.0):
    # fractional Levy process is a semimartingale iff sigma2 == 0, gamma < 1/2
    # and int |x|^{1/(1-gamma)} rho(dx) < inf.  For rho = c|x|^{-1-alpha}dx the
    # moment needs q > alpha at the origin and q < alpha at infinity.
    if sigma2 > 0 or gamma >= 0.5:
        return "NotSemimartingale"
    q = 1.0 / (1.0 - gamma)
    return "Semimartingale" if (q > alpha and q < alpha) else "NotSemimartingale"


def fractional_tempered(alpha, gamma, sigma2=0.0):
    # exponential tail: every positive moment is finite at infinity
    if sigma2 > 0 or gamma >= 0.5:
        return "NotSemimartingale"
    q = 1.0 / (1.0 - gamma)
    return "Semimartingale" if q > alpha else "NotSemimartingale"


def step_compound_poisson():
    # X is a compound Poisson process: finite variation, hence a semimartingale
    return "Semimartingale"


def supou_stable_point_mass(alpha, v):
    # supOU with symmetric stable driver: iff int |v|^{alpha-1} m(dv) < inf
    if v >= 0:
        raise ValueError("supOU marks must be negative")
    value = abs(v) ** (alpha - 1.0)
    return "Semimartingale" if math.isfinite(value) else "NotSemimartingale"


def tempered_threshold(alpha):
    return 1.0 - 1.0 / alpha
