"""Python bindings for the hardycone library.

Spherical-cap eigenvalues, Hardy constants of cones, critical exponents,
divergence verdicts for truncated-potential source solutions and
supersolution certificates.
"""

from _hardycone import (  # noqa: F401
    alpha_minus,
    cap_eigenvalue,
    cap_lambda1,
    certify_supersolution,
    critical_exponent,
    exponent_report,
    hardy_constant,
    rayleigh_min,
    tube_critical_exponent,
    zeta0_divergence,
)

__all__ = [
    "alpha_minus",
    "cap_eigenvalue",
    "cap_lambda1",
    "certify_supersolution",
    "critical_exponent",
    "exponent_report",
    "hardy_constant",
    "rayleigh_min",
    "tube_critical_exponent",
    "zeta0_divergence",
]
