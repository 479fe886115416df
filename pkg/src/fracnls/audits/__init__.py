"""Numerical audits of the lattice estimates, the Strichartz ratio and nonlinear smoothing."""

from .threads import set_threads  # noqa: F401  (selects the threading layer first)
from .lemmas import audit_freq_lower_bound, audit_phi, audit_sum_lemma, gap_ratio, phi_growth_audit, sum_lemma_scan
from .multipliers import (
    Mn_bruteforce,
    Mn_term,
    audit_Mn_sum,
    audit_smoothing_sum,
    cross_check_Mn_smoothing,
    shell_sums,
    smoothing_term,
)
from .report import AuditReport, Table
from .smoothing import audit_smoothing_trajectory, smoothing_series
from .strichartz import audit_strichartz, l4_spacetime_norm, strichartz_profiles, strichartz_ratio

__all__ = [
    "AuditReport", "Table", "set_threads",
    "audit_phi", "phi_growth_audit", "audit_sum_lemma", "sum_lemma_scan", "audit_freq_lower_bound", "gap_ratio",
    "audit_strichartz", "l4_spacetime_norm", "strichartz_ratio", "strichartz_profiles",
    "audit_Mn_sum", "audit_smoothing_sum", "cross_check_Mn_smoothing", "shell_sums", "Mn_term", "smoothing_term",
    "Mn_bruteforce", "audit_smoothing_trajectory", "smoothing_series",
]
