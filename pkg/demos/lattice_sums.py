"""
Lattice estimates by brute force
================================

The four-frequency gap g(j,k,n) controls how far the cubic interaction is from
resonance. Scan the normalised gap over a box and look at its minimum, then check
that a convolution sum settles down as the truncation grows.
"""

from fracnls.audits import audit_freq_lower_bound, gap_ratio, sum_lemma_scan

# one value by hand: j = k = 1, n = 0
print("r(1,1,0) at alpha=0.75:", gap_ratio(1, 1, 0, 0.75))

# the minimum over a box stays positive and barely moves when the n-range doubles
for alpha in (0.6, 0.75, 0.9):
    rep = audit_freq_lower_bound(alpha, jmax=20, kmax=20, nmax=200)
    lo, hi = rep.extremal("min_ratio"), rep.extremal("min_ratio_doubled")
    print(f"alpha={alpha}: min {lo['value']:.5f} at (j,k,n)=({lo['j']},{lo['k']},{lo['n']}), doubled box {hi['value']:.5f}")

###############################################################################
# Two-weight sums: the sup over |k1|,|k2| <= 200 at two truncations.
# With beta + gamma close to 1 the tail decays slowly and the sup keeps creeping up.

for beta, gamma in ((1.2, 0.9), (2.0, 2.0), (1.01, 0.5)):
    rep = sum_lemma_scan(beta, gamma)
    print(f"beta={beta}, gamma={gamma}:", rep.table("truncation").column("sup_ratio"), rep.notes[0])
