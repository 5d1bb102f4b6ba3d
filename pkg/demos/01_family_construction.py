"""
Building a product-state family and checking its structure
==========================================================

A family lives on P parties with dimensions d_1 <= ... <= d_P whose product
is D = N - 1 for a prime N >= 5.  State j carries a phase ramp at a
party-specific stride, so the N states are cyclically permuted by a local
unitary and any D of them form a basis.
"""

import numpy as np

from usdsep import (
    check_linear_independence,
    kron_all,
    make_instance,
    pairwise_overlaps,
    shift_unitary,
)

# The default splits N - 1 into its full ascending prime factorization.
inst = make_instance(5)
print("N =", inst.n, " dims =", inst.dims, " omitted label =", inst.omit)
print("global dimension D =", inst.total_dim)

# The five states, one per row (four complex amplitudes each).
np.set_printoptions(precision=3, suppress=True, linewidth=100)
print("\nstate amplitudes (rows are j = 1..5):")
print(inst.states)

# Scaled by D/N, the five projectors resolve the identity exactly.
resolution = (inst.total_dim / inst.n) * inst.projectors.sum(axis=0)
print("\ncompleteness residual:",
      np.linalg.norm(resolution - np.eye(inst.total_dim)))

# Every pair overlaps with the same magnitude 1/D; only the phase moves.
overlaps = pairwise_overlaps(inst)
off = overlaps[~np.eye(inst.n, dtype=bool)]
print("pairwise overlap magnitudes: min %.6f  max %.6f  (1/D = %.6f)"
      % (np.abs(off).min(), np.abs(off).max(), 1 / inst.total_dim))

# A product of local diagonal unitaries advances every label by one,
# wrapping N -> 1.  Each party applies its own block; no party needs to
# know what the others hold.
blocks = [shift_unitary(inst, alpha) for alpha in range(inst.party.party_count)]
full = kron_all(blocks)
advanced = full @ inst.state(2)
gap = np.abs(np.abs(advanced.conj() @ inst.state(3)) - 1.0)
print("shift unitary maps state 2 onto state 3 (phase-free gap %.2e)" % gap)

# Any D = 4 of the states are linearly independent; all five cannot be,
# being five vectors in four dimensions.
ok, sigma = check_linear_independence(inst, [2, 3, 4, 5])
print("\nsubset {2,3,4,5}: independent =", ok, " min singular value =", round(sigma, 6))
ok, _ = check_linear_independence(inst, [1, 2, 3, 4, 5])
print("all five:        independent =", ok, " (five vectors, four dimensions)")

# The same construction runs at any prime >= 5 and any ascending
# factorization of N - 1.
for n, dims in [(7, None), (13, (2, 6)), (13, (2, 2, 3))]:
    other = make_instance(n, dims)
    residual = np.linalg.norm(
        (other.total_dim / other.n) * other.projectors.sum(axis=0)
        - np.eye(other.total_dim)
    )
    print(f"N={n} dims={other.dims}: completeness residual {residual:.2e}")
