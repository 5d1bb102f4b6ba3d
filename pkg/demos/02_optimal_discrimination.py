"""
Unambiguous discrimination of the reciprocal states
===================================================

Drop one label from the family and the remaining D states form a basis.
Their reciprocal (dual) states are what the measurement actually tells
apart: outcome k clicks only when the input was reciprocal state k, so a
conclusive answer is never wrong.  The price is a failure outcome whose
probability the weights control.
"""

import numpy as np

from usdsep import (
    NotPSDError,
    build_measurement,
    failure_probability,
    make_instance,
    optimal_measurement,
    oracle_optimize,
    q_values,
    reciprocal_set,
    verify_pairwise_bound,
)

inst = make_instance(5)
r = reciprocal_set(inst)
print("retained labels:", r.indices)

# Each reciprocal state overlaps only its own partner among the retained
# states, with the universal value |<partner>|^2 = N / (2D).
q_partner, q_cross_route = q_values(inst, r)
print("overlap q per label:", np.round(q_partner, 6), " N/(2D) =", inst.n / (2 * inst.total_dim))
print("independent route agrees:", np.allclose(q_partner, q_cross_route, atol=1e-12))

# The symmetric weights w_j = D/N make the failure operator a rank-1
# multiple of the omitted projector and the failure probability exactly 1/2.
m = optimal_measurement(inst)
rep = failure_probability(m, r)
print("\nsymmetric weights:", m.weights)
print("failure probability: %.15f" % rep.failure_probability)
print("per-input success:", np.round(rep.per_state_success, 12))
print("failure operator rank:", np.linalg.matrix_rank(m.failure_op, tol=1e-10))

# Any lower weights stay valid but fail more often.
lazy = failure_probability(build_measurement(inst, np.full(4, 0.5)), r)
print("\nweights 0.5 everywhere -> failure %.6f (= 11/16)" % lazy.failure_probability)

# Push any weight too high and the failure operator stops being a valid
# measurement element.
try:
    build_measurement(inst, [0.9, 0.9, 0.9, 0.9])
except NotPSDError as exc:
    print("weights 0.9 everywhere ->", exc)

# Validity also forces every pair of weights under 2D/N.
print("\npair bound at the symmetric point:", verify_pairwise_bound(inst, m.weights))
print("pair bound at (1.0, 0.7, 0, 0):   ", verify_pairwise_bound(inst, [1.0, 0.7, 0.0, 0.0]))

# A randomized search over valid weight vectors never beats 1/2.
res = oracle_optimize(inst, samples=100_000, seed=0, refine=True)
print("\nrandom search over %d feasible weight vectors:" % res.feasible_count)
print("  best failure found: %.9f" % res.best_failure)
print("  largest weight sum: %.6f  (cap D^2/N = %.6f)" % (res.max_weight_sum, 16 / 5))

# The same 1/2 holds for every multiparty factorization at other primes.
for n, dims in [(7, None), (11, None), (13, (3, 4))]:
    other = make_instance(n, dims)
    pr = failure_probability(
        optimal_measurement(other), reciprocal_set(other)
    ).failure_probability
    print(f"N={n} dims={other.dims}: failure {pr:.15f}")
