"""Weighted discrimination measurements and their failure probability.

The measurement family has one outcome w_j * P_j per retained label j
(P_j the projector onto state j) plus the failure operator, defined as
whatever is left to complete the identity.  Because the N projectors sum
to (N/D) * identity, the failure operator stays positive semidefinite up
to weights w_j = D/N, and at exactly that point it collapses to the rank-1
operator (D/N) * P_omit: every outcome of the completed measurement is then
proportional to a projector onto a product state, so the measurement is
separable.  The achieved failure probability at the symmetric point is 1/2,
and no positive-semidefinite choice of weights does better.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance, ReciprocalSet
from .numerics import InvariantError

__all__ = [
    "NotPSDError",
    "WeightedMeasurement",
    "UsdReport",
    "OracleResult",
    "build_measurement",
    "optimal_measurement",
    "failure_probability",
    "verify_pairwise_bound",
    "q_values",
    "oracle_optimize",
]

PSD_TOL = 1e-10
CLOSURE_TOL = 1e-12
PAIRWISE_SLACK = 1e-10


class NotPSDError(ValueError):
    """The requested weights drive the failure operator indefinite."""


@dataclass(frozen=True)
class WeightedMeasurement:
    """POVM {w_j P_j for retained j} plus the completing failure operator."""

    n: int
    dims: tuple[int, ...]
    omit: int
    indices: tuple[int, ...]
    weights: np.ndarray  # (D,), aligned with indices
    elements: np.ndarray  # (D, dim, dim)
    failure_op: np.ndarray  # (dim, dim)
    min_eigenvalue: float  # smallest eigenvalue of failure_op

    @property
    def total_dim(self) -> int:
        return self.elements.shape[1]


@dataclass(frozen=True)
class UsdReport:
    """Failure probability of a measurement against the reciprocal inputs."""

    failure_probability: float
    weights: np.ndarray
    q_values: np.ndarray
    per_state_success: np.ndarray  # q_j * w_j, aligned with weights
    optimal: bool
    psd_min_eigenvalue: float


@dataclass(frozen=True)
class OracleResult:
    """Outcome of the randomized search over feasible weight vectors."""

    best_weights: np.ndarray
    best_failure: float
    feasible_count: int
    max_weight_sum: float
    samples: int


def build_measurement(inst: Instance, weights, psd_tol: float = PSD_TOL) -> WeightedMeasurement:
    """Assemble the measurement for one weight per retained label.

    Weights must be nonnegative and aligned with ``inst.retained``.  The
    failure operator identity - sum_j w_j P_j is checked for positivity; its
    smallest eigenvalue below -psd_tol raises NotPSDError, since the family
    is then not a measurement at all.
    """
    retained = inst.retained
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != len(retained):
        raise ValueError(f"expected {len(retained)} weights, got {w.shape[0]}")
    if np.any(w < 0.0):
        raise ValueError("weights must be nonnegative")
    projs = inst.projectors[[j - 1 for j in retained]]
    elements = w[:, None, None] * projs
    failure = np.eye(inst.total_dim, dtype=complex) - elements.sum(axis=0)
    min_eig = float(np.linalg.eigvalsh(failure)[0])
    if min_eig < -psd_tol:
        raise NotPSDError(
            f"failure operator has eigenvalue {min_eig:.3e}; weights are infeasible"
        )
    closure = np.linalg.norm(elements.sum(axis=0) + failure - np.eye(inst.total_dim))
    if closure > CLOSURE_TOL:
        raise InvariantError(f"POVM closure residual {closure:.3e}")
    elements.setflags(write=False)
    failure.setflags(write=False)
    w.setflags(write=False)
    return WeightedMeasurement(
        n=inst.n,
        dims=inst.dims,
        omit=inst.omit,
        indices=retained,
        weights=w,
        elements=elements,
        failure_op=failure,
        min_eigenvalue=min_eig,
    )


def optimal_measurement(inst: Instance) -> WeightedMeasurement:
    """The symmetric measurement with every weight at D/N.

    Its failure operator equals (D/N) * P_omit, so all N completed outcomes
    are proportional to projectors onto product states.
    """
    d = inst.total_dim
    w = np.full(d, d / inst.n)
    return build_measurement(inst, w)


def _check_match(m: WeightedMeasurement, r: ReciprocalSet) -> None:
    if (m.n, m.dims, m.omit) != (r.n, r.dims, r.omit):
        raise ValueError("measurement and reciprocal set belong to different instances")


def failure_probability(m: WeightedMeasurement, r: ReciprocalSet) -> UsdReport:
    """Average failure probability over uniformly likely reciprocal inputs.

    Evaluated two ways that must agree to 1e-12: the Born-rule average
    (1/D) sum_j Tr(failure_op |phi_j><phi_j|) and the closed form
    1 - (1/D) sum_j q_j w_j.  The report carries the Born value.
    """
    _check_match(m, r)
    d = len(r.indices)
    traces = np.einsum("ab,jb,ja->j", m.failure_op, r.states, r.states.conj()).real
    born = float(traces.mean())
    closed = 1.0 - float((r.overlaps * m.weights).sum()) / d
    if abs(born - closed) > 1e-12:
        raise InvariantError(
            f"failure probability mismatch: born {born!r} vs closed form {closed!r}"
        )
    dn = m.total_dim / m.n
    optimal = bool(np.max(np.abs(m.weights - dn)) <= 1e-12)
    return UsdReport(
        failure_probability=born,
        weights=m.weights,
        q_values=r.overlaps,
        per_state_success=r.overlaps * m.weights,
        optimal=optimal,
        psd_min_eigenvalue=m.min_eigenvalue,
    )


def verify_pairwise_bound(inst: Instance, weights, slack: float = PAIRWISE_SLACK) -> bool:
    """True iff w_k + w_l <= 2D/N + slack for every pair of retained labels.

    The bound is forced on any positive-semidefinite weight assignment by
    sandwiching the failure operator with the dual vectors of the bases that
    omit one retained state, so it holds whenever build_measurement accepts
    the weights; it is still worth checking independently because it pins
    the symmetric point as the only one reaching total weight D^2/N.
    """
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != len(inst.retained):
        raise ValueError(f"expected {len(inst.retained)} weights")
    bound = 2.0 * inst.total_dim / inst.n + slack
    pair_sums = w[:, None] + w[None, :]
    np.fill_diagonal(pair_sums, -np.inf)
    return bool(pair_sums.max() <= bound)


def q_values(inst: Instance, r: ReciprocalSet) -> tuple[np.ndarray, np.ndarray]:
    """Squared reciprocal overlaps evaluated two independent ways.

    Returns (partner, with_omitted): |<phi_j|psi_j>|^2 and
    |<phi_j|psi_omit>|^2.  Both must agree with each other and with
    N/(2D) within 1e-10; that coincidence is what makes the failure
    operator's weight budget symmetric between the omitted direction and
    every retained one.
    """
    if (inst.n, inst.dims, inst.omit) != (r.n, r.dims, r.omit):
        raise ValueError("reciprocal set belongs to a different instance")
    partner = np.abs(
        np.einsum("ja,ja->j", r.states.conj(), inst.states[[j - 1 for j in r.indices]])
    ) ** 2
    with_omitted = np.abs(r.states.conj() @ inst.states[inst.omit - 1]) ** 2
    expected = inst.n / (2.0 * inst.total_dim)
    worst = max(
        float(np.max(np.abs(partner - with_omitted))),
        float(np.max(np.abs(partner - expected))),
    )
    if worst > 1e-10:
        raise InvariantError(f"reciprocal overlap symmetry broken by {worst:.3e}")
    return partner, with_omitted


def oracle_optimize(
    inst: Instance,
    samples: int = 100_000,
    seed: int = 0,
    refine: bool = False,
    extra_points=None,
    chunk: int = 10_000,
) -> OracleResult:
    """Randomized search for the lowest feasible failure probability.

    Draws weight vectors uniformly from [0, 2D/N]^D, keeps the positive
    semidefinite ones, and scores them by the closed-form failure
    probability.  ``extra_points`` are appended to the sample set verbatim.
    With ``refine`` the best sample seeds a shrinking Gaussian local search.
    The search is an oracle check, not a solver: the symmetric point is
    provably optimal, so the result must never beat 1/2 beyond rounding.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    d = inst.total_dim
    count = len(inst.retained)
    hi = 2.0 * d / inst.n
    rng = np.random.default_rng(seed)
    pool = rng.uniform(0.0, hi, size=(samples, count))
    if extra_points is not None:
        extra = np.atleast_2d(np.asarray(extra_points, dtype=float))
        if extra.shape[1] != count:
            raise ValueError(f"extra points must have {count} coordinates")
        pool = np.vstack([pool, extra])

    projs = inst.projectors[[j - 1 for j in inst.retained]]
    eye = np.eye(d, dtype=complex)

    best_w = None
    best_pr = np.inf
    feasible_count = 0
    max_weight_sum = -np.inf

    def scan(block: np.ndarray) -> None:
        nonlocal best_w, best_pr, feasible_count, max_weight_sum
        failure_ops = eye[None] - np.einsum("sj,jab->sab", block, projs)
        min_eigs = np.linalg.eigvalsh(failure_ops)[:, 0]
        ok = min_eigs >= -PSD_TOL
        if not ok.any():
            return
        feasible_count += int(ok.sum())
        sums = block[ok].sum(axis=1)
        max_weight_sum = max(max_weight_sum, float(sums.max()))
        prs = 1.0 - inst.n / (2.0 * d * d) * sums
        i = int(np.argmin(prs))
        if prs[i] < best_pr:
            best_pr = float(prs[i])
            best_w = block[ok][i].copy()

    for start in range(0, pool.shape[0], chunk):
        scan(pool[start : start + chunk])
    if best_w is None:
        raise ValueError("no feasible weight vector found; increase samples")

    if refine:
        sigma = 0.05 * hi
        for _ in range(120):
            cloud = rng.normal(best_w, sigma, size=(64, count)).clip(0.0, hi)
            scan(cloud)
            sigma *= 0.93

    return OracleResult(
        best_weights=best_w,
        best_failure=best_pr,
        feasible_count=feasible_count,
        max_weight_sum=max_weight_sum,
        samples=int(pool.shape[0]),
    )
