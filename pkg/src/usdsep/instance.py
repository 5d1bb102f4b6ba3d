"""Roots-of-unity product-state families and their reciprocal bases.

A problem instance fixes a prime N >= 5 together with an ascending
factorization of D = N - 1 into party dimensions.  State j (j = 1..N) is a
product over parties of uniform-amplitude phase states

    psi_j_alpha = d_alpha^(-1/2) * sum_m exp(2 pi i j p_alpha m / N) |m>,

where p_alpha is the product of the dimensions of the earlier parties.  The
exponents p_alpha * m_alpha sweep 0..D-1 exactly once, so globally state j
is the j-th column of a rescaled N-point Fourier matrix restricted to its
first D rows.  Two consequences drive everything downstream: the N
projectors sum to (N/D) * identity, and any D of the N states are linearly
independent (no vanishing subsums of distinct N-th roots of unity for prime
N), so dropping any single state leaves a basis.

State labels j are 1-based throughout because the phases depend on j mod N;
party indices are plain 0-based positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import InvariantError, proj

__all__ = [
    "PartyDims",
    "Instance",
    "ReciprocalSet",
    "DualBasisOmit",
    "is_prime",
    "prime_factors",
    "ascending_factorizations",
    "make_instance",
    "shift_unitary",
    "check_linear_independence",
    "pairwise_overlaps",
    "reciprocal_set",
    "dual_basis_omit",
    "instance_to_dict",
    "instance_from_dict",
]

COMPLETENESS_TOL = 1e-12
RECIPROCITY_TOL = 1e-10
INDEPENDENCE_TOL = 1e-10
CONDITION_LIMIT = 1e8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> tuple[int, ...]:
    """Prime factorization of n in ascending order, with multiplicity."""
    if n < 2:
        raise ValueError("n must be >= 2")
    out = []
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.append(f)
            n //= f
        f += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def ascending_factorizations(d: int, min_factor: int = 2) -> list[tuple[int, ...]]:
    """All ascending factorizations of d into factors >= 2 (any length >= 1)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    out = []
    for f in range(min_factor, d):
        if d % f == 0 and d // f >= f:
            for rest in ascending_factorizations(d // f, f):
                out.append((f,) + rest)
    if d >= min_factor:
        out.append((d,))
    return out


@dataclass(frozen=True)
class PartyDims:
    """Ascending party dimensions plus the derived phase offsets."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("at least one party is required")
        if any(d < 2 for d in dims):
            raise ValueError("every party dimension must be >= 2")
        if list(dims) != sorted(dims):
            raise ValueError("party dimensions must be ascending")

    @property
    def party_count(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def offsets(self) -> tuple[int, ...]:
        offs, acc = [], 1
        for d in self.dims:
            offs.append(acc)
            acc *= d
        return tuple(offs)


@dataclass(frozen=True)
class Instance:
    """One discrimination problem: N product states on a fixed party split.

    Arrays are set read-only at construction; treat the instance as a value.
    """

    n: int
    party: PartyDims
    omit: int
    local_states: tuple[np.ndarray, ...]  # per party: (N, d_alpha), row j-1
    states: np.ndarray  # (N, D), row j-1 holds the global state j
    projectors: np.ndarray  # (N, D, D)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.party.dims

    @property
    def total_dim(self) -> int:
        return self.party.total_dim

    @property
    def retained(self) -> tuple[int, ...]:
        """State labels kept for discrimination (all j except ``omit``)."""
        return tuple(j for j in range(1, self.n + 1) if j != self.omit)

    def state(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.n:
            raise ValueError(f"state label {j} out of range 1..{self.n}")
        return self.states[j - 1]

    def projector(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.n:
            raise ValueError(f"state label {j} out of range 1..{self.n}")
        return self.projectors[j - 1]


@dataclass(frozen=True)
class ReciprocalSet:
    """Normalized reciprocal states for the retained family.

    Row i of ``states`` is the reciprocal state for label ``indices[i]``: it
    is orthogonal to every retained state except its own partner, and the
    partner overlap is real positive.  ``overlaps`` holds q_j, the squared
    partner overlap, which for these families is N / (2 D) for every j.
    """

    n: int
    dims: tuple[int, ...]
    omit: int
    indices: tuple[int, ...]
    states: np.ndarray  # (D, D), row i pairs with indices[i]
    overlaps: np.ndarray  # (D,)

    def state(self, j: int) -> np.ndarray:
        return self.states[self.indices.index(j)]


@dataclass(frozen=True)
class DualBasisOmit:
    """Unnormalized dual vectors for the basis that omits one retained label.

    Dropping state l != omit leaves a basis of the full space; ``vectors``
    holds the dual vectors xi_k for the labels k outside {omit, l}.  They
    satisfy <xi_k|state_j> = delta_jk exactly for retained j, and their
    overlap with the omitted state l is the unimodular -exp(2 pi i (k-l)/N).
    """

    n: int
    omit: int
    omitted: int
    ks: tuple[int, ...]
    vectors: np.ndarray  # (len(ks), D)

    def vector(self, k: int) -> np.ndarray:
        return self.vectors[self.ks.index(k)]


def make_instance(n: int, dims=None, omit: int = 1) -> Instance:
    """Build the product-state family for prime n >= 5.

    Parameters
    ----------
    n : int
        Prime number of states, at least 5.
    dims : sequence of int, optional
        Ascending party dimensions with product n - 1.  Defaults to the
        full prime factorization of n - 1.
    omit : int
        1-based label of the state excluded from discrimination (its
        projector becomes the failure direction).  Default 1.

    Raises
    ------
    ValueError for non-prime n, a bad factorization, or omit out of range.
    """
    n = int(n)
    if n < 5 or not is_prime(n):
        raise ValueError(f"n must be a prime >= 5, got {n}")
    if dims is None:
        dims = prime_factors(n - 1)
    party = PartyDims(tuple(int(d) for d in dims))
    if party.total_dim != n - 1:
        raise ValueError(
            f"party dimensions {party.dims} multiply to {party.total_dim}, expected {n - 1}"
        )
    omit = int(omit)
    if not 1 <= omit <= n:
        raise ValueError(f"omit must be in 1..{n}, got {omit}")

    js = np.arange(1, n + 1)
    local = []
    for d, p in zip(party.dims, party.offsets):
        phases = np.exp(2j * np.pi * np.outer(js, p * np.arange(d)) / n)
        factor = phases / np.sqrt(d)
        factor.setflags(write=False)
        local.append(factor)

    rows = []
    for i in range(n):
        vec = local[0][i]
        for factor in local[1:]:
            vec = np.kron(vec, factor[i])
        rows.append(vec)
    states = np.array(rows)
    projectors = np.einsum("ja,jb->jab", states, states.conj())
    states.setflags(write=False)
    projectors.setflags(write=False)

    inst = Instance(
        n=n,
        party=party,
        omit=omit,
        local_states=tuple(local),
        states=states,
        projectors=projectors,
    )
    d_total = party.total_dim
    resolution = (d_total / n) * projectors.sum(axis=0)
    gap = np.linalg.norm(resolution - np.eye(d_total))
    if gap > COMPLETENESS_TOL:
        raise InvariantError(f"projectors fail to resolve the identity: residual {gap:.3e}")
    norm_gap = float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0)))
    if norm_gap > COMPLETENESS_TOL:
        raise InvariantError(f"states are not unit norm: deviation {norm_gap:.3e}")
    return inst


def shift_unitary(inst: Instance, party: int) -> np.ndarray:
    """Diagonal unitary advancing every local state of one party by one label.

    Applying it across all parties maps global state j to j + 1 (label N
    wraps to 1, phases being periodic in j mod N).
    """
    if not 0 <= party < inst.party.party_count:
        raise ValueError(f"party {party} out of range")
    d = inst.dims[party]
    p = inst.party.offsets[party]
    return np.diag(np.exp(2j * np.pi * p * np.arange(d) / inst.n))


def check_linear_independence(inst: Instance, subset, tol: float = INDEPENDENCE_TOL):
    """Rank test for a subset of state labels.

    Returns (independent, min_singular) where min_singular is the smallest
    singular value of the matrix whose columns are the selected states.  Any
    subset of at most D labels is independent for these families; the full
    set of N never is (N vectors in D = N - 1 dimensions).
    """
    subset = [int(j) for j in subset]
    if not subset:
        raise ValueError("subset must be non-empty")
    labels = sorted(set(subset))
    if len(labels) != len(subset):
        raise ValueError("subset must not contain duplicates")
    if labels[0] < 1 or labels[-1] > inst.n:
        raise ValueError(f"labels must lie in 1..{inst.n}")
    cols = inst.states[[j - 1 for j in labels]].T
    sv = np.linalg.svd(cols, compute_uv=False)
    independent = bool(np.count_nonzero(sv > tol * sv[0]) == len(labels))
    return independent, float(sv[-1])


def pairwise_overlaps(inst: Instance) -> np.ndarray:
    """Gram matrix G[j-1, k-1] = <state_j | state_k>.

    Off-diagonal entries all have magnitude 1/D: the inner product is a
    geometric sum of D distinct N-th roots of unity, one term short of the
    full vanishing sum.
    """
    return inst.states.conj() @ inst.states.T


def reciprocal_set(inst: Instance) -> ReciprocalSet:
    """Reciprocal states of the retained family.

    Inverting the matrix whose columns are the retained states gives, row by
    row, the unique directions orthogonal to all partners; normalizing each
    row yields the reciprocal states.  The partner overlap comes out real
    positive by construction and its square q_j equals N / (2 D) for every
    j, a value this routine verifies before returning.
    """
    retained = inst.retained
    basis = inst.states[[j - 1 for j in retained]].T
    sv = np.linalg.svd(basis, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > CONDITION_LIMIT:
        raise ValueError("retained states are too ill-conditioned to invert")
    dual_rows = np.linalg.inv(basis).conj()
    norms = np.linalg.norm(dual_rows, axis=1)
    phis = dual_rows / norms[:, None]

    cross = phis.conj() @ basis  # entry [i, k] = <phi_i | psi_(retained[k])>
    partner = np.diag(cross).copy()
    off = cross - np.diag(partner)
    worst = float(np.max(np.abs(off)))
    if worst > RECIPROCITY_TOL:
        raise InvariantError(f"reciprocity violated: cross overlap {worst:.3e}")
    if np.any(partner.real <= 0.0) or float(np.max(np.abs(partner.imag))) > RECIPROCITY_TOL:
        raise InvariantError("partner overlaps are not real positive")

    overlaps = np.abs(partner) ** 2
    expected = inst.n / (2.0 * inst.total_dim)
    gap = float(np.max(np.abs(overlaps - expected)))
    if gap > RECIPROCITY_TOL:
        raise InvariantError(
            f"partner overlap squared deviates from N/(2D) by {gap:.3e}"
        )
    phis.setflags(write=False)
    overlaps.setflags(write=False)
    return ReciprocalSet(
        n=inst.n,
        dims=inst.dims,
        omit=inst.omit,
        indices=retained,
        states=phis,
        overlaps=overlaps,
    )


def dual_basis_omit(inst: Instance, drop: int) -> DualBasisOmit:
    """Dual vectors for the basis formed by omitting one retained label.

    ``drop`` must differ from the instance's omitted label: the point of
    these duals is that the originally omitted state stays inside the basis,
    so each dual vector is orthogonal to it while overlapping the dropped
    state with unit magnitude.  Those unimodular overlaps are what pin down
    the pairwise weight bound on discrimination measurements.
    """
    drop = int(drop)
    if not 1 <= drop <= inst.n:
        raise ValueError(f"drop must be in 1..{inst.n}")
    if drop == inst.omit:
        raise ValueError("drop must differ from the instance's omitted label")
    kept = [j for j in range(1, inst.n + 1) if j != drop]
    basis = inst.states[[j - 1 for j in kept]].T
    dual_rows = np.linalg.inv(basis).conj()

    ks = [k for k in kept if k != inst.omit]
    vectors = np.array([dual_rows[kept.index(k)] for k in ks])

    # The duals must reproduce delta overlaps on the kept family and a
    # unimodular overlap -exp(2 pi i (k - drop)/N) with the dropped state.
    cross = vectors.conj() @ inst.states[[j - 1 for j in kept]].T
    target = np.zeros_like(cross)
    for i, k in enumerate(ks):
        target[i, kept.index(k)] = 1.0
    if float(np.max(np.abs(cross - target))) > RECIPROCITY_TOL:
        raise InvariantError("dual basis failed its delta-overlap check")
    with_dropped = vectors.conj() @ inst.states[drop - 1]
    predicted = -np.exp(2j * np.pi * (np.array(ks) - drop) / inst.n)
    if float(np.max(np.abs(with_dropped - predicted))) > RECIPROCITY_TOL:
        raise InvariantError("dual overlap with the dropped state is off")
    vectors.setflags(write=False)
    return DualBasisOmit(n=inst.n, omit=inst.omit, omitted=drop, ks=tuple(ks), vectors=vectors)


def instance_to_dict(inst: Instance) -> dict:
    """JSON-ready mapping with states as nested [re, im] pairs, row per state."""
    states = [
        [[float(z.real), float(z.imag)] for z in row]
        for row in inst.states
    ]
    return {
        "n": inst.n,
        "dims": list(inst.dims),
        "omit": inst.omit,
        "states": states,
    }


def instance_from_dict(payload: dict) -> Instance:
    """Rebuild an instance from its JSON mapping, verifying the stored states.

    The family is reconstructed from (n, dims, omit) and compared against
    the stored arrays; a mismatch beyond 1e-9 means the file was edited or
    corrupted and is rejected rather than trusted.
    """
    try:
        n = int(payload["n"])
        dims = [int(d) for d in payload["dims"]]
        omit = int(payload["omit"])
        raw = payload["states"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance payload: {exc}") from exc
    inst = make_instance(n, dims, omit)
    try:
        stored = np.array([[complex(re, im) for re, im in row] for row in raw])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed state array: {exc}") from exc
    if stored.shape != inst.states.shape:
        raise ValueError(
            f"state array shape {stored.shape} does not match {inst.states.shape}"
        )
    gap = float(np.max(np.abs(stored - inst.states)))
    if gap > 1e-9:
        raise ValueError(f"stored states deviate from the family by {gap:.3e}")
    return inst
