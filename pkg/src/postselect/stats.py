"""Forward statistics of a witness and diversity/entropy functionals.

Inner product convention throughout: <phi|psi> = sum_k conj(phi_k) psi_k,
and in <phi|A|psi> the operator A acts to the right on psi.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    EPS_PROB,
    DiversityProfile,
    GeneralizedWitness,
    OutcomeDistribution,
    ProjectiveWitness,
    ScenarioTriple,
)
from .errors import DegeneratePostselection


def transition_amplitudes(w: ProjectiveWitness | GeneralizedWitness) -> np.ndarray:
    """Per-outcome amplitudes <phi|V_k|psi> (V_k = Pi_k in the projective case)."""
    ops = w.projectors if isinstance(w, ProjectiveWitness) else w.kraus
    return np.array([np.vdot(w.phi, v @ w.psi) for v in ops])


def evaluate_witness(w: ProjectiveWitness | GeneralizedWitness) -> ScenarioTriple:
    """Postselected statistics of a witness: (T, S, P).

    T = |<phi|psi>|^2, S = sum_k |<phi|V_k|psi>|^2, P(k) = |<phi|V_k|psi>|^2 / S.
    Raises DegeneratePostselection when S is numerically zero (empty ensemble).
    """
    amps = transition_amplitudes(w)
    weights = np.abs(amps) ** 2
    s = float(weights.sum())
    if s <= EPS_PROB:
        raise DegeneratePostselection(f"success probability {s!r} is numerically zero")
    t = min(1.0, float(abs(np.vdot(w.phi, w.psi)) ** 2))
    probs = weights / s
    probs /= probs.sum()
    return ScenarioTriple(t, min(1.0, s), OutcomeDistribution(probs))


def diversity(dist: OutcomeDistribution, q: float) -> float:
    """Diversity index of order q: (sum_k P(k)^q)^(1/(1-q)).

    q = 0 gives the support cardinality, q = 1 the exponentiated Shannon
    entropy (the q -> 1 limit, computed directly with 0 log 0 := 0), and
    q = inf gives 1 / max_k P(k).  Zero-probability entries never contribute.
    """
    if q < 0:
        raise ValueError(f"order q = {q!r} must be >= 0")
    probs = dist.probs
    if q == 0:
        return float(sum(1 for p in probs if p > 0))
    if q == 1:
        return math.exp(-sum(p * math.log(p) for p in probs if p > 0))
    if math.isinf(q):
        return 1.0 / max(probs)
    return sum(p**q for p in probs if p > 0) ** (1.0 / (1.0 - q))


def renyi_entropy(dist: OutcomeDistribution, q: float) -> float:
    """Renyi entropy of order q (natural log), as log of the diversity index."""
    return math.log(diversity(dist, q))


def diversity_profile(dist: OutcomeDistribution) -> DiversityProfile:
    """The (D_1/2, D_inf) pair, with their logarithms."""
    d_half = diversity(dist, 0.5)
    d_inf = diversity(dist, math.inf)
    return DiversityProfile(
        d_half=d_half, d_inf=d_inf, h_half=math.log(d_half), h_inf=math.log(d_inf)
    )
