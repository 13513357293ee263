"""Expressibility, entangling capability, and distribution distances.

Expressibility is the KL divergence between the circuit's sampled
state-fidelity histogram and the analytic fidelity distribution of Haar
random states (lower = more expressive). Entangling capability is the mean
Meyer-Wallach measure over uniformly sampled circuit parameters. Both are
Monte-Carlo estimates, deterministic for a given seed.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import rng, statevec
from .ansatz import AnsatzSpec, apply_ansatz_batch, parameter_count
from .errors import ConfigurationError, UndefinedDivergenceError

EXPRESSIBILITY = "expressibility"
ENTANGLING_CAPABILITY = "entangling_capability"

# Angles are drawn uniformly from [0, 2*pi). With half-angle rotations the
# gates have period 4*pi, but the induced states already cover their full
# range over one turn.
ANGLE_RANGE = 2.0 * math.pi


@dataclass(frozen=True)
class SamplingConfig:
    """Monte-Carlo settings for the two metric estimators.

    The expressibility plug-in estimator has a positive floor even for a
    perfectly Haar-like circuit (finite-sample artifact, roughly linear in
    n_bins / n_pairs). The defaults put that floor near 2e-4 so saturated
    deep circuits remain resolvable, while 1000 bins keep enough histogram
    resolution to separate shallow circuits.
    """

    n_pairs: int = 200_000
    n_states: int = 5000
    n_bins: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n_bins < 2:
            raise ConfigurationError(f"n_bins must be >= 2, got {self.n_bins}")
        if self.n_pairs < 100:
            raise ConfigurationError(f"n_pairs must be >= 100, got {self.n_pairs}")
        if self.n_states < 100:
            raise ConfigurationError(f"n_states must be >= 100, got {self.n_states}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class MetricEstimate:
    """A sampled metric value plus everything needed to reproduce it."""

    metric: str
    value: float
    spec: AnsatzSpec
    config: SamplingConfig

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "value": self.value,
            "spec": self.spec.to_dict(),
            "n_pairs": self.config.n_pairs,
            "n_states": self.config.n_states,
            "n_bins": self.config.n_bins,
            "seed": self.config.seed,
        }


def haar_bin_probability(bin_index: int, n_bins: int, dim: int) -> float:
    """Probability mass of one uniform fidelity bin under Haar sampling.

    The fidelity density of Haar random states in dimension N is
    (N-1)(1-F)^(N-2), so bin [a, b) carries (1-a)^(N-1) - (1-b)^(N-1).
    """
    if not 0 <= bin_index < n_bins:
        raise ConfigurationError(f"bin_index {bin_index} out of range for {n_bins} bins")
    if dim < 2:
        raise ConfigurationError(f"dim must be >= 2, got {dim}")
    a = bin_index / n_bins
    b = (bin_index + 1) / n_bins
    return (1.0 - a) ** (dim - 1) - (1.0 - b) ** (dim - 1)


def haar_bin_probabilities(n_bins: int, dim: int) -> np.ndarray:
    """All n_bins Haar bin masses; sums to 1 exactly (telescoping)."""
    edges = np.arange(n_bins + 1) / n_bins
    tail = (1.0 - edges) ** (dim - 1)
    return tail[:-1] - tail[1:]


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum(p * ln(p/q)) in nats.

    Zero-mass p bins contribute nothing; p mass on a zero-mass q bin is an
    error.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ConfigurationError(f"histogram lengths differ: {p.shape} vs {q.shape}")
    support = p > 0
    if np.any(q[support] == 0):
        raise UndefinedDivergenceError(
            "p has mass on a bin where q is zero; KL divergence is undefined"
        )
    return float(np.sum(p[support] * np.log(p[support] / q[support])))


def hellinger(p, q) -> float:
    """Hellinger distance sqrt(1 - sum(sqrt(p*q))) between distributions."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ConfigurationError(f"distribution lengths differ: {p.shape} vs {q.shape}")
    for name, dist in (("p", p), ("q", q)):
        total = dist.sum()
        if abs(total - 1.0) > 1e-6:
            raise ConfigurationError(f"{name} sums to {total:.8f}, not 1")
    bc = np.sum(np.sqrt(p * q))
    return float(np.sqrt(min(max(1.0 - bc, 0.0), 1.0)))


def meyer_wallach(state: np.ndarray) -> float:
    """Meyer-Wallach measure Q = 2 * (1 - mean_k Tr[rho_k^2]).

    0 for product states, 1 when every single-qubit reduction is maximally
    mixed; invariant under local unitaries.
    """
    state = np.asarray(state)
    n = statevec.num_qubits(state)
    purities = [statevec.single_qubit_purity(state, k) for k in range(n)]
    return 2.0 * (1.0 - float(np.mean(purities)))


def _meyer_wallach_batch(states: np.ndarray) -> np.ndarray:
    n = statevec.num_qubits(states)
    purity_sum = np.zeros(states.shape[0])
    for k in range(n):
        purity_sum += statevec.single_qubit_purity_batch(states, k)
    return 2.0 * (1.0 - purity_sum / n)


def estimate_expressibility(spec: AnsatzSpec, config: SamplingConfig) -> MetricEstimate:
    """Sampled KL divergence of the circuit's fidelity histogram vs. Haar.

    Draws n_pairs parameter pairs uniformly, runs the circuit on |0...0>,
    histograms the pairwise fidelities into n_bins uniform bins on [0, 1],
    and compares against the analytic Haar bin masses.
    """
    p = parameter_count(spec)
    thetas = rng.stream(config.seed, rng.EXPRESSIBILITY_THETA).uniform(
        0.0, ANGLE_RANGE, size=(config.n_pairs, p)
    )
    phis = rng.stream(config.seed, rng.EXPRESSIBILITY_PHI).uniform(
        0.0, ANGLE_RANGE, size=(config.n_pairs, p)
    )
    base = statevec.zero_state(spec.n_qubits)
    states_a = apply_ansatz_batch(spec, thetas, base)
    states_b = apply_ansatz_batch(spec, phis, base)
    fids = statevec.fidelity_batch(states_a, states_b)

    counts, _ = np.histogram(fids, bins=config.n_bins, range=(0.0, 1.0))
    observed = counts / config.n_pairs
    expected = haar_bin_probabilities(config.n_bins, 1 << spec.n_qubits)
    value = kl_divergence(observed, expected)
    return MetricEstimate(EXPRESSIBILITY, value, spec, config)


def estimate_entangling_capability(
    spec: AnsatzSpec, config: SamplingConfig
) -> MetricEstimate:
    """Mean Meyer-Wallach measure over uniformly sampled parameters."""
    p = parameter_count(spec)
    thetas = rng.stream(config.seed, rng.ENTANGLEMENT).uniform(
        0.0, ANGLE_RANGE, size=(config.n_states, p)
    )
    base = statevec.zero_state(spec.n_qubits)
    states = apply_ansatz_batch(spec, thetas, base)
    value = float(np.mean(_meyer_wallach_batch(states)))
    return MetricEstimate(ENTANGLING_CAPABILITY, value, spec, config)
