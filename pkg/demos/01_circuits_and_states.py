"""
Building circuits and inspecting the states they prepare
========================================================

Walks through the two circuit families, the four entangler topologies, and
the statevector operations underneath them.
"""

import numpy as np

from vqlab import AnsatzSpec, apply_ansatz, entangler_pairs, parameter_count
from vqlab import statevec as sv
from vqlab.metrics import meyer_wallach

# The entangler block of a circuit is a fixed list of CNOTs set by the
# topology. Controls and targets for 6 qubits:
for topology in ("linear", "circular", "pairwise", "full"):
    pairs = entangler_pairs(topology, 6)
    print(f"{topology:9s} ({len(pairs):2d} CNOTs): {pairs}")

# A circuit description is immutable and JSON-serializable.
spec = AnsatzSpec(family="C1", n_qubits=6, layers=2, rotations="xy", topology="circular")
print("\nspec:", spec.to_json())
print("trainable angles:", parameter_count(spec))

# Parameters are consumed layer by layer; inside a layer every qubit gets
# the first axis, then every qubit the second axis. All-zero angles leave
# the register in |0...0> because the CNOT cascade acts trivially there.
zeros = np.zeros(parameter_count(spec))
state = apply_ansatz(spec, zeros, sv.zero_state(6))
print("\nall-zero angles -> probability of |000000>:", sv.probabilities(state)[0])

# Generic angles entangle the register. The Meyer-Wallach measure is 0 for
# product states and 1 when every qubit is maximally mixed.
rng = np.random.default_rng(1)
angles = rng.uniform(0, 2 * np.pi, parameter_count(spec))
state = apply_ansatz(spec, angles, sv.zero_state(6))
print("random angles  -> Meyer-Wallach:", round(meyer_wallach(state), 4))

# The classic sanity check: one half-turn rotation plus one CNOT builds a
# Bell pair, whose qubits are each maximally mixed.
bell = sv.apply_cnot(sv.apply_rotation(sv.zero_state(2), "y", 0, np.pi / 2), 0, 1)
print("\nBell amplitudes:", np.round(bell, 4))
print("Bell Meyer-Wallach:", meyer_wallach(bell))

# Amplitude embedding turns any unit-normalizable vector into a state.
data = np.array([3.0, 4.0])
print("\nembedded [3, 4]:", sv.amplitude_embed(data))
