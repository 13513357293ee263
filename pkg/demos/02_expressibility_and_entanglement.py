"""
Expressibility and entangling capability of circuit families
============================================================

Reproduces a slice of the benchmark sweep: how the two metrics move with
entangler topology and circuit depth. Uses a reduced sampling budget so the
whole script runs in about a minute; the library defaults (200k fidelity
pairs, 1000 bins) give publication-stable numbers.
"""


from vqlab import AnsatzSpec, SamplingConfig
from vqlab.metrics import estimate_entangling_capability, estimate_expressibility

config = SamplingConfig(n_pairs=20_000, n_states=2_000, n_bins=1000, seed=7)

# Expressibility is the KL divergence between the circuit's sampled
# state-fidelity histogram and the analytic Haar distribution: LOWER is
# better. Entangling capability is the mean Meyer-Wallach measure: higher
# means more entangling.

print("single-rotation [x] circuits, 6 qubits")
print(f"{'topology':9s} {'layers':>6s} {'expressibility':>15s} {'entanglement':>13s}")
for topology in ("linear", "circular", "pairwise", "full"):
    for layers in (1, 2):
        spec = AnsatzSpec("C1", 6, layers, "x", topology)
        expr = estimate_expressibility(spec, config).value
        ent = estimate_entangling_capability(spec, config).value
        print(f"{topology:9s} {layers:6d} {expr:15.4f} {ent:13.4f}")

# Two observations the full sweep makes precise: at one layer every
# topology has the same expressibility (the entangler cannot change pair
# fidelities), and the circular topology entangles hardest while the full
# topology, despite using the most CNOTs, entangles least.

# Depth drives expressibility toward the estimator floor; a two-rotation
# circuit saturates within a few layers.
print("\n[xy] circular, increasing depth")
for layers in (1, 2, 4, 6):
    spec = AnsatzSpec("C1", 6, layers, "xy", "circular")
    expr = estimate_expressibility(spec, config).value
    print(f"layers={layers}: expressibility {expr:.2e}")

# Phase-only circuits are the degenerate case: starting from |0...0> an
# [z] circuit never entangles anything.
spec = AnsatzSpec("C1", 6, 3, "z", "circular")
print("\n[z]-only circuit entangling capability:",
      estimate_entangling_capability(spec, config).value)
