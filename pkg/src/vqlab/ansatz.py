"""Circuit families built from rotation layers and CNOT entangler blocks.

Two families are supported. C1 alternates a block of parameterized
single-qubit rotations with a block of CNOTs whose pattern is set by the
topology; C2 is C1 with one extra rotation block appended after the last
entangler. Parameters are consumed layer-major, then axis-major, then
qubit-minor: within a layer, every qubit gets the first axis, then every
qubit gets the second axis, and so on. This layout is part of the public
contract so saved parameter vectors stay portable.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import statevec
from .errors import ConfigurationError

FAMILIES = ("C1", "C2")
TOPOLOGIES = ("linear", "circular", "pairwise", "full")


def entangler_pairs(topology: str, n_qubits: int) -> list[tuple[int, int]]:
    """Ordered (control, target) CNOT pairs of one entangler block.

    linear:   (0,1), (1,2), ..., (n-2,n-1)
    circular: the wrap-around pair (n-1,0) followed by the linear chain
    pairwise: brick pattern on a ring; even-start edges (0,1),(2,3),...
              then odd-start edges (1,2),(3,4),...,(n-1,0)
    full:     all (i,j) with i<j in lexicographic order
    """
    if n_qubits < 2:
        raise ConfigurationError(f"entanglers need at least 2 qubits, got {n_qubits}")
    if topology not in TOPOLOGIES:
        raise ConfigurationError(
            f"topology must be one of {TOPOLOGIES}, got {topology!r}"
        )
    chain = [(i, i + 1) for i in range(n_qubits - 1)]
    if topology == "linear":
        return chain
    if topology == "circular":
        return [(n_qubits - 1, 0)] + chain
    if topology == "pairwise":
        ring = [(i, (i + 1) % n_qubits) for i in range(n_qubits)]
        pairs, seen = [], set()
        for start in (0, 1):
            for c, t in ring[start::2]:
                if frozenset((c, t)) not in seen:
                    seen.add(frozenset((c, t)))
                    pairs.append((c, t))
        return pairs
    return [(i, j) for i in range(n_qubits) for j in range(i + 1, n_qubits)]


@dataclass(frozen=True)
class AnsatzSpec:
    """Immutable description of a circuit: family, size, gates, topology."""

    family: str
    n_qubits: int
    layers: int
    rotations: str  # ordered axis string, e.g. "x" or "xy"
    topology: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.n_qubits < 2:
            raise ConfigurationError(f"n_qubits must be >= 2, got {self.n_qubits}")
        if self.n_qubits > statevec.MAX_QUBITS:
            raise ConfigurationError(f"n_qubits must be <= {statevec.MAX_QUBITS}")
        if self.layers < 1:
            raise ConfigurationError(f"layers must be >= 1, got {self.layers}")
        rot = self.rotations.lower()
        object.__setattr__(self, "rotations", rot)
        if not 1 <= len(rot) <= 3 or any(ax not in statevec.AXES for ax in rot):
            raise ConfigurationError(
                f"rotations must be 1-3 characters from 'xyz', got {self.rotations!r}"
            )
        if self.topology not in TOPOLOGIES:
            raise ConfigurationError(
                f"topology must be one of {TOPOLOGIES}, got {self.topology!r}"
            )

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "qubits": self.n_qubits,
            "layers": self.layers,
            "rotations": self.rotations,
            "topology": self.topology,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnsatzSpec":
        try:
            return cls(
                family=d["family"],
                n_qubits=int(d["qubits"]),
                layers=int(d["layers"]),
                rotations=d["rotations"],
                topology=d["topology"],
            )
        except KeyError as e:
            raise ConfigurationError(f"ansatz spec is missing field {e}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "AnsatzSpec":
        return cls.from_dict(json.loads(text))


def parameter_count(spec: AnsatzSpec) -> int:
    """Number of rotation angles the circuit consumes."""
    blocks = spec.layers + (1 if spec.family == "C2" else 0)
    return spec.n_qubits * len(spec.rotations) * blocks


def _check_params(spec: AnsatzSpec, params) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64)
    expected = parameter_count(spec)
    if params.shape[-1] != expected:
        raise ConfigurationError(
            f"expected {expected} parameters for {spec}, got {params.shape[-1]}"
        )
    return params


def gate_sequence(spec: AnsatzSpec) -> list[tuple]:
    """Flatten the circuit into ('r', axis, qubit, param_index) and
    ('cnot', control, target) steps in application order."""
    pairs = entangler_pairs(spec.topology, spec.n_qubits)
    steps = []
    k = 0

    def rotation_block():
        nonlocal k
        for axis in spec.rotations:
            for q in range(spec.n_qubits):
                steps.append(("r", axis, q, k))
                k += 1

    for _ in range(spec.layers):
        rotation_block()
        steps.extend(("cnot", c, t) for c, t in pairs)
    if spec.family == "C2":
        rotation_block()
    assert k == parameter_count(spec)
    return steps


# Rows per chunk in the batched executor. Small enough that the working set
# stays cache-resident across the whole gate sequence.
_CHUNK_ROWS = 4096


def _run_chunk(plan, cosines, sines, states, n: int):
    """Apply a compiled plan to one chunk in place. states: (rows, 2**n)."""
    rows = states.shape[0]
    scratch = np.empty(rows * (1 << (n - 1)), dtype=np.complex128)
    coef = np.empty((rows, 1, 1), dtype=np.complex128)
    for step in plan:
        if step[0] == "r":
            _, axis, q, k = step
            c = cosines[:, k][:, None, None]
            s = sines[:, k][:, None, None]
            view = states.reshape(rows, 1 << q, 2, -1)
            a0 = view[:, :, 0, :]
            a1 = view[:, :, 1, :]
            tmp = scratch.reshape(a0.shape)
            if axis == "x":
                np.multiply(s, -1j, out=coef)
                np.multiply(coef, a0, out=tmp)  # -i s a0
                a0 *= c
                a0 += coef * a1
                a1 *= c
                a1 += tmp
            elif axis == "y":
                np.multiply(s, a0, out=tmp)  # s a0
                a0 *= c
                a0 -= s * a1
                a1 *= c
                a1 += tmp
            else:
                np.subtract(c, 1j * s, out=coef)
                a0 *= coef
                a1 *= np.conj(coef)
        else:
            states[:] = states[:, step[1]]
    return states


def apply_ansatz_batch(
    spec: AnsatzSpec, params: np.ndarray, initial: np.ndarray
) -> np.ndarray:
    """Run the circuit on a batch: row b uses params[b] on initial[b].

    params: (batch, parameter_count); initial: (batch, 2**n) or a single
    (2**n,) state shared by every row. Rows are processed in fixed-size
    chunks; results are bit-identical to one-row-at-a-time evaluation.
    """
    params = _check_params(spec, np.atleast_2d(params))
    batch = params.shape[0]
    initial = np.asarray(initial, dtype=np.complex128)
    if initial.ndim == 1:
        states = np.broadcast_to(initial, (batch, initial.shape[0])).copy()
    else:
        if initial.shape[0] != batch:
            raise ConfigurationError(
                f"batch size mismatch: {batch} parameter rows, {initial.shape[0]} states"
            )
        states = initial.copy()
    if statevec.num_qubits(states) != spec.n_qubits:
        raise ConfigurationError(
            f"initial state has {statevec.num_qubits(states)} qubits, spec wants {spec.n_qubits}"
        )

    plan = _compile_plan(spec)
    half = 0.5 * params
    cosines = np.cos(half)
    sines = np.sin(half)
    for lo in range(0, batch, _CHUNK_ROWS):
        sl = slice(lo, min(lo + _CHUNK_ROWS, batch))
        _run_chunk(plan, cosines[sl], sines[sl], states[sl], spec.n_qubits)
    return states


def _compile_plan(spec: AnsatzSpec) -> list[tuple]:
    """Compile the gate sequence for the executor.

    Runs of consecutive CNOTs are basis permutations, so each entangler
    block collapses into a single index gather.
    """
    plan = []
    for step in gate_sequence(spec):
        if step[0] == "r":
            plan.append(step)
            continue
        perm = statevec._cnot_permutation(spec.n_qubits, step[1], step[2])
        if plan and plan[-1][0] == "p":
            # first the existing block, then this CNOT: out[x] = mid[perm[x]]
            # with mid[y] = in[prev[y]], hence in[prev[perm[x]]].
            plan[-1] = ("p", plan[-1][1][perm])
        else:
            plan.append(("p", perm))
    return plan


def apply_ansatz(spec: AnsatzSpec, params, initial: np.ndarray) -> np.ndarray:
    """Run the circuit once: rotation angles `params` applied to `initial`."""
    params = _check_params(spec, params)
    if params.ndim != 1:
        raise ConfigurationError("apply_ansatz expects a flat parameter vector")
    return apply_ansatz_batch(spec, params[None, :], np.asarray(initial))[0]
