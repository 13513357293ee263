"""Dense statevector simulation of small qubit registers.

A state is a complex128 ndarray of length 2**n. Qubit 0 is the most
significant bit of the basis index, so for two qubits |10> sits at index 2.
All operations are functional: they return a fresh array and never mutate
their input.

Batched variants (`*_batch`) act on a (batch, 2**n) array where each row is
an independent state, optionally with per-row rotation angles. The
single-state operations are thin wrappers over the batched kernels.
"""

import numpy as np

from .errors import ConfigurationError, DegenerateInputError

MAX_QUBITS = 16

AXES = ("x", "y", "z")


def num_qubits(state: np.ndarray) -> int:
    """Number of qubits of a state (or batch of states)."""
    dim = state.shape[-1]
    n = dim.bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ConfigurationError(f"state length {dim} is not a power of two")
    return n


def zero_state(n_qubits: int) -> np.ndarray:
    """|0...0> on n_qubits qubits."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(
            f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}"
        )
    state = np.zeros(1 << n_qubits, dtype=np.complex128)
    state[0] = 1.0
    return state


def _check_qubit(qubit: int, n: int) -> int:
    qubit = int(qubit)
    if not 0 <= qubit < n:
        raise IndexError(f"qubit index {qubit} out of range for {n} qubits")
    return qubit


def _check_axis(axis: str) -> str:
    ax = str(axis).lower()
    if ax not in AXES:
        raise ConfigurationError(f"rotation axis must be one of {AXES}, got {axis!r}")
    return ax


def apply_rotation_batch(
    states: np.ndarray, axis: str, qubit: int, angles
) -> np.ndarray:
    """Apply exp(-i*angle*sigma_axis/2) to one qubit of every row.

    states: (batch, 2**n); angles: scalar or (batch,) radians.
    """
    ax = _check_axis(axis)
    n = num_qubits(states)
    q = _check_qubit(qubit, n)
    batch = states.shape[0]
    angles = np.broadcast_to(np.asarray(angles, dtype=np.float64), (batch,))

    view = states.reshape(batch, 1 << q, 2, -1)
    a0 = view[:, :, 0, :]
    a1 = view[:, :, 1, :]
    c = np.cos(0.5 * angles)[:, None, None]
    s = np.sin(0.5 * angles)[:, None, None]

    out = np.empty_like(view)
    if ax == "x":
        out[:, :, 0, :] = c * a0 - 1j * s * a1
        out[:, :, 1, :] = c * a1 - 1j * s * a0
    elif ax == "y":
        out[:, :, 0, :] = c * a0 - s * a1
        out[:, :, 1, :] = c * a1 + s * a0
    else:
        out[:, :, 0, :] = (c - 1j * s) * a0
        out[:, :, 1, :] = (c + 1j * s) * a1
    return out.reshape(batch, -1)


def apply_rotation(state: np.ndarray, axis: str, qubit: int, angle: float) -> np.ndarray:
    """Single-qubit rotation R_axis(angle) = exp(-i*angle*sigma_axis/2)."""
    state = np.asarray(state, dtype=np.complex128)
    return apply_rotation_batch(state[None, :], axis, qubit, float(angle))[0]


def _cnot_permutation(n: int, control: int, target: int) -> np.ndarray:
    cbit = 1 << (n - 1 - control)
    tbit = 1 << (n - 1 - target)
    idx = np.arange(1 << n)
    return np.where(idx & cbit, idx ^ tbit, idx)


def apply_cnot_batch(states: np.ndarray, control: int, target: int) -> np.ndarray:
    """CNOT on every row of a (batch, 2**n) array."""
    n = num_qubits(states)
    c = _check_qubit(control, n)
    t = _check_qubit(target, n)
    if c == t:
        raise ConfigurationError("CNOT control and target must differ")
    # The basis permutation is an involution, so gather == scatter here.
    return states[:, _cnot_permutation(n, c, t)]


def apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    """CNOT: flip the target bit on basis states whose control bit is 1."""
    state = np.asarray(state, dtype=np.complex128)
    return apply_cnot_batch(state[None, :], control, target)[0]


def amplitude_embed(data) -> np.ndarray:
    """Encode a real vector of power-of-two length as state amplitudes."""
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 1:
        raise ConfigurationError("amplitude_embed expects a 1-D vector")
    num_qubits(data)  # power-of-two check
    norm = np.linalg.norm(data)
    if norm <= 1e-12:
        raise DegenerateInputError(f"cannot embed a vector of norm {norm:g}")
    return (data / norm).astype(np.complex128)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 of two pure states of equal size."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ConfigurationError(f"state dimensions differ: {a.shape} vs {b.shape}")
    f = abs(np.vdot(a, b)) ** 2
    return float(min(max(f, 0.0), 1.0))


def fidelity_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise |<a|b>|^2 for two (batch, dim) arrays."""
    if a.shape != b.shape:
        raise ConfigurationError(f"state dimensions differ: {a.shape} vs {b.shape}")
    overlaps = np.einsum("bi,bi->b", a.conj(), b)
    return np.clip(np.abs(overlaps) ** 2, 0.0, 1.0)


def probabilities(state: np.ndarray) -> np.ndarray:
    """Outcome probabilities |amplitude|^2 over all 2**n basis states."""
    state = np.asarray(state)
    num_qubits(state)
    return np.abs(state) ** 2


def marginal_probabilities(state: np.ndarray, qubits) -> np.ndarray:
    """Marginal outcome distribution over an ordered subset of qubits.

    The first listed qubit is the most significant bit of the marginal
    outcome index.
    """
    state = np.asarray(state)
    n = num_qubits(state)
    qubits = [_check_qubit(q, n) for q in qubits]
    if not qubits:
        raise ConfigurationError("qubit subset must be nonempty")
    if len(set(qubits)) != len(qubits):
        raise ConfigurationError(f"duplicate qubit indices in {qubits}")
    p = probabilities(state).reshape((2,) * n)
    rest = [q for q in range(n) if q not in qubits]
    p = p.transpose(qubits + rest)
    return p.reshape(1 << len(qubits), -1).sum(axis=1)


def single_qubit_purity(state: np.ndarray, k: int) -> float:
    """Tr[rho_k^2] of the reduced density matrix of qubit k."""
    state = np.asarray(state)
    n = num_qubits(state)
    return float(single_qubit_purity_batch(state[None, :], k)[0])


def single_qubit_purity_batch(states: np.ndarray, k: int) -> np.ndarray:
    """Row-wise Tr[rho_k^2] for a (batch, 2**n) array."""
    n = num_qubits(states)
    k = _check_qubit(k, n)
    batch = states.shape[0]
    view = states.reshape(batch, 1 << k, 2, -1)
    rho = np.einsum("bpaq,bpcq->bac", view, view.conj())
    # Hermitian, so Tr[rho^2] = sum |rho_ij|^2.
    return np.einsum("bac,bac->b", rho, rho.conj()).real
