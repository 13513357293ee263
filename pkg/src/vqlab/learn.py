"""Training machinery for the two benchmark tasks.

Gradients flow through circuit outcome probabilities via the parameter-shift
rule, which is exact for the rotation gates used here. Optimization is plain
bias-corrected Adam. The adversarial distribution trainer pits the quantum
generator against a tiny dense discriminator; the direct trainer minimizes
squared Hellinger distance and serves as a non-adversarial sanity ceiling.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import rng, statevec
from .ansatz import AnsatzSpec, apply_ansatz, apply_ansatz_batch, parameter_count
from .errors import ConfigurationError, TrainingDivergedError

SHIFT = 0.5 * math.pi  # parameter-shift offset, exact for half-angle rotations
_CLIP = 1e-12


# ---------------------------------------------------------------------------
# Adam


@dataclass(frozen=True)
class AdamState:
    """Optimizer state; one instance per trained parameter vector."""

    step: int
    first_moment: np.ndarray
    second_moment: np.ndarray
    learning_rate: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def fresh(cls, n_params: int, learning_rate: float = 0.01) -> "AdamState":
        return cls(0, np.zeros(n_params), np.zeros(n_params), learning_rate)


def adam_step(state: AdamState, params: np.ndarray, grads) -> tuple[AdamState, np.ndarray]:
    """One bias-corrected Adam update. Returns (new state, new params)."""
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if grads.shape != params.shape or state.first_moment.shape != params.shape:
        raise ConfigurationError(
            f"shape mismatch: params {params.shape}, grads {grads.shape}, "
            f"moments {state.first_moment.shape}"
        )
    if not np.all(np.isfinite(grads)):
        raise TrainingDivergedError("non-finite gradient component")
    t = state.step + 1
    m = state.beta1 * state.first_moment + (1.0 - state.beta1) * grads
    v = state.beta2 * state.second_moment + (1.0 - state.beta2) * grads**2
    m_hat = m / (1.0 - state.beta1**t)
    v_hat = v / (1.0 - state.beta2**t)
    new_params = params - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
    new_state = AdamState(
        t, m, v, state.learning_rate, state.beta1, state.beta2, state.epsilon
    )
    return new_state, new_params


# ---------------------------------------------------------------------------
# Parameter-shift gradients


def probability_jacobian(spec: AnsatzSpec, params, initial: np.ndarray) -> np.ndarray:
    """d p(x) / d theta_j as a (2**n, n_params) matrix.

    Uses the parameter-shift rule (p(theta + pi/2) - p(theta - pi/2)) / 2,
    exact for the rotation gates of the circuit. Columns sum to zero since
    probabilities are conserved.
    """
    initial = np.asarray(initial, dtype=np.complex128)
    return _probability_jacobian_batch(spec, params, initial[None, :])[0]


def _probability_jacobian_batch(
    spec: AnsatzSpec, params, initials: np.ndarray
) -> np.ndarray:
    """Jacobians for a batch of initial states sharing one parameter vector.

    initials: (batch, 2**n). Returns (batch, 2**n, n_params).
    """
    params = np.asarray(params, dtype=np.float64)
    p = parameter_count(spec)
    if params.shape != (p,):
        raise ConfigurationError(f"expected {p} parameters, got shape {params.shape}")
    batch, dim = initials.shape

    shifted = np.tile(params, (2 * p, 1))
    for j in range(p):
        shifted[2 * j, j] += SHIFT
        shifted[2 * j + 1, j] -= SHIFT
    # Row layout: (shift row, batch) pairs, so each shifted parameter vector
    # runs over all initial states.
    mega_params = np.repeat(shifted, batch, axis=0)
    mega_init = np.tile(initials, (2 * p, 1))
    states = apply_ansatz_batch(spec, mega_params, mega_init)
    probs = (np.abs(states) ** 2).reshape(p, 2, batch, dim)
    jac = 0.5 * (probs[:, 0] - probs[:, 1])  # (p, batch, dim)
    return np.ascontiguousarray(jac.transpose(1, 2, 0))


# ---------------------------------------------------------------------------
# Discriminator: dense net 1 -> 32 (leaky rectifier) -> 1 (logistic)

HIDDEN = 32
LEAK = 0.01
N_DISC_WEIGHTS = 3 * HIDDEN + 1  # w1, b1, w2 stacked, then b2


class Discriminator:
    """Scalar-input binary classifier used as the adversarial critic.

    All weights live in one flat vector so the optimizer can treat the
    network like any other parameter vector.
    """

    def __init__(self, weights):
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (N_DISC_WEIGHTS,):
            raise ConfigurationError(
                f"discriminator expects {N_DISC_WEIGHTS} weights, got {weights.shape}"
            )
        if not np.all(np.isfinite(weights)):
            raise TrainingDivergedError("non-finite discriminator weight")
        self.weights = weights

    @classmethod
    def initialized(cls, generator: np.random.Generator, scale: float = 0.1):
        return cls(generator.normal(0.0, scale, size=N_DISC_WEIGHTS))

    @property
    def w1(self):
        return self.weights[:HIDDEN]

    @property
    def b1(self):
        return self.weights[HIDDEN : 2 * HIDDEN]

    @property
    def w2(self):
        return self.weights[2 * HIDDEN : 3 * HIDDEN]

    @property
    def b2(self):
        return self.weights[-1]


def _discriminator_forward_batch(d: Discriminator, x: np.ndarray) -> np.ndarray:
    z1 = np.outer(x, d.w1) + d.b1
    h = np.where(z1 > 0, z1, LEAK * z1)
    z2 = h @ d.w2 + d.b2
    return 1.0 / (1.0 + np.exp(-z2))


def discriminator_forward(d: Discriminator, x: float) -> float:
    """Network output in (0, 1) for one scalar input."""
    return float(_discriminator_forward_batch(d, np.atleast_1d(float(x)))[0])


def discriminator_loss(d: Discriminator, batch, labels) -> float:
    """Mean binary cross-entropy of the batch."""
    y = np.clip(_discriminator_forward_batch(d, np.asarray(batch, float)), _CLIP, 1 - _CLIP)
    labels = np.asarray(labels, dtype=np.float64)
    return float(-np.mean(labels * np.log(y) + (1 - labels) * np.log(1 - y)))


def discriminator_gradients(d: Discriminator, batch, labels) -> np.ndarray:
    """Gradient of the mean binary cross-entropy w.r.t. the flat weights."""
    x = np.asarray(batch, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    z1 = np.outer(x, d.w1) + d.b1
    h = np.where(z1 > 0, z1, LEAK * z1)
    y = 1.0 / (1.0 + np.exp(-(h @ d.w2 + d.b2)))

    dz2 = (y - labels) / len(x)
    dw2 = h.T @ dz2
    db2 = dz2.sum()
    dz1 = np.outer(dz2, d.w2) * np.where(z1 > 0, 1.0, LEAK)
    dw1 = dz1.T @ x
    db1 = dz1.sum(axis=0)
    return np.concatenate([dw1, db1, dw2, [db2]])


# ---------------------------------------------------------------------------
# Training reports


@dataclass(frozen=True)
class TrainReport:
    """Outcome of one training run, JSON-serializable for the CLI."""

    task: str
    spec: AnsatzSpec
    seed: int
    epochs: int
    losses: list[float] = field(default_factory=list)
    final_metric: float = 0.0
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "spec": self.spec.to_dict(),
            "seed": self.seed,
            "epochs": self.epochs,
            "losses": list(self.losses),
            "final_metric": self.final_metric,
            "wall_time_s": self.wall_time_s,
        }


def _check_target(spec: AnsatzSpec, target) -> np.ndarray:
    target = np.asarray(target, dtype=np.float64)
    dim = 1 << spec.n_qubits
    if target.shape != (dim,):
        raise ConfigurationError(
            f"target must have {dim} outcomes for {spec.n_qubits} qubits, got {target.shape}"
        )
    if np.any(target < 0) or abs(target.sum() - 1.0) > 1e-6:
        raise ConfigurationError("target must be a probability distribution")
    return target


def _hellinger(p, q):
    bc = np.sum(np.sqrt(np.maximum(p, 0.0) * np.maximum(q, 0.0)))
    return float(np.sqrt(min(max(1.0 - bc, 0.0), 1.0)))


# ---------------------------------------------------------------------------
# Task: distribution generation, adversarial


def train_distribution_qgan(
    spec: AnsatzSpec,
    target,
    epochs: int = 40,
    batch_size: int = 32,
    lr: float = 0.01,
    seed: int = 0,
    batches_per_epoch: int = 25,
    discriminator_steps: int = 5,
    initial_params=None,
) -> TrainReport:
    """Adversarial training of the circuit against a dense discriminator.

    Each discriminator batch is one Adam step on cross-entropy separating
    `batch_size` outcome samples of the target (label 1) from `batch_size`
    samples of the generator's exact output distribution (label 0), with
    outcomes encoded as index / (2**n - 1). After `discriminator_steps`
    such batches the generator takes one Adam step on the non-saturating
    loss -sum_x p(x) ln D(x), whose gradient runs through the probability
    Jacobian. The k-to-1 schedule keeps the critic ahead of the generator;
    with a 1-to-1 schedule the exact-probability generator collapses onto
    the critic's single best outcome. The generator itself is evaluated
    exactly (no shot noise). Reports the final Hellinger distance to the
    target.
    """
    target = _check_target(spec, target)
    dim = target.shape[0]
    p = parameter_count(spec)
    t0 = time.perf_counter()

    if initial_params is None:
        params = rng.stream(seed, rng.QGAN_INIT).uniform(0.0, 2.0 * math.pi, p)
    else:
        params = np.asarray(initial_params, dtype=np.float64).copy()
        if params.shape != (p,):
            raise ConfigurationError(f"initial_params must have shape ({p},)")
    disc = Discriminator.initialized(rng.stream(seed, rng.DISCRIMINATOR_INIT))
    sampler = rng.stream(seed, rng.QGAN_SAMPLING)
    g_state = AdamState.fresh(p, lr)
    d_state = AdamState.fresh(N_DISC_WEIGHTS, lr)
    encoded = np.arange(dim) / (dim - 1)
    base = statevec.zero_state(spec.n_qubits)

    losses = []
    for _ in range(epochs):
        epoch_loss = 0.0
        for _ in range(batches_per_epoch):
            probs = statevec.probabilities(apply_ansatz(spec, params, base))
            probs = probs / probs.sum()

            for _ in range(discriminator_steps):
                real = sampler.choice(dim, size=batch_size, p=target)
                fake = sampler.choice(dim, size=batch_size, p=probs)
                batch = np.concatenate([real, fake]) / (dim - 1)
                labels = np.concatenate([np.ones(batch_size), np.zeros(batch_size)])
                d_state, new_w = adam_step(
                    d_state, disc.weights, discriminator_gradients(disc, batch, labels)
                )
                disc = Discriminator(new_w)

            jac = probability_jacobian(spec, params, base)
            log_d = np.log(np.clip(_discriminator_forward_batch(disc, encoded), _CLIP, None))
            g_loss = -float(probs @ log_d)
            if not math.isfinite(g_loss):
                raise TrainingDivergedError(f"generator loss became {g_loss}")
            g_state, params = adam_step(g_state, params, -(jac.T @ log_d))
            epoch_loss += g_loss
        losses.append(epoch_loss / batches_per_epoch)

    final = statevec.probabilities(apply_ansatz(spec, params, base))
    return TrainReport(
        task="distribution_qgan",
        spec=spec,
        seed=seed,
        epochs=epochs,
        losses=losses,
        final_metric=_hellinger(target, final),
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Task: distribution generation, direct minimization baseline


def train_distribution_direct(
    spec: AnsatzSpec,
    target,
    epochs: int = 200,
    lr: float = 0.01,
    seed: int = 0,
    initial_params=None,
) -> TrainReport:
    """Minimize squared Hellinger distance to the target directly.

    One full-gradient Adam step per epoch. Shares its initialization stream
    with the adversarial trainer so runs on the same seed start from the
    same circuit.
    """
    target = _check_target(spec, target)
    p = parameter_count(spec)
    t0 = time.perf_counter()

    if initial_params is None:
        params = rng.stream(seed, rng.QGAN_INIT).uniform(0.0, 2.0 * math.pi, p)
    else:
        params = np.asarray(initial_params, dtype=np.float64).copy()
        if params.shape != (p,):
            raise ConfigurationError(f"initial_params must have shape ({p},)")
    state = AdamState.fresh(p, lr)
    base = statevec.zero_state(spec.n_qubits)
    sqrt_target = np.sqrt(target)

    losses = []
    for _ in range(epochs):
        probs = statevec.probabilities(apply_ansatz(spec, params, base))
        loss = 1.0 - float(np.sum(sqrt_target * np.sqrt(probs)))
        if not math.isfinite(loss):
            raise TrainingDivergedError(f"loss became {loss}")
        losses.append(loss)
        jac = probability_jacobian(spec, params, base)
        ratio = sqrt_target / np.sqrt(np.maximum(probs, 1e-12))
        state, params = adam_step(state, params, -0.5 * (jac.T @ ratio))

    final = statevec.probabilities(apply_ansatz(spec, params, base))
    return TrainReport(
        task="distribution_direct",
        spec=spec,
        seed=seed,
        epochs=epochs,
        losses=losses,
        final_metric=_hellinger(target, final),
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Task: classification


def _as_arrays(dataset):
    vectors, labels = [], []
    for item in dataset:
        if hasattr(item, "amplitudes"):
            vectors.append(item.amplitudes)
            labels.append(item.label)
        else:
            vec, label = item
            vectors.append(vec)
            labels.append(label)
    return np.asarray(vectors, dtype=np.float64), np.asarray(labels, dtype=np.int64)


def classifier_scores(
    spec: AnsatzSpec, params, vectors: np.ndarray, n_classes: int
) -> np.ndarray:
    """Class scores for a batch of unit-norm input vectors.

    Forward pass: the input is taken as state amplitudes, the circuit runs,
    the outcome distribution is marginalized over the first
    ceil(log2 n_classes) qubits, and the first n_classes entries are kept
    and renormalized.
    """
    params = np.asarray(params, dtype=np.float64)
    batch = vectors.shape[0]
    m = max(1, math.ceil(math.log2(n_classes)))
    states = apply_ansatz_batch(
        spec, np.broadcast_to(params, (batch, params.shape[0])), vectors.astype(np.complex128)
    )
    probs = np.abs(states) ** 2
    marginal = probs.reshape(batch, 1 << m, -1).sum(axis=2)
    raw = marginal[:, :n_classes]
    return raw / np.maximum(raw.sum(axis=1, keepdims=True), _CLIP)


def train_classifier(
    spec: AnsatzSpec,
    train_set,
    test_set,
    n_classes: int,
    epochs: int = 5,
    batch_size: int = 32,
    lr: float = 0.01,
    seed: int = 0,
) -> TrainReport:
    """Mini-batch Adam on cross-entropy over renormalized marginal readout.

    Reports accuracy on `test_set` (argmax prediction, ties broken toward
    the lower class index).
    """
    if n_classes not in (2, 4, 6):
        raise ConfigurationError(f"n_classes must be one of 2, 4, 6, got {n_classes}")
    x_train, y_train = _as_arrays(train_set)
    x_test, y_test = _as_arrays(test_set)
    if len(x_train) == 0 or len(x_test) == 0:
        raise ConfigurationError("empty dataset")
    for name, y in (("train", y_train), ("test", y_test)):
        if np.any(y < 0) or np.any(y >= n_classes):
            raise ConfigurationError(f"{name} labels must lie in [0, {n_classes})")
    dim = 1 << spec.n_qubits
    if x_train.shape[1] != dim or x_test.shape[1] != dim:
        raise ConfigurationError(f"samples must have {dim} amplitudes")
    t0 = time.perf_counter()

    p = parameter_count(spec)
    params = rng.stream(seed, rng.CLASSIFIER_INIT).uniform(-0.1, 0.1, p)
    shuffler = rng.stream(seed, rng.CLASSIFIER_SHUFFLE)
    state = AdamState.fresh(p, lr)
    m = max(1, math.ceil(math.log2(n_classes)))
    block = dim >> m

    losses = []
    for _ in range(epochs):
        order = shuffler.permutation(len(x_train))
        epoch_loss = 0.0
        cell = np.arange(dim) >> (spec.n_qubits - m)  # marginal cell of outcome x
        for lo in range(0, len(order), batch_size):
            idx = order[lo : lo + batch_size]
            xb = x_train[idx].astype(np.complex128)
            yb = y_train[idx]
            nb = len(idx)

            states = apply_ansatz_batch(spec, np.broadcast_to(params, (nb, p)), xb)
            marginal = (np.abs(states) ** 2).reshape(nb, 1 << m, block).sum(axis=2)
            raw = marginal[:, :n_classes]
            z = np.maximum(raw.sum(axis=1), _CLIP)
            s_label = np.clip(raw[np.arange(nb), yb], _CLIP, None)
            loss = float(np.mean(np.log(z) - np.log(s_label)))
            if not math.isfinite(loss):
                raise TrainingDivergedError(f"loss became {loss}")
            epoch_loss += loss * nb

            # dL/dp(x) = -1[cell(x) = label]/s_label + 1[cell(x) < K]/Z
            weight = np.where(cell[None, :] < n_classes, 1.0 / z[:, None], 0.0)
            weight -= np.where(
                cell[None, :] == yb[:, None], 1.0 / s_label[:, None], 0.0
            )
            jac = _probability_jacobian_batch(spec, params, xb)
            grads = np.einsum("bxp,bx->p", jac, weight) / nb
            state, params = adam_step(state, params, grads)
        losses.append(epoch_loss / len(order))

    predictions = np.argmax(classifier_scores(spec, params, x_test, n_classes), axis=1)
    accuracy = float(np.mean(predictions == y_test))
    return TrainReport(
        task="classification",
        spec=spec,
        seed=seed,
        epochs=epochs,
        losses=losses,
        final_metric=accuracy,
        wall_time_s=time.perf_counter() - t0,
    )
