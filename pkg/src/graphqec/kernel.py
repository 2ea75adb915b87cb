"""Dense linear-algebra substrate for small qubit registers.

States are exact complex-amplitude vectors (or density matrices) over at
most six labelled qubits. Qubit labels are small integers and the first
label in a register is the most significant (leftmost) tensor factor, with
|0> mapped to horizontal polarization and |1> to vertical. All values are
immutable after construction and every operation is a pure function, so
states can be shared freely between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 6
NORM_ATOL = 1e-10
HERM_ATOL = 1e-10
EIG_ATOL = 1e-9

# Metadata only: physical role of each qubit in the five-photon register.
QUBIT_ROLES = {1: "polarization", 2: "path", 3: "ancilla", 4: "path", 5: "polarization"}

# Single-qubit gate matrices.
I = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
PAULI = {"I": I, "X": X, "Y": Y, "Z": Z}

# Principal square roots of -iZ, +iZ and -iX used by local complementation.
SQRT_MINUS_IZ = np.diag([np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4)])
SQRT_PLUS_IZ = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])
SQRT_MINUS_IX = (I - 1j * X) / math.sqrt(2)

CZ = np.diag([1, 1, 1, -1]).astype(complex)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / math.sqrt(2)
PLUS_Y = np.array([1, 1j], dtype=complex) / math.sqrt(2)
MINUS_Y = np.array([1, -1j], dtype=complex) / math.sqrt(2)

# Eigenvectors per measurement basis; index 0 is the +1 eigenstate, so the
# outcome bit convention s=0 <-> eigenvalue +1 holds everywhere.
BASIS_VECTORS = {
    "X": (PLUS, MINUS),
    "Y": (PLUS_Y, MINUS_Y),
    "Z": (KET0, KET1),
}


def _as_complex(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


def _check_labels(labels) -> tuple[int, ...]:
    labels = tuple(int(q) for q in labels)
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate qubit labels: {labels}")
    if not 1 <= len(labels) <= MAX_QUBITS:
        raise ValueError(f"register must hold 1..{MAX_QUBITS} qubits, got {len(labels)}")
    return labels


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over an ordered tuple of qubit labels."""

    labels: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = _check_labels(self.labels)
        amps = _as_complex(self.amplitudes).reshape(-1)
        if amps.shape[0] != 2 ** len(labels):
            raise ValueError(f"expected {2 ** len(labels)} amplitudes, got {amps.shape[0]}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state not normalized: |psi| = {norm}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def density(self) -> "DensityOperator":
        return DensityOperator(self.labels, np.outer(self.amplitudes, self.amplitudes.conj()))

    @staticmethod
    def from_amplitudes(labels, amplitudes, normalize: bool = False) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return PureState(tuple(labels), amps)

    @staticmethod
    def single(label: int, vector) -> "PureState":
        return PureState.from_amplitudes((label,), vector)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite operator on a register."""

    labels: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = _check_labels(self.labels)
        mat = _as_complex(self.matrix)
        dim = 2 ** len(labels)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > HERM_ATOL:
            raise ValueError("density matrix not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > NORM_ATOL:
            raise ValueError(f"density matrix trace {tr} != 1")
        eigs = np.linalg.eigvalsh(mat)
        if eigs.min() < -EIG_ATOL:
            raise ValueError(f"density matrix not PSD, min eigenvalue {eigs.min()}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", mat)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix over a declared qubit subset."""

    labels: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = _check_labels(self.labels)
        mat = _as_complex(self.matrix)
        dim = 2 ** len(labels)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > HERM_ATOL:
            raise ValueError("observable not Hermitian")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", mat)


def maximally_mixed(labels) -> DensityOperator:
    dim = 2 ** len(tuple(labels))
    return DensityOperator(tuple(labels), np.eye(dim, dtype=complex) / dim)


def embed_operator(matrix: np.ndarray, op_labels, register_labels) -> np.ndarray:
    """Embed an operator acting on ``op_labels`` into the full register,
    identity on the remaining qubits, respecting the register label order."""
    op_labels = tuple(op_labels)
    register_labels = tuple(register_labels)
    missing = set(op_labels) - set(register_labels)
    if missing:
        raise ValueError(f"operator acts on qubits outside the register: {sorted(missing)}")
    n = len(register_labels)
    k = len(op_labels)
    rest = [q for q in register_labels if q not in op_labels]
    full = np.kron(np.asarray(matrix, dtype=complex), np.eye(2 ** (n - k), dtype=complex))
    # full currently acts on the order op_labels + rest; permute to register order
    cur = list(op_labels) + rest
    perm = [cur.index(q) for q in register_labels]
    t = full.reshape([2] * (2 * n))
    t = np.transpose(t, perm + [n + p for p in perm])
    return np.ascontiguousarray(t.reshape(2 ** n, 2 ** n))


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Kronecker product of two registers; label sets must be disjoint."""
    clash = set(a.labels) & set(b.labels)
    if clash:
        raise ValueError(f"label collision in tensor product: {sorted(clash)}")
    return PureState(a.labels + b.labels, np.kron(a.amplitudes, b.amplitudes))


def reorder(state: PureState | DensityOperator, new_labels) -> PureState | DensityOperator:
    """Permute the register so labels appear in ``new_labels`` order."""
    new_labels = tuple(new_labels)
    if set(new_labels) != set(state.labels) or len(new_labels) != len(state.labels):
        raise ValueError(f"reorder needs a permutation of {state.labels}, got {new_labels}")
    n = len(new_labels)
    perm = [state.labels.index(q) for q in new_labels]
    if isinstance(state, PureState):
        amps = state.amplitudes.reshape([2] * n).transpose(perm).reshape(-1)
        return PureState(new_labels, amps)
    mat = state.matrix.reshape([2] * (2 * n))
    mat = np.transpose(mat, perm + [n + p for p in perm])
    return DensityOperator(new_labels, mat.reshape(2 ** n, 2 ** n))


def _check_unitary(u: np.ndarray):
    d = u.shape[0]
    if np.abs(u @ u.conj().T - np.eye(d)).max() > NORM_ATOL:
        raise ValueError("matrix is not unitary within 1e-10")


def apply_unitary(state: PureState | DensityOperator, u, targets) -> PureState | DensityOperator:
    """Apply a unitary on the target qubits, identity elsewhere."""
    u = np.asarray(u, dtype=complex)
    targets = tuple(targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets: {targets}")
    if u.shape != (2 ** len(targets), 2 ** len(targets)):
        raise ValueError(f"unitary shape {u.shape} does not match {len(targets)} targets")
    _check_unitary(u)
    full = embed_operator(u, targets, state.labels)
    if isinstance(state, PureState):
        return PureState(state.labels, full @ state.amplitudes)
    return DensityOperator(state.labels, full @ state.matrix @ full.conj().T)


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Trace out everything but ``keep``; result labels follow ``keep`` order."""
    keep = tuple(keep)
    if not keep:
        raise ValueError("keep must be non-empty")
    if not set(keep) <= set(rho.labels):
        raise ValueError(f"keep {keep} not a subset of register {rho.labels}")
    cur = list(rho.labels)
    mat = rho.matrix
    for q in [l for l in rho.labels if l not in keep]:
        n = len(cur)
        i = cur.index(q)
        t = mat.reshape([2] * (2 * n))
        mat = np.trace(t, axis1=i, axis2=n + i).reshape(2 ** (n - 1), 2 ** (n - 1))
        cur.remove(q)
    out = DensityOperator(tuple(cur), mat)
    return reorder(out, keep) if tuple(cur) != keep else out


def expectation(state: PureState | DensityOperator, obs: Observable) -> float:
    """Tr(rho O) with O embedded by identity outside its qubit subset."""
    full = embed_operator(obs.matrix, obs.labels, state.labels)
    if isinstance(state, PureState):
        val = np.vdot(state.amplitudes, full @ state.amplitudes)
    else:
        val = np.trace(full @ state.matrix)
    if abs(val.imag) > EIG_ATOL:
        raise ValueError(f"expectation has imaginary part {val.imag}")
    return float(val.real)


def projective_measure(state, qubit: int, basis: str, forced_outcome: int | None = None,
                       rng: np.random.Generator | None = None):
    """Measure one qubit in the X, Y or Z basis and drop it from the register.

    Returns ``(outcome, probability, post_state)`` where outcome bit 0 means
    the +1 eigenvalue. With ``forced_outcome`` the requested branch is taken
    (error if its probability is below 1e-12); otherwise the branch is
    sampled with ``rng`` (a fresh default generator if omitted).
    """
    if basis not in BASIS_VECTORS:
        raise ValueError(f"basis must be X, Y or Z, got {basis!r}")
    if qubit not in state.labels:
        raise ValueError(f"qubit {qubit} not in register {state.labels}")
    if state.num_qubits == 1:
        raise ValueError("cannot remove the last qubit of a register")

    n = state.num_qubits
    i = state.labels.index(qubit)
    post_labels = tuple(q for q in state.labels if q != qubit)

    def branch(outcome: int):
        v = BASIS_VECTORS[basis][outcome]
        if isinstance(state, PureState):
            t = np.tensordot(v.conj(), state.amplitudes.reshape([2] * n), axes=([0], [i]))
            vec = t.reshape(-1)
            p = float(np.vdot(vec, vec).real)
            return p, vec
        t = state.matrix.reshape([2] * (2 * n))
        t = np.tensordot(v.conj(), t, axes=([0], [i]))
        t = np.tensordot(t, v, axes=([n - 1 + i], [0]))
        mat = t.reshape(2 ** (n - 1), 2 ** (n - 1))
        return float(np.trace(mat).real), mat

    p0, b0 = branch(0)
    p1, b1 = branch(1)
    if forced_outcome is None:
        rng = rng if rng is not None else np.random.default_rng()
        outcome = 0 if rng.random() < p0 / (p0 + p1) else 1
    else:
        outcome = int(forced_outcome)
        if outcome not in (0, 1):
            raise ValueError(f"forced_outcome must be 0 or 1, got {forced_outcome}")
    p, raw = (p0, b0) if outcome == 0 else (p1, b1)
    if p < 1e-12:
        raise ValueError(f"cannot take zero-probability branch {outcome} (p = {p})")
    if isinstance(state, PureState):
        post = PureState(post_labels, raw / math.sqrt(p))
    else:
        post = DensityOperator(post_labels, raw / p)
    return outcome, p, post


def overlap(a: PureState, b: PureState) -> float:
    """|<a|b>| after aligning the label order."""
    if set(a.labels) != set(b.labels):
        raise ValueError(f"states on different registers: {a.labels} vs {b.labels}")
    if a.labels != b.labels:
        b = reorder(b, a.labels)
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def states_equal(a: PureState, b: PureState, atol: float = 1e-9) -> bool:
    """Equality up to a global phase: |<a|b>| >= 1 - atol."""
    return overlap(a, b) >= 1.0 - atol
