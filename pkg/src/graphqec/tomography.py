"""Logical-state tomography, single-qubit process tomography and metrics.

The encoding channel maps an input qubit to the logical qubit of the code;
measuring the collective logical operators gives a 2x2 density matrix, and
the four probe outputs determine the chi matrix of the channel by linear
inversion in the Pauli basis (I, X, Y, Z).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .code import PROBES, PROBE_NAMES, logical_ops
from .kernel import DensityOperator, PureState

PAULI_BASIS = ("I", "X", "Y", "Z")
PAULI_MATS = tuple(kernel.PAULI[p] for p in PAULI_BASIS)

# Sampled logical expectations may produce slightly negative eigenvalues;
# tolerate down to this bound and flag, reject anything worse.
NEGATIVITY_TOLERANCE = 0.05


@dataclass(frozen=True, eq=False)
class LogicalDensityMatrix:
    """2x2 logical state reconstructed from <X_L>, <Y_L>, <Z_L>."""

    matrix: np.ndarray = field(repr=False)
    expectations: tuple[float, float, float]
    negative_eigenvalue: bool = False

    @property
    def bloch(self) -> tuple[float, float, float]:
        return self.expectations


def logical_density_from_expectations(ex: float, ey: float, ez: float) -> LogicalDensityMatrix:
    mat = 0.5 * (kernel.I + ex * kernel.X + ey * kernel.Y + ez * kernel.Z)
    eig_min = float(np.linalg.eigvalsh(mat).min())
    flagged = eig_min < -kernel.EIG_ATOL
    if eig_min < -NEGATIVITY_TOLERANCE:
        raise ValueError(f"logical matrix unphysical: eigenvalue {eig_min}")
    return LogicalDensityMatrix(mat, (float(ex), float(ey), float(ez)), flagged)


def logical_tomography(state) -> LogicalDensityMatrix:
    """rho_L = (I + <X_L> X + <Y_L> Y + <Z_L> Z) / 2 from the collective
    logical bases of a four-qubit code state."""
    ops = logical_ops()
    ex, ey, ez = (kernel.expectation(state, o.to_observable(state.labels))
                  for o in (ops.xbar, ops.ybar, ops.zbar))
    return logical_density_from_expectations(ex, ey, ez)


def state_fidelity(rho, target: PureState) -> float:
    """<psi| rho |psi> for a mixed state against a pure target."""
    if isinstance(rho, PureState):
        rho = rho.density()
    if isinstance(target, PureState):
        tgt = target
    else:
        raise TypeError("target must be a PureState")
    if set(rho.labels) != set(tgt.labels):
        raise ValueError(f"registers differ: {rho.labels} vs {tgt.labels}")
    if rho.labels != tgt.labels:
        tgt = kernel.reorder(tgt, rho.labels)
    val = np.vdot(tgt.amplitudes, rho.matrix @ tgt.amplitudes).real
    return float(val)


@dataclass(frozen=True, eq=False)
class ChiMatrix:
    """4x4 process matrix in the Pauli basis: eps(rho) = sum chi_ij M_i rho M_j+."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (4, 4):
            raise ValueError(f"chi must be 4x4, got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > 1e-8:
            raise ValueError("chi matrix not Hermitian")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())

    @property
    def is_physical(self) -> bool:
        """Positive semidefinite and trace-preserving (both within 1e-8)."""
        return self.min_eigenvalue > -1e-8 and self.trace_preservation_defect() < 1e-8

    def trace_preservation_defect(self) -> float:
        acc = np.zeros((2, 2), dtype=complex)
        for i, mi in enumerate(PAULI_MATS):
            for j, mj in enumerate(PAULI_MATS):
                acc += self.matrix[i, j] * (mj.conj().T @ mi)
        return float(np.abs(acc - kernel.I).max())

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros((2, 2), dtype=complex)
        for i, mi in enumerate(PAULI_MATS):
            for j, mj in enumerate(PAULI_MATS):
                out += self.matrix[i, j] * (mi @ rho @ mj.conj().T)
        return out


@dataclass(frozen=True, eq=False)
class ChannelSample:
    """Single-qubit channel outputs for the canonical probe set."""

    outputs: dict[str, DensityOperator]

    def __post_init__(self):
        missing = [p for p in PROBE_NAMES if p not in self.outputs]
        if missing:
            raise ValueError(f"missing probes: {missing}; need all of {PROBE_NAMES}")
        for name, rho in self.outputs.items():
            if rho.num_qubits != 1:
                raise ValueError(f"output for probe {name!r} is not a single qubit")


def chi_of_unitary(u: np.ndarray) -> ChiMatrix:
    """Rank-1 chi of a unitary: chi = a a+ with a_i = tr(M_i+ u) / 2."""
    a = np.array([np.trace(m.conj().T @ u) / 2 for m in PAULI_MATS])
    return ChiMatrix(np.outer(a, a.conj()))


def chi_identity() -> ChiMatrix:
    return chi_of_unitary(kernel.I)


def chi_hadamard() -> ChiMatrix:
    return chi_of_unitary(kernel.H)


def reconstruct_chi(samples: ChannelSample) -> ChiMatrix:
    """Linear inversion from the four probe outputs.

    The |0><0| and |1><1| images are read off directly; the coherence image
    is eps(|0><1|) = eps(|+><+|) + i eps(|+y><+y|) - (1+i)/2 (eps(|0><0|) +
    eps(|1><1|)), and eps(|1><0|) follows by Hermitian conjugation. The
    resulting superoperator is then rotated into the Pauli basis.
    """
    r0 = samples.outputs["0"].matrix
    r1 = samples.outputs["1"].matrix
    rp = samples.outputs["+"].matrix
    ry = samples.outputs["+y"].matrix
    e01 = rp + 1j * ry - (1 + 1j) / 2 * (r0 + r1)
    e10 = e01.conj().T
    images = {(0, 0): r0, (0, 1): e01, (1, 0): e10, (1, 1): r1}

    # Row-major superoperator: vec(eps(rho)) = S vec(rho).
    smat = np.zeros((4, 4), dtype=complex)
    for (m, n), img in images.items():
        smat[:, 2 * m + n] = img.reshape(-1)
    # S = sum_ij chi_ij (M_i (x) conj(M_j)); solve the 16x16 linear system.
    basis = np.zeros((16, 16), dtype=complex)
    for i, mi in enumerate(PAULI_MATS):
        for j, mj in enumerate(PAULI_MATS):
            basis[:, 4 * i + j] = np.kron(mi, mj.conj()).reshape(-1)
    chi_vec = np.linalg.solve(basis, smat.reshape(-1))
    chi = chi_vec.reshape(4, 4)
    chi = (chi + chi.conj().T) / 2  # remove numerical skew
    return ChiMatrix(chi)


def process_fidelity(chi_exp: ChiMatrix, chi_ideal: ChiMatrix) -> float:
    """tr(chi_exp chi_ideal) normalized by tr(chi_exp) tr(chi_ideal)."""
    t_exp = np.trace(chi_exp.matrix).real
    t_ideal = np.trace(chi_ideal.matrix).real
    if abs(t_exp) < 1e-12 or abs(t_ideal) < 1e-12:
        raise ValueError("process fidelity undefined for zero-trace chi")
    val = np.trace(chi_exp.matrix @ chi_ideal.matrix).real / (t_exp * t_ideal)
    return float(val)


def average_probe_fidelity(fidelities) -> float:
    """Arithmetic mean over the four-probe set (the default reading of the
    reported average; see sphere_average_fidelity for the alternative)."""
    if isinstance(fidelities, dict):
        vals = [fidelities[p] for p in PROBE_NAMES]
    else:
        vals = list(fidelities)
    if len(vals) != 4:
        raise ValueError(f"expected four probe fidelities, got {len(vals)}")
    return float(np.mean(vals))


def sphere_average_fidelity(chi_exp: ChiMatrix, chi_ideal: ChiMatrix) -> float:
    """Haar average over the Bloch sphere: (2 F_p + 1) / 3 for qubits."""
    return (2 * process_fidelity(chi_exp, chi_ideal) + 1) / 3


def probe_bloch_vectors() -> dict[str, tuple[float, float, float]]:
    return {name: PROBES[name].bloch for name in PROBE_NAMES}


def bloch_affine(chi: ChiMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Affine Bloch-sphere action (R, t): r -> R r + t."""
    r = np.zeros((3, 3))
    t = np.zeros(3)
    sigma = PAULI_MATS[1:]
    for a, sa in enumerate(sigma):
        t[a] = np.trace(sa @ chi.apply(kernel.I)).real / 2
        for b, sb in enumerate(sigma):
            r[a, b] = np.trace(sa @ chi.apply(sb)).real / 2
    return r, t


def bloch_image(chi: ChiMatrix, points) -> np.ndarray:
    """Map Bloch vectors through the channel; warns if the map expands the
    sphere (unphysical chi), which can happen with sampled inputs."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 3:
        raise ValueError("points must be (n, 3) Bloch vectors")
    r, t = bloch_affine(chi)
    mapped = pts @ r.T + t
    norms = np.linalg.norm(mapped, axis=1)
    if norms.max() > 1 + kernel.EIG_ATOL and np.linalg.norm(pts, axis=1).max() <= 1 + 1e-12:
        warnings.warn(f"chi expands the Bloch sphere (max |r'| = {norms.max():.6f})")
    return mapped
