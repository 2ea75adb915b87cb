#!/usr/bin/env python3
"""Teleport probe states into the code and characterize the encoding channel.

Measuring the ancilla in X transfers its state into the logical subspace
while applying a Hadamard, so |0> lands on |+_L>, |+> on |0_L>, and so on.
Logical tomography of the four probe outputs determines the full chi
matrix of the encoding channel, ideally that of a Hadamard rotation.
"""
import numpy as np

from graphqec import (PROBES, DensityOperator, encode, logical_basis_states,
                      logical_tomography, overlap, state_fidelity,
                      ChannelSample, reconstruct_chi, chi_hadamard,
                      process_fidelity, bloch_image, apply_noise, NoiseModel)
from graphqec.code import PROBE_TARGETS

# --- ideal encodings -------------------------------------------------------
basis = logical_basis_states()
print("probe -> logical state (ideal):")
for name, probe in PROBES.items():
    s3, encoded = encode(probe, forced_s3=0)
    target = basis[PROBE_TARGETS[name]]
    print(f"  |{name}>  ->  |{PROBE_TARGETS[name]}_L>   overlap {overlap(encoded, target):.9f}")

# byproduct branch: outcome s3 = 1 differs from the s3 = 0 result only by
# the logical X, so the |+> probe lands on X_L |0_L> = |1_L>
s3, kicked = encode(PROBES["+"], forced_s3=1)
print("\ns3 = 1 branch of the |+> probe vs |1_L>:",
      round(state_fidelity(kicked.density(), basis["1"]), 6))

# --- the encoding as a quantum channel --------------------------------------
def encoding_outputs(noise=None):
    outputs = {}
    for name, probe in PROBES.items():
        _, encoded = encode(probe, forced_s3=0)
        state = apply_noise(encoded, noise) if noise else encoded.density()
        outputs[name] = DensityOperator((1,), logical_tomography(state).matrix)
    return ChannelSample(outputs)

chi = reconstruct_chi(encoding_outputs())
print("\nideal chi matrix (real part):")
print(np.round(chi.matrix.real, 6))
print("process fidelity vs Hadamard:", round(process_fidelity(chi, chi_hadamard()), 9))

# --- same channel with a noisy resource -------------------------------------
noisy_chi = reconstruct_chi(encoding_outputs(NoiseModel(visibility=0.77)))
print("\nnoisy chi (v = 0.77), real part:")
print(np.round(noisy_chi.matrix.real, 4))
print("process fidelity vs Hadamard:", round(process_fidelity(noisy_chi, chi_hadamard()), 4))

# the Bloch picture: the axes swap X <-> Z (Hadamard) and shrink with noise
axes = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
print("\naxis images (ideal):      ", np.round(bloch_image(chi, axes), 6).tolist())
print("axis images (v = 0.77):   ", np.round(bloch_image(noisy_chi, axes), 4).tolist())
