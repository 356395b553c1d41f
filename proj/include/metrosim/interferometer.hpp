// interferometer.hpp
// The hybrid spin/two-mode interferometer as composable pipeline steps:
//
//   |N,0>|+>  --Y, CPG-->  |Psi_h>  --embed, loss-->  --exp(i theta J_y)-->
//   --CPG^dag-->  reduced spin  --pi/2 pulse-->  populations
//
// Y = exp(-i pi J_y / 2) and CPG = exp(i pi a^dag a sigma_z / 2). Y is the
// rotation whose output matches the expanded NOON-like input
//   (-i)^N / sqrt(2^{N+1} N!) [ (a^dag + i b^dag)^N |00>|down>
//                               + (-1)^N (a^dag - i b^dag)^N |00>|up> ].
//
// Mode layout: 0 = a, 1 = b, 2 = c (environment of a), 3 = e (environment
// of b). The environment modes start in vacuum.

#pragma once

#include "metrosim/fock_core.hpp"
#include "metrosim/loss.hpp"

namespace metrosim::interferometer {

inline constexpr int mode_a = 0;
inline constexpr int mode_b = 1;
inline constexpr int mode_c = 2;
inline constexpr int mode_e = 3;
inline constexpr int system_modes = 2;
inline constexpr int total_modes = 4;

struct ProtocolResult {
    fock::HybridState final_state;  // after the disentangling CPG, before readout
    fock::SpinDensity spin_density;
    fock::SpinPopulations populations;  // after the readout pulse
    double theta;
    LossConfig loss;
    int n;

    // 2 rho_{down,up}: the complex fringe coherence.
    fock::Complex coherence() const { return spin_density.coherence(); }
};

// Y then CPG on modes a, b; works on 2- or 4-mode states.
fock::HybridState apply_preparation_gates(const fock::HybridState& state);
// Inverse of apply_preparation_gates.
fock::HybridState undo_preparation_gates(const fock::HybridState& state);

fock::HybridState prepare_noon_like(int n);

// Copies a 2-mode state onto (n_a, n_b, 0, 0) of the 4-mode sector.
fock::HybridState embed_with_environment(const fock::HybridState& state);

// exp[eta_a (a^dag c - a c^dag)] exp[eta_b (b^dag e - b e^dag)] with
// eta_k = arcsin(sqrt(R_k)); a single excitation in mode a becomes
// sqrt(1-R_a)|a> - sqrt(R_a)|c>.
fock::HybridState apply_loss(const fock::HybridState& state, const LossConfig& loss);

// exp(i theta J_y) on modes a, b.
fock::HybridState encode_phase(const fock::HybridState& state, double theta);

// CPG^dag = exp(-i pi a^dag a sigma_z / 2).
fock::HybridState disentangle(const fock::HybridState& state);

// +pi/2 spin pulse about y followed by the population measurement; gives
// P_down = 1/2 + Re rho_{down,up}, i.e. (1 + cos N theta)/2 without loss.
fock::SpinPopulations readout(const fock::HybridState& state);

ProtocolResult full_protocol(int n, double theta, const LossConfig& loss);

}  // namespace metrosim::interferometer
