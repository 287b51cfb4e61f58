#pragma once

// Channel constructors over truncated Fock spaces: two-mode linear-optics
// lifts (beamsplitter via Jacobi-polynomial matrix elements, generic 2x2
// lift by creation-operator expansion), phase shift, pure-loss and
// quantum-limited-amplifier Kraus sets, and their thermal-noise composition.
//
// Sign convention: the beamsplitter acts by rows as
//   a+ -> t a+ + r b+ ,  b+ -> -r a+ + t b+ ,  t = sqrt(T), r = sqrt(1-T),
// and lift_two_mode_linear follows the same row reading of its 2x2 input so
// that lift([[t, r], [-r, t]]) reproduces beamsplitter_unitary exactly.

#include <Eigen/Dense>

#include "memtwin/fock.hpp"

namespace memtwin {

// Power transmissivity T with derived amplitude t = sqrt(T), r = sqrt(1-T)
// and coupling angle zeta with cos(zeta) = t, sin(zeta) = r.
struct BeamsplitterParams {
  double t_power = 1.0;
  double r_power() const { return 1.0 - t_power; }
  double t_amplitude() const;
  double r_amplitude() const;
  double coupling() const;  // zeta
};

// Thermal-noise decomposition parameters: loss tau = kappa/G followed by a
// quantum-limited amplifier of gain G = 1 + (1 - kappa) * n_bar_B.
struct NoiseChannelParams {
  double kappa = 1.0;
  double n_bar_b = 0.0;
  double gain() const { return 1.0 + (1.0 - kappa) * n_bar_b; }
  double tau() const { return kappa / gain(); }
};

// A Fock-lifted two-mode operator on modes (a, b) with joint row-major
// indexing (a most significant).  Block-diagonal over total photon number N;
// blocks with N <= unitary_through are complete and unitary, higher blocks
// are clipped by truncation and flagged.
struct LiftedUnitary {
  Matrix matrix;
  int trunc_a = 0;
  int trunc_b = 0;
  int unitary_through = 0;
  bool clipped = false;
};

// Beamsplitter of power transmissivity T on (trunc_a+1) x (trunc_b+1),
// built from the Jacobi-polynomial matrix elements
//   U^(N)_{m,n} = sqrt((N-n)! n! / ((N-m)! m!)) t^{N-2n} (r/t)^{m-n}
//                 P_n^{(m-n, N-n-m)}(t^2 - r^2)
// on each photon-number block (row |N-m, m>, column |N-n, n>).
LiftedUnitary beamsplitter_unitary(double t_power, int trunc_a, int trunc_b);

// Generic lift of a 2x2 unitary (includes det = -1 orthogonal matrices such
// as the mode selector) by creation-operator binomial expansion:
//   a+ -> u(0,0) a+ + u(0,1) b+ ,  b+ -> u(1,0) a+ + u(1,1) b+ .
// Throws if u is not unitary within 1e-10.
LiftedUnitary lift_two_mode_linear(const Eigen::Matrix2cd& u, int trunc_a,
                                   int trunc_b);

// Mode selector MS(theta): 2x2 orthogonal mixing of two polarization modes,
//   [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]].
Eigen::Matrix2cd mode_selector(double theta);

// 2x2 beamsplitter amplitude matrix [[t, r], [-r, t]].
Eigen::Matrix2cd beamsplitter_matrix(double t_power);

// Single-mode phase shift, diagonal exp(i n phi).
Matrix phase_shift(double phi, int trunc);

// Pure-loss Kraus set A_l = p_l tau^{n/2} a^l, p_l = sqrt((1-tau)^l / l!),
// l = 0..trunc.  Trace preserving within truncation.
KrausSet loss_kraus(double tau, int trunc);

// Attenuator Kraus set W_l = (r^l / sqrt(l!)) t^{n} a^l with t = sqrt(T),
// r = sqrt(1-T); element-wise identical to loss_kraus(T, trunc).
KrausSet attenuator_kraus_single_mode(double t_power, int trunc);

// Quantum-limited amplifier B_k = q_k (a+)^k G^{-n/2},
// q_k = sqrt((1/k!) (1/G) ((G-1)/G)^k), k = 0..trunc.  Trace preserving in
// the untruncated limit; clipped rows produce a bounded trace deficit.
KrausSet amplifier_kraus(double gain, int trunc);

// Thermal noise channel as the composed operator list {B_k A_l}: loss with
// tau = kappa/G applied first, then the amplifier with gain G.
KrausSet thermal_noise_channel(double kappa, double n_bar_b, int trunc);

// The same channel as its two stages, for cheaper sequential application.
struct ThermalNoiseStages {
  NoiseChannelParams params;
  KrausSet loss;       // tau = kappa/G
  KrausSet amplifier;  // gain G
};
ThermalNoiseStages thermal_noise_stages(double kappa, double n_bar_b, int trunc);

// Apply the two stages to one mode of a state (loss first).
DensityState apply_thermal_noise(const DensityState& state,
                                 const ThermalNoiseStages& stages,
                                 const std::string& mode_uuid);

}  // namespace memtwin
