#pragma once
// Closed-form reference results for the interferometer and amplified-coherent
// channels.  These are evaluated independently of the density-matrix pipeline
// and serve as oracles in the tests.

#include <complex>

namespace memtwin {

using Complex = std::complex<double>;

// Parameters of the memory-in-one-arm Mach-Zehnder model.
//   alpha : input coherent amplitude per arm (real, >= 0)
//   r     : combined memory amplitude; r^2 is the intrinsic storage-retrieval
//           efficiency seen by the arm
//   tau   : loss-channel transmissivity of the retrieval path
//   gain  : amplifier gain G >= 1 modelling thermal-noise addition
//   phi   : interferometer phase in radians
struct MziParams {
  double alpha = 0.0;
  double r = 1.0;
  double tau = 1.0;
  double gain = 1.0;
  double phi = 0.0;

  // Effective coherent amplitude reaching the amplifier: beta = sqrt(tau)*r*alpha.
  double beta() const;
  void validate() const;  // throws std::invalid_argument on out-of-range fields
};

// Mean photon number gamma = <n> of an amplified attenuated coherent state:
//   gamma = (e^{-|b|^2}/G) sum_n ((G-1)/G)^n n L_n^{(0)}(|b|^2/(1-G)).
// Terms are added until |term| < 1e-12 |sum| or n_terms is reached.  G within
// 1e-9 of 1 uses the analytic limit |beta|^2; G < 1 is rejected.
double coherent_gamma(Complex beta, double gain, int n_terms = 10000);

// First off-diagonal sum xi = sum_n sqrt(n+1) rho_{n,n+1} of the same state:
//   xi = (e^{-|b|^2}/G) (conj(b)/sqrt(G)) sum_n ((G-1)/G)^n L_n^{(1)}(...).
// Same convergence/limit/error behaviour as coherent_gamma; G -> 1 gives conj(beta).
Complex coherent_xi(Complex beta, double gain, int n_terms = 10000);

// Density-matrix element rho_{n, n+m} of the amplified coherent state.  The
// lower triangle follows by conjugation.  G = 1 reduces to the pure coherent
// state elements.
Complex amplified_coherent_element(int n, int m, Complex beta, double gain);

// Mean photon number at output A of the recombined interferometer with a
// coherent input of amplitude alpha in each arm:
//   <n_A> = (gamma + alpha^2 - 2 Re(alpha e^{i phi} xi)) / 2.
double coherent_fringe(const MziParams& p);

// Visibility 2 alpha xi / (gamma + alpha^2) of the coherent fringe.
double coherent_visibility(const MziParams& p);

// Memory-arm mean photon number when the second beamsplitter is removed:
// gamma itself (the untouched arm stays at alpha^2).
double coherent_no_recombine(const MziParams& p);

// Mean photon number at output A for a single photon split across the arms:
//   <n_A> = (G/2)(1 + tau r^2 / 2) - 1/4 - (r sqrt(tau G)/2) cos(phi).
double single_photon_fringe(const MziParams& p);

// Visibility r sqrt(tau G) / (G (1 + tau r^2 / 2) - 1/2) of that fringe.
double single_photon_visibility(const MziParams& p);

// Memory-arm mean photon number without recombination:
//   tau r^2 G / 2 + (G - 1).
double single_photon_no_recombine(const MziParams& p);

}  // namespace memtwin
