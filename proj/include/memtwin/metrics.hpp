#pragma once
// Scalar figures of merit computed from photon-count records and fringe data.

#include <utility>

namespace memtwin {

// Mean counts in a retrieval window: total with the signal present (n_exp),
// noise-only (n_noise), and mean input photons (n_in).
struct CountRecord {
  double n_exp = 0.0;
  double n_noise = 0.0;
  double n_in = 0.0;
};

// (n_exp - n_noise) / n_noise.  Zero noise with a positive signal gives the
// +infinity sentinel.
double snr(const CountRecord& rec);

// Noise photons per retrieval referred to the intrinsic efficiency:
// n_noise / eta_int.  Requires eta_int > 0.
double mu1(const CountRecord& rec, double eta_int);

// (n_max - n_min) / (n_max + n_min) with n_max >= n_min >= 0, n_max > 0.
double visibility(double n_max, double n_min);

// Conditional correctness of a binary click discrimination:
//   c0 = P0 (1 - P1) / (1 - (1 - P0)(1 - P1)),   c1 symmetric.
// Both probabilities zero is undefined and throws.
std::pair<double, double> token_correctness(double p0, double p1);

}  // namespace memtwin
