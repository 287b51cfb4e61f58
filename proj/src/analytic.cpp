#include "memtwin/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "memtwin/polynomials.hpp"

namespace memtwin {

namespace {

constexpr double kGainUnityTol = 1e-9;
constexpr double kSeriesRelTol = 1e-12;

void check_gain(double gain) {
  if (gain < 1.0 - kGainUnityTol) {
    throw std::invalid_argument("gain must be >= 1 for the amplified series");
  }
}

void check_terms(int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("n_terms must be >= 1");
}

}  // namespace

double MziParams::beta() const { return std::sqrt(tau) * r * alpha; }

void MziParams::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r outside [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau outside [0, 1]");
  if (!(gain >= 1.0)) throw std::invalid_argument("gain must be >= 1");
  if (!std::isfinite(phi)) throw std::invalid_argument("phi must be finite");
}

double coherent_gamma(Complex beta, double gain, int n_terms) {
  check_gain(gain);
  check_terms(n_terms);
  const double b2 = std::norm(beta);
  if (gain <= 1.0 + kGainUnityTol) return b2;
  const double ratio = (gain - 1.0) / gain;
  const double x = b2 / (1.0 - gain);
  const double pref = std::exp(-b2) / gain;
  double sum = 0.0;
  double weight = ratio;  // ((G-1)/G)^n starting at n = 1 (the n factor kills n = 0)
  for (int n = 1; n <= n_terms; ++n) {
    const double term = weight * n * generalized_laguerre(n, 0, x);
    sum += term;
    if (std::abs(term) < kSeriesRelTol * std::abs(sum)) break;
    weight *= ratio;
  }
  return pref * sum;
}

Complex coherent_xi(Complex beta, double gain, int n_terms) {
  check_gain(gain);
  check_terms(n_terms);
  if (gain <= 1.0 + kGainUnityTol) return std::conj(beta);
  const double b2 = std::norm(beta);
  const double ratio = (gain - 1.0) / gain;
  const double x = b2 / (1.0 - gain);
  const Complex pref = std::exp(-b2) / gain * std::conj(beta) / std::sqrt(gain);
  double sum = 0.0;
  double weight = 1.0;
  for (int n = 0; n < n_terms; ++n) {
    const double term = weight * generalized_laguerre(n, 1, x);
    sum += term;
    if (std::abs(term) < kSeriesRelTol * std::abs(sum)) break;
    weight *= ratio;
  }
  return pref * sum;
}

Complex amplified_coherent_element(int n, int m, Complex beta, double gain) {
  if (n < 0 || m < 0) throw std::invalid_argument("element indices must be >= 0");
  check_gain(gain);
  const double b2 = std::norm(beta);
  const double lg_ratio =
      0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + m + 1.0));
  if (gain <= 1.0 + kGainUnityTol) {
    // <n|beta><beta|n+m> for the pure coherent state.
    Complex phase = 1.0;
    for (int i = 0; i < m; ++i) phase *= std::conj(beta);
    return std::exp(-b2) * std::pow(b2, n) * phase *
           std::exp(lg_ratio - std::lgamma(n + 1.0));
  }
  const double ratio = (gain - 1.0) / gain;
  const double x = b2 / (1.0 - gain);
  Complex offdiag = 1.0;
  for (int i = 0; i < m; ++i) offdiag *= std::conj(beta) / std::sqrt(gain);
  return std::exp(-b2) / gain * std::pow(ratio, n) * std::exp(lg_ratio) *
         offdiag * generalized_laguerre(n, m, x);
}

double coherent_fringe(const MziParams& p) {
  p.validate();
  const double g = coherent_gamma(p.beta(), p.gain);
  const Complex xi = coherent_xi(p.beta(), p.gain);
  const Complex rot = p.alpha * std::exp(Complex(0.0, p.phi)) * xi;
  return 0.5 * (g + p.alpha * p.alpha - 2.0 * rot.real());
}

double coherent_visibility(const MziParams& p) {
  p.validate();
  const double g = coherent_gamma(p.beta(), p.gain);
  const Complex xi = coherent_xi(p.beta(), p.gain);
  const double denom = g + p.alpha * p.alpha;
  if (denom == 0.0) throw std::domain_error("fringe mean is zero; visibility undefined");
  return 2.0 * p.alpha * xi.real() / denom;
}

double coherent_no_recombine(const MziParams& p) {
  p.validate();
  return coherent_gamma(p.beta(), p.gain);
}

double single_photon_fringe(const MziParams& p) {
  p.validate();
  const double g = p.gain;
  const double rr = p.r * p.r;
  return 0.5 * g * (1.0 + 0.5 * p.tau * rr) - 0.25 -
         0.5 * p.r * std::sqrt(p.tau * g) * std::cos(p.phi);
}

double single_photon_visibility(const MziParams& p) {
  p.validate();
  const double denom = p.gain * (1.0 + 0.5 * p.tau * p.r * p.r) - 0.5;
  return p.r * std::sqrt(p.tau * p.gain) / denom;
}

double single_photon_no_recombine(const MziParams& p) {
  p.validate();
  return 0.5 * p.tau * p.r * p.r * p.gain + (p.gain - 1.0);
}

}  // namespace memtwin
