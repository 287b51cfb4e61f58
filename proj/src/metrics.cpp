#include "memtwin/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace memtwin {

namespace {

void check_record(const CountRecord& rec) {
  if (!(rec.n_noise >= 0.0) || !(rec.n_exp >= rec.n_noise)) {
    throw std::invalid_argument("count record requires n_exp >= n_noise >= 0");
  }
}

}  // namespace

double snr(const CountRecord& rec) {
  check_record(rec);
  if (rec.n_noise == 0.0) return std::numeric_limits<double>::infinity();
  return (rec.n_exp - rec.n_noise) / rec.n_noise;
}

double mu1(const CountRecord& rec, double eta_int) {
  check_record(rec);
  if (!(eta_int > 0.0)) {
    throw std::invalid_argument("mu1 requires eta_int > 0");
  }
  return rec.n_noise / eta_int;
}

double visibility(double n_max, double n_min) {
  if (!(n_min >= 0.0) || !(n_max >= n_min)) {
    throw std::invalid_argument("visibility requires n_max >= n_min >= 0");
  }
  if (n_max == 0.0) {
    throw std::domain_error("visibility undefined for all-zero fringe");
  }
  return (n_max - n_min) / (n_max + n_min);
}

std::pair<double, double> token_correctness(double p0, double p1) {
  if (!(p0 >= 0.0 && p0 <= 1.0) || !(p1 >= 0.0 && p1 <= 1.0)) {
    throw std::invalid_argument("click probabilities must lie in [0, 1]");
  }
  const double denom = 1.0 - (1.0 - p0) * (1.0 - p1);
  if (denom == 0.0) {
    throw std::domain_error("correctness undefined when no outcome ever clicks");
  }
  return {p0 * (1.0 - p1) / denom, p1 * (1.0 - p0) / denom};
}

}  // namespace memtwin
