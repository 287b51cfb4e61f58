#include "memtwin/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "memtwin/polynomials.hpp"

namespace memtwin {

namespace {

double sqrt_factorial_ratio(int num_a, int num_b, int den_a, int den_b) {
  // sqrt(num_a! num_b! / (den_a! den_b!)) via lgamma.
  return std::exp(0.5 * (std::lgamma(num_a + 1.0) + std::lgamma(num_b + 1.0) -
                         std::lgamma(den_a + 1.0) - std::lgamma(den_b + 1.0)));
}

Complex cpow_int(Complex base, int n) {
  Complex p = 1.0;
  for (int i = 0; i < n; ++i) p *= base;
  return p;
}

void check_truncations(int trunc_a, int trunc_b) {
  if (trunc_a < 1 || trunc_b < 1) {
    throw std::invalid_argument("truncations must be >= 1");
  }
}

KrausSet identity_kraus(int trunc) {
  KrausSet ks;
  ks.operators.push_back(Matrix::Identity(trunc + 1, trunc + 1));
  return ks;
}

bool is_identity_set(const KrausSet& ks) {
  return ks.operators.size() == 1 &&
         ks.operators[0].isIdentity(0.0);
}

}  // namespace

double BeamsplitterParams::t_amplitude() const { return std::sqrt(t_power); }
double BeamsplitterParams::r_amplitude() const { return std::sqrt(1.0 - t_power); }
double BeamsplitterParams::coupling() const {
  return std::atan2(r_amplitude(), t_amplitude());
}

LiftedUnitary beamsplitter_unitary(double t_power, int trunc_a, int trunc_b) {
  if (t_power < 0.0 || t_power > 1.0) {
    throw std::invalid_argument("beamsplitter transmissivity outside [0, 1]");
  }
  check_truncations(trunc_a, trunc_b);
  const int da = trunc_a + 1;
  const int db = trunc_b + 1;
  LiftedUnitary out;
  out.trunc_a = trunc_a;
  out.trunc_b = trunc_b;

  if (t_power == 1.0) {
    out.matrix = Matrix::Identity(da * db, da * db);
    out.unitary_through = trunc_a + trunc_b;
    out.clipped = false;
    return out;
  }
  if (t_power == 0.0) {
    // a+ -> b+, b+ -> -a+ :  |na, nb> -> (-1)^nb |nb, na>.
    out.matrix = Matrix::Zero(da * db, da * db);
    for (int na = 0; na < da; ++na) {
      for (int nb = 0; nb < db; ++nb) {
        if (nb < da && na < db) {
          out.matrix(nb * db + na, na * db + nb) = (nb % 2 == 0) ? 1.0 : -1.0;
        }
      }
    }
    const bool square = trunc_a == trunc_b;
    out.unitary_through = square ? trunc_a + trunc_b : std::min(trunc_a, trunc_b);
    out.clipped = !square;
    return out;
  }

  const double t = std::sqrt(t_power);
  const double r = std::sqrt(1.0 - t_power);
  const double x = t * t - r * r;
  out.matrix = Matrix::Zero(da * db, da * db);
  for (int total = 0; total <= trunc_a + trunc_b; ++total) {
    for (int m = 0; m <= total; ++m) {  // row |total-m, m>
      if (total - m >= da || m >= db) continue;
      for (int n = 0; n <= total; ++n) {  // column |total-n, n>
        if (total - n >= da || n >= db) continue;
        const double pref = sqrt_factorial_ratio(total - n, n, total - m, m);
        double val;
        if (m >= n) {
          val = pref * std::pow(t, total - n - m) * std::pow(r, m - n) *
                jacobi_polynomial(n, m - n, total - n - m, x);
        } else {
          // negative (r/t) exponent; the Jacobi a-parameter reduction
          // absorbs the matching negative parameter.
          val = pref * std::pow(t, total - 2 * n) *
                std::pow(r / t, static_cast<double>(m - n)) *
                jacobi_polynomial(n, m - n, total - n - m, x);
        }
        out.matrix((total - m) * db + m, (total - n) * db + n) = val;
      }
    }
  }
  out.unitary_through = std::min(trunc_a, trunc_b);
  out.clipped = trunc_a + trunc_b > out.unitary_through;
  return out;
}

LiftedUnitary lift_two_mode_linear(const Eigen::Matrix2cd& u, int trunc_a,
                                   int trunc_b) {
  check_truncations(trunc_a, trunc_b);
  const Eigen::Matrix2cd dev =
      u.adjoint() * u - Eigen::Matrix2cd::Identity();
  if (dev.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("lift_two_mode_linear: matrix not unitary");
  }
  const int da = trunc_a + 1;
  const int db = trunc_b + 1;

  // Pascal triangle: exact binomials for the expansion weights.
  const int nmax = std::max(trunc_a, trunc_b);
  std::vector<std::vector<double>> binom(nmax + 1);
  for (int i = 0; i <= nmax; ++i) {
    binom[i].assign(i + 1, 1.0);
    for (int k = 1; k < i; ++k) binom[i][k] = binom[i - 1][k - 1] + binom[i - 1][k];
  }

  LiftedUnitary out;
  out.trunc_a = trunc_a;
  out.trunc_b = trunc_b;
  out.matrix = Matrix::Zero(da * db, da * db);
  for (int i = 0; i < da; ++i) {    // photons in a
    for (int j = 0; j < db; ++j) {  // photons in b
      const int col = i * db + j;
      for (int k = 0; k <= i; ++k) {
        for (int l = 0; l <= j; ++l) {
          const int p = k + l;          // photons out in a
          const int q = i - k + j - l;  // photons out in b
          if (p >= da || q >= db) continue;
          Complex c = binom[i][k] * binom[j][l] * cpow_int(u(0, 0), k) *
                      cpow_int(u(0, 1), i - k) * cpow_int(u(1, 0), l) *
                      cpow_int(u(1, 1), j - l);
          c *= sqrt_factorial_ratio(p, q, i, j);
          out.matrix(p * db + q, col) += c;
        }
      }
    }
  }

  const double offdiag = std::abs(u(0, 1)) + std::abs(u(1, 0));
  const double diag = std::abs(u(0, 0)) + std::abs(u(1, 1));
  if (offdiag == 0.0) {  // no mixing: every block complete
    out.unitary_through = trunc_a + trunc_b;
    out.clipped = false;
  } else if (diag == 0.0) {  // pure swap
    const bool square = trunc_a == trunc_b;
    out.unitary_through = square ? trunc_a + trunc_b : std::min(trunc_a, trunc_b);
    out.clipped = !square;
  } else {
    out.unitary_through = std::min(trunc_a, trunc_b);
    out.clipped = true;
  }
  return out;
}

Eigen::Matrix2cd mode_selector(double theta) {
  Eigen::Matrix2cd m;
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  m << c, s, s, -c;
  return m;
}

Eigen::Matrix2cd beamsplitter_matrix(double t_power) {
  if (t_power < 0.0 || t_power > 1.0) {
    throw std::invalid_argument("beamsplitter transmissivity outside [0, 1]");
  }
  const double t = std::sqrt(t_power);
  const double r = std::sqrt(1.0 - t_power);
  Eigen::Matrix2cd m;
  m << t, r, -r, t;
  return m;
}

Matrix phase_shift(double phi, int trunc) {
  if (trunc < 1) throw std::invalid_argument("truncation must be >= 1");
  Matrix m = Matrix::Zero(trunc + 1, trunc + 1);
  for (int n = 0; n <= trunc; ++n) {
    m(n, n) = std::exp(Complex(0.0, n * phi));
  }
  return m;
}

KrausSet loss_kraus(double tau, int trunc) {
  if (tau < 0.0 || tau > 1.0) {
    throw std::invalid_argument("loss transmissivity outside [0, 1]");
  }
  if (trunc < 1) throw std::invalid_argument("truncation must be >= 1");
  if (tau == 1.0) return identity_kraus(trunc);
  const int d = trunc + 1;
  KrausSet ks;
  for (int l = 0; l <= trunc; ++l) {
    Matrix k = Matrix::Zero(d, d);
    const double p_l =
        std::sqrt(std::pow(1.0 - tau, l) * std::exp(-std::lgamma(l + 1.0)));
    for (int n = l; n <= trunc; ++n) {
      k(n - l, n) = p_l * std::pow(tau, (n - l) / 2.0) *
                    sqrt_factorial_ratio(n, 0, n - l, 0);
    }
    ks.operators.push_back(std::move(k));
  }
  return ks;
}

KrausSet attenuator_kraus_single_mode(double t_power, int trunc) {
  if (t_power < 0.0 || t_power > 1.0) {
    throw std::invalid_argument("attenuator transmissivity outside [0, 1]");
  }
  if (trunc < 1) throw std::invalid_argument("truncation must be >= 1");
  if (t_power == 1.0) return identity_kraus(trunc);
  const double t = std::sqrt(t_power);
  const double r = std::sqrt(1.0 - t_power);
  const int d = trunc + 1;
  KrausSet ks;
  for (int l = 0; l <= trunc; ++l) {
    Matrix w = Matrix::Zero(d, d);
    const double coeff = std::pow(r, l) * std::exp(-0.5 * std::lgamma(l + 1.0));
    for (int n = l; n <= trunc; ++n) {
      w(n - l, n) = coeff * std::pow(t, n - l) * sqrt_factorial_ratio(n, 0, n - l, 0);
    }
    ks.operators.push_back(std::move(w));
  }
  return ks;
}

KrausSet amplifier_kraus(double gain, int trunc) {
  if (gain < 1.0) throw std::invalid_argument("amplifier gain must be >= 1");
  if (trunc < 1) throw std::invalid_argument("truncation must be >= 1");
  if (gain == 1.0) return identity_kraus(trunc);
  const int d = trunc + 1;
  KrausSet ks;
  for (int k = 0; k <= trunc; ++k) {
    Matrix b = Matrix::Zero(d, d);
    const double q_k = std::sqrt(std::exp(-std::lgamma(k + 1.0)) / gain *
                                 std::pow((gain - 1.0) / gain, k));
    for (int n = 0; n + k <= trunc; ++n) {
      b(n + k, n) = q_k * std::pow(gain, -n / 2.0) *
                    sqrt_factorial_ratio(n + k, 0, n, 0);
    }
    ks.operators.push_back(std::move(b));
  }
  return ks;
}

KrausSet thermal_noise_channel(double kappa, double n_bar_b, int trunc) {
  const ThermalNoiseStages st = thermal_noise_stages(kappa, n_bar_b, trunc);
  if (is_identity_set(st.amplifier)) return st.loss;
  if (is_identity_set(st.loss)) return st.amplifier;
  KrausSet composed;
  for (const Matrix& b : st.amplifier.operators) {
    for (const Matrix& a : st.loss.operators) {
      composed.operators.push_back(b * a);  // loss applied first
    }
  }
  return composed;
}

ThermalNoiseStages thermal_noise_stages(double kappa, double n_bar_b, int trunc) {
  if (kappa < 0.0 || kappa > 1.0) {
    throw std::invalid_argument("thermal channel kappa outside [0, 1]");
  }
  if (n_bar_b < 0.0) {
    throw std::invalid_argument("thermal photon number must be >= 0");
  }
  ThermalNoiseStages st;
  st.params = NoiseChannelParams{kappa, n_bar_b};
  st.loss = loss_kraus(st.params.tau(), trunc);
  st.amplifier = amplifier_kraus(st.params.gain(), trunc);
  return st;
}

DensityState apply_thermal_noise(const DensityState& state,
                                 const ThermalNoiseStages& stages,
                                 const std::string& mode_uuid) {
  DensityState out = state;
  if (!is_identity_set(stages.loss)) {
    out = apply_kraus(out, targeted(stages.loss, {mode_uuid}));
  }
  if (!is_identity_set(stages.amplifier)) {
    out = apply_kraus(out, targeted(stages.amplifier, {mode_uuid}));
  }
  return out;
}

}  // namespace memtwin
