#include "memtwin/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace memtwin {

namespace {

using Eigen::Index;

Index dims_product(const std::vector<int>& dims) {
  Index d = 1;
  for (int v : dims) d *= v;
  return d;
}

// stride_i = product of local dims to the right of i (first mode most
// significant).
std::vector<Index> strides_of(const std::vector<int>& dims) {
  std::vector<Index> s(dims.size());
  Index acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

void check_mode_list(const std::vector<ModeDescriptor>& modes) {
  std::unordered_set<std::string> seen;
  for (const auto& m : modes) {
    if (m.truncation < 1) {
      throw std::invalid_argument("mode '" + m.uuid + "': truncation must be >= 1");
    }
    if (m.wavelength_nm < 0 || m.bandwidth_hz < 0) {
      throw std::invalid_argument("mode '" + m.uuid + "': negative wavelength/bandwidth");
    }
    if (!seen.insert(m.uuid).second) {
      throw std::invalid_argument("duplicate mode uuid '" + m.uuid + "'");
    }
  }
}

// map[new_flat_index] = old_flat_index for the digit permutation that moves
// modes `order[0..]` into list positions 0..; O(D * mode_count).
std::vector<Index> permutation_map(const std::vector<int>& dims,
                                   const std::vector<int>& order) {
  const int m = static_cast<int>(dims.size());
  std::vector<int> pdims(m);
  for (int j = 0; j < m; ++j) pdims[j] = dims[order[j]];
  const std::vector<Index> old_strides = strides_of(dims);
  const Index d = dims_product(dims);
  std::vector<Index> map(d);
  std::vector<int> digit(m, 0);
  for (Index ni = 0; ni < d; ++ni) {
    Index oi = 0;
    for (int j = 0; j < m; ++j) oi += digit[j] * old_strides[order[j]];
    map[ni] = oi;
    for (int j = m - 1; j >= 0; --j) {
      if (++digit[j] < pdims[j]) break;
      digit[j] = 0;
    }
  }
  return map;
}

Matrix gather(const Matrix& rho, const std::vector<Index>& map) {
  const Index d = rho.rows();
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out(i, j) = rho(map[i], map[j]);
  return out;
}

void scatter(Matrix& dst, const Matrix& src, const std::vector<Index>& map) {
  const Index d = src.rows();
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) dst(map[i], map[j]) = src(i, j);
}

// sum_K (K ⊗ I_r) rho_p (K ⊗ I_r)^H on a matrix whose leading digit block
// has dimension dt (targets) and trailing block dr (the rest).
Matrix contract_front(const Matrix& rho_p, const std::vector<Matrix>& ops,
                      Index dt, Index dr) {
  Matrix acc = Matrix::Zero(rho_p.rows(), rho_p.cols());
  Matrix left(rho_p.rows(), rho_p.cols());
  for (const Matrix& k : ops) {
    left.setZero();
    for (Index m = 0; m < dt; ++m) {
      for (Index t = 0; t < dt; ++t) {
        const Complex c = k(m, t);
        if (c == Complex(0.0, 0.0)) continue;
        left.middleRows(m * dr, dr).noalias() += c * rho_p.middleRows(t * dr, dr);
      }
    }
    for (Index n = 0; n < dt; ++n) {
      for (Index m = 0; m < dt; ++m) {
        const Complex c = std::conj(k(n, m));
        if (c == Complex(0.0, 0.0)) continue;
        acc.middleCols(n * dr, dr).noalias() += c * left.middleCols(m * dr, dr);
      }
    }
  }
  return acc;
}

Matrix apply_on_targets(const DensityState& state,
                        const std::vector<Matrix>& ops,
                        const std::vector<std::string>& targets) {
  if (targets.empty()) throw std::invalid_argument("no target modes given");
  const std::vector<int> dims = state.local_dims();
  const int m = state.mode_count();

  std::vector<int> pos;
  pos.reserve(targets.size());
  std::unordered_set<int> taken;
  for (const auto& t : targets) {
    const int p = state.mode_index(t);
    if (!taken.insert(p).second) {
      throw std::invalid_argument("repeated target mode '" + t + "'");
    }
    pos.push_back(p);
  }

  Index dt = 1;
  for (int p : pos) dt *= dims[p];
  for (const Matrix& k : ops) {
    if (k.rows() != dt || k.cols() != dt) {
      throw std::invalid_argument("operator shape does not match target subspace");
    }
  }
  const Index dr = state.dim() / dt;

  std::vector<int> order = pos;
  for (int i = 0; i < m; ++i) {
    if (!taken.count(i)) order.push_back(i);
  }
  bool identity_order = true;
  for (int i = 0; i < m; ++i) identity_order &= (order[i] == i);

  if (identity_order) {
    return contract_front(state.matrix(), ops, dt, dr);
  }
  const std::vector<Index> map = permutation_map(dims, order);
  const Matrix rho_p = gather(state.matrix(), map);
  const Matrix acc = contract_front(rho_p, ops, dt, dr);
  Matrix out(state.dim(), state.dim());
  scatter(out, acc, map);
  return out;
}

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

const char* to_string(ModeKind k) {
  return k == ModeKind::light ? "light" : "spinwave";
}

const char* to_string(Polarization p) {
  switch (p) {
    case Polarization::horizontal: return "H";
    case Polarization::vertical: return "V";
    case Polarization::diagonal: return "D";
    case Polarization::antidiagonal: return "A";
    case Polarization::circular_right: return "R";
    case Polarization::circular_left: return "L";
    case Polarization::none: break;
  }
  return "none";
}

Polarization polarization_from_string(std::string_view s) {
  if (s == "H") return Polarization::horizontal;
  if (s == "V") return Polarization::vertical;
  if (s == "D") return Polarization::diagonal;
  if (s == "A") return Polarization::antidiagonal;
  if (s == "R") return Polarization::circular_right;
  if (s == "L") return Polarization::circular_left;
  if (s == "none" || s.empty()) return Polarization::none;
  throw std::invalid_argument("unknown polarization '" + std::string(s) + "'");
}

DensityState::DensityState(std::vector<ModeDescriptor> modes, Matrix rho)
    : modes_(std::move(modes)), rho_(std::move(rho)) {
  check_mode_list(modes_);
  const Index d = dims_product(local_dims());
  if (rho_.rows() != d || rho_.cols() != d) {
    throw std::invalid_argument("density matrix shape does not match mode truncations");
  }
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw std::invalid_argument("density matrix not Hermitian within 1e-12");
  }
  const Complex tr = rho_.trace();
  if (std::abs(tr.imag()) > kEigTol || tr.real() < -kEigTol ||
      tr.real() > 1.0 + kEigTol) {
    throw std::invalid_argument("density matrix trace outside [0, 1 + 1e-9]");
  }
}

int DensityState::mode_index(std::string_view uuid) const {
  for (int i = 0; i < mode_count(); ++i) {
    if (modes_[i].uuid == uuid) return i;
  }
  throw std::invalid_argument("unknown mode uuid '" + std::string(uuid) + "'");
}

const ModeDescriptor& DensityState::mode(std::string_view uuid) const {
  return modes_[mode_index(uuid)];
}

bool DensityState::has_mode(std::string_view uuid) const {
  return std::any_of(modes_.begin(), modes_.end(),
                     [&](const ModeDescriptor& m) { return m.uuid == uuid; });
}

std::vector<int> DensityState::local_dims() const {
  std::vector<int> d(modes_.size());
  std::transform(modes_.begin(), modes_.end(), d.begin(),
                 [](const ModeDescriptor& m) { return m.truncation + 1; });
  return d;
}

double DensityState::trace_real() const { return rho_.trace().real(); }

bool DensityState::validate(std::string* why) const {
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    if (why) *why = "Hermiticity deviation " + std::to_string(herm);
    return false;
  }
  const double tr = trace_real();
  if (tr < -kEigTol || tr > 1.0 + kEigTol) {
    if (why) *why = "trace " + std::to_string(tr) + " outside [0, 1+1e-9]";
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho_),
                                           Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kEigTol) {
    if (why) *why = "negative eigenvalue " + std::to_string(min_eig);
    return false;
  }
  return true;
}

double KrausSet::completeness_excess() const {
  if (operators.empty()) throw std::invalid_argument("empty Kraus set");
  Matrix s = Matrix::Zero(operators[0].rows(), operators[0].cols());
  for (const Matrix& k : operators) s.noalias() += k.adjoint() * k;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(s), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() - 1.0;
}

bool KrausSet::is_trace_preserving(double tol) const {
  if (operators.empty()) throw std::invalid_argument("empty Kraus set");
  Matrix s = Matrix::Zero(operators[0].rows(), operators[0].cols());
  for (const Matrix& k : operators) s.noalias() += k.adjoint() * k;
  s -= Matrix::Identity(s.rows(), s.cols());
  return s.cwiseAbs().maxCoeff() <= tol;
}

KrausSet targeted(KrausSet ks, std::vector<std::string> target_modes) {
  ks.target_modes = std::move(target_modes);
  return ks;
}

DensityState vacuum_state(std::vector<ModeDescriptor> modes) {
  if (modes.empty()) throw std::invalid_argument("vacuum_state: no modes given");
  check_mode_list(modes);
  Index d = 1;
  for (const auto& m : modes) d *= m.truncation + 1;
  Matrix rho = Matrix::Zero(d, d);
  rho(0, 0) = 1.0;
  return DensityState(std::move(modes), std::move(rho));
}

DensityState fock_state(int n, const ModeDescriptor& mode) {
  if (n < 0 || n > mode.truncation) {
    throw std::invalid_argument("fock_state: photon number exceeds truncation");
  }
  const Index d = mode.truncation + 1;
  Matrix rho = Matrix::Zero(d, d);
  rho(n, n) = 1.0;
  return DensityState({mode}, std::move(rho));
}

DensityState coherent_state(Complex alpha, const ModeDescriptor& mode) {
  const int t = mode.truncation;
  Eigen::VectorXcd v(t + 1);
  Complex c = std::exp(Complex(-std::norm(alpha) / 2.0, 0.0));
  v(0) = c;
  for (int n = 1; n <= t; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    v(n) = c;
  }
  v /= v.norm();  // renormalize after truncation
  return DensityState({mode}, v * v.adjoint());
}

double coherent_tail_mass(Complex alpha, int truncation) {
  const double lam = std::norm(alpha);
  double term = std::exp(-lam);
  double sum = term;
  for (int n = 1; n <= truncation; ++n) {
    term *= lam / n;
    sum += term;
  }
  return std::max(0.0, 1.0 - sum);
}

DensityState pure_state(std::vector<ModeDescriptor> modes,
                        const Eigen::VectorXcd& amplitudes) {
  const double nrm = amplitudes.norm();
  if (nrm <= 0.0) throw std::invalid_argument("pure_state: zero amplitude vector");
  const Eigen::VectorXcd v = amplitudes / nrm;
  return DensityState(std::move(modes), v * v.adjoint());
}

DensityState tensor(const DensityState& a, const DensityState& b) {
  for (const auto& m : b.modes()) {
    if (a.has_mode(m.uuid)) {
      throw std::invalid_argument("tensor: mode uuid collision '" + m.uuid + "'");
    }
  }
  const Index da = a.dim();
  const Index db = b.dim();
  Matrix out(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  std::vector<ModeDescriptor> modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  return DensityState(std::move(modes), std::move(out));
}

DensityState partial_trace(const DensityState& state, std::string_view mode_uuid) {
  const int p = state.mode_index(mode_uuid);
  const std::vector<int> dims = state.local_dims();
  Index outer = 1, inner = 1;
  for (int i = 0; i < p; ++i) outer *= dims[i];
  for (int i = p + 1; i < state.mode_count(); ++i) inner *= dims[i];
  const int d = dims[p];

  Matrix out = Matrix::Zero(outer * inner, outer * inner);
  for (int k = 0; k < d; ++k) {
    for (Index orow = 0; orow < outer; ++orow) {
      for (Index ocol = 0; ocol < outer; ++ocol) {
        out.block(orow * inner, ocol * inner, inner, inner) +=
            state.matrix().block((orow * d + k) * inner, (ocol * d + k) * inner,
                                 inner, inner);
      }
    }
  }
  std::vector<ModeDescriptor> modes;
  for (int i = 0; i < state.mode_count(); ++i) {
    if (i != p) modes.push_back(state.modes()[i]);
  }
  return DensityState(std::move(modes), std::move(out));
}

DensityState relabel_mode(const DensityState& state, std::string_view mode_uuid,
                          const ModeDescriptor& replacement) {
  const int p = state.mode_index(mode_uuid);
  if (replacement.truncation != state.modes()[p].truncation) {
    throw std::invalid_argument("relabel_mode: truncation must be unchanged");
  }
  std::vector<ModeDescriptor> modes = state.modes();
  modes[p] = replacement;
  return DensityState(std::move(modes), state.matrix());
}

DensityState apply_kraus(const DensityState& state, const KrausSet& ks) {
  if (ks.operators.empty()) throw std::invalid_argument("empty Kraus set");
  Matrix out = apply_on_targets(state, ks.operators, ks.target_modes);
  return DensityState(state.modes(), std::move(out));
}

DensityState apply_unitary(const DensityState& state, const Matrix& u,
                           const std::vector<std::string>& target_modes) {
  Matrix out = apply_on_targets(state, {u}, target_modes);
  return DensityState(state.modes(), std::move(out));
}

double mean_photon_number(const DensityState& state, std::string_view mode_uuid) {
  const int p = state.mode_index(mode_uuid);
  const std::vector<int> dims = state.local_dims();
  const std::vector<Index> strides = strides_of(dims);
  double sum = 0.0;
  for (Index i = 0; i < state.dim(); ++i) {
    const int n = static_cast<int>((i / strides[p]) % dims[p]);
    sum += n * state.matrix()(i, i).real();
  }
  return sum;
}

CountPredicate exactly(std::string mode_uuid, int n) {
  return {std::move(mode_uuid), [n](int k) { return k == n; }};
}

CountPredicate at_least(std::string mode_uuid, int n) {
  return {std::move(mode_uuid), [n](int k) { return k >= n; }};
}

double outcome_probability(const DensityState& state,
                           const std::vector<CountPredicate>& predicates) {
  const std::vector<int> dims = state.local_dims();
  const std::vector<Index> strides = strides_of(dims);
  // Pre-evaluate each predicate over its mode's count range.
  struct Sel {
    int pos;
    std::vector<char> ok;
  };
  std::vector<Sel> sels;
  for (const auto& pr : predicates) {
    Sel s;
    s.pos = state.mode_index(pr.mode_uuid);
    s.ok.resize(dims[s.pos]);
    for (int n = 0; n < dims[s.pos]; ++n) s.ok[n] = pr.accept(n) ? 1 : 0;
    sels.push_back(std::move(s));
  }
  double sum = 0.0;
  for (Index i = 0; i < state.dim(); ++i) {
    bool take = true;
    for (const Sel& s : sels) {
      const int n = static_cast<int>((i / strides[s.pos]) % dims[s.pos]);
      if (!s.ok[n]) {
        take = false;
        break;
      }
    }
    if (take) sum += state.matrix()(i, i).real();
  }
  return sum;
}

double fidelity(const DensityState& rho, const DensityState& sigma) {
  if (rho.mode_count() != sigma.mode_count()) {
    throw std::invalid_argument("fidelity: mode lists differ");
  }
  for (int i = 0; i < rho.mode_count(); ++i) {
    if (rho.modes()[i].uuid != sigma.modes()[i].uuid ||
        rho.modes()[i].truncation != sigma.modes()[i].truncation) {
      throw std::invalid_argument("fidelity: mode lists differ");
    }
  }
  // Truncated pipelines can lose a little trace to clipped amplifier blocks;
  // tolerate up to 1% and use the states as-is.
  if (std::abs(rho.trace_real() - 1.0) > 1e-2 ||
      std::abs(sigma.trace_real() - 1.0) > 1e-2) {
    throw std::invalid_argument("fidelity: inputs must be normalized");
  }

  const Matrix a = hermitize(rho.matrix());
  const Matrix b = hermitize(sigma.matrix());

  Eigen::SelfAdjointEigenSolver<Matrix> ea(a);
  const Index ia = a.rows() - 1;  // eigenvalues ascending
  if (ea.eigenvalues()(ia) >= 1.0 - kPureTol) {
    const Eigen::VectorXcd psi = ea.eigenvectors().col(ia);
    return (psi.adjoint() * b * psi)(0, 0).real();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eb(b);
  const Index ib = b.rows() - 1;
  if (eb.eigenvalues()(ib) >= 1.0 - kPureTol) {
    const Eigen::VectorXcd psi = eb.eigenvectors().col(ib);
    return (psi.adjoint() * a * psi)(0, 0).real();
  }

  Eigen::VectorXd lam = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_a =
      ea.eigenvectors() * lam.asDiagonal() * ea.eigenvectors().adjoint();
  const Matrix m = hermitize(sqrt_a * b * sqrt_a);
  Eigen::SelfAdjointEigenSolver<Matrix> em(m, Eigen::EigenvaluesOnly);
  const double tr = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

}  // namespace memtwin
