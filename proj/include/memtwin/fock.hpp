#pragma once

// Truncated-Fock-space density-matrix engine: labeled multi-mode states,
// tensor composition, partial trace, Kraus/unitary channel application, and
// the basic observables (mean photon number, outcome probabilities, fidelity).
//
// Layout convention: the joint matrix is indexed by the mixed-radix Fock
// tuple in row-major order over the mode list, i.e. the FIRST mode is the
// most significant digit.  Serialized matrices are portable under this rule.

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace memtwin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Numeric tolerances of the density-matrix type: Hermiticity is tight
// (element-wise), PSD/trace/completeness slack is loose, bracketing
// double-precision accumulation over <= ~1e4-dimensional spaces.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigTol = 1e-9;
// Rank-1 detection threshold for the fidelity shortcut.
inline constexpr double kPureTol = 1e-9;

enum class ModeKind { light, spinwave };

enum class Polarization {
  none,
  horizontal,
  vertical,
  diagonal,
  antidiagonal,
  circular_right,
  circular_left,
};

const char* to_string(ModeKind k);
const char* to_string(Polarization p);
Polarization polarization_from_string(std::string_view s);

struct ModeDescriptor {
  std::string uuid;
  ModeKind kind = ModeKind::light;
  int truncation = 1;             // max photon number; local dimension + 1
  double wavelength_nm = 0.0;     // 0 = unspecified
  double bandwidth_hz = 0.0;      // 0 = unspecified
  Polarization polarization = Polarization::none;
};

// Multi-mode density matrix over labeled, individually truncated Fock modes.
// Immutable after construction; operations return new states.  Construction
// validates shape, Hermiticity (<= 1e-12 element-wise) and trace
// (in [-1e-9, 1 + 1e-9]); the O(D^3) PSD check lives in validate().
class DensityState {
 public:
  DensityState(std::vector<ModeDescriptor> modes, Matrix rho);

  const std::vector<ModeDescriptor>& modes() const { return modes_; }
  const Matrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  int mode_count() const { return static_cast<int>(modes_.size()); }

  // Position of a mode in the list; throws std::invalid_argument if absent.
  int mode_index(std::string_view uuid) const;
  const ModeDescriptor& mode(std::string_view uuid) const;
  bool has_mode(std::string_view uuid) const;

  std::vector<int> local_dims() const;  // truncation_i + 1 per mode
  double trace_real() const;

  // Full invariant check including the PSD eigenvalue bound (>= -1e-9).
  // Returns false and fills `why` (if given) on the first violation.
  bool validate(std::string* why = nullptr) const;

 private:
  std::vector<ModeDescriptor> modes_;
  Matrix rho_;
};

// Ordered Kraus collection acting on the joint space of `target_modes`
// (listed most-significant first).  All operators share one square shape,
// which must equal the product of the target local dimensions at apply time.
struct KrausSet {
  std::vector<Matrix> operators;
  std::vector<std::string> target_modes;

  // max eigenvalue of sum K^H K minus 1; valid (sub)channels satisfy
  // completeness_excess() <= kEigTol.
  double completeness_excess() const;
  // true when sum K^H K == I within `tol` element-wise.
  bool is_trace_preserving(double tol = kEigTol) const;
};

// Re-bind a Kraus set to concrete mode uuids.
KrausSet targeted(KrausSet ks, std::vector<std::string> target_modes);

// ---- construction ----------------------------------------------------------

DensityState vacuum_state(std::vector<ModeDescriptor> modes);
DensityState fock_state(int n, const ModeDescriptor& mode);
// Truncated coherent state, renormalized to trace 1 after truncation.
DensityState coherent_state(Complex alpha, const ModeDescriptor& mode);
// Probability mass of |alpha> beyond the truncation (pre-normalization
// trace deficit); the diagnostic behind truncation warnings.
double coherent_tail_mass(Complex alpha, int truncation);
// Pure state from an amplitude vector over the joint basis (normalized here).
DensityState pure_state(std::vector<ModeDescriptor> modes,
                        const Eigen::VectorXcd& amplitudes);

// ---- composition -----------------------------------------------------------

DensityState tensor(const DensityState& a, const DensityState& b);
// Removes `mode_uuid`, summing it out; tracing the last mode leaves a 1x1
// zero-mode state carrying the trace.
DensityState partial_trace(const DensityState& state, std::string_view mode_uuid);
// Same physical state with one mode relabeled (truncation unchanged).
DensityState relabel_mode(const DensityState& state, std::string_view mode_uuid,
                          const ModeDescriptor& replacement);

// ---- channel application ---------------------------------------------------

// rho' = sum_i (K_i ⊗ I) rho (K_i ⊗ I)^H with K_i embedded on
// ks.target_modes.  Trace non-increasing, Hermiticity preserved.
DensityState apply_kraus(const DensityState& state, const KrausSet& ks);
// U rho U^H with U embedded on `target_modes`; trace exactly preserved for
// unitary U (clipped lifted blocks may lose trace, as flagged by channels).
DensityState apply_unitary(const DensityState& state, const Matrix& u,
                           const std::vector<std::string>& target_modes);

// ---- observables -----------------------------------------------------------

double mean_photon_number(const DensityState& state, std::string_view mode_uuid);

// Photon-count predicate on one mode; modes without a predicate accept all.
struct CountPredicate {
  std::string mode_uuid;
  std::function<bool(int)> accept;
};
CountPredicate exactly(std::string mode_uuid, int n);
CountPredicate at_least(std::string mode_uuid, int n);
double outcome_probability(const DensityState& state,
                           const std::vector<CountPredicate>& predicates);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.  Uses the overlap
// shortcut <psi|sigma|psi> when an argument is rank-1 within kPureTol,
// otherwise eigendecomposition-based square roots.  Requires identical mode
// lists (uuid + truncation) and near-unit traces; truncation-induced trace
// deficits up to 1% are tolerated and the states are used as-is.
double fidelity(const DensityState& rho, const DensityState& sigma);

}  // namespace memtwin
