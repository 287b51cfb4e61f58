#pragma once
// Digital-twin layer: published memory parameter registry, configured memory
// instances with derived channel parameters, source compatibility checks, and
// the storage/retrieval channel-query protocol.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "memtwin/channels.hpp"
#include "memtwin/fock.hpp"

namespace memtwin {

enum class Scheme { lambda_type, ladder_type };
enum class PolarizationClass { linear, circular };

std::string to_string(Scheme s);
std::string to_string(PolarizationClass p);
Scheme scheme_from_string(const std::string& s);
PolarizationClass polarization_class_from_string(const std::string& s);

// Direct channel parameters for a user-defined Test memory: beamsplitter
// transmissivities of the read-in/read-out stages and the early/late-bin
// thermal channels.  Storage time does not rescale these.
struct TestChannelParams {
  double t_in = 1.0;
  double t_out = 1.0;
  double kappa_early = 1.0;
  double n_bar_early = 0.0;
  double kappa_late = 1.0;
  double n_bar_late = 0.0;
};

// Published operating parameters of one memory class.  Efficiencies are
// power quantities at zero storage time; bandwidth in Hz, wavelength in nm,
// times in seconds.
struct MemorySpec {
  std::string class_name;
  std::string atomic_species;  // "Cs" or "Rb"
  Scheme scheme = Scheme::lambda_type;
  std::string protocol;  // EIT / ORCA / FLAME / ATS / SR
  double wavelength_nm = 0.0;
  double eta_e2e_0 = 0.0;
  double eta_int_0 = 0.0;
  double mu_1 = 0.0;
  double bandwidth_hz = 0.0;
  double lifetime_s = 0.0;
  double retrigger_time_s = 0.0;
  PolarizationClass polarization = PolarizationClass::linear;

  bool is_test = false;
  TestChannelParams test;  // meaningful only when is_test

  // Transmission efficiency eta_e2e_0 / eta_int_0 of the non-memory path.
  double eta_trans() const;
  void validate() const;  // throws std::invalid_argument on broken invariants
};

// The eleven built-in classes, in registry order.
const std::vector<MemorySpec>& memory_registry();

// Finds a registry class by name; unknown names raise std::invalid_argument
// listing the available classes (with a nearest-name hint).
const MemorySpec& registry_lookup(const std::string& class_name);

// Human-editable registry text: one [ClassName] section per memory, one
// "key = value" line per field, doubles in shortest round-trip form.
std::string serialize_registry(const std::vector<MemorySpec>& specs);
std::vector<MemorySpec> parse_registry(const std::string& text);

enum class Occupancy { empty, stored };
enum class OpType { storage, retrieval };

struct ChannelQuery {
  OpType op_type = OpType::storage;
  std::string input_mode;  // uuid within the caller's state
};

// One step of a channel plan, in execution order.
struct AddModeOp {
  ModeDescriptor mode;  // appended in vacuum
};
struct ApplyLiftedOp {
  LiftedUnitary lifted;
  std::vector<std::string> targets;
};
struct ApplyKrausOp {
  KrausSet kraus;  // target_modes already bound
};
struct TraceOutOp {
  std::string mode;
};
using MemoryOperation =
    std::variant<AddModeOp, ApplyLiftedOp, ApplyKrausOp, TraceOutOp>;

struct ChannelResponse {
  std::vector<std::string> kraus_state_indices;  // modes the returned ops act on
  double operation_time_s = 0.0;
  double retrigger_time_s = 0.0;
  bool retrigger = false;
  std::vector<MemoryOperation> plan;
};

struct CompatibilityResult {
  bool accepted = true;
  std::string reason;  // empty when accepted; names the first failing criterion
};

// A configured memory with derived channel parameters and the occupancy
// state machine.  Single-owner: do not query one instance concurrently.
class MemoryInstance {
 public:
  MemoryInstance(MemorySpec spec, double storage_time_s, int memory_truncation);

  const MemorySpec& spec() const { return spec_; }
  double storage_time_s() const { return storage_time_s_; }
  int memory_truncation() const { return memory_truncation_; }

  // Internal efficiency decayed to the configured storage time; Test
  // memories report (1-t_in)(1-t_out) independent of time.
  double eta_int() const;
  double eta_in() const;   // sqrt(eta_int), read-in reflectance (power)
  double eta_out() const;  // = eta_in by the symmetric-split model
  double t_in() const;     // read-in beamsplitter transmissivity
  double t_out() const;
  double kappa_early() const;
  double n_bar_early() const;
  double kappa_late() const;
  double n_bar_late() const;
  double gain() const;  // amplifier gain 1 + (1-kappa_l) n_bar_l of the late bin

  Occupancy occupancy() const { return occupancy_; }
  bool retrigger_available() const { return retrigger_available_; }
  const std::string& spinwave_uuid() const { return spinwave_uuid_; }

  // Builds the operation plan for a storage or retrieval request and
  // advances the occupancy state machine.  Protocol violations (double
  // storage, retrieval while empty, incompatible input) throw
  // std::domain_error / std::invalid_argument.
  ChannelResponse query(const DensityState& state, const ChannelQuery& q);

 private:
  MemorySpec spec_;
  double storage_time_s_ = 0.0;
  int memory_truncation_ = 1;
  Occupancy occupancy_ = Occupancy::empty;
  bool retrigger_available_ = false;
  std::string spinwave_uuid_;
  ModeDescriptor stored_input_;  // descriptor captured at storage time
};

MemoryInstance init_memory(const MemorySpec& spec, double storage_time_s,
                           int memory_truncation);
MemoryInstance init_memory(const std::string& memory_type, double storage_time_s,
                           int memory_truncation);

// Accept iff wavelength within 1 nm, mode bandwidth not above the memory's,
// and polarization inside the accepted class (H/V for linear, R/L for
// circular).  Checks run in that order and the first failure is reported.
// Zero wavelength/bandwidth or unspecified polarization skip that criterion.
CompatibilityResult compatibility_check(const MemoryInstance& mem,
                                        const ModeDescriptor& mode);

ChannelResponse channel_query(MemoryInstance& mem, const DensityState& state,
                              const ChannelQuery& q);

// Runs a response plan against a state.
DensityState apply_channel_plan(const DensityState& state,
                                const std::vector<MemoryOperation>& plan);

// A photon transiting while a spinwave is stored: the stored state is left
// untouched and the transient returns unchanged.  Requires occupancy=stored.
DensityState passthrough_during_storage(const MemoryInstance& mem,
                                        const DensityState& transient_photon);

}  // namespace memtwin
