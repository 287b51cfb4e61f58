#pragma once
// Experiment harnesses wiring the state engine, channel constructors and the
// memory twin, with oracle columns from the closed-form module.

#include <string>
#include <vector>

#include "memtwin/analytic.hpp"
#include "memtwin/fock.hpp"
#include "memtwin/memory.hpp"
#include "memtwin/table.hpp"

namespace memtwin {

enum class InputKind { single_photon, coherent };

// Synthesizes a light-mode descriptor the given memory accepts (its
// wavelength and bandwidth, first polarization of its accepted class).
ModeDescriptor compatible_input_mode(const MemorySpec& spec, std::string uuid,
                                     int truncation);

// Closed-form fringe parameters implied by a configured memory: r^2 is the
// decayed internal efficiency and (tau, gain) the late-bin channel split.
MziParams oracle_params_for(const MemoryInstance& mem, double alpha);

// ---------------------------------------------------------------------------
// Interferometer with a memory in one arm and a phase element in the other.

struct MziConfig {
  InputKind input = InputKind::single_photon;
  double alpha = 1.0;  // per-arm coherent amplitude (interferometer input |sqrt(2) alpha>)
  MemorySpec memory;
  double storage_time_s = 0.0;
  int phases = 41;                 // uniform grid over [0, 2*pi], endpoints included
  std::vector<double> phase_grid;  // overrides `phases` when non-empty
  int truncation = 10;
  int memory_truncation = -1;  // -1: same as truncation
  bool second_beamsplitter = true;
};

struct MziRow {
  double phi = 0.0;
  double n_a = 0.0;
  double n_b = 0.0;
  double oracle_n_a = 0.0;
  double abs_error = 0.0;
};

struct MziResult {
  std::vector<MziRow> rows;
  double visibility_numeric = 0.0;  // (max-min)/(max+min) over the grid
  double visibility_oracle = 0.0;
  bool truncation_warning = false;  // per-arm coherent tail mass > 1e-6
  double input_tail_mass = 0.0;
  MziParams oracle;  // parameters used for the oracle columns (phi unset)
  ExperimentTable table;
};

MziResult run_mzi(const MziConfig& cfg);

// ---------------------------------------------------------------------------
// Single-photon fringe visibility across memories and storage times.

struct MemoryComparisonConfig {
  std::vector<std::string> memories;  // empty: whole registry
  int points = 20;                    // log grid over [1 ns, 10 * lifetime]
  int truncation = 6;
};

struct MemoryComparisonRow {
  std::string memory;
  double storage_time_s = 0.0;
  double visibility = 0.0;
  double oracle_visibility = 0.0;
};

struct MemoryComparisonResult {
  std::vector<MemoryComparisonRow> rows;
  ExperimentTable table;
};

MemoryComparisonResult run_mzi_memory_comparison(
    const MemoryComparisonConfig& cfg);

// ---------------------------------------------------------------------------
// Dual-rail token protocol: four prepared states, two memories, two bases.

struct TokenSweep {
  MemorySpec memory;
  bool use_memory = true;  // false: detectors-only baseline
  std::vector<double> mu_values{1.0};
  std::vector<double> storage_times_s{0.0};
  int truncation = 4;
  double detector_kappa = 0.25;
  double detector_n_bar = 7e-5 / (1.0 - 0.25);
};

struct TokenRow {
  double mu_emission = 1.0;
  double storage_time_s = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c_zz = 0.0;
  double c_xx = 0.0;
  double c = 0.0;
  bool above_threshold = false;  // c > 7/8
  bool within_retrigger = true;  // storage_time <= retrigger_time
};

struct TokenSweepResult {
  std::vector<TokenRow> rows;
  ExperimentTable table;
};

TokenSweepResult run_token(const TokenSweep& cfg);

// Correctness security threshold 7/8.
inline constexpr double kTokenThreshold = 7.0 / 8.0;

// ---------------------------------------------------------------------------
// Late-bin mean photon number vs. truncation (memory arm only).

struct TruncationSweepConfig {
  MemorySpec memory;
  InputKind input = InputKind::coherent;
  double alpha = 1.0;
  double storage_time_s = 0.0;
  int trunc_min = 1;
  int trunc_max = 10;
};

struct TruncationRow {
  int truncation = 1;
  double n_late = 0.0;
  double delta = 0.0;  // |n(T+1) - n(T)|, forward difference; last row has none
  bool has_delta = false;
  bool converged = false;  // delta < 1e-3
};

struct TruncationSweepResult {
  std::vector<TruncationRow> rows;
  int converged_at = -1;  // first truncation whose forward delta is < 1e-3
  ExperimentTable table;
};

TruncationSweepResult run_truncation_sweep(const TruncationSweepConfig& cfg);

// Convergence threshold on successive late-bin means.
inline constexpr double kTruncationConvergence = 1e-3;

// ---------------------------------------------------------------------------
// Fidelity of the retrieved state against the input.

enum class FidelityStudy { efficiency, noise, registry };

struct FidelitySweepConfig {
  FidelityStudy study = FidelityStudy::registry;
  int points = 21;        // grid size for efficiency/noise studies
  int truncation = 10;    // coherent-state truncation
  double alpha = 1.0;
  double noise_kappa = 0.5;  // kappa of the noise study's late-bin channel
};

struct FidelityRow {
  double eta_int = 0.0;    // efficiency study coordinate
  double n_bar_b = 0.0;    // noise study coordinate
  std::string memory;      // registry study coordinate
  double eta_e2e_0 = 0.0;  // registry study
  double fidelity_single = 0.0;
  double fidelity_coherent = 0.0;
  double snr_single = 0.0;  // noise study only
};

struct FidelitySweepResult {
  FidelityStudy study = FidelityStudy::registry;
  std::vector<FidelityRow> rows;
  ExperimentTable table;
};

FidelitySweepResult run_fidelity_sweep(const FidelitySweepConfig& cfg);

}  // namespace memtwin
