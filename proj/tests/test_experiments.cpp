// Experiment harnesses: interferometer runs against the closed-form oracle,
// the memory comparison sweep, the dual-rail token protocol, truncation
// convergence, and the fidelity studies.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "memtwin/experiments.hpp"
#include "memtwin/metrics.hpp"

using namespace memtwin;

namespace {

MemorySpec test_memory(double t_in, double t_out, double kappa_late,
                       double n_bar_late) {
  MemorySpec s;
  s.class_name = "TestHarness";
  s.is_test = true;
  s.test.t_in = t_in;
  s.test.t_out = t_out;
  s.test.kappa_late = kappa_late;
  s.test.n_bar_late = n_bar_late;
  s.wavelength_nm = 895.0;
  s.bandwidth_hz = 500e6;
  s.retrigger_time_s = 1e-6;
  return s;
}

double max_abs_error(const MziResult& r) {
  double worst = 0.0;
  for (const MziRow& row : r.rows) worst = std::max(worst, row.abs_error);
  return worst;
}

}  // namespace

TEST_CASE("compatible_input_mode matches the memory's acceptance window") {
  const MemorySpec& linear = registry_lookup("Lambda895");
  const ModeDescriptor m = compatible_input_mode(linear, "q", 7);
  CHECK(m.uuid == "q");
  CHECK(m.kind == ModeKind::light);
  CHECK(m.truncation == 7);
  CHECK(m.wavelength_nm == doctest::Approx(895.0));
  CHECK(m.bandwidth_hz == doctest::Approx(220e6));
  CHECK(m.polarization == Polarization::horizontal);
  CHECK(compatibility_check(init_memory(linear, 0.0, 2), m).accepted);

  const MemorySpec& circular = registry_lookup("Ladder780");
  const ModeDescriptor c = compatible_input_mode(circular, "q", 3);
  CHECK(c.polarization == Polarization::circular_right);
  CHECK(compatibility_check(init_memory(circular, 0.0, 2), c).accepted);
}

TEST_CASE("oracle parameters derived from a configured memory") {
  const MziParams p =
      oracle_params_for(init_memory("Lambda895", 0.0, 4), 1.5);
  CHECK(p.alpha == doctest::Approx(1.5));
  CHECK(p.r * p.r == doctest::Approx(0.33).epsilon(1e-14));
  CHECK(p.gain == doctest::Approx(1.0231).epsilon(1e-12));
  CHECK(p.tau == doctest::Approx(0.3850448577259251).epsilon(1e-12));
}

TEST_CASE("single-photon interferometer matches the closed form") {
  MziConfig cfg;
  cfg.input = InputKind::single_photon;
  cfg.memory = registry_lookup("Lambda895");
  cfg.truncation = 10;
  const MziResult r = run_mzi(cfg);
  REQUIRE(r.rows.size() == 41);
  CHECK(r.rows.front().phi == doctest::Approx(0.0));
  CHECK(r.rows.back().phi ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(max_abs_error(r) < 1e-8);
  CHECK(r.visibility_oracle ==
        doctest::Approx(0.6130847263159309).epsilon(1e-12));
  CHECK(r.visibility_numeric ==
        doctest::Approx(r.visibility_oracle).epsilon(1e-9));
  CHECK(!r.truncation_warning);
  // Photon number is conserved up to the memory's loss/noise balance:
  // n_A + n_B stays constant over phase.
  const double sum0 = r.rows[0].n_a + r.rows[0].n_b;
  for (const MziRow& row : r.rows) {
    CHECK(row.n_a + row.n_b == doctest::Approx(sum0).epsilon(1e-10));
  }
  CHECK(r.table.columns ==
        std::vector<std::string>{"phi", "n_A", "n_B", "oracle_n_A", "abs_err"});
  REQUIRE(r.table.footer.size() == 2);
  CHECK(r.table.footer[0].first == "visibility");
  CHECK(r.table.footer[1].first == "oracle_visibility");
}

TEST_CASE("perfect memory gives unit visibility") {
  MziConfig cfg;
  cfg.input = InputKind::single_photon;
  cfg.memory = test_memory(0.0, 0.0, 1.0, 0.0);
  cfg.truncation = 6;
  const MziResult r = run_mzi(cfg);
  CHECK(r.visibility_numeric == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(max_abs_error(r) < 1e-10);
}

TEST_CASE("noisy test memory still tracks the oracle") {
  // Mild gain: amplifier truncation error stays far below the tolerance.
  MziConfig cfg;
  cfg.input = InputKind::single_photon;
  cfg.memory = test_memory(0.5, 0.5, 0.8, 0.05);
  cfg.truncation = 6;
  const MziResult r = run_mzi(cfg);
  CHECK(max_abs_error(r) < 1e-10);
  CHECK(r.visibility_numeric ==
        doctest::Approx(r.visibility_oracle).epsilon(1e-9));

  // Stronger gain converges more slowly but still approaches the oracle.
  MziConfig hot = cfg;
  hot.memory = test_memory(0.4, 0.4, 0.6, 0.25);
  hot.truncation = 8;
  CHECK(max_abs_error(run_mzi(hot)) < 1e-7);
}

TEST_CASE("coherent interferometer: truncation-limited agreement") {
  MziConfig cfg;
  cfg.input = InputKind::coherent;
  cfg.alpha = 1.5;
  cfg.memory = registry_lookup("Lambda895");
  cfg.truncation = 7;
  const MziResult at7 = run_mzi(cfg);
  CHECK(max_abs_error(at7) < 6e-3);
  CHECK(at7.truncation_warning);  // tail mass 2.3e-3 at alpha 1.5, trunc 7
  CHECK(at7.input_tail_mass ==
        doctest::Approx(0.0022670878963223506).epsilon(1e-9));

  cfg.truncation = 12;
  const MziResult at12 = run_mzi(cfg);
  CHECK(max_abs_error(at12) < 1e-4);
  CHECK(max_abs_error(at12) < max_abs_error(at7));  // improves with truncation
  CHECK(!at12.truncation_warning);
  CHECK(at12.visibility_numeric ==
        doctest::Approx(at12.visibility_oracle).epsilon(1e-4));
}

TEST_CASE("removing the second beamsplitter flattens the fringe") {
  MziConfig cfg;
  cfg.input = InputKind::single_photon;
  cfg.memory = registry_lookup("Lambda895");
  cfg.truncation = 10;
  cfg.phases = 9;
  cfg.second_beamsplitter = false;
  const MziResult r = run_mzi(cfg);
  for (const MziRow& row : r.rows) {
    CHECK(row.n_a == doctest::Approx(0.0881).epsilon(1e-8));
    CHECK(row.n_b == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(row.abs_error < 1e-8);
  }

  MziConfig coh = cfg;
  coh.input = InputKind::coherent;
  coh.alpha = 1.0;
  coh.truncation = 10;
  const MziResult rc = run_mzi(coh);
  const MziParams oracle = rc.oracle;
  for (const MziRow& row : rc.rows) {
    CHECK(row.n_a == doctest::Approx(coherent_no_recombine(oracle)).epsilon(1e-5));
    CHECK(row.n_b == doctest::Approx(1.0).epsilon(1e-12));  // alpha^2
  }
}

TEST_CASE("interferometer configuration validation") {
  MziConfig cfg;
  cfg.memory = registry_lookup("Lambda895");
  cfg.alpha = -0.5;
  cfg.input = InputKind::coherent;
  CHECK_THROWS_AS(run_mzi(cfg), std::invalid_argument);
  cfg.alpha = 1.0;
  cfg.truncation = 0;
  CHECK_THROWS_AS(run_mzi(cfg), std::invalid_argument);
  cfg.truncation = 5;
  cfg.phases = 0;
  CHECK_THROWS_AS(run_mzi(cfg), std::invalid_argument);
}

TEST_CASE("memory comparison sweep is monotone and oracle-aligned") {
  MemoryComparisonConfig cfg;
  cfg.memories = {"Lambda895"};
  cfg.points = 6;
  cfg.truncation = 6;
  const MemoryComparisonResult r = run_mzi_memory_comparison(cfg);
  REQUIRE(r.rows.size() == 6);
  CHECK(r.rows.front().storage_time_s == doctest::Approx(1e-9));
  CHECK(r.rows.back().storage_time_s ==
        doctest::Approx(10.0 * 140e-9).epsilon(1e-12));
  for (size_t i = 0; i + 1 < r.rows.size(); ++i) {
    CHECK(r.rows[i].visibility >= r.rows[i + 1].visibility - 1e-12);
  }
  for (const MemoryComparisonRow& row : r.rows) {
    CHECK(row.memory == "Lambda895");
    CHECK(row.visibility ==
          doctest::Approx(row.oracle_visibility).epsilon(1e-8));
  }
  CHECK(r.table.columns ==
        std::vector<std::string>{"memory", "storage_time_s", "visibility",
                                 "oracle_visibility"});

  MemoryComparisonConfig bad;
  bad.points = 1;
  CHECK_THROWS_AS(run_mzi_memory_comparison(bad), std::invalid_argument);
}

TEST_CASE("token protocol: perfect devices reach unit correctness") {
  TokenSweep cfg;
  cfg.memory = test_memory(0.0, 0.0, 1.0, 0.0);
  cfg.detector_kappa = 1.0;
  cfg.detector_n_bar = 0.0;
  const TokenSweepResult r = run_token(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].c0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rows[0].c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rows[0].c_zz == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rows[0].c_xx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rows[0].c == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rows[0].above_threshold);
  CHECK(r.rows[0].within_retrigger);
}

TEST_CASE("token protocol at the noisy memory operating point") {
  TokenSweep cfg;
  cfg.memory = registry_lookup("Lambda895");
  const TokenSweepResult r = run_token(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].c == doctest::Approx(0.8664899737217884).epsilon(1e-9));
  CHECK(!r.rows[0].above_threshold);  // below the 7/8 security threshold
  CHECK(r.rows[0].within_retrigger);

  // Detectors-only baseline keeps near-unit correctness.
  TokenSweep base = cfg;
  base.use_memory = false;
  const TokenSweepResult rb = run_token(base);
  CHECK(rb.rows[0].c > kTokenThreshold);
  CHECK(rb.rows[0].above_threshold);
  CHECK(rb.rows[0].c > r.rows[0].c);

  // Correctness grows with the emission probability.
  TokenSweep sweep = cfg;
  sweep.mu_values = {0.25, 0.5, 1.0};
  const TokenSweepResult rs = run_token(sweep);
  REQUIRE(rs.rows.size() == 3);
  CHECK(rs.rows[0].c < rs.rows[1].c);
  CHECK(rs.rows[1].c < rs.rows[2].c);
  CHECK(rs.rows[2].c == doctest::Approx(r.rows[0].c).epsilon(1e-12));

  // Storage beyond the retrigger time is flagged.
  TokenSweep late = cfg;
  late.storage_times_s = {0.0, 2.0 * cfg.memory.retrigger_time_s};
  const TokenSweepResult rl = run_token(late);
  REQUIRE(rl.rows.size() == 2);
  CHECK(rl.rows[0].within_retrigger);
  CHECK(!rl.rows[1].within_retrigger);

  TokenSweep bad = cfg;
  bad.mu_values = {1.5};
  CHECK_THROWS_AS(run_token(bad), std::invalid_argument);
  bad.mu_values.clear();
  CHECK_THROWS_AS(run_token(bad), std::invalid_argument);
}

TEST_CASE("token table layout") {
  TokenSweep cfg;
  cfg.memory = registry_lookup("Lambda895");
  const TokenSweepResult r = run_token(cfg);
  CHECK(r.table.columns ==
        std::vector<std::string>{"mu_emission", "storage_time_s", "c0", "c1",
                                 "c_zz", "c_xx", "c", "above_threshold",
                                 "within_retrigger"});
  REQUIRE(r.table.rows.size() == 1);
  CHECK(std::get<std::string>(r.table.rows[0][7]) == "false");
  CHECK(std::get<std::string>(r.table.rows[0][8]) == "true");
}

TEST_CASE("truncation sweep: coherent input converges at five") {
  TruncationSweepConfig cfg;
  cfg.memory = registry_lookup("Lambda895");
  cfg.input = InputKind::coherent;
  cfg.alpha = 1.0;
  cfg.trunc_min = 1;
  cfg.trunc_max = 10;
  const TruncationSweepResult r = run_truncation_sweep(cfg);
  REQUIRE(r.rows.size() == 10);
  CHECK(r.converged_at == 5);
  for (const TruncationRow& row : r.rows) {
    if (!row.has_delta) continue;
    if (row.truncation < 5) CHECK(row.delta >= 1e-3);
    if (row.truncation >= 5) CHECK(row.delta < 1e-3);
  }
  CHECK(!r.rows.back().has_delta);
  // Late-bin mean approaches eta_e2e alpha^2 + (G - 1) = 0.13 + 0.0231.
  CHECK(r.rows.back().n_late == doctest::Approx(0.1531).epsilon(1e-3));
  // Table ends with empty delta/converged cells and the footer marker.
  const auto& last = r.table.rows.back();
  CHECK(std::get<std::string>(last[2]).empty());
  CHECK(std::get<std::string>(last[3]).empty());
  REQUIRE(r.table.footer.size() == 1);
  CHECK(r.table.footer[0].first == "converged_at");
  CHECK(std::get<double>(r.table.footer[0].second) == doctest::Approx(5.0));
}

TEST_CASE("truncation sweep: single photon converges immediately") {
  TruncationSweepConfig cfg;
  cfg.memory = registry_lookup("Lambda895");
  cfg.input = InputKind::single_photon;
  cfg.trunc_min = 1;
  cfg.trunc_max = 8;
  const TruncationSweepResult r = run_truncation_sweep(cfg);
  CHECK(r.converged_at == 2);
  for (const TruncationRow& row : r.rows) {
    if (row.has_delta && row.truncation >= 3) CHECK(row.delta < 1e-3);
  }

  TruncationSweepConfig bad = cfg;
  bad.trunc_min = 5;
  bad.trunc_max = 4;
  CHECK_THROWS_AS(run_truncation_sweep(bad), std::invalid_argument);
}

TEST_CASE("fidelity efficiency study: linear single-photon law") {
  FidelitySweepConfig cfg;
  cfg.study = FidelityStudy::efficiency;
  cfg.points = 5;
  const FidelitySweepResult r = run_fidelity_sweep(cfg);
  REQUIRE(r.rows.size() == 5);
  for (const FidelityRow& row : r.rows) {
    CHECK(row.fidelity_single == doctest::Approx(row.eta_int).epsilon(1e-10));
  }
  // Coherent alpha = 1 tends to the vacuum overlap e^{-1} as eta -> 0.
  CHECK(r.rows.front().eta_int == doctest::Approx(0.0));
  CHECK(std::abs(r.rows.front().fidelity_coherent - std::exp(-1.0)) < 1e-6);
  CHECK(r.rows.back().fidelity_coherent == doctest::Approx(1.0).epsilon(1e-9));
  for (size_t i = 0; i + 1 < r.rows.size(); ++i) {
    CHECK(r.rows[i].fidelity_coherent < r.rows[i + 1].fidelity_coherent);
  }
  CHECK(r.table.columns ==
        std::vector<std::string>{"eta_int", "fidelity_single",
                                 "fidelity_coherent"});
}

TEST_CASE("fidelity noise study: SNR falls, fidelity saturates") {
  FidelitySweepConfig cfg;
  cfg.study = FidelityStudy::noise;
  cfg.points = 11;
  const FidelitySweepResult r = run_fidelity_sweep(cfg);
  REQUIRE(r.rows.size() == 11);
  CHECK(std::isinf(r.rows.front().snr_single));  // no noise at n_bar = 0
  for (size_t i = 0; i + 1 < r.rows.size(); ++i) {
    CHECK(r.rows[i].snr_single > r.rows[i + 1].snr_single);
  }
  CHECK(r.rows.front().fidelity_single == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.rows.back().fidelity_single ==
        doctest::Approx(0.2962962962962963).epsilon(1e-10));
  // Successive fidelity steps shrink monotonically toward saturation.
  for (size_t i = 0; i + 2 < r.rows.size(); ++i) {
    const double d1 =
        std::abs(r.rows[i + 1].fidelity_single - r.rows[i].fidelity_single);
    const double d2 =
        std::abs(r.rows[i + 2].fidelity_single - r.rows[i + 1].fidelity_single);
    CHECK(d2 < d1);
  }
  CHECK(r.table.columns ==
        std::vector<std::string>{"n_bar_b", "fidelity_single",
                                 "fidelity_coherent", "snr"});
}

TEST_CASE("fidelity registry study reproduces the frozen values") {
  FidelitySweepConfig cfg;
  cfg.study = FidelityStudy::registry;
  const FidelitySweepResult r = run_fidelity_sweep(cfg);
  REQUIRE(r.rows.size() == 11);
  auto value = [&](const std::string& name) {
    for (const FidelityRow& row : r.rows) {
      if (row.memory == name) return row.fidelity_coherent;
    }
    REQUIRE_MESSAGE(false, "memory missing from study: " << name);
    return 0.0;
  };
  CHECK(value("Lambda895") == doctest::Approx(0.654314737183007).epsilon(1e-9));
  CHECK(value("Ladder780") ==
        doctest::Approx(0.8445692798830583).epsilon(1e-9));
  CHECK(value("Lambda795") ==
        doctest::Approx(0.4595282889385137).epsilon(1e-9));
  CHECK(value("Lambda780BEC") ==
        doctest::Approx(0.685097262552478).epsilon(1e-9));
  CHECK(value("Lambda895Compact") ==
        doctest::Approx(0.55106950976987).epsilon(1e-9));
  // eta_e2e dominates: sorted by eta_e2e_0, fidelity is monotone within a
  // 5e-3 slack covering the one noise-driven micro-inversion.
  std::vector<FidelityRow> sorted = r.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const FidelityRow& a, const FidelityRow& b) {
              return a.eta_e2e_0 < b.eta_e2e_0;
            });
  for (size_t i = 0; i + 1 < sorted.size(); ++i) {
    CHECK(sorted[i + 1].fidelity_coherent >
          sorted[i].fidelity_coherent - 5e-3);
  }
  CHECK(r.table.columns ==
        std::vector<std::string>{"memory", "eta_e2e_0", "fidelity_coherent"});

  FidelitySweepConfig bad;
  bad.points = 1;
  CHECK_THROWS_AS(run_fidelity_sweep(bad), std::invalid_argument);
}
