#include "memtwin/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "memtwin/experiments.hpp"
#include "memtwin/format.hpp"
#include "memtwin/memory.hpp"
#include "memtwin/table.hpp"

namespace memtwin {

namespace {

using ConfigList = std::vector<std::pair<std::string, std::string>>;

std::string join_doubles(const std::vector<double>& vals) {
  std::string out;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(vals[i]);
  }
  return out;
}

// Accepts either a plain value ("0.5") or a sweep request
// ("sweep [lo:hi] [log|lin] [points]"), returning the resolved grid.
std::vector<double> parse_value_or_sweep(const std::vector<std::string>& vals,
                                         double lo, double hi, bool log_scale,
                                         int points, const char* flag) {
  if (vals.empty()) throw std::invalid_argument(std::string(flag) + ": no value");
  if (vals[0] != "sweep") {
    if (vals.size() != 1) {
      throw std::invalid_argument(std::string(flag) +
                                  ": extra arguments after a plain value");
    }
    return {parse_double(vals[0])};
  }
  size_t next = 1;
  if (next < vals.size() && vals[next].find(':') != std::string::npos) {
    const std::string& range = vals[next];
    const auto colon = range.find(':');
    lo = parse_double(range.substr(0, colon));
    hi = parse_double(range.substr(colon + 1));
    ++next;
  }
  if (next < vals.size() && (vals[next] == "log" || vals[next] == "lin")) {
    log_scale = vals[next] == "log";
    ++next;
  }
  if (next < vals.size()) {
    const double p = parse_double(vals[next]);
    points = static_cast<int>(p);
    if (points < 2 || p != points) {
      throw std::invalid_argument(std::string(flag) +
                                  ": sweep point count must be an integer >= 2");
    }
    ++next;
  }
  if (next != vals.size()) {
    throw std::invalid_argument(std::string(flag) + ": unrecognized sweep argument '" +
                                vals[next] + "'");
  }
  if (!(hi >= lo)) {
    throw std::invalid_argument(std::string(flag) + ": sweep range must ascend");
  }
  if (log_scale && !(lo > 0.0)) {
    throw std::invalid_argument(std::string(flag) +
                                ": log sweep requires a positive lower bound");
  }
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    grid[i] = log_scale ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  return grid;
}

MemorySpec resolve_memory(const std::string& name, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open memory file: " + file);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::vector<MemorySpec> specs = parse_registry(buf.str());
    if (specs.empty()) {
      throw std::invalid_argument("memory file has no sections: " + file);
    }
    if (name.empty()) {
      if (specs.size() == 1) return specs.front();
      throw std::invalid_argument(
          "memory file defines several classes; select one with --memory");
    }
    for (const MemorySpec& s : specs) {
      if (s.class_name == name) return s;
    }
    // not in the file: fall through to the built-in registry
  }
  if (name.empty()) {
    throw std::invalid_argument("--memory (or a --memory-file) is required");
  }
  return registry_lookup(name);
}

std::pair<InputKind, double> parse_input(const std::string& s) {
  if (s == "single") return {InputKind::single_photon, 0.0};
  if (s == "coherent") return {InputKind::coherent, 1.0};
  if (s.rfind("coherent:", 0) == 0) {
    const double alpha = parse_double(s.substr(9));
    if (alpha < 0.0) throw std::invalid_argument("--input: alpha must be >= 0");
    return {InputKind::coherent, alpha};
  }
  throw std::invalid_argument("--input must be 'single' or 'coherent:<alpha>'");
}

void write_outputs(const std::string& subcommand, const ConfigList& config,
                   const ExperimentTable& table, const std::string& out_path,
                   const std::string& format) {
  const std::string data = format == "json" ? to_json(table) : to_csv(table);
  {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << data;
    if (!f) throw std::runtime_error("failed writing output file: " + out_path);
  }
  RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.config = config;
  manifest.tool_version = kToolVersion;
  const std::string manifest_path = out_path + ".manifest.json";
  manifest.output_paths = {out_path, manifest_path};
  std::ofstream mf(manifest_path, std::ios::binary);
  if (!mf) throw std::runtime_error("cannot open manifest file: " + manifest_path);
  mf << to_json(manifest);
  if (!mf) throw std::runtime_error("failed writing manifest: " + manifest_path);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Digital twin of ensemble atomic quantum memories"};
  app.name("memtwin");
  app.require_subcommand(1);

  // registry
  auto* registry_cmd =
      app.add_subcommand("registry", "Inspect the built-in memory classes");
  registry_cmd->require_subcommand(1);
  auto* list_cmd =
      registry_cmd->add_subcommand("list", "Print all memory class names");
  std::string show_class;
  auto* show_cmd = registry_cmd->add_subcommand(
      "show", "Print one memory class (keys carry units: nm, Hz, s)");
  show_cmd->add_option("class", show_class, "Memory class name")->required();

  // mzi
  std::string mzi_memory, mzi_file, mzi_input = "single", mzi_out,
                                    mzi_format = "csv";
  double mzi_storage = 0.0;
  int mzi_trunc = 10;
  int mzi_phases = 41;
  bool mzi_norecombine = false;
  auto* mzi_cmd = app.add_subcommand(
      "mzi", "Interferometer fringe with a memory in one arm");
  mzi_cmd->add_option("--memory", mzi_memory, "Memory class name");
  mzi_cmd->add_option("--memory-file", mzi_file,
                      "Memory definition file (registry text format)");
  mzi_cmd->add_option("--storage-time", mzi_storage, "Storage time in seconds");
  mzi_cmd->add_option("--input", mzi_input, "single | coherent:<alpha>");
  mzi_cmd->add_option("--trunc", mzi_trunc, "Fock truncation per mode");
  mzi_cmd->add_option("--phases", mzi_phases,
                      "Number of phase points over [0, 2pi]");
  mzi_cmd->add_flag("--no-recombine", mzi_norecombine,
                    "Remove the second beamsplitter");
  mzi_cmd->add_option("--out", mzi_out, "Output data file")->required();
  mzi_cmd->add_option("--format", mzi_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  // token
  std::string tok_memory, tok_file, tok_out, tok_format = "csv";
  std::vector<std::string> tok_mu{"1"};
  std::vector<std::string> tok_storage{"0"};
  int tok_trunc = 4;
  auto* tok_cmd =
      app.add_subcommand("token", "Dual-rail quantum token correctness");
  tok_cmd->add_option("--memory", tok_memory, "Memory class name");
  tok_cmd->add_option("--memory-file", tok_file,
                      "Memory definition file (registry text format)");
  tok_cmd
      ->add_option("--mu-emission", tok_mu,
                   "Emission probability, or: sweep [lo:hi] [lin|log] [points]")
      ->expected(1, 4);
  tok_cmd
      ->add_option("--storage-time", tok_storage,
                   "Storage time in seconds, or: sweep [lo:hi] [log|lin] [points]")
      ->expected(1, 4);
  tok_cmd->add_option("--trunc", tok_trunc, "Fock truncation per mode");
  tok_cmd->add_option("--out", tok_out, "Output data file")->required();
  tok_cmd->add_option("--format", tok_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  // truncation
  std::string trc_memory = "Lambda895", trc_file, trc_input = "coherent:1",
              trc_out, trc_format = "csv";
  double trc_storage = 0.0;
  int trc_min = 1;
  int trc_max = 10;
  auto* trc_cmd = app.add_subcommand(
      "truncation", "Late-bin photon number vs. Fock truncation");
  trc_cmd->add_option("--memory", trc_memory, "Memory class name");
  trc_cmd->add_option("--memory-file", trc_file,
                      "Memory definition file (registry text format)");
  trc_cmd->add_option("--input", trc_input, "single | coherent:<alpha>");
  trc_cmd->add_option("--storage-time", trc_storage, "Storage time in seconds");
  trc_cmd->add_option("--trunc-min", trc_min, "Lowest truncation");
  trc_cmd->add_option("--trunc-max", trc_max, "Highest truncation");
  trc_cmd->add_option("--out", trc_out, "Output data file")->required();
  trc_cmd->add_option("--format", trc_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  // fidelity
  std::string fid_study = "registry", fid_out, fid_format = "csv";
  int fid_points = 21;
  int fid_trunc = 10;
  auto* fid_cmd = app.add_subcommand(
      "fidelity", "Retrieved-state fidelity studies");
  fid_cmd->add_option("--study", fid_study, "efficiency | noise | registry")
      ->check(CLI::IsMember({"efficiency", "noise", "registry"}));
  fid_cmd->add_option("--points", fid_points, "Sweep grid size");
  fid_cmd->add_option("--trunc", fid_trunc, "Coherent-state truncation");
  fid_cmd->add_option("--out", fid_out, "Output data file")->required();
  fid_cmd->add_option("--format", fid_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const MemorySpec& s : memory_registry()) out << s.class_name << "\n";
      return 0;
    }
    if (show_cmd->parsed()) {
      out << serialize_registry({registry_lookup(show_class)});
      return 0;
    }
    if (mzi_cmd->parsed()) {
      MziConfig cfg;
      cfg.memory = resolve_memory(mzi_memory, mzi_file);
      std::tie(cfg.input, cfg.alpha) = parse_input(mzi_input);
      cfg.storage_time_s = mzi_storage;
      cfg.truncation = mzi_trunc;
      cfg.phases = mzi_phases;
      cfg.second_beamsplitter = !mzi_norecombine;
      const MziResult res = run_mzi(cfg);
      if (res.truncation_warning) {
        err << "warning: coherent input tail mass "
            << fmt_double(res.input_tail_mass)
            << " exceeds 1e-06 at truncation " << mzi_trunc
            << "; consider a larger --trunc\n";
      }
      const ConfigList config = {
          {"memory", cfg.memory.class_name},
          {"memory_file", mzi_file},
          {"input", cfg.input == InputKind::single_photon ? "single" : "coherent"},
          {"alpha", fmt_double(cfg.alpha)},
          {"storage_time_s", fmt_double(cfg.storage_time_s)},
          {"truncation", std::to_string(cfg.truncation)},
          {"phases", std::to_string(cfg.phases)},
          {"second_beamsplitter", cfg.second_beamsplitter ? "true" : "false"},
          {"out", mzi_out},
          {"format", mzi_format},
      };
      write_outputs("mzi", config, res.table, mzi_out, mzi_format);
      return 0;
    }
    if (tok_cmd->parsed()) {
      TokenSweep cfg;
      cfg.memory = resolve_memory(tok_memory, tok_file);
      cfg.mu_values =
          parse_value_or_sweep(tok_mu, 0.0, 1.0, false, 21, "--mu-emission");
      cfg.storage_times_s = parse_value_or_sweep(tok_storage, 1e-9, 6e-4, true,
                                                 20, "--storage-time");
      cfg.truncation = tok_trunc;
      const TokenSweepResult res = run_token(cfg);
      const ConfigList config = {
          {"memory", cfg.memory.class_name},
          {"memory_file", tok_file},
          {"mu_values", join_doubles(cfg.mu_values)},
          {"storage_times_s", join_doubles(cfg.storage_times_s)},
          {"truncation", std::to_string(cfg.truncation)},
          {"detector_kappa", fmt_double(cfg.detector_kappa)},
          {"detector_n_bar", fmt_double(cfg.detector_n_bar)},
          {"out", tok_out},
          {"format", tok_format},
      };
      write_outputs("token", config, res.table, tok_out, tok_format);
      return 0;
    }
    if (trc_cmd->parsed()) {
      TruncationSweepConfig cfg;
      cfg.memory = resolve_memory(trc_memory, trc_file);
      std::tie(cfg.input, cfg.alpha) = parse_input(trc_input);
      cfg.storage_time_s = trc_storage;
      cfg.trunc_min = trc_min;
      cfg.trunc_max = trc_max;
      const TruncationSweepResult res = run_truncation_sweep(cfg);
      const ConfigList config = {
          {"memory", cfg.memory.class_name},
          {"memory_file", trc_file},
          {"input", cfg.input == InputKind::single_photon ? "single" : "coherent"},
          {"alpha", fmt_double(cfg.alpha)},
          {"storage_time_s", fmt_double(cfg.storage_time_s)},
          {"trunc_min", std::to_string(cfg.trunc_min)},
          {"trunc_max", std::to_string(cfg.trunc_max)},
          {"out", trc_out},
          {"format", trc_format},
      };
      write_outputs("truncation", config, res.table, trc_out, trc_format);
      return 0;
    }
    if (fid_cmd->parsed()) {
      FidelitySweepConfig cfg;
      cfg.study = fid_study == "efficiency" ? FidelityStudy::efficiency
                  : fid_study == "noise"    ? FidelityStudy::noise
                                            : FidelityStudy::registry;
      cfg.points = fid_points;
      cfg.truncation = fid_trunc;
      const FidelitySweepResult res = run_fidelity_sweep(cfg);
      const ConfigList config = {
          {"study", fid_study},
          {"points", std::to_string(cfg.points)},
          {"truncation", std::to_string(cfg.truncation)},
          {"alpha", fmt_double(cfg.alpha)},
          {"out", fid_out},
          {"format", fid_format},
      };
      write_outputs("fidelity", config, res.table, fid_out, fid_format);
      return 0;
    }
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace memtwin
