#include "memtwin/memory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "memtwin/format.hpp"

namespace memtwin {

namespace {

constexpr double kWavelengthTolNm = 1.0;

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

MemorySpec make_spec(std::string name, std::string species, Scheme scheme,
                     std::string protocol, double wavelength_nm,
                     double eta_e2e_0, double eta_int_0, double mu_1,
                     double bandwidth_hz, double lifetime_s,
                     double retrigger_time_s, PolarizationClass pol) {
  MemorySpec s;
  s.class_name = std::move(name);
  s.atomic_species = std::move(species);
  s.scheme = scheme;
  s.protocol = std::move(protocol);
  s.wavelength_nm = wavelength_nm;
  s.eta_e2e_0 = eta_e2e_0;
  s.eta_int_0 = eta_int_0;
  s.mu_1 = mu_1;
  s.bandwidth_hz = bandwidth_hz;
  s.lifetime_s = lifetime_s;
  s.retrigger_time_s = retrigger_time_s;
  s.polarization = pol;
  return s;
}

bool thermal_stage_trivial(double kappa, double n_bar) {
  return kappa == 1.0 && n_bar == 0.0;
}

}  // namespace

std::string to_string(Scheme s) {
  return s == Scheme::lambda_type ? "lambda" : "ladder";
}

std::string to_string(PolarizationClass p) {
  return p == PolarizationClass::linear ? "linear" : "circular";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "lambda") return Scheme::lambda_type;
  if (s == "ladder") return Scheme::ladder_type;
  throw std::invalid_argument("unknown level scheme: '" + s + "'");
}

PolarizationClass polarization_class_from_string(const std::string& s) {
  if (s == "linear") return PolarizationClass::linear;
  if (s == "circular") return PolarizationClass::circular;
  throw std::invalid_argument("unknown polarization class: '" + s + "'");
}

double MemorySpec::eta_trans() const {
  if (is_test) {
    throw std::domain_error("Test memories have no derived eta_trans");
  }
  return eta_e2e_0 / eta_int_0;
}

void MemorySpec::validate() const {
  if (class_name.empty()) throw std::invalid_argument("memory class name empty");
  if (retrigger_time_s < 0.0) {
    throw std::invalid_argument(class_name + ": retrigger time must be >= 0");
  }
  if (is_test) {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(test.t_in) || !in01(test.t_out)) {
      throw std::invalid_argument(class_name + ": t_in/t_out outside [0, 1]");
    }
    if (!in01(test.kappa_early) || !in01(test.kappa_late)) {
      throw std::invalid_argument(class_name + ": kappa outside [0, 1]");
    }
    if (test.n_bar_early < 0.0 || test.n_bar_late < 0.0) {
      throw std::invalid_argument(class_name + ": thermal photon number < 0");
    }
    return;
  }
  if (!(eta_e2e_0 > 0.0 && eta_e2e_0 <= eta_int_0 && eta_int_0 <= 1.0)) {
    throw std::invalid_argument(class_name +
                                ": requires 0 < eta_e2e_0 <= eta_int_0 <= 1");
  }
  if (mu_1 < 0.0) throw std::invalid_argument(class_name + ": mu_1 must be >= 0");
  if (!(lifetime_s > 0.0)) {
    throw std::invalid_argument(class_name + ": lifetime must be > 0");
  }
  if (!(wavelength_nm > 0.0) || !(bandwidth_hz > 0.0)) {
    throw std::invalid_argument(class_name + ": wavelength/bandwidth must be > 0");
  }
}

const std::vector<MemorySpec>& memory_registry() {
  static const std::vector<MemorySpec> registry = {
      make_spec("Lambda895Compact", "Cs", Scheme::lambda_type, "EIT", 895.0,
                0.054, 0.23, 0.06, 44e6, 2.4e-6, 32.7e-6,
                PolarizationClass::linear),
      make_spec("Ladder895", "Cs", Scheme::ladder_type, "FLAME", 895.0, 0.027,
                0.210, 7.2e-5, 560e6, 32e-9, 33e-9, PolarizationClass::linear),
      make_spec("Ladder780", "Rb", Scheme::ladder_type, "FLAME", 780.0, 0.35,
                0.51, 3e-6, 370e6, 108e-9, 108e-9, PolarizationClass::circular),
      make_spec("Ladder1529", "Rb", Scheme::ladder_type, "ORCA", 1529.0, 0.11,
                0.21, 4.4e-6, 1e9, 1.1e-9, 12.5e-9, PolarizationClass::linear),
      make_spec("Lambda895", "Cs", Scheme::lambda_type, "EIT", 895.0, 0.13,
                0.33, 0.07, 220e6, 140e-9, 11e-6, PolarizationClass::linear),
      make_spec("Lambda795", "Rb", Scheme::lambda_type, "EIT", 795.0, 0.014,
                0.047, 2.4e-5, 370e6, 680e-9, 2.7e-6,
                PolarizationClass::circular),
      make_spec("Lambda780Superradiance", "Rb", Scheme::lambda_type, "SR",
                780.0, 0.015, 0.03, 2.1e-4, 12.7e6, 4.7e-6, 5.7e-6,
                PolarizationClass::linear),
      make_spec("Lambda795Compact", "Rb", Scheme::lambda_type, "EIT", 795.0,
                0.125, 0.25, 1.9e-3, 2e6, 180e-6, 5e-3,
                PolarizationClass::circular),
      make_spec("Lambda780RydbergSource", "Rb", Scheme::lambda_type, "EIT",
                780.0, 0.105, 0.21, 1.0e-3, 17.6e6, 1.2e-6, 11e-3,
                PolarizationClass::circular),
      make_spec("Lambda780BEC", "Rb", Scheme::lambda_type, "ATS", 780.0, 0.15,
                0.3, 5e-3, 22e6, 15.8e-6, 20.0, PolarizationClass::circular),
      make_spec("Ladder852", "Cs", Scheme::ladder_type, "ORCA", 852.0, 0.049,
                0.17, 3.8e-5, 1000e6, 5.4e-9, 12.5e-9,
                PolarizationClass::linear),
  };
  return registry;
}

const MemorySpec& registry_lookup(const std::string& class_name) {
  const auto& reg = memory_registry();
  for (const MemorySpec& s : reg) {
    if (s.class_name == class_name) return s;
  }
  std::string best;
  int best_dist = 1 << 20;
  std::string available;
  for (const MemorySpec& s : reg) {
    const int d = levenshtein(class_name, s.class_name);
    if (d < best_dist) {
      best_dist = d;
      best = s.class_name;
    }
    if (!available.empty()) available += ", ";
    available += s.class_name;
  }
  std::string msg = "unknown memory class '" + class_name + "'";
  if (best_dist <= 4) msg += " (did you mean '" + best + "'?)";
  msg += "; available classes: " + available;
  throw std::invalid_argument(msg);
}

std::string serialize_registry(const std::vector<MemorySpec>& specs) {
  std::string out;
  bool first = true;
  for (const MemorySpec& s : specs) {
    if (!first) out += "\n";
    first = false;
    out += "[" + s.class_name + "]\n";
    if (s.is_test) {
      out += "t_in = " + fmt_double(s.test.t_in) + "\n";
      out += "t_out = " + fmt_double(s.test.t_out) + "\n";
      out += "kappa_early = " + fmt_double(s.test.kappa_early) + "\n";
      out += "kappa_late = " + fmt_double(s.test.kappa_late) + "\n";
      out += "n_bar_early = " + fmt_double(s.test.n_bar_early) + "\n";
      out += "n_bar_late = " + fmt_double(s.test.n_bar_late) + "\n";
      out += "wavelength_nm = " + fmt_double(s.wavelength_nm) + "\n";
      out += "bandwidth_hz = " + fmt_double(s.bandwidth_hz) + "\n";
      out += "retrigger_time_s = " + fmt_double(s.retrigger_time_s) + "\n";
      out += "polarization = " + to_string(s.polarization) + "\n";
      continue;
    }
    out += "species = " + s.atomic_species + "\n";
    out += "scheme = " + to_string(s.scheme) + "\n";
    out += "protocol = " + s.protocol + "\n";
    out += "wavelength_nm = " + fmt_double(s.wavelength_nm) + "\n";
    out += "eta_e2e_0 = " + fmt_double(s.eta_e2e_0) + "\n";
    out += "eta_int_0 = " + fmt_double(s.eta_int_0) + "\n";
    out += "mu_1 = " + fmt_double(s.mu_1) + "\n";
    out += "bandwidth_hz = " + fmt_double(s.bandwidth_hz) + "\n";
    out += "lifetime_s = " + fmt_double(s.lifetime_s) + "\n";
    out += "retrigger_time_s = " + fmt_double(s.retrigger_time_s) + "\n";
    out += "polarization = " + to_string(s.polarization) + "\n";
  }
  return out;
}

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

MemorySpec finish_section(const std::string& name,
                          const std::map<std::string, std::string>& kv) {
  MemorySpec s;
  s.class_name = name;
  s.is_test = name.rfind("Test", 0) == 0;
  auto take = [&kv](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&](const char* key) {
    auto v = take(key);
    if (!v) {
      throw std::invalid_argument("memory section [" + name +
                                  "] missing key '" + key + "'");
    }
    return *v;
  };
  std::vector<std::string> known;
  if (s.is_test) {
    known = {"t_in",        "t_out",        "kappa_early",
             "kappa_late",  "n_bar_early",  "n_bar_late",
             "wavelength_nm", "bandwidth_hz", "retrigger_time_s",
             "polarization"};
    s.test.t_in = parse_double(require("t_in"));
    s.test.t_out = parse_double(require("t_out"));
    if (auto v = take("kappa_early")) s.test.kappa_early = parse_double(*v);
    if (auto v = take("kappa_late")) s.test.kappa_late = parse_double(*v);
    if (auto v = take("n_bar_early")) s.test.n_bar_early = parse_double(*v);
    if (auto v = take("n_bar_late")) s.test.n_bar_late = parse_double(*v);
    s.wavelength_nm = 895.0;
    s.bandwidth_hz = 500e6;
    s.retrigger_time_s = 1e-6;
    s.polarization = PolarizationClass::linear;
    if (auto v = take("wavelength_nm")) s.wavelength_nm = parse_double(*v);
    if (auto v = take("bandwidth_hz")) s.bandwidth_hz = parse_double(*v);
    if (auto v = take("retrigger_time_s")) s.retrigger_time_s = parse_double(*v);
    if (auto v = take("polarization")) {
      s.polarization = polarization_class_from_string(*v);
    }
  } else {
    known = {"species",      "scheme",        "protocol",
             "wavelength_nm", "eta_e2e_0",    "eta_int_0",
             "mu_1",          "bandwidth_hz", "lifetime_s",
             "retrigger_time_s", "polarization"};
    s.atomic_species = require("species");
    s.scheme = scheme_from_string(require("scheme"));
    s.protocol = require("protocol");
    s.wavelength_nm = parse_double(require("wavelength_nm"));
    s.eta_e2e_0 = parse_double(require("eta_e2e_0"));
    s.eta_int_0 = parse_double(require("eta_int_0"));
    s.mu_1 = parse_double(require("mu_1"));
    s.bandwidth_hz = parse_double(require("bandwidth_hz"));
    s.lifetime_s = parse_double(require("lifetime_s"));
    s.retrigger_time_s = parse_double(require("retrigger_time_s"));
    s.polarization = polarization_class_from_string(require("polarization"));
  }
  for (const auto& [key, value] : kv) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("memory section [" + name +
                                  "] has unknown key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

}  // namespace

std::vector<MemorySpec> parse_registry(const std::string& text) {
  std::vector<MemorySpec> out;
  std::string section;
  std::map<std::string, std::string> kv;
  bool open = false;
  std::istringstream in(text);
  std::string raw;
  auto flush = [&] {
    if (open) out.push_back(finish_section(section, kv));
    kv.clear();
  };
  while (std::getline(in, raw)) {
    const std::string line = strip(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw std::invalid_argument("malformed section header: " + line);
      }
      flush();
      section = line.substr(1, line.size() - 2);
      open = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || !open) {
      throw std::invalid_argument("malformed registry line: " + line);
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (!kv.emplace(key, value).second) {
      throw std::invalid_argument("duplicate key '" + key + "' in [" + section + "]");
    }
  }
  flush();
  return out;
}

MemoryInstance::MemoryInstance(MemorySpec spec, double storage_time_s,
                               int memory_truncation)
    : spec_(std::move(spec)),
      storage_time_s_(storage_time_s),
      memory_truncation_(memory_truncation) {
  spec_.validate();
  if (storage_time_s < 0.0) {
    throw std::invalid_argument("storage time must be >= 0");
  }
  if (memory_truncation < 1) {
    throw std::invalid_argument("memory truncation must be >= 1");
  }
}

double MemoryInstance::eta_int() const {
  if (spec_.is_test) return (1.0 - spec_.test.t_in) * (1.0 - spec_.test.t_out);
  return spec_.eta_int_0 * std::exp(-storage_time_s_ / spec_.lifetime_s);
}

double MemoryInstance::eta_in() const {
  if (spec_.is_test) return 1.0 - spec_.test.t_in;
  return std::sqrt(eta_int());
}

double MemoryInstance::eta_out() const {
  if (spec_.is_test) return 1.0 - spec_.test.t_out;
  return std::sqrt(eta_int());
}

double MemoryInstance::t_in() const { return 1.0 - eta_in(); }
double MemoryInstance::t_out() const { return 1.0 - eta_out(); }

double MemoryInstance::kappa_early() const {
  return spec_.is_test ? spec_.test.kappa_early : 1.0;
}

double MemoryInstance::n_bar_early() const {
  return spec_.is_test ? spec_.test.n_bar_early : 0.0;
}

double MemoryInstance::kappa_late() const {
  return spec_.is_test ? spec_.test.kappa_late : spec_.eta_trans();
}

double MemoryInstance::n_bar_late() const {
  if (spec_.is_test) return spec_.test.n_bar_late;
  const double numer = spec_.mu_1 * eta_int();
  if (numer == 0.0) return 0.0;
  const double denom = 1.0 - spec_.eta_trans();
  if (denom <= 0.0) {
    throw std::domain_error(spec_.class_name +
                            ": noise floor undefined at unit eta_trans");
  }
  return numer / denom;
}

double MemoryInstance::gain() const {
  return 1.0 + (1.0 - kappa_late()) * n_bar_late();
}

ChannelResponse MemoryInstance::query(const DensityState& state,
                                      const ChannelQuery& q) {
  ChannelResponse resp;
  resp.operation_time_s = storage_time_s_;
  resp.retrigger_time_s = spec_.retrigger_time_s;

  if (q.op_type == OpType::storage) {
    if (occupancy_ != Occupancy::empty) {
      throw std::domain_error("storage requested while a spinwave is stored");
    }
    const ModeDescriptor& input = state.mode(q.input_mode);
    const CompatibilityResult compat = compatibility_check(*this, input);
    if (!compat.accepted) {
      throw std::domain_error("incompatible input mode: " + compat.reason);
    }
    const std::string sw_uuid = input.uuid + "#sw";
    if (state.has_mode(sw_uuid)) {
      throw std::invalid_argument("spinwave uuid '" + sw_uuid +
                                  "' collides with an existing mode");
    }
    ModeDescriptor sw;
    sw.uuid = sw_uuid;
    sw.kind = ModeKind::spinwave;
    sw.truncation = memory_truncation_;
    sw.wavelength_nm = spec_.wavelength_nm;

    resp.plan.push_back(AddModeOp{sw});
    resp.plan.push_back(ApplyLiftedOp{
        beamsplitter_unitary(t_in(), input.truncation, memory_truncation_),
        {input.uuid, sw_uuid}});
    if (!thermal_stage_trivial(kappa_early(), n_bar_early())) {
      KrausSet early =
          thermal_noise_channel(kappa_early(), n_bar_early(), input.truncation);
      resp.plan.push_back(ApplyKrausOp{targeted(early, {input.uuid})});
    }
    resp.kraus_state_indices = {input.uuid, sw_uuid};
    resp.retrigger = false;

    occupancy_ = Occupancy::stored;
    retrigger_available_ = false;
    spinwave_uuid_ = sw_uuid;
    stored_input_ = input;
    return resp;
  }

  // retrieval
  if (occupancy_ != Occupancy::stored) {
    throw std::domain_error("retrieval requested with no stored spinwave");
  }
  if (!state.has_mode(spinwave_uuid_)) {
    throw std::invalid_argument("state lacks the stored spinwave mode '" +
                                spinwave_uuid_ + "'");
  }
  const std::string late_uuid = stored_input_.uuid + "#late";
  if (state.has_mode(late_uuid)) {
    throw std::invalid_argument("late-bin uuid '" + late_uuid +
                                "' collides with an existing mode");
  }
  ModeDescriptor late = stored_input_;
  late.uuid = late_uuid;

  resp.plan.push_back(AddModeOp{late});
  resp.plan.push_back(ApplyLiftedOp{
      beamsplitter_unitary(t_out(), memory_truncation_, late.truncation),
      {spinwave_uuid_, late_uuid}});
  resp.plan.push_back(TraceOutOp{spinwave_uuid_});
  if (!thermal_stage_trivial(kappa_late(), n_bar_late())) {
    KrausSet ch =
        thermal_noise_channel(kappa_late(), n_bar_late(), late.truncation);
    resp.plan.push_back(ApplyKrausOp{targeted(ch, {late_uuid})});
  }
  resp.kraus_state_indices = {spinwave_uuid_, late_uuid};
  resp.retrigger = true;

  occupancy_ = Occupancy::empty;
  retrigger_available_ = true;
  spinwave_uuid_.clear();
  return resp;
}

MemoryInstance init_memory(const MemorySpec& spec, double storage_time_s,
                           int memory_truncation) {
  return MemoryInstance(spec, storage_time_s, memory_truncation);
}

MemoryInstance init_memory(const std::string& memory_type,
                           double storage_time_s, int memory_truncation) {
  return MemoryInstance(registry_lookup(memory_type), storage_time_s,
                        memory_truncation);
}

CompatibilityResult compatibility_check(const MemoryInstance& mem,
                                        const ModeDescriptor& mode) {
  if (mode.kind != ModeKind::light) {
    throw std::invalid_argument("compatibility check requires a light mode");
  }
  const MemorySpec& spec = mem.spec();
  CompatibilityResult res;
  if (mode.wavelength_nm != 0.0 &&
      std::abs(mode.wavelength_nm - spec.wavelength_nm) > kWavelengthTolNm) {
    res.accepted = false;
    res.reason = "wavelength " + fmt_double(mode.wavelength_nm) +
                 " nm outside 1 nm of memory wavelength " +
                 fmt_double(spec.wavelength_nm) + " nm";
    return res;
  }
  if (mode.bandwidth_hz != 0.0 && mode.bandwidth_hz > spec.bandwidth_hz) {
    res.accepted = false;
    res.reason = "bandwidth " + fmt_double(mode.bandwidth_hz) +
                 " Hz exceeds memory bandwidth " +
                 fmt_double(spec.bandwidth_hz) + " Hz";
    return res;
  }
  if (mode.polarization != Polarization::none) {
    const bool linear_ok = mode.polarization == Polarization::horizontal ||
                           mode.polarization == Polarization::vertical;
    const bool circular_ok =
        mode.polarization == Polarization::circular_right ||
        mode.polarization == Polarization::circular_left;
    const bool ok = spec.polarization == PolarizationClass::linear
                        ? linear_ok
                        : circular_ok;
    if (!ok) {
      res.accepted = false;
      res.reason = "polarization " + std::string(to_string(mode.polarization)) +
                   " not in the memory's accepted " +
                   to_string(spec.polarization) + " class";
      return res;
    }
  }
  return res;
}

ChannelResponse channel_query(MemoryInstance& mem, const DensityState& state,
                              const ChannelQuery& q) {
  return mem.query(state, q);
}

DensityState apply_channel_plan(const DensityState& state,
                                const std::vector<MemoryOperation>& plan) {
  DensityState out = state;
  for (const MemoryOperation& op : plan) {
    if (const auto* add = std::get_if<AddModeOp>(&op)) {
      out = tensor(out, vacuum_state({add->mode}));
    } else if (const auto* lifted = std::get_if<ApplyLiftedOp>(&op)) {
      out = apply_unitary(out, lifted->lifted.matrix, lifted->targets);
    } else if (const auto* kraus = std::get_if<ApplyKrausOp>(&op)) {
      out = apply_kraus(out, kraus->kraus);
    } else if (const auto* tr = std::get_if<TraceOutOp>(&op)) {
      out = partial_trace(out, tr->mode);
    }
  }
  return out;
}

DensityState passthrough_during_storage(const MemoryInstance& mem,
                                        const DensityState& transient_photon) {
  if (mem.occupancy() != Occupancy::stored) {
    throw std::domain_error("passthrough requires a stored spinwave");
  }
  return transient_photon;
}

}  // namespace memtwin
