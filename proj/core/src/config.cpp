#include "ahnn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "ahnn/errors.hpp"

#ifndef AHNN_DEFAULT_IRIS_PATH
#define AHNN_DEFAULT_IRIS_PATH "data/iris.csv"
#endif

namespace ahnn {

std::string default_iris_path() { return AHNN_DEFAULT_IRIS_PATH; }

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front()) {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

double parse_real(std::string_view key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, text));
}

long long parse_integer(std::string_view key, const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, text));
  }
  return v;
}

bool parse_bool(std::string_view key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: expected true/false, got '{}'", key, text));
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

struct Entry {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class Ref>
Entry real(std::string key, Ref ref) {
  return {[key, ref](ExperimentConfig& c, const std::string& v) { ref(c) = parse_real(key, v); },
          [ref](const ExperimentConfig& c) { return format_real(ref(c)); }};
}

template <class Ref>
Entry integer(std::string key, Ref ref) {
  return {[key, ref](ExperimentConfig& c, const std::string& v) {
            using T = std::remove_reference_t<decltype(ref(c))>;
            const long long parsed = parse_integer(key, v);
            if constexpr (std::is_unsigned_v<T>) {
              if (parsed < 0) throw ConfigError(key + " must be nonnegative");
            }
            ref(c) = static_cast<T>(parsed);
          },
          [ref](const ExperimentConfig& c) { return std::to_string(ref(c)); }};
}

template <class Ref>
Entry text(Ref ref) {
  return {[ref](ExperimentConfig& c, const std::string& v) { ref(c) = v; },
          [ref](const ExperimentConfig& c) { return ref(c); }};
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<int>(parse_integer(key, item)));
  }
  return out;
}

const std::map<std::string, Entry, std::less<>>& registry() {
  static const std::map<std::string, Entry, std::less<>> entries = [] {
    std::map<std::string, Entry, std::less<>> m;
    m["device.technology"] = {
        [](ExperimentConfig& c, const std::string& v) { c.technology = parse_technology(v); },
        [](const ExperimentConfig& c) { return std::string(to_string(c.technology)); }};

    m["mosfet.v_gs_min"] = real("mosfet.v_gs_min", [](auto& c) -> auto& { return c.mosfet.v_gs_min; });
    m["mosfet.v_gs_max"] = real("mosfet.v_gs_max", [](auto& c) -> auto& { return c.mosfet.v_gs_max; });
    m["mosfet.g_min"] = real("mosfet.g_min", [](auto& c) -> auto& { return c.mosfet.g_min; });
    m["mosfet.g_max"] = real("mosfet.g_max", [](auto& c) -> auto& { return c.mosfet.g_max; });
    m["mosfet.c_gate"] = real("mosfet.c_gate", [](auto& c) -> auto& { return c.mosfet.c_gate; });
    m["mosfet.pulse_width"] = real("mosfet.pulse_width", [](auto& c) -> auto& { return c.mosfet.pulse_width; });
    m["mosfet.i_pulse_max"] = real("mosfet.i_pulse_max", [](auto& c) -> auto& { return c.mosfet.i_pulse_max; });
    m["mosfet.tau_retention"] =
        real("mosfet.tau_retention", [](auto& c) -> auto& { return c.mosfet.tau_retention; });
    m["mosfet.vds_coefficient"] =
        real("mosfet.vds_coefficient", [](auto& c) -> auto& { return c.mosfet.vds_coefficient; });

    m["domain_wall.g_min"] = real("domain_wall.g_min", [](auto& c) -> auto& { return c.domain_wall.g_min; });
    m["domain_wall.g_max"] = real("domain_wall.g_max", [](auto& c) -> auto& { return c.domain_wall.g_max; });
    m["domain_wall.update_time"] =
        real("domain_wall.update_time", [](auto& c) -> auto& { return c.domain_wall.update_time; });
    m["domain_wall.energy_per_full_sweep"] = real(
        "domain_wall.energy_per_full_sweep", [](auto& c) -> auto& { return c.domain_wall.energy_per_full_sweep; });

    m["rram.g_min"] = real("rram.g_min", [](auto& c) -> auto& { return c.rram.g_min; });
    m["rram.g_max"] = real("rram.g_max", [](auto& c) -> auto& { return c.rram.g_max; });
    m["rram.set_pulse_width"] = real("rram.set_pulse_width", [](auto& c) -> auto& { return c.rram.set_pulse_width; });
    m["rram.reset_pulse_width"] =
        real("rram.reset_pulse_width", [](auto& c) -> auto& { return c.rram.reset_pulse_width; });
    m["rram.nonlinearity_gamma"] =
        real("rram.nonlinearity_gamma", [](auto& c) -> auto& { return c.rram.nonlinearity_gamma; });
    m["rram.delta_g_per_pulse_at_gmin"] =
        real("rram.delta_g_per_pulse_at_gmin", [](auto& c) -> auto& { return c.rram.delta_g_per_pulse_at_gmin; });
    m["rram.e_set_pulse"] = real("rram.e_set_pulse", [](auto& c) -> auto& { return c.rram.e_set_pulse; });
    m["rram.e_reset_pulse"] = real("rram.e_reset_pulse", [](auto& c) -> auto& { return c.rram.e_reset_pulse; });
    m["rram.max_pulses_per_update"] =
        integer("rram.max_pulses_per_update", [](auto& c) -> auto& { return c.rram.max_pulses_per_update; });

    m["ideal.update_time"] = real("ideal.update_time", [](auto& c) -> auto& { return c.ideal.update_time; });

    m["crossbar.v_read_max"] = real("crossbar.v_read_max", [](auto& c) -> auto& { return c.v_read_max; });
    m["crossbar.read_width"] = real("crossbar.read_width", [](auto& c) -> auto& { return c.read_width; });

    m["neuron.lambda"] = real("neuron.lambda", [](auto& c) -> auto& { return c.neuron.lambda; });
    m["neuron.gain_error"] = real("neuron.gain_error", [](auto& c) -> auto& { return c.neuron.gain_error; });

    m["train.eta"] = real("train.eta", [](auto& c) -> auto& { return c.train.eta; });
    m["train.epochs"] = integer("train.epochs", [](auto& c) -> auto& { return c.train.epochs; });
    m["train.sample_period"] = real("train.sample_period", [](auto& c) -> auto& { return c.train.sample_period; });
    m["train.success_band"] = real("train.success_band", [](auto& c) -> auto& { return c.train.success_band; });
    m["train.init"] = {
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "saturated") {
            c.train.init = InitMode::saturated;
          } else if (v == "random") {
            c.train.init = InitMode::random;
          } else {
            throw ConfigError("train.init must be 'saturated' or 'random'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.train.init == InitMode::saturated ? "saturated" : "random");
        }};
    m["train.init_weight"] = real("train.init_weight", [](auto& c) -> auto& { return c.train.init_weight; });
    m["train.init_spread"] = real("train.init_spread", [](auto& c) -> auto& { return c.train.init_spread; });
    m["train.trace_epochs"] = {
        [](ExperimentConfig& c, const std::string& v) { c.train.trace_epochs = parse_int_list("train.trace_epochs", v); },
        [](const ExperimentConfig& c) { return join_ints(c.train.trace_epochs); }};
    m["train.train_size"] = integer("train.train_size", [](auto& c) -> auto& { return c.train_size; });

    m["noise.device_variability"] =
        real("noise.device_variability", [](auto& c) -> auto& { return c.noise.device_variability; });
    m["noise.input_noise"] = real("noise.input_noise", [](auto& c) -> auto& { return c.noise.input_noise; });
    m["noise.update_noise"] = real("noise.update_noise", [](auto& c) -> auto& { return c.noise.update_noise; });
    m["noise.distribution"] = {
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "uniform") {
            c.noise.distribution = NoiseDistribution::uniform;
          } else if (v == "gaussian") {
            c.noise.distribution = NoiseDistribution::gaussian;
          } else {
            throw ConfigError("noise.distribution must be 'uniform' or 'gaussian'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.noise.distribution == NoiseDistribution::uniform ? "uniform" : "gaussian");
        }};
    m["noise.variability_mode"] = {
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "static") {
            c.noise.variability_mode = VariabilityMode::static_mismatch;
          } else if (v == "per_read") {
            c.noise.variability_mode = VariabilityMode::per_read;
          } else {
            throw ConfigError("noise.variability_mode must be 'static' or 'per_read'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.noise.variability_mode == VariabilityMode::static_mismatch ? "static" : "per_read");
        }};
    m["noise.allow_wide"] = {
        [](ExperimentConfig& c, const std::string& v) { c.noise.allow_wide = parse_bool("noise.allow_wide", v); },
        [](const ExperimentConfig& c) { return std::string(c.noise.allow_wide ? "true" : "false"); }};

    m["run.seed"] = integer("run.seed", [](auto& c) -> auto& { return c.seed; });
    m["data.iris_path"] = text([](auto& c) -> auto& { return c.iris_path; });
    m["output.dir"] = text([](auto& c) -> auto& { return c.output_dir; });
    return m;
  }();
  return entries;
}

const Entry& lookup(std::string_view key) {
  const auto& reg = registry();
  const auto it = reg.find(key);
  if (it == reg.end()) throw ConfigError(fmt::format("unknown configuration key '{}'", key));
  return it->second;
}

}  // namespace

void ExperimentConfig::finalize() {
  train.seed = seed;
  noise.seed = seed;
  mosfet.validate();
  domain_wall.validate();
  rram.validate();
  neuron.validate();
  train.validate();
  noise.validate();
  if (!(v_read_max > 0.0 && v_read_max <= 0.1 + 1e-12)) throw ConfigError("crossbar.v_read_max must lie in (0, 0.1]");
  if (!(read_width > 0.0)) throw ConfigError("crossbar.read_width must be positive");
  if (!(ideal.update_time > 0.0)) throw ConfigError("ideal.update_time must be positive");
}

void set_value(ExperimentConfig& config, std::string_view key, std::string_view value) {
  lookup(key).set(config, trim(value));
}

std::string get_value(const ExperimentConfig& config, std::string_view key) { return lookup(key).get(config); }

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : registry()) keys.push_back(k);
  return keys;
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(fmt::format("override '{}' is not of the form key=value", assignment));
  }
  set_value(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError(fmt::format("config line {}: unterminated section", line_no));
      section = trim(std::string_view(content).substr(1, content.size() - 2));
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
    std::string key = trim(std::string_view(content).substr(0, eq));
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    try {
      set_value(config, key, std::string_view(content).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  return parse_config(in);
}

std::string canonical_form(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [key, entry] : registry()) {
    if (key == "output.dir") continue;
    out += key;
    out += " = ";
    out += entry.get(config);
    out += '\n';
  }
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  // FNV-1a 64
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_form(config)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::shared_ptr<const SynapseModel> make_model(const ExperimentConfig& config) {
  return make_model(config, config.technology);
}

std::shared_ptr<const SynapseModel> make_model(const ExperimentConfig& config, Technology technology) {
  switch (technology) {
    case Technology::mosfet:
      return std::make_shared<MosfetSynapse>(config.mosfet);
    case Technology::domain_wall:
      return std::make_shared<DomainWallSynapse>(config.domain_wall);
    case Technology::rram:
      return std::make_shared<RramSynapse>(config.rram);
    case Technology::ideal:
      return std::make_shared<IdealSynapse>(config.ideal);
  }
  throw ConfigError("unhandled technology");
}

CrossbarConfig make_crossbar_config(const ExperimentConfig& config, const SynapseModel& model) {
  CrossbarConfig xc = CrossbarConfig::for_model(model, kIrisFeatures * kSensorsPerFeature, kIrisClasses);
  xc.v_read_max = config.v_read_max;
  xc.read_width = config.read_width;
  return xc;
}

}  // namespace ahnn
