#include "fjmgt_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include <fjmgt/convolution.hpp>
#include <fjmgt/errors.hpp>
#include <fjmgt/fjmgt_solver.hpp>
#include <fjmgt/io.hpp>

namespace fjmgt::cli {

namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  double out = 0.0;
  const char* first = v.data();
  if (!v.empty() && v[0] == '+') ++first;
  const auto res = std::from_chars(first, v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  }
  return out;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  Int out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = lower(trim(text));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<ordered_json(const RunConfig&)> get;
};

#define FJMGT_DOUBLE(name)                                                                   \
  Field {                                                                                    \
    #name, [](RunConfig& c, const std::string& v) { c.name = parse_double(#name, v); },      \
        [](const RunConfig& c) { return ordered_json(c.name); }                              \
  }
#define FJMGT_STRING(name)                                                                   \
  Field {                                                                                    \
    #name, [](RunConfig& c, const std::string& v) { c.name = trim(v); },                     \
        [](const RunConfig& c) { return ordered_json(c.name); }                              \
  }
#define FJMGT_BOOL(name)                                                                     \
  Field {                                                                                    \
    #name, [](RunConfig& c, const std::string& v) { c.name = parse_bool(#name, v); },        \
        [](const RunConfig& c) { return ordered_json(c.name); }                              \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      FJMGT_DOUBLE(L),
      {"n_modes",
       [](RunConfig& c, const std::string& v) { c.n_modes = parse_integer<std::size_t>("n_modes", v); },
       [](const RunConfig& c) { return ordered_json(c.n_modes); }},
      FJMGT_DOUBLE(dt),
      FJMGT_DOUBLE(T),
      FJMGT_DOUBLE(c),
      FJMGT_DOUBLE(delta),
      FJMGT_DOUBLE(k1),
      FJMGT_DOUBLE(k2),
      FJMGT_DOUBLE(k3),
      FJMGT_STRING(family),
      FJMGT_STRING(kernel),
      FJMGT_DOUBLE(alpha),
      FJMGT_STRING(kernel_file),
      FJMGT_DOUBLE(power_a),
      FJMGT_DOUBLE(tau),
      FJMGT_DOUBLE(tau_max),
      FJMGT_DOUBLE(amplitude),
      FJMGT_DOUBLE(velocity_amplitude),
      FJMGT_DOUBLE(acceleration_amplitude),
      FJMGT_STRING(u2_policy),
      FJMGT_DOUBLE(a_lower),
      FJMGT_DOUBLE(picard_tol),
      {"picard_max_iter",
       [](RunConfig& c, const std::string& v) {
         c.picard_max_iter = parse_integer<int>("picard_max_iter", v);
       },
       [](const RunConfig& c) { return ordered_json(c.picard_max_iter); }},
      FJMGT_BOOL(simplify_memory),
      FJMGT_BOOL(memory_source),
      FJMGT_BOOL(memory_source_override),
      {"tau_list",
       [](RunConfig& c, const std::string& v) { c.tau_list = parse_list("tau_list", v); },
       [](const RunConfig& c) { return ordered_json(c.tau_list); }},
      FJMGT_STRING(norm),
      FJMGT_STRING(sweep_id),
      {"threads",
       [](RunConfig& c, const std::string& v) { c.threads = parse_integer<unsigned>("threads", v); },
       [](const RunConfig& c) { return ordered_json(c.threads); }},
      {"seed",
       [](RunConfig& c, const std::string& v) { c.seed = parse_integer<std::uint64_t>("seed", v); },
       [](const RunConfig& c) { return ordered_json(c.seed); }},
  };
  return table;
}

#undef FJMGT_DOUBLE
#undef FJMGT_STRING
#undef FJMGT_BOOL

std::string json_scalar(const std::string& key, const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += ',';
      if (!item.is_number()) throw ConfigError(key, "list entries must be numbers");
      out += item.is_number_float() ? format_double(item.get<double>()) : item.dump();
    }
    return out;
  }
  throw ConfigError(key, "unsupported JSON value " + v.dump());
}

RunConfig parse_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  const ordered_json* body = &doc;
  if (doc.contains("config")) body = &doc["config"];
  if (!body->is_object()) throw ConfigError("config", "expected a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : body->items()) set_key(cfg, key, json_scalar(key, value));
  return cfg;
}

}  // namespace

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError(key, "unknown key");
}

RunConfig parse_config(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text);

  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(body, "line " + std::to_string(lineno) + " is not of the form key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("<empty>", "line " + std::to_string(lineno) + " has no key");
    set_key(cfg, key, body.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str());
  cfg.base_dir = path.parent_path();
  return cfg;
}

void validate(const RunConfig& cfg, bool need_tau) {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be positive, got " + format_double(v));
  };
  positive("L", cfg.L);
  if (cfg.n_modes == 0) throw ConfigError("n_modes", "must be at least 1");
  positive("dt", cfg.dt);
  positive("T", cfg.T);
  if (step_count(cfg.T, cfg.dt) > kDefaultWeightCap) {
    throw ConfigError("dt", "T / dt exceeds the weight cap");
  }
  positive("c", cfg.c);
  positive("delta", cfg.delta);
  positive("tau_max", cfg.tau_max);

  const std::string family = lower(cfg.family);
  if (family == "westervelt") {
    if (cfg.k2 != 0.0) throw ConfigError("k2", "the westervelt family uses k1 only");
    if (cfg.k3 != 0.0) throw ConfigError("k3", "the westervelt family uses k1 only");
  } else if (family == "kuznetsov") {
    if (cfg.k2 != 0.0) throw ConfigError("k2", "the kuznetsov setting has k2 = 0");
  } else if (family == "blackstock") {
    if (cfg.k1 != 0.0) throw ConfigError("k1", "the blackstock setting has k1 = 0");
  } else if (family != "kuznetsov_blackstock") {
    throw ConfigError("family",
                      "expected westervelt, kuznetsov_blackstock, kuznetsov or blackstock");
  }

  const std::string kernel = lower(cfg.kernel);
  if (kernel == "abel") {
    if (!(cfg.alpha > 0.5)) {
      throw ConfigError("alpha", "got " + format_double(cfg.alpha) +
                                     "; the resolvent t^(alpha-1)/Gamma(alpha) is square "
                                     "integrable only for alpha > 1/2");
    }
    if (!(cfg.alpha < 1.0)) throw ConfigError("alpha", "must be below 1 (use kernel = delta)");
  } else if (kernel == "tabulated") {
    if (cfg.kernel_file.empty()) throw ConfigError("kernel_file", "required for kernel = tabulated");
    positive("power_a", cfg.power_a);
  } else if (kernel != "delta") {
    throw ConfigError("kernel", "expected abel, delta or tabulated");
  }

  if (need_tau) {
    positive("tau", cfg.tau);
    if (cfg.tau > cfg.tau_max) throw ConfigError("tau", "exceeds tau_max");
  }
  if (cfg.tau_list.empty()) throw ConfigError("tau_list", "must not be empty");
  for (double t : cfg.tau_list) {
    if (!(t > 0.0) || t > cfg.tau_max) {
      throw ConfigError("tau_list", "entries must lie in (0, tau_max], got " + format_double(t));
    }
  }
  auto sorted = cfg.tau_list;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("tau_list", "contains duplicates");
  }

  const std::string policy = lower(cfg.u2_policy);
  if (policy != "compatible" && policy != "explicit") {
    throw ConfigError("u2_policy", "expected compatible or explicit");
  }
  try {
    parse_norm_kind(cfg.norm);
  } catch (const InvalidArgument&) {
    throw ConfigError("norm", "expected west_rate, blackstock_rate or energy");
  }
  if (!(cfg.a_lower > 0.0 && cfg.a_lower <= 1.0)) throw ConfigError("a_lower", "must lie in (0, 1]");
  positive("picard_tol", cfg.picard_tol);
  if (cfg.picard_max_iter < 1) throw ConfigError("picard_max_iter", "must be at least 1");
  if (cfg.threads < 1) throw ConfigError("threads", "must be at least 1");
  if (cfg.sweep_id.empty() ||
      !std::all_of(cfg.sweep_id.begin(), cfg.sweep_id.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
      })) {
    throw ConfigError("sweep_id", "use letters, digits, '_', '-' or '.'");
  }
}

std::string config_json(const RunConfig& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& f : fields()) j[f.key] = f.get(cfg);
  return j.dump(2);
}

KernelSpec make_kernel(const RunConfig& cfg) {
  const std::string kernel = lower(cfg.kernel);
  if (kernel == "delta") return KernelSpec::dirac_delta();
  if (kernel == "abel") return KernelSpec::abel(cfg.alpha);
  std::filesystem::path file = cfg.kernel_file;
  if (file.is_relative() && !cfg.base_dir.empty()) file = cfg.base_dir / file;
  try {
    return load_tabulated_csv(file, cfg.power_a);
  } catch (const Error& e) {
    throw ConfigError("kernel_file", e.what());
  }
}

MediumParams make_medium(const RunConfig& cfg) {
  MediumParams p;
  p.c = cfg.c;
  p.delta = cfg.delta;
  p.k1 = cfg.k1;
  p.k2 = cfg.k2;
  p.k3 = cfg.k3;
  p.tau = cfg.tau;
  p.tau_cap = cfg.tau_max;
  p.kernel = make_kernel(cfg);
  p.family = lower(cfg.family) == "westervelt" ? Family::Westervelt : Family::KuznetsovBlackstock;
  return p;
}

SolverOptions make_options(const RunConfig& cfg) {
  SolverOptions o;
  o.a_lower = cfg.a_lower;
  o.picard_tol = cfg.picard_tol;
  o.picard_max_iter = cfg.picard_max_iter;
  o.simplify_memory = cfg.simplify_memory;
  o.memory_source = cfg.memory_source;
  o.memory_source_override = cfg.memory_source_override;
  return o;
}

InitialData make_data(const RunConfig& cfg, const SpectralSpace& space) {
  InitialData data = sine_profile_data(space, cfg.amplitude, cfg.velocity_amplitude);
  if (lower(cfg.u2_policy) == "explicit") {
    data.policy = AccelerationPolicy::Explicit;
    data.u2.assign(space.modes(), 0.0);
    data.u2[0] = cfg.acceleration_amplitude * std::sqrt(0.5 * space.length());
  }
  return data;
}

NormKind make_norm(const RunConfig& cfg) { return parse_norm_kind(cfg.norm); }

SweepConfig make_sweep(const RunConfig& cfg) {
  SweepConfig s;
  s.medium = make_medium(cfg);
  s.length = cfg.L;
  s.n_modes = cfg.n_modes;
  s.dt = cfg.dt;
  s.T = cfg.T;
  s.options = make_options(cfg);
  s.data = make_data(cfg, SpectralSpace(cfg.L, cfg.n_modes));
  s.taus = cfg.tau_list;
  s.norm = make_norm(cfg);
  s.sweep_id = cfg.sweep_id;
  s.threads = cfg.threads;
  return s;
}

}  // namespace fjmgt::cli
