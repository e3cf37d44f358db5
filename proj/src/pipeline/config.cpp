#include "otmss/pipeline/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "otmss/errors.hpp"

namespace otmss::pipeline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    throw ConfigError("'" + key + "' expects a finite number, got '" + text + "'", key);
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'", key);
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + text + "'", key);
}

template <typename Enum, typename Parse>
Enum to_enum(const std::string& key, const std::string& text, Parse parse) {
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + key + "': " + e.what(), key);
  }
}

struct Field {
  std::function<void(SweepConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const SweepConfig&)> get;
};

#define OTMSS_REAL(name, member)                                                        \
  {name,                                                                                \
   {[](SweepConfig& c, const std::string& k, const std::string& v) { c.member = to_real(k, v); }, \
    [](const SweepConfig& c) { return format_real(c.member); }}}
#define OTMSS_INT(name, member)                                                         \
  {name,                                                                                \
   {[](SweepConfig& c, const std::string& k, const std::string& v) { c.member = to_int(k, v); }, \
    [](const SweepConfig& c) { return std::to_string(c.member); }}}
#define OTMSS_BOOL(name, member)                                                        \
  {name,                                                                                \
   {[](SweepConfig& c, const std::string& k, const std::string& v) { c.member = to_bool(k, v); }, \
    [](const SweepConfig& c) { return std::string(c.member ? "true" : "false"); }}}
#define OTMSS_ENUM(name, member, parser)                                                \
  {name,                                                                                \
   {[](SweepConfig& c, const std::string& k, const std::string& v) {                    \
      c.member = to_enum<decltype(c.member)>(k, v, parser);                             \
    },                                                                                  \
    [](const SweepConfig& c) { return to_string(c.member); }}}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      OTMSS_REAL("k_min", k_min),
      OTMSS_REAL("k_max", k_max),
      OTMSS_INT("k_points", k_points),
      OTMSS_REAL("x_start", x_start),
      OTMSS_REAL("x_end", x_end),
      OTMSS_REAL("init_r", init_r),
      OTMSS_REAL("init_phi", init_phi),
      OTMSS_ENUM("form", form, parse_rhs_form),
      OTMSS_ENUM("coupling_power", coupling_power, parse_coupling_power),
      OTMSS_ENUM("eval_point", eval_point, parse_eval_point),
      OTMSS_REAL("A_s", anchors.amplitude),
      OTMSS_REAL("n_s", anchors.tilt),
      OTMSS_REAL("k_pivot", anchors.pivot),
      OTMSS_REAL("abs_tol", tolerances.abs),
      OTMSS_REAL("rel_tol", tolerances.rel),
      OTMSS_REAL("unit_scale", unit_scale),
      OTMSS_REAL("hubble_rate", background.hubble_rate),
      OTMSS_REAL("epsilon", background.epsilon),
      OTMSS_REAL("planck_mass", background.planck_mass),
      OTMSS_REAL("mu2_rate", mu2_rate),
      OTMSS_REAL("r_cap", r_cap),
      OTMSS_ENUM("angle_treatment", angle_treatment, parse_angle_treatment),
      OTMSS_REAL("slaving_threshold", slaving_threshold),
      OTMSS_ENUM("spectrum_mode", spectrum_mode, parse_spectrum_mode),
      OTMSS_ENUM("integrator", integrator, parse_integrator),
      OTMSS_REAL("fixed_step", fixed_step),
      OTMSS_INT("samples_per_decade", samples_per_decade),
      OTMSS_INT("threads", threads),
      OTMSS_BOOL("zero_coupling", zero_coupling),
      OTMSS_BOOL("debug_flip_beta_sign", debug_flip_beta_sign),
  };
  return table;
}

#undef OTMSS_REAL
#undef OTMSS_INT
#undef OTMSS_BOOL
#undef OTMSS_ENUM

const Field* find_field(const std::string& key) {
  for (const auto& [name, f] : fields()) {
    if (name == key) return &f;
  }
  return nullptr;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field + ": " + message, field);
}

} // namespace

void SweepConfig::validate() const {
  require(k_min > 0.0, "k_min", "must be positive");
  require(k_min < k_max, "k_min,k_max", "k_min must be smaller than k_max");
  require(k_points >= 2, "k_points", "must be >= 2");
  require(x_end > 0.0, "x_end", "must be positive");
  require(x_start > 1.0 && x_end < 1.0, "x_start,x_end", "need x_start > 1 > x_end");
  require(init_r >= 0.0, "init_r", "must be >= 0");
  require(anchors.amplitude > 0.0, "A_s", "must be positive");
  require(anchors.pivot > 0.0, "k_pivot", "must be positive");
  require(tolerances.abs > 0.0, "abs_tol", "must be positive");
  require(tolerances.rel > 0.0, "rel_tol", "must be positive");
  require(unit_scale > 0.0, "unit_scale", "must be positive");
  require(background.hubble_rate > 0.0, "hubble_rate", "must be positive");
  require(background.epsilon > 0.0 && background.epsilon < 1.0, "epsilon", "must lie in (0, 1)");
  require(background.planck_mass > 0.0, "planck_mass", "must be positive");
  require(r_cap > 0.0, "r_cap", "must be positive");
  require(slaving_threshold > 0.0, "slaving_threshold", "must be positive");
  require(fixed_step > 0.0, "fixed_step", "must be positive");
  require(samples_per_decade >= 1, "samples_per_decade", "must be >= 1");
  require(threads >= 1, "threads", "must be >= 1");
}

DynamicsConfig SweepConfig::dynamics() const {
  DynamicsConfig d;
  d.form = form;
  d.power = coupling_power;
  d.x_start = x_start;
  d.x_end = x_end;
  d.init_r = init_r;
  d.init_phi = init_phi;
  d.tolerances = tolerances;
  d.integrator = integrator;
  d.fixed_step = fixed_step;
  d.samples_per_decade = samples_per_decade;
  d.r_cap = r_cap;
  d.angle = angle_treatment;
  d.slaving_threshold = slaving_threshold;
  d.eval_point = eval_point;
  d.background = background;
  if (mu2_rate != 0.0) {
    const double rate = mu2_rate;
    d.mu2_rate = [rate](double, double) { return rate; };
  }
  d.zero_coupling = zero_coupling;
  d.threads = static_cast<unsigned>(threads);
  return d;
}

SpectrumSettings SweepConfig::spectrum() const {
  SpectrumSettings s;
  s.anchors = anchors;
  s.mode = spectrum_mode;
  s.unit_scale = unit_scale;
  s.bogoliubov.flip_beta_sign = debug_flip_beta_sign;
  return s;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, f] : fields()) out.push_back(name);
    return out;
  }();
  return keys;
}

void set_config_value(SweepConfig& config, const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown key '" + key + "'", key);
  f->set(config, key, value);
}

SweepConfig parse_config(const std::string& text, SweepConfig base, const std::string& source) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected 'key = value', got '" + line + "'", {}, line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key before '='", {}, line_no);
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'", key, line_no);
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                            std::to_string(it->second) + ")",
                        key, line_no);
    }
    seen[key] = line_no;
    try {
      set_config_value(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what(), e.field(), line_no);
    }
  }
  base.validate();
  return base;
}

SweepConfig load_config(const std::optional<std::filesystem::path>& path) {
  if (!path) {
    SweepConfig c;
    c.validate();
    return c;
  }
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot open config file '" + path->string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), {}, path->string());
}

std::string echo_config(const SweepConfig& config) {
  std::string out;
  for (const auto& [name, f] : fields()) out += name + " = " + f.get(config) + "\n";
  return out;
}

std::uint64_t config_hash(const SweepConfig& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : echo_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace otmss::pipeline
