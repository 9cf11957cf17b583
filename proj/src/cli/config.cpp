#include "ksdk/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include "ksdk/error.hpp"
#include "ksdk/spectral/snapshot.hpp"

namespace ksdk {
namespace {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::int64_t, double, bool, std::string, Array> v;

  const char* type_name() const {
    switch (v.index()) {
      case 0: return "integer";
      case 1: return "float";
      case 2: return "boolean";
      case 3: return "string";
      default: return "array";
    }
  }
};

class ValueParser {
 public:
  explicit ValueParser(std::string_view s) : s_(s) {}

  Value parse_all() {
    Value v = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters '" + std::string(s_.substr(pos_)) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  Value parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return {true};
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return {false};
    }
    return parse_number();
  }

  Value parse_array() {
    ++pos_;
    Array out;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return {out};
    }
    for (;;) {
      out.push_back(parse());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return {out};
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return {out};
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return {out};
  }

  Value parse_number() {
    std::size_t end = pos_;
    while (end < s_.size() && s_[end] != ',' && s_[end] != ']' && s_[end] != ' ' && s_[end] != '\t') ++end;
    const std::string_view tok = s_.substr(pos_, end - pos_);
    const char* b = tok.data();
    const char* e = b + tok.size();
    const char* first = (b != e && *b == '+') ? b + 1 : b;
    if (tok.find_first_of(".eEin") == std::string_view::npos) {
      std::int64_t i = 0;
      auto r = std::from_chars(first, e, i);
      if (r.ec == std::errc{} && r.ptr == e) {
        pos_ = end;
        return {i};
      }
    }
    double d = 0.0;
    auto r = std::from_chars(first, e, d);
    if (r.ec != std::errc{} || r.ptr != e || tok.empty()) fail("cannot parse value '" + std::string(tok) + "'");
    pos_ = end;
    return {d};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void type_error(const std::string& key, const char* expected, const Value& v) {
  throw ConfigError("key '" + key + "' expects " + expected + ", got " + v.type_name());
}

double as_double(const std::string& key, const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v.v)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&v.v)) return *d;
  type_error(key, "a number", v);
}

std::int64_t as_int(const std::string& key, const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v.v)) return *i;
  type_error(key, "an integer", v);
}

int as_int32(const std::string& key, const Value& v) {
  const std::int64_t i = as_int(key, v);
  if (i < INT32_MIN || i > INT32_MAX) throw ConfigError("key '" + key + "' is out of range");
  return static_cast<int>(i);
}

std::size_t as_count(const std::string& key, const Value& v) {
  const std::int64_t i = as_int(key, v);
  if (i < 0) throw ConfigError("key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(i);
}

bool as_bool(const std::string& key, const Value& v) {
  if (auto* b = std::get_if<bool>(&v.v)) return *b;
  type_error(key, "a boolean", v);
}

std::string as_string(const std::string& key, const Value& v) {
  if (auto* s = std::get_if<std::string>(&v.v)) return *s;
  type_error(key, "a string", v);
}

const Array& as_array(const std::string& key, const Value& v) {
  if (auto* a = std::get_if<Array>(&v.v)) return *a;
  type_error(key, "an array", v);
}

std::vector<double> as_doubles(const std::string& key, const Value& v) {
  std::vector<double> out;
  const Array& a = as_array(key, v);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_double(key + "[" + std::to_string(i) + "]", a[i]));
  return out;
}

std::vector<std::size_t> as_counts(const std::string& key, const Value& v) {
  std::vector<std::size_t> out;
  const Array& a = as_array(key, v);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_count(key + "[" + std::to_string(i) + "]", a[i]));
  return out;
}

std::vector<ProbePoint> as_probes(const std::string& key, const Value& v) {
  std::vector<ProbePoint> out;
  const Array& a = as_array(key, v);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string k = key + "[" + std::to_string(i) + "]";
    const Array& p = as_array(k, a[i]);
    if (p.size() != 3) throw ConfigError("key '" + k + "' expects [t, k1, k2]");
    out.push_back({as_double(k, p[0]), {as_int32(k, p[1]), as_int32(k, p[2])}});
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) { return format_number(x); }

template <class T, class F>
std::string list(const std::vector<T>& xs, F&& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + f(xs[i]);
  return out + "]";
}

struct KeySpec {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&, const Value&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string kind_name(InitialCondition::Kind k) {
  switch (k) {
    case InitialCondition::Kind::uniform: return "uniform";
    case InitialCondition::Kind::cosine: return "cosine";
    case InitialCondition::Kind::snapshot: return "snapshot";
  }
  return "?";
}

#define KSDK_NUM(sec, name, field)                                                                    \
  KeySpec {                                                                                           \
    sec, #name, [](RunConfig& c, const std::string& k, const Value& v) { c.field = as_double(k, v); }, \
        [](const RunConfig& c) { return num(c.field); }                                               \
  }
#define KSDK_INT(sec, name, field)                                                                    \
  KeySpec {                                                                                           \
    sec, #name, [](RunConfig& c, const std::string& k, const Value& v) { c.field = as_int32(k, v); },  \
        [](const RunConfig& c) { return std::to_string(c.field); }                                    \
  }
#define KSDK_BOOL(sec, name, field)                                                                   \
  KeySpec {                                                                                           \
    sec, #name, [](RunConfig& c, const std::string& k, const Value& v) { c.field = as_bool(k, v); },   \
        [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }                    \
  }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"run", "seed",
       [](RunConfig& c, const std::string& k, const Value& v) {
         const std::int64_t s = as_int(k, v);
         if (s < 0) throw ConfigError("key '" + k + "' must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      KSDK_INT("run", workers, workers),
      {"run", "output_dir",
       [](RunConfig& c, const std::string& k, const Value& v) { c.output_dir = as_string(k, v); },
       [](const RunConfig& c) { return quote(c.output_dir); }},
      KSDK_INT("run", snapshot_stride, snapshot_stride),

      KSDK_NUM("model", eps, model.eps),
      KSDK_NUM("model", delta, model.delta),
      KSDK_NUM("model", chi, model.chi),
      KSDK_NUM("model", T, model.T),
      KSDK_NUM("model", dt, model.dt),
      KSDK_INT("model", M, model.M),
      KSDK_NUM("model", blowup_threshold, model.blowup_threshold),
      KSDK_NUM("model", negativity_level_L, model.negativity_level_L),
      KSDK_NUM("model", positivity_floor, model.positivity_floor),
      KSDK_NUM("model", gamma, model.gamma),
      {"model", "scheme",
       [](RunConfig& c, const std::string& k, const Value& v) {
         const std::string s = as_string(k, v);
         if (s == "etd1")
           c.model.scheme = TimeScheme::etd1;
         else if (s == "etdrk2")
           c.model.scheme = TimeScheme::etdrk2;
         else
           throw ConfigError("key '" + k + "' must be \"etd1\" or \"etdrk2\", got \"" + s + "\"");
       },
       [](const RunConfig& c) { return quote(c.model.scheme == TimeScheme::etd1 ? "etd1" : "etdrk2"); }},

      {"initial", "kind",
       [](RunConfig& c, const std::string& k, const Value& v) {
         const std::string s = as_string(k, v);
         if (s == "uniform")
           c.initial.kind = InitialCondition::Kind::uniform;
         else if (s == "cosine")
           c.initial.kind = InitialCondition::Kind::cosine;
         else if (s == "snapshot")
           c.initial.kind = InitialCondition::Kind::snapshot;
         else
           throw ConfigError("key '" + k + "' must be \"uniform\", \"cosine\" or \"snapshot\", got \"" + s + "\"");
       },
       [](const RunConfig& c) { return quote(kind_name(c.initial.kind)); }},
      KSDK_NUM("initial", cos_x1, initial.cos_x1),
      KSDK_NUM("initial", cos_x2, initial.cos_x2),
      {"initial", "snapshot",
       [](RunConfig& c, const std::string& k, const Value& v) { c.initial.snapshot = as_string(k, v); },
       [](const RunConfig& c) { return quote(c.initial.snapshot); }},

      {"schedule", "eps_list",
       [](RunConfig& c, const std::string& k, const Value& v) { c.schedule.eps_list = as_doubles(k, v); },
       [](const RunConfig& c) { return list(c.schedule.eps_list, num); }},
      {"schedule", "delta_rule",
       [](RunConfig& c, const std::string& k, const Value& v) {
         try {
           c.schedule.delta_rule.kind = parse_delta_rule_kind(as_string(k, v));
         } catch (const InputError& e) {
           throw ConfigError("key '" + k + "': " + e.what());
         }
       },
       [](const RunConfig& c) { return quote(to_string(c.schedule.delta_rule.kind)); }},
      KSDK_NUM("schedule", delta_coefficient, schedule.delta_rule.coefficient),
      KSDK_NUM("schedule", delta_exponent, schedule.delta_rule.exponent),
      KSDK_NUM("schedule", gamma, schedule.gamma),

      KSDK_INT("experiment", samples, experiment.samples),
      KSDK_NUM("experiment", level, experiment.level),
      KSDK_NUM("experiment", L, experiment.L),
      KSDK_NUM("experiment", chi_large, experiment.chi_large),
      KSDK_NUM("experiment", S, experiment.S),
      {"experiment", "probes",
       [](RunConfig& c, const std::string& k, const Value& v) { c.experiment.probes = as_probes(k, v); },
       [](const RunConfig& c) {
         return list(c.experiment.probes, [](const ProbePoint& p) {
           return "[" + num(p.t) + ", " + std::to_string(p.mode.k1) + ", " + std::to_string(p.mode.k2) + "]";
         });
       }},
      {"experiment", "delta_list",
       [](RunConfig& c, const std::string& k, const Value& v) { c.experiment.delta_list = as_doubles(k, v); },
       [](const RunConfig& c) { return list(c.experiment.delta_list, num); }},
      KSDK_INT("experiment", stride, experiment.stride),
      KSDK_BOOL("experiment", coupled, experiment.coupled),
      KSDK_BOOL("experiment", simulate_ou, experiment.simulate_ou),
      KSDK_NUM("experiment", tolerance, experiment.tolerance),
      KSDK_NUM("experiment", oracle_sigmas, experiment.oracle_sigmas),

      {"particles", "N",
       [](RunConfig& c, const std::string& k, const Value& v) { c.particles.N = as_count(k, v); },
       [](const RunConfig& c) { return std::to_string(c.particles.N); }},
      {"particles", "N_list",
       [](RunConfig& c, const std::string& k, const Value& v) { c.particles.N_list = as_counts(k, v); },
       [](const RunConfig& c) {
         return list(c.particles.N_list, [](std::size_t n) { return std::to_string(n); });
       }},
      KSDK_INT("particles", M_kernel, particles.M_kernel),
      KSDK_NUM("particles", gamma, particles.gamma),
      KSDK_NUM("particles", delta_coefficient, particles.delta_coefficient),
      KSDK_INT("particles", stride, particles.stride),

      KSDK_NUM("skeleton", amplitude, skeleton.amplitude),
      KSDK_INT("skeleton", k1, skeleton.k1),
      KSDK_INT("skeleton", k2, skeleton.k2),
  };
  return table;
}

#undef KSDK_NUM
#undef KSDK_INT
#undef KSDK_BOOL

const KeySpec* find_key(const std::string& section, const std::string& key) {
  for (const auto& k : key_table())
    if (k.section == section && k.key == key) return &k;
  return nullptr;
}

bool known_section(const std::string& s) {
  for (const auto& k : key_table())
    if (k.section == s) return true;
  return false;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_string) {
      ++i;
      continue;
    }
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

void assign(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& text) {
  const std::string path = section + "." + key;
  const KeySpec* spec = find_key(section, key);
  if (!spec) throw ConfigError("unknown key '" + path + "'");
  Value v;
  try {
    v = ValueParser(text).parse_all();
  } catch (const ConfigError& e) {
    throw ConfigError("key '" + path + "': " + e.what());
  }
  spec->set(cfg, path, v);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("key '" + key + "' " + what);
}

}  // namespace

FourierField InitialCondition::build(int M) const {
  switch (kind) {
    case Kind::uniform:
      return FourierField::constant(M, 1.0);
    case Kind::cosine: {
      FourierField f = FourierField::constant(M, 1.0);
      if (M >= 1) {
        f += FourierField::real_mode(M, {1, 0}, Complex{cos_x1 / 2, 0.0});
        f += FourierField::real_mode(M, {0, 1}, Complex{cos_x2 / 2, 0.0});
      }
      return f;
    }
    case Kind::snapshot: {
      const FourierField s = load_snapshot(snapshot);
      if (s.components() != 1) throw InputError("initial snapshot '" + snapshot + "' is not a scalar field");
      FourierField f(M, 1, true);
      const int m = std::min(M, s.resolution());
      for (int k1 = -m; k1 <= m; ++k1)
        for (int k2 = -m; k2 <= m; ++k2) f.at(0, k1, k2) = s.at(0, k1, k2);
      return f;
    }
  }
  return {};
}

void RunConfig::resolve() {
  warnings.clear();
  if (workers < 1) bad("run.workers", "must be >= 1");
  if (snapshot_stride < 0) bad("run.snapshot_stride", "must be >= 0");
  model.seed = seed;
  if (!(model.eps >= 0.0)) bad("model.eps", "must be >= 0");
  if (!(model.delta > 0.0)) bad("model.delta", "must be > 0");
  if (!(model.T > 0.0)) bad("model.T", "must be > 0");
  if (!(model.dt > 0.0)) bad("model.dt", "must be > 0");
  if (model.dt > model.T) bad("model.dt", "must not exceed model.T");
  if (model.M < 1) bad("model.M", "must be >= 1");
  if (!(model.blowup_threshold > 0.0)) bad("model.blowup_threshold", "must be > 0");
  if (!(model.negativity_level_L > 0.0)) bad("model.negativity_level_L", "must be > 0");
  if (!(model.positivity_floor >= 0.0)) bad("model.positivity_floor", "must be >= 0");
  if (initial.kind == InitialCondition::Kind::cosine && !(std::abs(initial.cos_x1) + std::abs(initial.cos_x2) < 1.0))
    bad("initial.cos_x1", "and initial.cos_x2 must satisfy |cos_x1| + |cos_x2| < 1 (positive density)");
  if (initial.kind == InitialCondition::Kind::snapshot && initial.snapshot.empty())
    bad("initial.snapshot", "is required when initial.kind = \"snapshot\"");

  try {
    schedule.validate();
  } catch (const InputError& e) {
    bad("schedule.eps_list", std::string("is invalid: ") + e.what());
  }
  try {
    regime = schedule.regime();
  } catch (const DomainError& e) {
    bad("schedule.delta_rule", std::string("is invalid: ") + e.what());
  }
  if (!regime.regular_decreasing)
    warnings.push_back("schedule: eps^(1/2) delta^(-gamma-2) is not decreasing along schedule.eps_list");
  if (!regime.rough_decreasing)
    warnings.push_back("schedule: eps log(1/delta) is not decreasing along schedule.eps_list");

  if (experiment.samples < 1) bad("experiment.samples", "must be >= 1");
  if (!(experiment.level > 0.0)) bad("experiment.level", "must be > 0");
  if (!(experiment.L > 0.0)) bad("experiment.L", "must be > 0");
  if (!(experiment.S > 0.0)) bad("experiment.S", "must be > 0");
  for (std::size_t i = 0; i < experiment.probes.size(); ++i)
    if (!(experiment.probes[i].t >= 0.0)) bad("experiment.probes[" + std::to_string(i) + "]", "needs t >= 0");
  for (std::size_t i = 0; i < experiment.delta_list.size(); ++i)
    if (!(experiment.delta_list[i] > 0.0)) bad("experiment.delta_list[" + std::to_string(i) + "]", "must be > 0");
  if (experiment.stride < 1) bad("experiment.stride", "must be >= 1");
  if (!(experiment.tolerance > 0.0)) bad("experiment.tolerance", "must be > 0");
  if (!(experiment.oracle_sigmas > 0.0)) bad("experiment.oracle_sigmas", "must be > 0");

  if (particles.N < 1) bad("particles.N", "must be >= 1");
  for (std::size_t i = 0; i < particles.N_list.size(); ++i)
    if (particles.N_list[i] < 1) bad("particles.N_list[" + std::to_string(i) + "]", "must be >= 1");
  if (particles.M_kernel < 1) bad("particles.M_kernel", "must be >= 1");
  if (!(particles.gamma >= -1.0 && particles.gamma <= 0.0)) bad("particles.gamma", "must lie in [-1, 0]");
  if (!(particles.delta_coefficient > 0.0)) bad("particles.delta_coefficient", "must be > 0");
  if (particles.stride < 1) bad("particles.stride", "must be >= 1");
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  std::string section;
  for (const auto& k : key_table()) {
    if (k.section != section) {
      os << (section.empty() ? "" : "\n") << "[" << k.section << "]\n";
      section = k.section;
    }
    os << k.key << " = " << k.get(*this) << "\n";
  }
  return os.str();
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'");
        section = trim(std::string_view(line).substr(1, line.size() - 2));
        if (!known_section(section)) throw ConfigError("unknown section '" + section + "'");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'");
      const std::string key = trim(std::string_view(line).substr(0, eq));
      if (section.empty()) throw ConfigError("key '" + key + "' appears before any [section]");
      assign(cfg, section, key, trim(std::string_view(line).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string path = trim(std::string_view(assignment).substr(0, eq));
  const auto dot = path.find('.');
  if (eq == std::string::npos || dot == std::string::npos)
    throw ConfigError("override '" + assignment + "' must look like section.key=value");
  try {
    assign(cfg, path.substr(0, dot), path.substr(dot + 1), trim(std::string_view(assignment).substr(eq + 1)));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("override: ") + e.what());
  }
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str(), path);
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  cfg.resolve();
  return cfg;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.push_back(k.section + "." + k.key);
  return out;
}

}  // namespace ksdk
