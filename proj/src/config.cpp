#include "vortexem/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vortexem/errors.hpp"
#include "vortexem/validation.hpp"

namespace vortexem {

namespace {

using json = nlohmann::json;

// Records the line of every key and array element, keyed by JSON pointer.
// Runs only on text the JSON parser has already accepted.
class LineScanner {
 public:
  explicit LineScanner(std::string_view s) : s_(s) {}

  std::map<std::string, int> run() {
    skip_ws();
    value("");
    return std::move(lines_);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        ++pos_;
        if (s_[pos_] == 'u') {
          out += "\\u";
          ++pos_;
          continue;
        }
      }
      out += s_[pos_++];
    }
    ++pos_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void value(const std::string& ptr) {
    lines_.emplace(ptr, line_);
    const char c = s_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      std::set<std::string> seen;
      while (s_[pos_] != '}') {
        const int key_line = line_;
        const std::string key = string_token();
        if (!seen.insert(key).second)
          throw ConfigError("duplicate key '" + key + "'", key_line);
        const std::string child = ptr + "/" + escape(key);
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(child);
        lines_[child] = std::min(lines_[child], key_line);
        skip_ws();
        if (s_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      int index = 0;
      while (s_[pos_] != ']') {
        value(ptr + "/" + std::to_string(index++));
        skip_ws();
        if (s_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != ',' &&
             s_[pos_] != ']' && s_[pos_] != '}')
        ++pos_;
    }
  }
};

int line_at_byte(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

struct Reader {
  const Config& cfg;

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw ConfigError(ptr + ": " + msg, cfg.line_of(ptr));
  }

  void only_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) fail(ptr.empty() ? "/" : ptr, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) fail(ptr + "/" + k, "unknown key '" + k + "'");
    }
  }

  int integer(const json& v, const std::string& ptr) const {
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    return v.get<int>();
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    return v.get<double>();
  }

  template <class F>
  double quantity(const json& v, const std::string& ptr, F&& parse) const {
    if (!v.is_string()) fail(ptr, "expected a string with explicit units, e.g. \"10 nm\"");
    try {
      return parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(ptr, e.what());
    }
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }
};

bool is_micro(std::string_view u, std::string_view base) {
  for (std::string_view pre : {"u", "\xC2\xB5", "\xCE\xBC"})
    if (u.size() == pre.size() + base.size() && u.substr(0, pre.size()) == pre && u.substr(pre.size()) == base)
      return true;
  return false;
}

}  // namespace

UnitString split_unit_string(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data() + b, s.data() + s.size(), v);
  if (ec != std::errc{} || !std::isfinite(v))
    throw std::invalid_argument("'" + std::string(s) + "' does not start with a finite number");
  std::size_t p = static_cast<std::size_t>(end - s.data());
  if (p == s.size() || !std::isspace(static_cast<unsigned char>(s[p])))
    throw std::invalid_argument("'" + std::string(s) + "' needs a unit separated by a space");
  while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
  std::size_t e = s.size();
  while (e > p && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (p == e) throw std::invalid_argument("'" + std::string(s) + "' has no unit");
  return {v, std::string(s.substr(p, e - p))};
}

double parse_length(std::string_view s, const units::Constants& c) {
  const UnitString u = split_unit_string(s);
  if (u.unit == "lambda_c") return u.value;
  double cm;
  if (u.unit == "fm") cm = 1e-13;
  else if (u.unit == "pm") cm = 1e-10;
  else if (u.unit == "nm") cm = 1e-7;
  else if (is_micro(u.unit, "m")) cm = 1e-4;
  else if (u.unit == "mm") cm = 1e-1;
  else if (u.unit == "cm") cm = 1.0;
  else if (u.unit == "m") cm = 1e2;
  else throw std::invalid_argument("unknown length unit '" + u.unit + "'");
  return u.value * cm / c.lambda_c_cm;
}

double parse_time(std::string_view s, const units::Constants& c, double t_d) {
  const UnitString u = split_unit_string(s);
  if (u.unit == "t_c") return u.value;
  if (u.unit == "t_d") return u.value * t_d;
  double sec;
  if (u.unit == "fs") sec = 1e-15;
  else if (u.unit == "ps") sec = 1e-12;
  else if (u.unit == "ns") sec = 1e-9;
  else if (is_micro(u.unit, "s")) sec = 1e-6;
  else if (u.unit == "ms") sec = 1e-3;
  else if (u.unit == "s") sec = 1.0;
  else throw std::invalid_argument("unknown time unit '" + u.unit + "'");
  return u.value * sec / c.t_c_s;
}

double parse_energy_kev(std::string_view s, const units::Constants& c) {
  const UnitString u = split_unit_string(s);
  if (u.unit == "eV") return u.value * 1e-3;
  if (u.unit == "keV") return u.value;
  if (u.unit == "MeV") return u.value * 1e3;
  if (u.unit == "m_e") return u.value * c.m_e_kev;
  throw std::invalid_argument("unknown energy unit '" + u.unit + "'");
}

std::vector<double> AxisRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[i] = count == 1 ? min : (i == count - 1 ? max : min + (max - min) * i / (count - 1));
  return v;
}

int Config::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    const auto it = lines.find(p);
    if (it != lines.end()) return it->second;
    if (p.empty()) return 0;
    p = p.substr(0, p.rfind('/'));
  }
}

std::string_view to_string(Frame f) { return f == Frame::rest ? "rest" : "lab"; }

Config parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_at_byte(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line);
  }

  Config cfg;
  cfg.lines = LineScanner(text).run();
  cfg.canonical = doc.dump();
  const Reader rd{cfg};
  rd.only_keys(doc, "", {"constants", "packet", "boost", "frame", "units", "grid", "outputs", "tolerances"});

  if (doc.contains("constants")) {
    const std::string v = rd.string(doc["constants"], "/constants");
    if (v == "codata") cfg.codata = true;
    else if (v != "rounded") rd.fail("/constants", "expected \"rounded\" or \"codata\"");
    cfg.constants = cfg.codata ? units::Constants::codata() : units::Constants::rounded();
  }
  const units::Constants& k = cfg.constants;

  if (!doc.contains("packet")) throw ConfigError("missing required key 'packet'", cfg.line_of(""));
  const json& pk = doc["packet"];
  rd.only_keys(pk, "/packet", {"ell", "n", "sigma", "sigma_perp0", "mean_radius0"});
  if (!pk.contains("ell")) rd.fail("/packet", "missing required key 'ell'");
  cfg.packet.ell = rd.integer(pk["ell"], "/packet/ell");
  if (pk.contains("n")) cfg.packet.n = rd.integer(pk["n"], "/packet/n");
  if (cfg.packet.n < 0) rd.fail("/packet/n", "n must be >= 0");
  const int widths = pk.contains("sigma") + pk.contains("sigma_perp0") + pk.contains("mean_radius0");
  if (widths != 1) rd.fail("/packet", "give exactly one of 'sigma', 'sigma_perp0', 'mean_radius0'");
  if (pk.contains("sigma")) {
    cfg.packet.sigma = rd.quantity(pk["sigma"], "/packet/sigma",
                                   [&](const std::string& s) { return parse_energy_kev(s, k) / k.m_e_kev; });
  } else if (pk.contains("sigma_perp0")) {
    const double w = rd.quantity(pk["sigma_perp0"], "/packet/sigma_perp0",
                                 [&](const std::string& s) { return parse_length(s, k); });
    if (!(w > 0.0)) rd.fail("/packet/sigma_perp0", "width must be > 0");
    cfg.packet.sigma = 1.0 / w;
  } else {
    if (cfg.packet.ell == 0) rd.fail("/packet/mean_radius0", "<rho(0)> is 0 for ell = 0; give sigma_perp0");
    const double w = rd.quantity(pk["mean_radius0"], "/packet/mean_radius0",
                                 [&](const std::string& s) { return parse_length(s, k); });
    if (!(w > 0.0)) rd.fail("/packet/mean_radius0", "width must be > 0");
    cfg.packet.sigma = std::sqrt(std::abs(cfg.packet.ell)) / w;
  }
  try {
    cfg.packet.validate();
  } catch (const DomainError& e) {
    rd.fail("/packet", e.what());
  }
  const double t_d = diffraction_time(cfg.packet);

  if (doc.contains("boost")) {
    const json& b = doc["boost"];
    rd.only_keys(b, "/boost", {"beta", "kinetic"});
    if (b.contains("beta") == b.contains("kinetic")) rd.fail("/boost", "give exactly one of 'beta', 'kinetic'");
    try {
      if (b.contains("beta")) {
        cfg.boost = BoostSpec::from_beta(rd.number(b["beta"], "/boost/beta"));
      } else {
        cfg.kinetic_kev = rd.quantity(b["kinetic"], "/boost/kinetic",
                                      [&](const std::string& s) { return parse_energy_kev(s, k); });
        cfg.boost = BoostSpec::from_kinetic(*cfg.kinetic_kev, k);
      }
    } catch (const DomainError& e) {
      rd.fail(b.contains("beta") ? "/boost/beta" : "/boost/kinetic", e.what());
    }
  }

  if (doc.contains("frame")) {
    const std::string f = rd.string(doc["frame"], "/frame");
    if (f == "lab") cfg.frame = Frame::lab;
    else if (f != "rest") rd.fail("/frame", "expected \"rest\" or \"lab\"");
  }
  if (doc.contains("units")) {
    const std::string u = rd.string(doc["units"], "/units");
    if (u == "lab") cfg.output_units = OutputUnits::lab;
    else if (u != "natural") rd.fail("/units", "expected \"natural\" or \"lab\"");
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    rd.only_keys(g, "/grid", {"rho", "z", "phi_count", "times"});
    const auto axis = [&](const char* name) {
      const std::string ptr = std::string("/grid/") + name;
      const json& a = g[name];
      rd.only_keys(a, ptr, {"min", "max", "count"});
      for (const char* key : {"min", "max", "count"})
        if (!a.contains(key)) rd.fail(ptr, std::string("missing required key '") + key + "'");
      AxisRange r;
      const auto len = [&](const std::string& s) { return parse_length(s, k); };
      r.min = rd.quantity(a["min"], ptr + "/min", len);
      r.max = rd.quantity(a["max"], ptr + "/max", len);
      r.count = rd.integer(a["count"], ptr + "/count");
      if (r.count < 1) rd.fail(ptr + "/count", "count must be >= 1");
      if (!(r.min <= r.max)) rd.fail(ptr, "range must satisfy min <= max");
      return r;
    };
    if (g.contains("rho")) {
      cfg.grid.rho = axis("rho");
      if (cfg.grid.rho->min < 0.0) rd.fail("/grid/rho/min", "rho must be >= 0");
    }
    if (g.contains("z")) cfg.grid.z = axis("z");
    if (g.contains("phi_count")) {
      cfg.grid.phi_count = rd.integer(g["phi_count"], "/grid/phi_count");
      if (cfg.grid.phi_count < 1) rd.fail("/grid/phi_count", "phi_count must be >= 1");
    }
    if (g.contains("times")) {
      if (!g["times"].is_array()) rd.fail("/grid/times", "expected an array of time strings");
      for (std::size_t i = 0; i < g["times"].size(); ++i)
        cfg.grid.times.push_back(rd.quantity(g["times"][i], "/grid/times/" + std::to_string(i),
                                             [&](const std::string& s) { return parse_time(s, k, t_d); }));
    }
  }

  if (doc.contains("outputs")) {
    if (!doc["outputs"].is_array()) rd.fail("/outputs", "expected an array");
    for (std::size_t i = 0; i < doc["outputs"].size(); ++i) {
      const std::string ptr = "/outputs/" + std::to_string(i);
      const std::string o = rd.string(doc["outputs"][i], ptr);
      if (o != "fieldmap" && o != "asymmetry" && o != "plan" && o != "validate")
        rd.fail(ptr, "unknown output '" + o + "'");
      cfg.outputs.push_back(o);
    }
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) rd.fail("/tolerances", "expected an object");
    for (const auto& [name, v] : t.items()) {
      const std::string ptr = "/tolerances/" + name;
      if (!default_tolerances().count(name)) rd.fail(ptr, "no validation check named '" + name + "'");
      const double tol = rd.number(v, ptr);
      if (!(tol > 0.0)) rd.fail(ptr, "tolerance must be > 0");
      cfg.tolerances[name] = tol;
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

bool equivalent(const Config& a, const Config& b) {
  const auto same_axis = [](const std::optional<AxisRange>& x, const std::optional<AxisRange>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->min == y->min && x->max == y->max && x->count == y->count);
  };
  const auto same_boost = [](const std::optional<BoostSpec>& x, const std::optional<BoostSpec>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || x->beta == y->beta;
  };
  return a.packet.ell == b.packet.ell && a.packet.n == b.packet.n && a.packet.sigma == b.packet.sigma &&
         a.packet.mass == b.packet.mass && a.packet.mean_p == b.packet.mean_p && a.codata == b.codata &&
         same_boost(a.boost, b.boost) && a.kinetic_kev == b.kinetic_kev && a.frame == b.frame &&
         a.output_units == b.output_units && same_axis(a.grid.rho, b.grid.rho) && same_axis(a.grid.z, b.grid.z) &&
         a.grid.phi_count == b.grid.phi_count && a.grid.times == b.grid.times && a.outputs == b.outputs &&
         a.tolerances == b.tolerances;
}

}  // namespace vortexem
