#include "ruin/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ruin/errors.hpp"

namespace ruin {

namespace {

constexpr const char* kDefaultXGrid = "logspace:20:500:15";

const char* kParetoS4 = R"(# regularly varying main claims with matched by-claims
[model]
byclaims = true
r = 0.1
t = 10
T = 10

[main_claim]
dist = pareto(2, 2.3)

[by_claim]
dist = pareto(2, 2.3)

[interarrival]
dist = exp(0.2)

[delay]
dist = exp(0.2)

[run]
samples = 100000
seed = 1
workers = 1
x_grid = logspace:20:500:15
)";

const char* kWeibullS4 = R"(# stretched-exponential claims outside the closed-form family
[model]
byclaims = true
r = 0.1
t = 10
T = 10

[main_claim]
dist = weibull(1, 0.3)

[by_claim]
dist = weibull(1, 0.3)

[interarrival]
dist = exp(0.1)

[delay]
dist = exp(0.1)

[run]
samples = 100000
seed = 1
workers = 1
x_grid = logspace:20:500:15
)";

struct Entry {
  std::string value;
  int line = 0;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool key_allowed(const std::string& section, const std::string& key) {
  if (section == "model")
    return key == "byclaims" || key == "r" || key == "t" || key == "T";
  if (section == "run")
    return key == "samples" || key == "seed" || key == "workers" ||
           key == "x_grid" || key == "quad_tol";
  // the four distribution sections share one schema
  return key == "dist";
}

bool section_allowed(const std::string& section) {
  static const char* names[] = {"model", "main_claim", "by_claim",
                                "interarrival", "delay", "run"};
  return std::find_if(std::begin(names), std::end(names), [&](const char* n) {
           return section == n;
         }) != std::end(names);
}

Sections tokenize(const std::string& text, const std::string& name) {
  Sections out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(name, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!section_allowed(section)) fail(name, line, "unknown section [" + section + "]");
      if (out.count(section)) fail(name, line, "duplicate section [" + section + "]");
      out[section];
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(name, line, "expected key = value");
    if (section.empty()) fail(name, line, "key outside any section");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) fail(name, line, "expected key = value");
    if (!key_allowed(section, key))
      fail(name, line, "unknown key '" + key + "' in [" + section + "]");
    auto [it, fresh] = out[section].emplace(key, Entry{value, line});
    if (!fresh) fail(name, line, "duplicate key '" + key + "' in [" + section + "]");
  }
  return out;
}

Entry* find(Sections& sec, const std::string& section, const std::string& key) {
  auto s = sec.find(section);
  if (s == sec.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

double to_double(const Entry& e, const std::string& name, const std::string& key) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    fail(name, e.line, "bad number for '" + key + "': " + e.value);
  }
  if (pos != e.value.size() || !std::isfinite(v))
    fail(name, e.line, "bad number for '" + key + "': " + e.value);
  return v;
}

uint64_t to_u64(const Entry& e, const std::string& name, const std::string& key) {
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(e.value, &pos);
  } catch (const std::exception&) {
    fail(name, e.line, "bad integer for '" + key + "': " + e.value);
  }
  if (pos != e.value.size())
    fail(name, e.line, "bad integer for '" + key + "': " + e.value);
  return v;
}

bool to_bool(const Entry& e, const std::string& name, const std::string& key) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  fail(name, e.line, "expected true/false for '" + key + "': " + e.value);
}

ClaimDistribution to_dist(const Entry& e, const std::string& name) {
  try {
    return ClaimDistribution::parse(e.value);
  } catch (const std::invalid_argument& ex) {
    fail(name, e.line, ex.what());
  }
}

}  // namespace

std::vector<double> parse_x_grid(const std::string& spec) {
  std::vector<double> xs;
  if (spec.rfind("logspace:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 4) throw ConfigError("x_grid: logspace takes lo:hi:count");
    double lo = 0.0, hi = 0.0;
    long count = 0;
    try {
      lo = std::stod(parts[1]);
      hi = std::stod(parts[2]);
      count = std::stol(parts[3]);
    } catch (const std::exception&) {
      throw ConfigError("x_grid: bad logspace numbers: " + spec);
    }
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
      throw ConfigError("x_grid: need 0 < lo < hi and count >= 2: " + spec);
    for (long i = 0; i < count; ++i)
      xs.push_back(std::exp(std::log(lo) +
                            (std::log(hi) - std::log(lo)) * double(i) / double(count - 1)));
    return xs;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::string v = trim(tok);
    size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(v, &pos);
    } catch (const std::exception&) {
      throw ConfigError("x_grid: bad number: " + v);
    }
    if (pos != v.size()) throw ConfigError("x_grid: bad number: " + v);
    if (!(x > 0.0)) throw ConfigError("x_grid: thresholds must be positive");
    if (!xs.empty() && x <= xs.back())
      throw ConfigError("x_grid: thresholds must be strictly increasing");
    xs.push_back(x);
  }
  if (xs.empty()) throw ConfigError("x_grid: empty grid");
  return xs;
}

ParsedScenario parse_scenario_text(const std::string& text, const std::string& name) {
  Sections sec = tokenize(text, name);

  if (!sec.count("model")) throw ConfigError(name + ": missing [model] section");
  if (!sec.count("main_claim")) throw ConfigError(name + ": missing [main_claim] section");
  if (!sec.count("interarrival")) throw ConfigError(name + ": missing [interarrival] section");

  Entry* e_by = find(sec, "model", "byclaims");
  bool byclaims = e_by ? to_bool(*e_by, name, "byclaims") : false;

  Entry* e_r = find(sec, "model", "r");
  Entry* e_t = find(sec, "model", "t");
  if (!e_r) throw ConfigError(name + ": [model] needs r");
  if (!e_t) throw ConfigError(name + ": [model] needs t");
  double r = to_double(*e_r, name, "r");
  double t = to_double(*e_t, name, "t");
  Entry* e_T = find(sec, "model", "T");
  double T = e_T ? to_double(*e_T, name, "T") : t;

  Entry* e_main = find(sec, "main_claim", "dist");
  if (!e_main) throw ConfigError(name + ": [main_claim] needs dist");
  ClaimDistribution F = to_dist(*e_main, name);

  Entry* e_inter = find(sec, "interarrival", "dist");
  if (!e_inter) throw ConfigError(name + ": [interarrival] needs dist");
  ClaimDistribution theta = to_dist(*e_inter, name);

  std::optional<ClaimDistribution> G, H;
  if (byclaims) {
    Entry* e_g = find(sec, "by_claim", "dist");
    if (!e_g) throw ConfigError(name + ": byclaims = true needs a [by_claim] section");
    Entry* e_h = find(sec, "delay", "dist");
    if (!e_h) throw ConfigError(name + ": byclaims = true needs a [delay] section");
    G = to_dist(*e_g, name);
    H = to_dist(*e_h, name);
  } else {
    if (sec.count("by_claim"))
      throw ConfigError(name + ": [by_claim] present but byclaims = false");
    if (sec.count("delay"))
      throw ConfigError(name + ": [delay] present but byclaims = false");
  }

  RunOptions run;
  if (Entry* e = find(sec, "run", "samples")) {
    run.samples = to_u64(*e, name, "samples");
    if (run.samples == 0) fail(name, e->line, "samples must be >= 1");
  }
  if (Entry* e = find(sec, "run", "seed")) run.seed = to_u64(*e, name, "seed");
  if (Entry* e = find(sec, "run", "workers")) {
    uint64_t w = to_u64(*e, name, "workers");
    if (w == 0 || w > 4096) fail(name, e->line, "workers must be in 1..4096");
    run.workers = int(w);
  }
  std::string grid_spec = kDefaultXGrid;
  int grid_line = 0;
  if (Entry* e = find(sec, "run", "x_grid")) {
    grid_spec = e->value;
    grid_line = e->line;
  }
  try {
    run.x_grid = parse_x_grid(grid_spec);
  } catch (const ConfigError& ex) {
    if (grid_line) fail(name, grid_line, ex.what());
    throw;
  }
  if (Entry* e = find(sec, "run", "quad_tol")) {
    double q = to_double(*e, name, "quad_tol");
    if (!(q > 0.0) || q >= 1.0) fail(name, e->line, "quad_tol must be in (0, 1)");
    run.quad_tol = q;
  }

  return ParsedScenario{
      Scenario::make(std::move(F), std::move(G), std::move(theta), std::move(H), r, t, T),
      std::move(run)};
}

ParsedScenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"pareto-s4", "weibull-s4"};
  return names;
}

std::string preset_text(const std::string& name) {
  if (name == "pareto-s4") return kParetoS4;
  if (name == "weibull-s4") return kWeibullS4;
  throw ConfigError("unknown preset: " + name + " (try `presets`)");
}

ParsedScenario load_preset(const std::string& name) {
  return parse_scenario_text(preset_text(name), name);
}

}  // namespace ruin
