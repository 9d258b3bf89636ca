#include "betaproc/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "betaproc/io.hpp"

namespace betaproc::cli {

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : std::runtime_error("config field '" + field + "': " + message), field_(field) {}

namespace {

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const std::map<std::string, Experiment>& experiments() {
  static const std::map<std::string, Experiment> m{
      {"sample", Experiment::sample},         {"entry-density", Experiment::entry_density},
      {"eigen-jpdf", Experiment::eigen_jpdf}, {"weights", Experiment::weights},
      {"converge", Experiment::converge},     {"stationarity", Experiment::stationarity},
      {"limit-law", Experiment::limit_law},   {"series-check", Experiment::series_check},
  };
  return m;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& field, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE)
    throw ConfigError(field, "expected a number, got '" + v + "'");
  return d;
}

long long parse_int(const std::string& field, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE)
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  return i;
}

int parse_small_int(const std::string& field, const std::string& v) {
  const long long i = parse_int(field, v);
  if (i < -1000000000LL || i > 1000000000LL) throw ConfigError(field, "out of range");
  return static_cast<int>(i);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += f(v[i]);
  }
  return s;
}

void require_one_of(const std::string& field, const std::string& v,
                    std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw ConfigError(field, "expected one of " + list + ", got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> s{
      {"experiment",
       [](ExperimentConfig& c, const std::string& v) {
         const auto it = experiments().find(v);
         if (it == experiments().end()) throw ConfigError("experiment", "unknown experiment '" + v + "'");
         c.experiment = it->second;
       }},
      {"process",
       [](ExperimentConfig& c, const std::string& v) {
         require_one_of("process", v, {"hermite", "laguerre"});
         c.process = v == "hermite" ? Process::hermite : Process::laguerre;
       }},
      {"n",
       [](ExperimentConfig& c, const std::string& v) {
         c.n.clear();
         for (const auto& item : split_list(v)) c.n.push_back(parse_small_int("n", item));
       }},
      {"beta", [](ExperimentConfig& c, const std::string& v) { c.beta = parse_double("beta", v); }},
      {"a", [](ExperimentConfig& c, const std::string& v) { c.a = parse_double("a", v); }},
      {"t",
       [](ExperimentConfig& c, const std::string& v) {
         c.t.clear();
         for (const auto& item : split_list(v)) c.t.push_back(parse_double("t", item));
       }},
      {"replicates",
       [](ExperimentConfig& c, const std::string& v) { c.replicates = parse_small_int("replicates", v); }},
      {"seed",
       [](ExperimentConfig& c, const std::string& v) {
         errno = 0;
         char* end = nullptr;
         const unsigned long long s = std::strtoull(v.c_str(), &end, 10);
         if (v.empty() || v[0] == '-' || *end != '\0' || errno == ERANGE)
           throw ConfigError("seed", "expected an unsigned 64-bit integer, got '" + v + "'");
         c.seed = s;
       }},
      {"out", [](ExperimentConfig& c, const std::string& v) { c.out = v; }},
      {"threads",
       [](ExperimentConfig& c, const std::string& v) { c.threads = parse_small_int("threads", v); }},
      {"format",
       [](ExperimentConfig& c, const std::string& v) {
         require_one_of("format", v, {"csv", "json"});
         c.format = v == "csv" ? OutputFormat::csv : OutputFormat::json;
       }},
      {"k", [](ExperimentConfig& c, const std::string& v) { c.k = parse_small_int("k", v); }},
      {"alpha", [](ExperimentConfig& c, const std::string& v) { c.alpha = parse_double("alpha", v); }},
      {"epsilon",
       [](ExperimentConfig& c, const std::string& v) { c.epsilon = parse_double("epsilon", v); }},
      {"entry",
       [](ExperimentConfig& c, const std::string& v) {
         require_one_of("entry", v, {"diag", "offdiag", "wishart_diag", "wishart_offdiag"});
         c.entry = v;
       }},
      {"measure",
       [](ExperimentConfig& c, const std::string& v) {
         require_one_of("measure", v, {"spectral", "empirical", "singular"});
         c.measure = v;
       }},
      {"weights",
       [](ExperimentConfig& c, const std::string& v) {
         require_one_of("weights", v, {"plain", "symmetrized"});
         c.weights = v;
       }},
      {"spectral",
       [](ExperimentConfig& c, const std::string& v) {
         require_one_of("spectral", v, {"true", "false"});
         c.spectral = v == "true";
       }},
      {"delta", [](ExperimentConfig& c, const std::string& v) { c.delta = parse_double("delta", v); }},
      {"x",
       [](ExperimentConfig& c, const std::string& v) {
         c.x.clear();
         for (const auto& item : split_list(v)) c.x.push_back(parse_double("x", item));
       }},
      {"x0",
       [](ExperimentConfig& c, const std::string& v) {
         c.x0.clear();
         for (const auto& item : split_list(v)) c.x0.push_back(parse_double("x0", item));
       }},
      {"terms", [](ExperimentConfig& c, const std::string& v) { c.terms = parse_small_int("terms", v); }},
  };
  return s;
}

std::vector<std::pair<std::string, std::string>> fields(const ExperimentConfig& c) {
  auto i2s = [](int v) { return std::to_string(v); };
  return {
      {"experiment", to_string(c.experiment)},
      {"process", to_string(c.process)},
      {"n", join(c.n, i2s)},
      {"beta", fmt(c.beta)},
      {"a", fmt(c.a)},
      {"t", join(c.t, fmt)},
      {"replicates", std::to_string(c.replicates)},
      {"seed", std::to_string(c.seed)},
      {"out", c.out},
      {"threads", std::to_string(c.threads)},
      {"format", c.format == OutputFormat::csv ? "csv" : "json"},
      {"k", std::to_string(c.k)},
      {"alpha", fmt(c.alpha)},
      {"epsilon", fmt(c.epsilon)},
      {"entry", c.entry},
      {"measure", c.measure},
      {"weights", c.weights},
      {"spectral", c.spectral ? "true" : "false"},
      {"delta", fmt(c.delta)},
      {"x", join(c.x, fmt)},
      {"x0", join(c.x0, fmt)},
      {"terms", std::to_string(c.terms)},
  };
}

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [name, value] : experiments())
    if (value == e) return name;
  return "?";
}

std::string to_string(Process p) { return p == Process::hermite ? "hermite" : "laguerre"; }

void ExperimentConfig::validate() const {
  require(!n.empty(), "n", "at least one size is required");
  for (std::size_t i = 0; i < n.size(); ++i) {
    require(n[i] >= 1, "n", "sizes must be >= 1");
    require(i == 0 || n[i] > n[i - 1], "n", "sizes must be strictly increasing");
  }
  require(finite_positive(beta), "beta", "must be a positive number");
  require(std::isfinite(a), "a", "must be finite");
  if (process == Process::laguerre) require(a > -1.0, "a", "must exceed -1 for the Laguerre process");
  require(!t.empty(), "t", "at least one time is required");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(finite_positive(t[i]), "t", "times must be positive and finite");
    require(i == 0 || t[i] > t[i - 1], "t", "times must be strictly increasing");
  }
  require(replicates >= 1, "replicates", "must be >= 1");
  require(!out.empty(), "out", "must not be empty");
  require(threads >= 0, "threads", "must be >= 0 (0 = all cores)");
  require(k >= 1, "k", "must be >= 1");
  require(alpha > 0.0 && alpha < 1.0, "alpha", "must lie in (0, 1)");
  require(finite_positive(epsilon), "epsilon", "must be positive");
  require(finite_positive(delta), "delta", "must be positive");
  require(terms >= 1 && terms <= 500, "terms", "must lie in [1, 500]");
  for (double v : x) require(std::isfinite(v) && v >= 0.0, "x", "points must be finite and >= 0");
  for (double v : x0) require(std::isfinite(v) && v >= 0.0, "x0", "points must be finite and >= 0");

  switch (experiment) {
    case Experiment::weights:
      require(k <= n.front(), "k", "must not exceed the smallest n");
      require(replicates >= 2, "replicates", "weights needs >= 2 replicates");
      require(t.size() >= 2, "t", "weights needs two times (first and last) for the time-invariance test");
      if (process == Process::hermite)
        require(weights == "plain", "weights", "symmetrized weights need process = laguerre");
      break;
    case Experiment::converge: {
      const bool off = entry == "offdiag" || entry == "wishart_offdiag";
      require(k <= n.front() - (off ? 1 : 0), "k", "entry index out of range for the smallest n");
      if (entry.rfind("wishart", 0) == 0)
        require(process == Process::laguerre, "entry", "wishart entries need process = laguerre");
      break;
    }
    case Experiment::limit_law:
      if (measure == "singular")
        require(process == Process::laguerre, "measure", "singular values need process = laguerre");
      break;
    case Experiment::eigen_jpdf:
      require(n.back() <= 2, "n", "eigen-jpdf normalization is checked by quadrature for n <= 2");
      break;
    case Experiment::stationarity:
    case Experiment::series_check:
      require(!x.empty(), "x", "at least one point is required");
      if (experiment == Experiment::series_check) require(!x0.empty(), "x0", "at least one point is required");
      break;
    default: break;
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Setter* set = nullptr;
    for (const auto& [name, fn] : setters())
      if (name == key) set = &fn;
    if (!set) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    (*set)(c, value);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::string s;
  for (const auto& [k, v] : fields(c)) s += k + " = " + v + "\n";
  return s;
}

std::string template_text() {
  const std::map<std::string, std::string> help{
      {"experiment", "sample | entry-density | eigen-jpdf | weights | converge | stationarity | limit-law | series-check"},
      {"process", "hermite | laguerre"},
      {"n", "matrix size, or a strictly increasing comma-separated grid"},
      {"beta", "beta > 0"},
      {"a", "Laguerre parameter, a > -1"},
      {"t", "strictly increasing positive times (weights: first and last are compared)"},
      {"replicates", "Monte Carlo replicates (sample: independent paths)"},
      {"seed", "master seed, unsigned 64-bit"},
      {"out", "output directory"},
      {"threads", "worker cap, 0 = all cores"},
      {"format", "csv | json"},
      {"k", "1-based entry index (converge) or partial-sum length (weights)"},
      {"alpha", "KS significance level"},
      {"epsilon", "exceedance threshold (converge)"},
      {"entry", "diag | offdiag | wishart_diag | wishart_offdiag (converge)"},
      {"measure", "spectral | empirical | singular (limit-law)"},
      {"weights", "plain | symmetrized (weights on the Laguerre process)"},
      {"spectral", "true | false: sample also writes eigenvalues and weights"},
      {"delta", "Bessel dimension (stationarity with process = laguerre, series-check)"},
      {"x", "evaluation points (stationarity, series-check)"},
      {"x0", "starting points (series-check)"},
      {"terms", "Laguerre series length (series-check)"},
  };
  std::string s = "# betaproc experiment configuration\n";
  for (const auto& [k, v] : fields(ExperimentConfig{})) {
    s += "\n# " + help.at(k) + "\n";
    s += k + " = " + v + "\n";
  }
  return s;
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : fields(c)) {
    if (k == "out" || k == "threads") continue;
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace betaproc::cli
