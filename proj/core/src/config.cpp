#include "colide/config.hpp"

#include "colide/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

namespace colide {

FitOptions FitSettings::options() const {
  FitOptions o;
  o.adam.lr = lr;
  o.tol = tol;
  o.check_every = check_every;
  o.threshold = threshold;
  o.center = center;
  return o;
}

void ExperimentConfig::validate() const {
  graph.validate();
  noise.validate();
  if (graph.d < 2) throw ConfigError("graph.d must be at least 2");
  if (n_values.empty()) throw ConfigError("data.n is empty");
  for (Index n : n_values)
    if (n < 1) throw ConfigError("data.n must be at least 1");
  if (variances.empty()) throw ConfigError("noise.variance is empty");
  for (double v : variances)
    if (!(v > 0.0)) throw ConfigError("noise.variance must be positive");
  if (seeds.empty()) throw ConfigError("run.seeds is empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("run.seeds must be distinct");
  }
  if (fit.methods.empty()) throw ConfigError("fit.methods is empty");
  if (!(fit.lambda >= 0.0)) throw ConfigError("fit.lambda must be nonnegative");
  if (!(fit.threshold >= 0.0)) throw ConfigError("fit.threshold must be nonnegative");
  if (!(fit.lr > 0.0)) throw ConfigError("fit.lr must be positive");
  if (!(fit.tol >= 0.0)) throw ConfigError("fit.tol must be nonnegative");
  if (fit.check_every < 1) throw ConfigError("fit.check_every must be at least 1");
  if (jobs < 1) throw ConfigError("run.jobs must be at least 1");
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.graph = GraphModelSpec{GraphModel::ER, 200, 4.0, default_weight_ranges()};
  if (name == "ev") {
    c.noise.profile = EqualVariance{1.0};
    c.variances = {0.5, 1.0, 2.0, 5.0, 10.0};
    c.fit.methods = {Method::ColideEv, Method::LsBaseline};
  } else if (name == "nv") {
    c.graph.weight_ranges = low_snr_weight_ranges();
    c.noise.profile = NonEqualVariance{0.5, 10.0};
    c.fit.methods = {Method::ColideNv, Method::ColideEv, Method::LsBaseline};
  } else if (name == "high_snr_nv") {
    c.noise.profile = NonEqualVariance{0.5, 10.0};
    c.fit.methods = {Method::ColideNv, Method::ColideEv, Method::LsBaseline};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + key);
}

double to_double(const std::string& key, std::string_view v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) bad_value(key, v);
  return x;
}

template <typename Int>
Int to_int(const std::string& key, std::string_view v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return x;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

std::pair<double, double> to_range(const std::string& key, std::string_view v) {
  const auto parts = split(v, ':');
  if (parts.size() != 2) bad_value(key, v);
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::vector<std::uint64_t> to_seeds(const std::string& key, std::string_view v) {
  std::vector<std::uint64_t> seeds;
  const auto dash = v.find('-');
  if (dash != std::string_view::npos && v.find(',') == std::string_view::npos) {
    const auto lo = to_int<std::uint64_t>(key, trim(v.substr(0, dash)));
    const auto hi = to_int<std::uint64_t>(key, trim(v.substr(dash + 1)));
    if (hi < lo) bad_value(key, v);
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (auto part : split(v, ',')) seeds.push_back(to_int<std::uint64_t>(key, part));
  return seeds;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"graph.model",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         if (v == "er") c.graph.model = GraphModel::ER;
         else if (v == "sf") c.graph.model = GraphModel::SF;
         else bad_value(k, v);
       }},
      {"graph.d", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.graph.d = to_int<Index>(k, v); }},
      {"graph.k", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.graph.k = to_double(k, v); }},
      {"graph.weights",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         if (v == "default") {
           c.graph.weight_ranges = default_weight_ranges();
         } else if (v == "low_snr") {
           c.graph.weight_ranges = low_snr_weight_ranges();
         } else {
           c.graph.weight_ranges.clear();
           for (auto part : split(v, ',')) {
             const auto [lo, hi] = to_range(k, part);
             c.graph.weight_ranges.push_back({lo, hi});
           }
         }
       }},
      {"noise.family",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         if (v == "gaussian") c.noise.family = NoiseFamily::Gaussian;
         else if (v == "exponential") c.noise.family = NoiseFamily::Exponential;
         else if (v == "laplace") c.noise.family = NoiseFamily::Laplace;
         else bad_value(k, v);
       }},
      {"noise.profile",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         if (v == "ev") {
           if (!c.noise.equal_variance()) c.noise.profile = EqualVariance{c.variances.front()};
         } else if (v == "nv") {
           if (c.noise.equal_variance()) c.noise.profile = NonEqualVariance{};
         } else {
           bad_value(k, v);
         }
       }},
      {"noise.variance",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.variances.clear();
         for (auto part : split(v, ',')) c.variances.push_back(to_double(k, part));
       }},
      {"noise.variance_range",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         const auto [lo, hi] = to_range(k, v);
         c.noise.profile = NonEqualVariance{lo, hi};
       }},
      {"data.n",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.n_values.clear();
         for (auto part : split(v, ',')) c.n_values.push_back(to_int<Index>(k, part));
       }},
      {"data.standardize",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.fit.standardize = to_bool(k, v); }},
      {"fit.methods",
       [](ExperimentConfig& c, const std::string&, std::string_view v) {
         c.fit.methods.clear();
         for (auto part : split(v, ',')) c.fit.methods.push_back(parse_method(part));
       }},
      {"fit.lambda", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.fit.lambda = to_double(k, v); }},
      {"fit.threshold",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.fit.threshold = to_double(k, v); }},
      {"fit.lr", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.fit.lr = to_double(k, v); }},
      {"fit.tol", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.fit.tol = to_double(k, v); }},
      {"fit.check_every",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.fit.check_every = to_int<std::size_t>(k, v);
       }},
      {"fit.center", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.fit.center = to_bool(k, v); }},
      {"fit.schedule",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         std::vector<Stage> stages;
         for (auto part : split(v, ',')) {
           const auto f = split(part, ':');
           if (f.size() != 3) bad_value(k, v);
           stages.push_back({to_double(k, f[0]), to_double(k, f[1]), to_int<std::size_t>(k, f[2])});
         }
         c.fit.schedule = StageSchedule(std::move(stages));
       }},
      {"run.seeds", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.seeds = to_seeds(k, v); }},
      {"run.master_seed",
       [](ExperimentConfig& c, const std::string& k, std::string_view v) {
         c.master_seed = to_int<std::uint64_t>(k, v);
       }},
      {"run.jobs", [](ExperimentConfig& c, const std::string& k, std::string_view v) { c.jobs = to_int<unsigned>(k, v); }},
      {"output.path", [](ExperimentConfig& c, const std::string&, std::string_view v) { c.output = std::string(v); }},
  };
  return table;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key != "preset" && setters().find(key) == setters().end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }

  ExperimentConfig cfg;
  for (const auto& [k, v] : entries)
    if (k == "preset") cfg = preset(v);
  for (const auto& [k, v] : entries)
    if (k != "preset") setters().find(k)->second(cfg, k, v);
  if (auto* ev = std::get_if<EqualVariance>(&cfg.noise.profile)) ev->variance = cfg.variances.front();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  auto fmt_d = [](double x) { return format_double(x); };
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("graph.model", c.graph.model == GraphModel::ER ? "er" : "sf");
  e.emplace_back("graph.d", std::to_string(c.graph.d));
  e.emplace_back("graph.k", format_double(c.graph.k));
  e.emplace_back("graph.weights", join(c.graph.weight_ranges, [](const WeightInterval& w) {
                   return format_double(w.lo) + ":" + format_double(w.hi);
                 }));
  const char* family = c.noise.family == NoiseFamily::Gaussian      ? "gaussian"
                       : c.noise.family == NoiseFamily::Exponential ? "exponential"
                                                                    : "laplace";
  e.emplace_back("noise.family", family);
  if (const auto* nv = std::get_if<NonEqualVariance>(&c.noise.profile)) {
    e.emplace_back("noise.profile", "nv");
    e.emplace_back("noise.variance_range", format_double(nv->lo) + ":" + format_double(nv->hi));
  } else {
    e.emplace_back("noise.profile", "ev");
    e.emplace_back("noise.variance", join(c.variances, fmt_d));
  }
  e.emplace_back("data.n", join(c.n_values, [](Index n) { return std::to_string(n); }));
  e.emplace_back("data.standardize", c.fit.standardize ? "true" : "false");
  e.emplace_back("fit.methods", join(c.fit.methods, [](Method m) { return std::string(method_name(m)); }));
  e.emplace_back("fit.lambda", format_double(c.fit.lambda));
  e.emplace_back("fit.threshold", format_double(c.fit.threshold));
  e.emplace_back("fit.lr", format_double(c.fit.lr));
  e.emplace_back("fit.tol", format_double(c.fit.tol));
  e.emplace_back("fit.check_every", std::to_string(c.fit.check_every));
  e.emplace_back("fit.center", c.fit.center ? "true" : "false");
  e.emplace_back("fit.schedule", join(c.fit.schedule.stages(), [](const Stage& s) {
                   return format_double(s.mu) + ":" + format_double(s.s) + ":" + std::to_string(s.max_iters);
                 }));
  e.emplace_back("run.seeds", join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }));
  e.emplace_back("run.master_seed", std::to_string(c.master_seed));
  e.emplace_back("run.jobs", std::to_string(c.jobs));
  e.emplace_back("output.path", c.output.string());
  return e;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace colide
