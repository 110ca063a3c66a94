#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "bstar/csv.hpp"

namespace bstar::cli {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

struct Key {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, Key>& table() {
  using C = RunConfig;
  using S = const std::string&;
  static const std::map<std::string, Key> keys = {
      {"grid", {[](C& c, S v) { c.grid = static_cast<int>(to_integer("grid", v)); },
                [](const C& c) { return std::to_string(c.grid); }}},
      {"box", {[](C& c, S v) { c.box = to_double("box", v); },
               [](const C& c) { return format_double(c.box); }}},
      {"alpha", {[](C& c, S v) { c.alpha = to_double("alpha", v); },
                 [](const C& c) { return format_double(c.alpha); }}},
      {"beta", {[](C& c, S v) { c.beta = to_double("beta", v); },
                [](const C& c) { return format_double(c.beta); }}},
      {"mass", {[](C& c, S v) { c.mass = to_double("mass", v); },
                [](const C& c) { return format_double(c.mass); }}},
      {"n_target", {[](C& c, S v) { c.n_target = to_double("n_target", v); },
                    [](const C& c) {
                      return c.n_target ? format_double(*c.n_target) : std::string("auto");
                    }}},
      {"tol", {[](C& c, S v) { c.tol = to_double("tol", v); },
               [](const C& c) { return format_double(c.tol); }}},
      {"dt", {[](C& c, S v) { c.dt = to_double("dt", v); },
              [](const C& c) { return format_double(c.dt); }}},
      {"tmax", {[](C& c, S v) { c.tmax = to_double("tmax", v); },
                [](const C& c) { return format_double(c.tmax); }}},
      {"out", {[](C& c, S v) { c.out = v; }, [](const C& c) { return c.out.string(); }}},
      {"seed", {[](C& c, S v) {
                  const long long s = to_integer("seed", v);
                  if (s < 0) throw ConfigError("seed: must be non-negative");
                  c.seed = static_cast<std::uint64_t>(s);
                },
                [](const C& c) { return std::to_string(c.seed); }}},
      {"width", {[](C& c, S v) { c.width = to_double("width", v); },
                 [](const C& c) { return format_double(c.width); }}},
      {"max_iters", {[](C& c, S v) { c.max_iters = static_cast<int>(to_integer("max_iters", v)); },
                     [](const C& c) { return std::to_string(c.max_iters); }}},
      {"box_study", {[](C& c, S v) { c.box_study = to_bool("box_study", v); },
                     [](const C& c) { return std::string(c.box_study ? "true" : "false"); }}},
      {"q_file", {[](C& c, S v) { c.q_file = v; }, [](const C& c) { return c.q_file.string(); }}},
      {"input", {[](C& c, S v) { c.input = v; }, [](const C& c) { return c.input.string(); }}},
      {"delta", {[](C& c, S v) { c.delta = to_double("delta", v); },
                 [](const C& c) { return format_double(c.delta); }}},
      {"sample_every",
       {[](C& c, S v) { c.sample_every = static_cast<int>(to_integer("sample_every", v)); },
        [](const C& c) { return std::to_string(c.sample_every); }}},
      {"snapshot_every",
       {[](C& c, S v) { c.snapshot_every = static_cast<int>(to_integer("snapshot_every", v)); },
        [](const C& c) { return std::to_string(c.snapshot_every); }}},
      {"betas", {[](C& c, S v) { c.betas = to_list("betas", v); },
                 [](const C& c) { return join(c.betas); }}},
      {"min_box", {[](C& c, S v) { c.min_box = to_double("min_box", v); },
                   [](const C& c) { return format_double(c.min_box); }}},
      {"hard_min_box", {[](C& c, S v) { c.hard_min_box = to_double("hard_min_box", v); },
                        [](const C& c) { return format_double(c.hard_min_box); }}},
      {"points_per_width", {[](C& c, S v) { c.points_per_width = to_double("points_per_width", v); },
                            [](const C& c) { return format_double(c.points_per_width); }}},
      {"max_grid", {[](C& c, S v) { c.max_grid = static_cast<int>(to_integer("max_grid", v)); },
                    [](const C& c) { return std::to_string(c.max_grid); }}},
      {"discretization",
       {[](C& c, S v) {
          if (v == "dealiased") c.discretization = Discretization::dealiased;
          else if (v == "collocation") c.discretization = Discretization::collocation;
          else throw ConfigError("discretization: expected dealiased or collocation, got '" + v + "'");
        },
        [](const C& c) {
          return std::string(c.discretization == Discretization::dealiased ? "dealiased"
                                                                          : "collocation");
        }}},
      {"gamma", {[](C& c, S v) {
                   if (v == "minimizing") c.gamma = GammaConvention::minimizing;
                   else if (v == "as_published") c.gamma = GammaConvention::as_published;
                   else throw ConfigError("gamma: expected minimizing or as_published, got '" + v + "'");
                 },
                 [](const C& c) {
                   return std::string(c.gamma == GammaConvention::minimizing ? "minimizing"
                                                                            : "as_published");
                 }}},
      {"energy_floor_factor",
       {[](C& c, S v) { c.energy_floor_factor = to_double("energy_floor_factor", v); },
        [](const C& c) { return format_double(c.energy_floor_factor); }}},
      {"kinetic_growth", {[](C& c, S v) { c.kinetic_growth = to_double("kinetic_growth", v); },
                          [](const C& c) { return format_double(c.kinetic_growth); }}},
  };
  return keys;
}

bool power_of_two(int n) { return n >= 8 && (n & (n - 1)) == 0; }

}  // namespace

void RunConfig::validate() const {
  if (!power_of_two(grid)) {
    throw ConfigError("grid: must be a power of two >= 8 (e.g. 32, 64, 128), got " +
                      std::to_string(grid));
  }
  if (!(box > 0.0)) throw ConfigError("box: side length must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha: must lie strictly between 0 and 1");
  if (!(mass >= 0.0)) throw ConfigError("mass: must be >= 0");
  if (n_target && !(*n_target > 0.0)) throw ConfigError("n_target: must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol: must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt: must be positive");
  if (!(tmax > 0.0)) throw ConfigError("tmax: must be positive");
  if (!(width > 0.0)) throw ConfigError("width: must be positive");
  if (max_iters <= 0) throw ConfigError("max_iters: must be positive");
  if (!(delta >= 0.0)) throw ConfigError("delta: must be >= 0");
  if (sample_every <= 0) throw ConfigError("sample_every: must be positive");
  if (snapshot_every < 0) throw ConfigError("snapshot_every: must be >= 0 (0 disables)");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0)) throw ConfigError("betas: entries must be positive");
    if (i > 0 && !(betas[i] < betas[i - 1])) {
      throw ConfigError("betas: must be strictly decreasing");
    }
  }
  if (!(min_box > 0.0)) throw ConfigError("min_box: must be positive");
  if (!(hard_min_box > 0.0 && hard_min_box <= min_box)) {
    throw ConfigError("hard_min_box: must be positive and <= min_box");
  }
  if (!(points_per_width > 0.0)) throw ConfigError("points_per_width: must be positive");
  if (!power_of_two(max_grid)) throw ConfigError("max_grid: must be a power of two >= 8");
  if (!(energy_floor_factor >= 0.0)) throw ConfigError("energy_floor_factor: must be >= 0");
  if (!(kinetic_growth > 1.0)) throw ConfigError("kinetic_growth: must exceed 1");
}

Overrides read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Overrides out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply(RunConfig& cfg, const Overrides& values) {
  const auto& keys = table();
  for (const auto& [key, value] : values) {
    const auto it = keys.find(key);
    if (it == keys.end()) {
      std::string valid;
      for (const auto& [k, _] : keys) valid += (valid.empty() ? "" : ", ") + k;
      throw ConfigError("unknown config key '" + key + "' (valid keys: " + valid + ")");
    }
    it->second.set(cfg, value);
  }
}

std::string echo(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, k] : table()) out += key + "=" + k.get(cfg) + "\n";
  return out;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& [key, _] : table()) out.push_back(key);
  return out;
}

}  // namespace bstar::cli
