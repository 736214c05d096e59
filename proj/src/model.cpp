#include "psg/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "psg/waves.hpp"

namespace psg {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

MediumParams::MediumParams(double epsilon, double a, double c, double gamma)
    : epsilon_(epsilon), a_(a), c_(c), gamma_(gamma) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be > 0");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("a must be > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be > 0");
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  if (!std::isfinite(b())) throw std::invalid_argument("b = c^2/epsilon is not finite");
}

SpaceTimeGrid::SpaceTimeGrid(double x_min, double x_max, std::size_t nx, double t_max, std::size_t nt)
    : x_min_(x_min), x_max_(x_max), nx_(nx), t_max_(t_max), nt_(nt) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw std::invalid_argument("grid needs x_min < x_max");
  if (nx < 2 || nt < 2) throw std::invalid_argument("grid needs nx >= 2 and nt >= 2");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("grid needs t_max > 0");
}

GridFunction::GridFunction(SpaceTimeGrid grid, double fill)
    : grid_(grid), values_(grid.nx() * grid.nt(), fill) {}

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SuperconductiveSource::SuperconductiveSource(std::shared_ptr<const TravellingWave> wave,
                                             double forcing_epsilon)
    : wave_(std::move(wave)), forcing_epsilon_(forcing_epsilon) {
  if (!wave_) throw std::invalid_argument("superconductive source needs a wave");
}

double SuperconductiveSource::operator()(double x, double t, double v) const {
  const double w = wave_->value(x, t);
  const double forcing = forcing_epsilon_ == 0.0 ? 0.0 : forcing_epsilon_ * wave_->derivatives(x, t).w_xxt;
  // sin(v + w) - sin(w) without cancellation for small v
  const double diff = 2.0 * std::cos(w + 0.5 * v) * std::sin(0.5 * v);
  return diff - forcing;
}

double source_superconductive(double x, double t, double v, const TravellingWave& wave,
                              const MediumParams& params) {
  const double w = wave.value(x, t);
  return 2.0 * std::cos(w + 0.5 * v) * std::sin(0.5 * v) - params.epsilon() * wave.derivatives(x, t).w_xxt;
}

double lipschitz_bound_check(const Source& source, std::span<const LipschitzSample> samples) {
  double worst = 0.0;
  std::size_t used = 0;
  for (const auto& s : samples) {
    if (s.v1 == s.v2) continue;
    const double ratio = std::abs(source(s.x, s.t, s.v1) - source(s.x, s.t, s.v2)) / std::abs(s.v1 - s.v2);
    worst = std::max(worst, ratio);
    ++used;
  }
  if (used == 0) throw std::invalid_argument("lipschitz_bound_check: no sample with v1 != v2");
  return worst;
}

std::vector<LipschitzSample> random_lipschitz_samples(const SpaceTimeGrid& grid, double v_range,
                                                      std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(grid.x_min(), grid.x_max());
  std::uniform_real_distribution<double> ut(0.0, grid.t_max());
  std::uniform_real_distribution<double> uv(-v_range, v_range);
  std::vector<LipschitzSample> out(count);
  for (auto& s : out) {
    s.x = ux(rng);
    s.t = ut(rng);
    s.v1 = uv(rng);
    s.v2 = uv(rng);
  }
  return out;
}

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    out[key] = value;
  }
  return out;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const ConfigMap& config) {
  std::ostringstream out;
  for (const auto& [k, v] : config) out << k << " = " << v << '\n';
  return out.str();
}

double config_double(const ConfigMap& config, const std::string& key) {
  auto it = config.find(key);
  if (it == config.end()) throw std::invalid_argument("missing required key: " + key);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("key " + key + ": not a number: " + it->second);
  }
  if (pos != it->second.size()) throw std::invalid_argument("key " + key + ": not a number: " + it->second);
  return v;
}

double config_double(const ConfigMap& config, const std::string& key, double fallback) {
  return config.count(key) ? config_double(config, key) : fallback;
}

std::size_t config_size(const ConfigMap& config, const std::string& key, std::size_t fallback) {
  auto it = config.find(key);
  if (it == config.end()) return fallback;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(it->second, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("key " + key + ": not an integer: " + it->second);
  }
  if (pos != it->second.size() || v < 0)
    throw std::invalid_argument("key " + key + ": not a nonnegative integer: " + it->second);
  return static_cast<std::size_t>(v);
}

MediumParams medium_from_config(const ConfigMap& config) {
  return {config_double(config, "epsilon"), config_double(config, "a", 1.0), config_double(config, "c", 1.0),
          config_double(config, "gamma", 0.0)};
}

SpaceTimeGrid grid_from_config(const ConfigMap& config) {
  return {config_double(config, "x_min", -20.0), config_double(config, "x_max", 20.0),
          config_size(config, "nx", 400), config_double(config, "t_max", 2.0), config_size(config, "nt", 200)};
}

}  // namespace psg
