#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace psg {

class TravellingWave;

/// Constants of the operator eps*u_xxt + c^2*u_xx - u_tt - a*u_t and the
/// bias gamma of the sine-Gordon source.
class MediumParams {
 public:
  MediumParams(double epsilon, double a, double c, double gamma = 0.0);

  double epsilon() const noexcept { return epsilon_; }
  double a() const noexcept { return a_; }
  double c() const noexcept { return c_; }
  double gamma() const noexcept { return gamma_; }

  /// b = c^2 / epsilon.
  double b() const noexcept { return c_ * c_ / epsilon_; }

  /// a < b, i.e. a*eps < c^2. The boundary a*eps == c^2 is not dissipative.
  bool dissipative_regime() const noexcept { return a_ * epsilon_ < c_ * c_; }

  MediumParams with_epsilon(double epsilon) const { return {epsilon, a_, c_, gamma_}; }

 private:
  double epsilon_;
  double a_;
  double c_;
  double gamma_;
};

/// Uniform truncation [x_min, x_max] x [0, t_max] of the half-strip.
class SpaceTimeGrid {
 public:
  SpaceTimeGrid(double x_min, double x_max, std::size_t nx, double t_max, std::size_t nt);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double t_max() const noexcept { return t_max_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t nt() const noexcept { return nt_; }
  double dx() const noexcept { return (x_max_ - x_min_) / static_cast<double>(nx_ - 1); }
  double dt() const noexcept { return t_max_ / static_cast<double>(nt_ - 1); }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx(); }
  double t(std::size_t n) const noexcept { return static_cast<double>(n) * dt(); }

  bool operator==(const SpaceTimeGrid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t nx_;
  double t_max_;
  std::size_t nt_;
};

/// Samples on a SpaceTimeGrid. Each time level is a contiguous row in space.
class GridFunction {
 public:
  explicit GridFunction(SpaceTimeGrid grid, double fill = 0.0);

  const SpaceTimeGrid& grid() const noexcept { return grid_; }

  double& operator()(std::size_t i, std::size_t n) { return values_[n * grid_.nx() + i]; }
  double operator()(std::size_t i, std::size_t n) const { return values_[n * grid_.nx() + i]; }

  std::span<double> level(std::size_t n) { return {values_.data() + n * grid_.nx(), grid_.nx()}; }
  std::span<const double> level(std::size_t n) const {
    return {values_.data() + n * grid_.nx(), grid_.nx()};
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const;

 private:
  SpaceTimeGrid grid_;
  std::vector<double> values_;
};

/// Right-hand side F(x, t, v) of the remainder problem.
class Source {
 public:
  virtual ~Source() = default;
  virtual double operator()(double x, double t, double v) const = 0;
  /// Constant C_F with |F(v1) - F(v2)| <= C_F |v1 - v2|.
  virtual double lipschitz_constant() const = 0;
};

/// F_w(x,t,v) = sin(v + w) - sin(w) - eps_f * w_xxt for a travelling wave w.
/// eps_f defaults to the medium epsilon; setting it to zero drops the forcing.
class SuperconductiveSource final : public Source {
 public:
  SuperconductiveSource(std::shared_ptr<const TravellingWave> wave, double forcing_epsilon);

  double operator()(double x, double t, double v) const override;
  double lipschitz_constant() const override { return 1.0; }

  const TravellingWave& wave() const noexcept { return *wave_; }
  double forcing_epsilon() const noexcept { return forcing_epsilon_; }

 private:
  std::shared_ptr<const TravellingWave> wave_;
  double forcing_epsilon_;
};

double source_superconductive(double x, double t, double v, const TravellingWave& wave,
                              const MediumParams& params);

struct LipschitzSample {
  double x;
  double t;
  double v1;
  double v2;
};

/// Worst ratio |F(v1) - F(v2)| / |v1 - v2| over the samples; tuples with
/// v1 == v2 are skipped. Throws std::invalid_argument if nothing is usable.
double lipschitz_bound_check(const Source& source, std::span<const LipschitzSample> samples);

std::vector<LipschitzSample> random_lipschitz_samples(const SpaceTimeGrid& grid, double v_range,
                                                      std::size_t count, std::mt19937_64& rng);

/// Flat `key = value` configuration with `#` comments.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);
std::string format_config(const ConfigMap& config);

double config_double(const ConfigMap& config, const std::string& key);
double config_double(const ConfigMap& config, const std::string& key, double fallback);
std::size_t config_size(const ConfigMap& config, const std::string& key, std::size_t fallback);

MediumParams medium_from_config(const ConfigMap& config);
SpaceTimeGrid grid_from_config(const ConfigMap& config);

}  // namespace psg
