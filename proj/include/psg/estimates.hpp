#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "psg/model.hpp"
#include "psg/volterra.hpp"

namespace psg {

class TravellingWave;

struct GronwallBound {
  /// beta (T/a) e^{T/a} eps, uniform on [0, T]
  double uniform;
  /// beta eps (e^{t/a} - 1), the equality case of the integral inequality
  double exact;
};

GronwallBound gronwall_envelope(double t, double T, double beta, double a, double epsilon);

/// beta e^{2T/a} eps.
double exponential_envelope(double T, double beta, double a, double epsilon);

/// T_eps = (a/2) ln(1 / (beta eps^{1-k})). Returns 0 when beta eps^{1-k} == 1
/// and throws DomainError when the horizon would be negative.
double t_epsilon(double a, double beta, double epsilon, double k_exp);

struct LayerParams {
  /// sup |w_xxt|; 0 means take it from w_xxt_bound(a)
  double beta = 0.0;
  double a = 1.0;
  double k_exp = 0.5;
  /// descending, positive
  std::vector<double> epsilon_list;
  /// cap on the eps^k check window, in units of a
  double horizon_cap = 4.0;

  void validate() const;
};

struct LayerEntry {
  double epsilon = 0.0;
  std::string status;  // "ok", "horizon_not_reached", "diverged", "error"
  std::string message;
  double t_eps = 0.0;
  double check_window = 0.0;
  std::vector<std::pair<double, double>> sup_history;
  double max_r = 0.0;
  double gronwall = 0.0;
  double envelope_exponential = 0.0;
  double eps_k = 0.0;
  bool gronwall_ok = false;
  bool exponential_ok = false;
  bool eps_k_ok = false;
  /// r(t) <= eps^k on the check window (true when the horizon is not reached)
  bool bound_satisfied = false;
  /// |beta e^{2 T_eps/a} eps - eps^k| / eps^k
  double identity_rel_error = 0.0;
  double apriori_max_violation = 0.0;
  SolveReport solve;
};

struct LayerReport {
  std::vector<LayerEntry> entries;
  /// least-squares slope of log max_t r against log eps
  double beta = 0.0;
  double slope = 0.0;
  bool slope_available = false;
  bool all_satisfied = false;
};

/// For each eps, solves the remainder problem on `grid` and checks the
/// Gronwall envelope on [0, t_max], beta e^{2T/a} eps and eps^k on
/// [0, min(T_eps, cap * a, t_max)], then fits the order in eps.
LayerReport verify_order(const MediumParams& params_base, const TravellingWave& wave, const SpaceTimeGrid& grid,
                         const LayerParams& layer, const PicardConfig& picard = {}, unsigned threads = 1);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace psg
