#include "psg/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psg/error.hpp"
#include "psg/parallel.hpp"
#include "psg/waves.hpp"

namespace psg {

GronwallBound gronwall_envelope(double t, double T, double beta, double a, double epsilon) {
  if (!(t >= 0.0 && t <= T)) throw std::invalid_argument("gronwall_envelope needs 0 <= t <= T");
  return {beta * (T / a) * std::exp(T / a) * epsilon, beta * epsilon * std::expm1(t / a)};
}

double exponential_envelope(double T, double beta, double a, double epsilon) {
  return beta * std::exp(2.0 * T / a) * epsilon;
}

double t_epsilon(double a, double beta, double epsilon, double k_exp) {
  if (!(a > 0.0 && beta > 0.0 && epsilon > 0.0)) throw std::invalid_argument("t_epsilon needs a, beta, eps > 0");
  const double arg = beta * std::pow(epsilon, 1.0 - k_exp);
  if (arg == 1.0) return 0.0;
  const double T = -0.5 * a * std::log(arg);
  if (T < 0.0) throw DomainError("diffusion horizon is negative: beta eps^(1-k) > 1");
  return T;
}

void LayerParams::validate() const {
  if (!(k_exp > 0.0 && k_exp < 1.0)) throw std::invalid_argument("k_exp must lie in (0, 1)");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(a > 0.0)) throw std::invalid_argument("a must be > 0");
  if (epsilon_list.empty()) throw std::invalid_argument("epsilon_list is empty");
  for (std::size_t i = 0; i < epsilon_list.size(); ++i) {
    if (!(epsilon_list[i] > 0.0)) throw std::invalid_argument("epsilon_list entries must be > 0");
    if (i > 0 && !(epsilon_list[i] < epsilon_list[i - 1]))
      throw std::invalid_argument("epsilon_list must be strictly descending");
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

LayerReport verify_order(const MediumParams& params_base, const TravellingWave& wave, const SpaceTimeGrid& grid,
                         const LayerParams& layer, const PicardConfig& picard, unsigned threads) {
  layer.validate();
  const double a = layer.a;
  const double beta = layer.beta > 0.0 ? layer.beta : w_xxt_bound(a);
  const double T = grid.t_max();
  // relative slack for quadrature and discretization noise in the envelope checks
  const double slack = 1e-8;

  LayerReport report;
  report.beta = beta;
  report.entries.resize(layer.epsilon_list.size());
  parallel_for(layer.epsilon_list.size(), threads, [&](std::size_t idx) {
    LayerEntry& e = report.entries[idx];
    const double eps = layer.epsilon_list[idx];
    e.epsilon = eps;
    e.eps_k = std::pow(eps, layer.k_exp);
    e.gronwall = gronwall_envelope(T, T, beta, a, eps).uniform;
    try {
      e.t_eps = t_epsilon(a, beta, eps, layer.k_exp);
    } catch (const DomainError& err) {
      e.t_eps = 0.0;
      e.message = err.what();
    }
    e.envelope_exponential = exponential_envelope(e.t_eps, beta, a, eps);
    e.identity_rel_error = std::abs(e.envelope_exponential - e.eps_k) / e.eps_k;

    const MediumParams params = params_base.with_epsilon(eps);
    SolveResult solved{GridFunction(grid), {}};
    try {
      solved = picard_solve(wave, params, grid, picard);
    } catch (const std::exception& err) {
      e.status = "error";
      e.message = err.what();
      return;
    }
    e.solve = solved.report;
    e.sup_history = solved.report.sup_history;
    e.apriori_max_violation = solved.report.apriori_max_violation;
    if (!solved.report.converged) {
      e.status = "diverged";
      e.message = "picard iteration did not converge";
      return;
    }
    for (const auto& [t, r] : e.sup_history) e.max_r = std::max(e.max_r, r);

    e.gronwall_ok = true;
    for (const auto& [t, r] : e.sup_history) e.gronwall_ok = e.gronwall_ok && r <= e.gronwall * (1.0 + slack);

    e.check_window = std::min({e.t_eps, layer.horizon_cap * a, T});
    if (!(e.t_eps >= grid.dt())) {
      e.status = "horizon_not_reached";
      e.exponential_ok = e.eps_k_ok = e.bound_satisfied = true;
      return;
    }
    e.exponential_ok = e.eps_k_ok = true;
    for (const auto& [t, r] : e.sup_history) {
      if (t > e.check_window * (1.0 + 1e-12)) break;
      e.exponential_ok = e.exponential_ok && r <= e.envelope_exponential * (1.0 + slack);
      e.eps_k_ok = e.eps_k_ok && r <= e.eps_k * (1.0 + slack);
    }
    e.bound_satisfied = e.eps_k_ok;
    e.status = "ok";
  });

  std::vector<double> xs, ys;
  report.all_satisfied = true;
  for (const auto& e : report.entries) {
    const bool entry_ok = (e.status == "ok" || e.status == "horizon_not_reached") && e.bound_satisfied;
    report.all_satisfied = report.all_satisfied && entry_ok;
    if ((e.status == "ok" || e.status == "horizon_not_reached") && e.max_r > 0.0) {
      xs.push_back(e.epsilon);
      ys.push_back(e.max_r);
    }
  }
  if (xs.size() >= 2) {
    report.slope = loglog_slope(xs, ys);
    report.slope_available = true;
  }
  return report;
}

}  // namespace psg
