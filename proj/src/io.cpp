#include "psg/io.hpp"

#include <cmath>
#include <cstdio>

namespace psg {

namespace {

// JSON has no nan; non-finite numbers become null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string artifact_version() { return PSG_VERSION; }

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_comment_block(std::ostream& out, const std::string& command, const ConfigMap& resolved) {
  out << "# psg " << artifact_version() << " " << command << "\n";
  for (const auto& [k, v] : resolved) out << "# " << k << " = " << v << "\n";
}

Json meta_json(const std::string& command, const ConfigMap& resolved) {
  Json config = Json::object();
  for (const auto& [k, v] : resolved) config[k] = v;
  return Json{{"version", artifact_version()}, {"command", command}, {"config", config}};
}

Json params_json(const MediumParams& p) {
  return Json{{"epsilon", p.epsilon()}, {"a", p.a()}, {"c", p.c()}, {"gamma", p.gamma()}, {"b", p.b()}};
}

Json grid_json(const SpaceTimeGrid& g) {
  return Json{{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"nx", g.nx()}, {"t_max", g.t_max()}, {"nt", g.nt()}};
}

Json solve_report_json(const SolveReport& r, const MediumParams& params, const SpaceTimeGrid& grid) {
  Json ratios = Json::array();
  for (double x : r.contraction_ratios) ratios.push_back(num(x));
  Json history = Json::array();
  for (const auto& [t, s] : r.sup_history) history.push_back(Json::array({num(t), num(s)}));
  Json windows = Json::array();
  for (const auto& w : r.windows)
    windows.push_back(Json{{"t_start", w.t_start},
                           {"t_end", w.t_end},
                           {"iterations", w.iterations},
                           {"converged", w.converged},
                           {"final_update", num(w.final_update)}});
  return Json{{"params", params_json(params)},
              {"grid", grid_json(grid)},
              {"iterations", r.iterations_used},
              {"contraction_ratios", ratios},
              {"sup_history", history},
              {"converged", r.converged},
              {"windows", windows},
              {"apriori_max_violation", num(r.apriori_max_violation)},
              {"boundary_truncation", num(r.boundary_truncation)}};
}

Json layer_report_json(const LayerReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    Json history = Json::array();
    for (const auto& [t, s] : e.sup_history) history.push_back(Json::array({num(t), num(s)}));
    entries.push_back(Json{{"epsilon", e.epsilon},
                           {"status", e.status},
                           {"message", e.message},
                           {"T_eps", num(e.t_eps)},
                           {"check_window", num(e.check_window)},
                           {"max_r", num(e.max_r)},
                           {"gronwall", num(e.gronwall)},
                           {"envelope_exponential", num(e.envelope_exponential)},
                           {"eps_k", num(e.eps_k)},
                           {"gronwall_ok", e.gronwall_ok},
                           {"exponential_ok", e.exponential_ok},
                           {"eps_k_ok", e.eps_k_ok},
                           {"bound_satisfied", e.bound_satisfied},
                           {"identity_rel_error", num(e.identity_rel_error)},
                           {"apriori_max_violation", num(e.apriori_max_violation)},
                           {"sup_history", history}});
  }
  Json out{{"beta", report.beta}, {"entries", entries}, {"all_satisfied", report.all_satisfied}};
  out["slope"] = report.slope_available ? num(report.slope) : Json(nullptr);
  return out;
}

Json cross_validation_json(const CrossValidation& cv) {
  return Json{{"sup_discrepancy", num(cv.sup_discrepancy)},
              {"fd_error_estimate", num(cv.fd_error_estimate)},
              {"picard_error_estimate", num(cv.picard_error_estimate)},
              {"tolerance", num(cv.tolerance)},
              {"pass", cv.pass},
              {"fd_dx", cv.fd_dx},
              {"fd_dt", cv.fd_dt},
              {"picard_converged", cv.picard.converged}};
}

}  // namespace psg
