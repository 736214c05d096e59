// psg: command-line front end for the kernel, wave, solve, sweep and oracle pipelines.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "psg/error.hpp"
#include "psg/estimates.hpp"
#include "psg/fd_oracle.hpp"
#include "psg/io.hpp"
#include "psg/kernel.hpp"
#include "psg/model.hpp"
#include "psg/parallel.hpp"
#include "psg/volterra.hpp"
#include "psg/waves.hpp"

namespace {

using namespace psg;

constexpr int kPass = 0;
constexpr int kCheckFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// flag name -> config key
const std::vector<std::pair<std::string, std::string>> kFlags = {
    {"--eps", "epsilon"},       {"--a", "a"},               {"--c", "c"},
    {"--gamma", "gamma"},       {"--k", "k"},               {"--x-min", "x_min"},
    {"--x-max", "x_max"},       {"--nx", "nx"},             {"--t-max", "t_max"},
    {"--nt", "nt"},             {"--k-exp", "k_exp"},       {"--epsilons", "epsilons"},
    {"--seed", "seed"},         {"--samples", "samples"},   {"--max-iters", "max_iters"},
    {"--fix-tol", "fix_tol"},   {"--window-len", "window_len"}, {"--damping", "damping"},
    {"--theta", "theta"},       {"--refine-x", "refine_x"},
};

struct Common {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  bool verify = false;
  bool strict = false;
  unsigned threads = 1;
  std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config_path, "key = value config file");
  sub->add_option("--out", common.out_path, "output file (default stdout)");
  sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--verify", common.verify, "run the module's checks");
  sub->add_flag("--strict", common.strict, "treat flagged rows as failures");
  sub->add_option("--threads", common.threads, "worker threads (0 = all cores)");
  for (const auto& [flag, key] : kFlags) sub->add_option(flag, common.overrides[key]);
}

ConfigMap resolve(const Common& common, CLI::App* sub) {
  ConfigMap config;
  if (!common.config_path.empty()) {
    try {
      config = load_config(common.config_path);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& [flag, key] : kFlags)
    if (sub->count(flag) > 0) config[key] = common.overrides.at(key);

  std::set<std::string> known;
  for (const auto& [flag, key] : kFlags) known.insert(key);
  for (const auto& [key, value] : config)
    if (!known.count(key)) throw UsageError("unknown config key: " + key);
  return config;
}

void require(const ConfigMap& config, const std::string& key) {
  if (!config.count(key)) throw UsageError("missing required key: " + key);
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("not a number in list: " + item);
    }
    if (pos != item.size()) throw UsageError("not a number in list: " + item);
    out.push_back(v);
  }
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double v) { return format_g17(v); }

PicardConfig picard_from(const ConfigMap& config, unsigned threads) {
  PicardConfig pc;
  pc.max_iters = config_size(config, "max_iters", pc.max_iters);
  pc.fix_tol = config_double(config, "fix_tol", pc.fix_tol);
  pc.window_len = config_double(config, "window_len", pc.window_len);
  pc.damping = config_double(config, "damping", pc.damping);
  pc.threads = threads;
  return pc;
}

// ---------------------------------------------------------------- kernel

int cmd_kernel(const Common& common, CLI::App* sub) {
  ConfigMap config = resolve(common, sub);
  require(config, "epsilon");
  const MediumParams params = guarded([&] { return medium_from_config(config); });
  if (!config.count("x_min") && config.count("x_max"))
    config["x_min"] = fmt(-guarded([&] { return config_double(config, "x_max"); }));
  config.try_emplace("nx", "101");
  config.try_emplace("nt", "11");
  const SpaceTimeGrid grid = guarded([&] { return grid_from_config(config); });
  for (const char* k : {"epsilon", "a", "c", "x_min", "x_max", "t_max"})
    config.try_emplace(k, fmt(config_double(config, k, k == std::string("x_min") ? grid.x_min()
                                                               : k == std::string("x_max") ? grid.x_max()
                                                               : k == std::string("t_max") ? grid.t_max()
                                                               : k == std::string("a") ? params.a()
                                                                                        : params.c())));

  // K at every grid node; the t = 0 row is identically zero
  std::vector<double> K(grid.nx() * grid.nt(), 0.0);
  parallel_for(grid.nx() * (grid.nt() - 1), common.threads, [&](std::size_t idx) {
    const std::size_t n = idx / grid.nx() + 1, i = idx % grid.nx();
    K[n * grid.nx() + i] = k_time(grid.x(i), grid.t(n), params);
  });

  Output out(common.out_path);
  if (common.format == "json") {
    Json rows = Json::array();
    for (std::size_t n = 0; n < grid.nt(); ++n)
      for (std::size_t i = 0; i < grid.nx(); ++i)
        rows.push_back(Json::array({grid.x(i), grid.t(n), K[n * grid.nx() + i]}));
    Json doc{{"meta", meta_json("kernel", config)}, {"columns", {"x", "t", "K"}}, {"rows", rows}};
    out.stream() << doc.dump() << "\n";
  } else {
    write_comment_block(out.stream(), "kernel", config);
    out.stream() << "x,t,K\n";
    for (std::size_t n = 0; n < grid.nt(); ++n)
      for (std::size_t i = 0; i < grid.nx(); ++i)
        out.stream() << fmt(grid.x(i)) << "," << fmt(grid.t(n)) << "," << fmt(K[n * grid.nx() + i]) << "\n";
  }
  if (!common.verify) return kPass;

  int failed = 0, run = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cerr << "check " << name << ": " << (ok ? "pass" : "FAIL") << " (" << detail << ")\n";
    failed += ok ? 0 : 1;
    ++run;
  };
  {
    double worst = 0.0;
    for (double r : {0.0, 0.5, 2.0}) worst = std::max(worst, verify_laplace_pair(r, {0.5, 1.0, 5.0}, params));
    report("laplace_pair", worst < 1e-6, "worst relative error " + fmt(worst));
  }
  {
    const double t = grid.t_max();
    const double mass = kernel_mass(t, params);
    const double exact = -std::expm1(-params.a() * t) / params.a();
    const double rel = std::abs(mass - exact) / exact;
    report("kernel_mass", rel < 1e-5 && mass <= 1.0 / params.a() + 1e-10, "t=" + fmt(t) + " relative error " + fmt(rel));
  }
  {
    QuadratureSpec tight;
    tight.abs_tol = 1e-15;
    tight.rel_tol = 1e-14;
    const double t = 0.5 * grid.t_max();
    const double x = std::max(0.5 * params.c() * t, 0.05);
    const double r1 = pde_residual(x, t, params, 1e-2, tight);
    const double r2 = pde_residual(x, t, params, 5e-3, tight);
    const double ratio = r1 / r2;
    report("pde_residual", ratio >= 3.5 && ratio <= 4.5, "Richardson ratio " + fmt(ratio));
  }
  if (params.dissipative_regime()) {
    const double mn = *std::min_element(K.begin(), K.end());
    report("nonnegativity", mn >= -1e-10, "min K " + fmt(mn));
  } else {
    std::cerr << "check nonnegativity: skipped (a >= b)\n";
  }
  std::cerr << run - failed << " of " << run << " checks passed\n";
  return failed == 0 ? kPass : kCheckFail;
}

// ---------------------------------------------------------------- wave

int cmd_wave(const Common& common, CLI::App* sub) {
  ConfigMap config = resolve(common, sub);
  require(config, "gamma");
  const double gamma = guarded([&] { return config_double(config, "gamma"); });
  const double a = guarded([&] { return config_double(config, "a", 1.0); });
  const double k = guarded([&] { return config_double(config, "k", 0.0); });
  config.try_emplace("nx", "401");
  config.try_emplace("nt", "201");
  const SpaceTimeGrid grid = guarded([&] { return grid_from_config(config); });
  const TravellingWave wave = guarded([&] { return TravellingWave(gamma, a, k); });
  config.try_emplace("a", fmt(a));
  config.try_emplace("k", fmt(k));
  const unsigned long long seed = guarded([&] { return config_size(config, "seed", 12345); });
  config.try_emplace("seed", std::to_string(seed));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t flagged = 0;
  Output out(common.out_path);
  Json rows = Json::array();
  if (common.format == "csv") {
    write_comment_block(out.stream(), "wave regime " + to_string(wave.regime()), config);
    out.stream() << "x,t,w,w_t,w_xxt\n";
  }
  for (std::size_t n = 0; n < grid.nt(); ++n)
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double x = grid.x(i), t = grid.t(n);
      double w = nan, wt = nan, wxxt = nan;
      try {
        w = wave.value(x, t);
        const WaveDerivatives d = wave.derivatives(x, t);
        wt = d.w_t;
        wxxt = d.w_xxt;
      } catch (const DomainError&) {
        ++flagged;
      }
      if (common.format == "csv") {
        out.stream() << fmt(x) << "," << fmt(t) << "," << fmt(w) << "," << fmt(wt) << "," << fmt(wxxt) << "\n";
      } else {
        Json row = Json::array();
        for (double v : {x, t, w, wt, wxxt}) row.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
        rows.push_back(row);
      }
    }
  if (common.format == "json") {
    Json doc{{"meta", meta_json("wave", config)},
             {"regime", to_string(wave.regime())},
             {"columns", {"x", "t", "w", "w_t", "w_xxt"}},
             {"singular_rows", flagged},
             {"rows", rows}};
    out.stream() << doc.dump() << "\n";
  }
  if (flagged > 0) std::cerr << "flagged " << flagged << " singular row(s) written as nan\n";

  int status = (common.strict && flagged > 0) ? kCheckFail : kPass;
  if (common.verify) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(grid.x_min(), grid.x_max()), ut(0.0, grid.t_max());
    const std::size_t samples = guarded([&] { return config_size(config, "samples", 1000); });
    double worst = 0.0;
    std::size_t used = 0;
    while (used < samples) {
      const double x = ux(rng), t = ut(rng);
      if (std::abs(wave.singular_distance(wave.xi_of(x, t))) < 1e-6) continue;
      worst = std::max(worst, std::abs(reduced_residual(wave, x, t, ResidualMode::analytic)));
      ++used;
    }
    const bool ok = worst < 1e-8;
    std::cerr << "check reduced_residual: " << (ok ? "pass" : "FAIL") << " (max |residual| " << fmt(worst) << " over "
              << used << " points, seed " << seed << ")\n";
    if (!ok) status = kCheckFail;
  }
  return status;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const Common& common, CLI::App* sub) {
  ConfigMap config = resolve(common, sub);
  require(config, "epsilon");
  const MediumParams params = guarded([&] { return medium_from_config(config); });
  config.try_emplace("nx", "401");
  config.try_emplace("nt", "201");
  const SpaceTimeGrid grid = guarded([&] { return grid_from_config(config); });
  const double k = guarded([&] { return config_double(config, "k", 0.0); });
  const TravellingWave wave = guarded([&] { return TravellingWave(params.gamma(), params.a(), k); });
  const PicardConfig pc = guarded([&] { return picard_from(config, common.threads); });

  const SolveResult res = guarded([&] { return picard_solve(wave, params, grid, pc); });
  const Json report = solve_report_json(res.report, params, grid);

  Output out(common.out_path);
  if (common.format == "json") {
    Json doc{{"meta", meta_json("solve", config)}, {"report", report}};
    out.stream() << doc.dump(1) << "\n";
  } else {
    write_comment_block(out.stream(), "solve", config);
    out.stream() << "x,t,v\n";
    for (std::size_t n = 0; n < grid.nt(); ++n)
      for (std::size_t i = 0; i < grid.nx(); ++i)
        out.stream() << fmt(grid.x(i)) << "," << fmt(grid.t(n)) << "," << fmt(res.v(i, n)) << "\n";
    if (!common.out_path.empty()) {
      std::ofstream rep(common.out_path + ".report.json");
      rep << Json{{"meta", meta_json("solve", config)}, {"report", report}}.dump(1) << "\n";
    }
  }

  if (!res.report.converged) {
    std::cerr << "picard iteration diverged; contraction ratios:";
    for (double r : res.report.contraction_ratios) std::cerr << " " << fmt(r);
    std::cerr << "\n";
    return kCheckFail;
  }
  int status = kPass;
  if (common.verify) {
    const bool apriori = res.report.apriori_max_violation <= 1e-8;
    std::cerr << "check apriori_bound: " << (apriori ? "pass" : "FAIL") << " (max violation "
              << fmt(res.report.apriori_max_violation) << ")\n";
    const double beta = w_xxt_bound(params.a());
    const double env = gronwall_envelope(grid.t_max(), grid.t_max(), beta, params.a(), params.epsilon()).uniform;
    double mx = 0.0;
    for (const auto& [t, r] : res.report.sup_history) mx = std::max(mx, r);
    const bool gron = mx <= env;
    std::cerr << "check gronwall_envelope: " << (gron ? "pass" : "FAIL") << " (max r " << fmt(mx) << " <= " << fmt(env)
              << ")\n";
    if (!apriori || !gron) status = kCheckFail;
  }
  return status;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Common& common, CLI::App* sub) {
  ConfigMap config = resolve(common, sub);
  config.try_emplace("epsilons", "0.01,0.001,0.0001");
  config.try_emplace("k_exp", "0.5");
  config.try_emplace("nx", "401");
  config.try_emplace("nt", "201");
  const std::vector<double> eps_list = parse_list(config.at("epsilons"));
  if (eps_list.empty()) throw UsageError("epsilon list is empty");
  // the base epsilon is replaced per entry
  const MediumParams base = guarded([&] {
    return MediumParams(eps_list.front(), config_double(config, "a", 1.0), config_double(config, "c", 1.0),
                        config_double(config, "gamma", 0.0));
  });
  if (base.gamma() != 0.0) throw UsageError("sweep runs the kink (gamma = 0) only");
  const SpaceTimeGrid grid = guarded([&] { return grid_from_config(config); });
  const PicardConfig pc = guarded([&] { return picard_from(config, 1); });

  LayerParams layer;
  layer.a = base.a();
  layer.k_exp = guarded([&] { return config_double(config, "k_exp"); });
  layer.epsilon_list = eps_list;
  std::sort(layer.epsilon_list.begin(), layer.epsilon_list.end(), std::greater<>());
  guarded([&] {
    layer.validate();
    return 0;
  });
  const TravellingWave wave = TravellingWave::kink(base.a());
  const LayerReport report = verify_order(base, wave, grid, layer, pc, common.threads);

  Output out(common.out_path);
  if (common.format == "json") {
    Json doc{{"meta", meta_json("sweep", config)}, {"layer_report", layer_report_json(report)}};
    out.stream() << doc.dump(1) << "\n";
  } else {
    write_comment_block(out.stream(), "sweep", config);
    out.stream() << "# beta = " << fmt(report.beta) << "\n";
    if (report.slope_available) out.stream() << "# slope = " << fmt(report.slope) << "\n";
    out.stream() << "epsilon,T_eps,max_r,gronwall,eps_k,pass\n";
    for (const auto& e : report.entries)
      out.stream() << fmt(e.epsilon) << "," << fmt(e.t_eps) << "," << fmt(e.max_r) << "," << fmt(e.gronwall) << ","
                   << fmt(e.eps_k) << "," << (e.bound_satisfied ? 1 : 0) << "\n";
  }
  for (const auto& e : report.entries) {
    std::cerr << "epsilon " << fmt(e.epsilon) << ": " << e.status;
    if (!e.message.empty()) std::cerr << " (" << e.message << ")";
    std::cerr << (e.bound_satisfied ? "" : " BOUND VIOLATED") << "\n";
  }
  return report.all_satisfied ? kPass : kCheckFail;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const Common& common, CLI::App* sub) {
  ConfigMap config = resolve(common, sub);
  require(config, "epsilon");
  const MediumParams params = guarded([&] { return medium_from_config(config); });
  config.try_emplace("t_max", "1");
  config.try_emplace("nx", "401");
  config.try_emplace("nt", "101");
  const SpaceTimeGrid grid = guarded([&] { return grid_from_config(config); });
  const double k = guarded([&] { return config_double(config, "k", 0.0); });
  const TravellingWave wave = guarded([&] { return TravellingWave(params.gamma(), params.a(), k); });
  CrossValidationOptions opts;
  opts.picard = guarded([&] { return picard_from(config, common.threads); });
  opts.theta = guarded([&] { return config_double(config, "theta", 0.0); });
  opts.refine_x = guarded([&] { return config_size(config, "refine_x", 5); });

  const CrossValidation cv = cross_validate(params, wave, grid, opts);
  Output out(common.out_path);
  if (common.format == "json") {
    Json doc{{"meta", meta_json("oracle", config)}, {"cross_validation", cross_validation_json(cv)}};
    out.stream() << doc.dump(1) << "\n";
  } else {
    write_comment_block(out.stream(), "oracle", config);
    out.stream() << "metric,value\n";
    out.stream() << "sup_discrepancy," << fmt(cv.sup_discrepancy) << "\n";
    out.stream() << "fd_error_estimate," << fmt(cv.fd_error_estimate) << "\n";
    out.stream() << "picard_error_estimate," << fmt(cv.picard_error_estimate) << "\n";
    out.stream() << "tolerance," << fmt(cv.tolerance) << "\n";
    out.stream() << "pass," << (cv.pass ? 1 : 0) << "\n";
  }
  std::cerr << "oracle: sup |u_fd - (w + v)| = " << fmt(cv.sup_discrepancy) << ", tolerance " << fmt(cv.tolerance)
            << (cv.pass ? " pass" : " FAIL") << "\n";
  return cv.pass ? kPass : kCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for eps u_xxt + c^2 u_xx - u_tt - a u_t = f"};
  app.set_version_flag("--version", psg::artifact_version());
  app.require_subcommand(1);

  struct Entry {
    CLI::App* sub;
    Common common;
    int (*run)(const Common&, CLI::App*);
  };
  std::vector<std::unique_ptr<Entry>> entries;
  auto add = [&](const char* name, const char* help, int (*run)(const Common&, CLI::App*)) {
    auto e = std::make_unique<Entry>();
    e->sub = app.add_subcommand(name, help);
    e->run = run;
    add_common(e->sub, e->common);
    entries.push_back(std::move(e));
  };
  add("kernel", "tabulate the fundamental solution K(x, t)", cmd_kernel);
  add("wave", "tabulate a travelling wave of the reduced equation", cmd_wave);
  add("solve", "solve the remainder integral equation by Picard iteration", cmd_solve);
  add("sweep", "check the boundary-layer estimates over an epsilon sweep", cmd_sweep);
  add("oracle", "cross-validate against the finite-difference solver", cmd_oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  for (auto& e : entries) {
    if (!e->sub->parsed()) continue;
    try {
      return e->run(e->common, e->sub);
    } catch (const UsageError& err) {
      std::cerr << "usage error: " << err.what() << "\n";
      return kUsage;
    } catch (const std::exception& err) {
      std::cerr << "error: " << err.what() << "\n";
      return kCheckFail;
    }
  }
  return kUsage;
}
