#include "psg/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psg/error.hpp"
#include "psg/parallel.hpp"
#include "psg/waves.hpp"

namespace psg {

namespace {

// out_i += scale * sum_j row[|i-j|] f_j
void accumulate(std::span<double> out, std::span<const double> f, std::span<const double> row, double scale) {
  const auto nx = static_cast<std::ptrdiff_t>(f.size());
  const auto width = static_cast<std::ptrdiff_t>(row.size());
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - width + 1);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(nx - 1, i + width - 1);
    double s = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) s += row[std::abs(i - j)] * f[j];
    out[i] += scale * s;
  }
}

double sup_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

void check_table(const KernelTable& table, const SpaceTimeGrid& grid) {
  if (!(table.grid() == grid)) throw std::invalid_argument("kernel table was built on a different grid");
}

}  // namespace

GridFunction convolve_kernel(const GridFunction& source, const KernelTable& table) {
  const SpaceTimeGrid& grid = source.grid();
  check_table(table, grid);
  const double dt = grid.dt();
  GridFunction out(grid);
  for (std::size_t n = 1; n < grid.nt(); ++n) {
    auto level = out.level(n);
    for (std::size_t m = 0; m < n; ++m) {
      const double w = m == 0 ? 0.5 * dt : dt;
      accumulate(level, source.level(m), table.row(n - m), w);
    }
  }
  return out;
}

SolveResult picard_solve(const Source& source, const MediumParams& params, const SpaceTimeGrid& grid,
                         const PicardConfig& config, const KernelTable* table) {
  if (!(config.fix_tol > 0.0)) throw std::invalid_argument("picard: fix_tol must be > 0");
  if (!(config.damping > 0.0 && config.damping <= 1.0)) throw std::invalid_argument("picard: damping must be in (0, 1]");
  if (config.window_len > grid.t_max()) throw std::invalid_argument("picard: window_len exceeds t_max");

  std::unique_ptr<KernelTable> own;
  if (!table) {
    own = std::make_unique<KernelTable>(params, grid, config.threads);
    table = own.get();
  }
  check_table(*table, grid);

  const std::size_t nx = grid.nx(), nt = grid.nt();
  const double dt = grid.dt();
  const double a = params.a();
  const double window_len = config.window_len > 0.0 ? config.window_len : std::min(0.5 * a, grid.t_max());
  const std::size_t levels_per_window =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window_len / dt)));

  SolveResult result{GridFunction(grid), {}};
  GridFunction& v = result.v;
  SolveReport& report = result.report;
  GridFunction F(grid);
  std::vector<double> running_sup_f(nt, 0.0);  // sup_{m <= n} |F(., m)|

  auto eval_source = [&](std::size_t m, std::span<const double> vm, std::span<double> fm) {
    const double t = grid.t(m);
    for (std::size_t i = 0; i < nx; ++i) fm[i] = source(grid.x(i), t, vm[i]);
  };
  auto edge_truncation = [&](std::span<const double> fm, double t) {
    return std::max(std::abs(fm.front()), std::abs(fm.back())) * t / a;
  };

  eval_source(0, v.level(0), F.level(0));
  running_sup_f[0] = sup_abs(F.level(0));
  report.converged = true;
  std::size_t settled = 1;

  for (std::size_t n0 = 0; n0 + 1 < nt;) {
    const std::size_t n1 = std::min(n0 + levels_per_window, nt - 1);
    const std::size_t len = n1 - n0;
    WindowReport wr;
    wr.t_start = grid.t(n0);
    wr.t_end = grid.t(n1);

    // contribution of the already settled levels m <= n0
    std::vector<std::vector<double>> history(len, std::vector<double>(nx, 0.0));
    parallel_for(len, config.threads, [&](std::size_t k) {
      const std::size_t n = n0 + 1 + k;
      for (std::size_t m = 0; m <= n0; ++m)
        accumulate(history[k], F.level(m), table->row(n - m), m == 0 ? 0.5 * dt : dt);
    });

    for (std::size_t n = n0 + 1; n <= n1; ++n)
      std::fill(v.level(n).begin(), v.level(n).end(), config.initial_value);

    std::vector<std::vector<double>> image(len, std::vector<double>(nx));
    double prev_update = 0.0;
    for (std::size_t it = 1; it <= config.max_iters; ++it) {
      for (std::size_t m = n0 + 1; m < n1; ++m) {
        eval_source(m, v.level(m), F.level(m));
        running_sup_f[m] = std::max(running_sup_f[m - 1], sup_abs(F.level(m)));
      }
      parallel_for(len, config.threads, [&](std::size_t k) {
        const std::size_t n = n0 + 1 + k;
        auto& out = image[k];
        out = history[k];
        for (std::size_t m = n0 + 1; m < n; ++m) accumulate(out, F.level(m), table->row(n - m), dt);
        for (double& x : out) x = -x;
      });

      double update = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const std::size_t n = n0 + 1 + k;
        const double bound = grid.t(n) / a * running_sup_f[n - 1];
        report.apriori_max_violation = std::max(report.apriori_max_violation, sup_abs(image[k]) - bound);
        auto vn = v.level(n);
        for (std::size_t i = 0; i < nx; ++i) {
          const double next = vn[i] + config.damping * (image[k][i] - vn[i]);
          if (!std::isfinite(next)) throw NumericError("picard iterate is not finite");
          update = std::max(update, std::abs(next - vn[i]));
          vn[i] = next;
        }
      }
      if (it > 1) {
        const double ratio = prev_update > 0.0 ? update / prev_update : 0.0;
        wr.contraction_ratios.push_back(ratio);
        report.contraction_ratios.push_back(ratio);
      }
      prev_update = update;
      wr.iterations = it;
      wr.final_update = update;
      if (update < config.fix_tol) {
        wr.converged = true;
        break;
      }
    }

    for (std::size_t m = n0 + 1; m <= n1; ++m) {
      eval_source(m, v.level(m), F.level(m));
      running_sup_f[m] = std::max(running_sup_f[m - 1], sup_abs(F.level(m)));
      report.boundary_truncation = std::max(report.boundary_truncation, edge_truncation(F.level(m), grid.t(m)));
    }
    report.iterations_used.push_back(wr.iterations);
    const bool ok = wr.converged;
    report.windows.push_back(std::move(wr));
    if (!ok) {
      report.converged = false;
      break;
    }
    settled = n1 + 1;
    n0 = n1;
  }
  report.apriori_max_violation = std::max(0.0, report.apriori_max_violation);

  for (std::size_t n = 0; n < settled; ++n) report.sup_history.emplace_back(grid.t(n), sup_abs(v.level(n)));
  return result;
}

SolveResult picard_solve(const TravellingWave& wave, const MediumParams& params, const SpaceTimeGrid& grid,
                         const PicardConfig& config, const KernelTable* table) {
  auto shared = std::make_shared<const TravellingWave>(wave);
  const SuperconductiveSource source(shared, params.epsilon());
  return picard_solve(source, params, grid, config, table);
}

double sup_norm(const GridFunction& v, double up_to_t) {
  const SpaceTimeGrid& g = v.grid();
  if (up_to_t > g.t_max() * (1.0 + 1e-12)) throw std::invalid_argument("sup_norm: up_to_t beyond the grid");
  double m = 0.0;
  for (std::size_t n = 0; n < g.nt() && g.t(n) <= up_to_t * (1.0 + 1e-12); ++n) m = std::max(m, sup_abs(v.level(n)));
  return m;
}

}  // namespace psg
