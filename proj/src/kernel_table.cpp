#include "psg/kernel_table.hpp"

#include <algorithm>
#include <cmath>

#include "psg/kernel.hpp"
#include "psg/parallel.hpp"

namespace psg {

KernelTable::KernelTable(const MediumParams& params, const SpaceTimeGrid& grid, unsigned threads)
    : params_(params), grid_(grid) {
  const double dx = grid.dx();
  const double t_max = grid.t_max();
  const double support = params.c() * t_max + 24.0 * std::sqrt(params.epsilon() * t_max) + 2.0 * dx;
  const std::size_t D = std::min<std::size_t>(grid.nx() - 1, static_cast<std::size_t>(std::ceil(support / dx)));
  const std::size_t nt = grid.nt();

  std::vector<std::vector<double>> rows(nt);
  rows[0].assign(D + 1, 0.0);
  parallel_for(nt - 1, threads, [&](std::size_t i) {
    const std::size_t p = i + 1;
    rows[p] = hat_weights_spectral(params, grid.t(p), dx, D);
  });

  double peak = 0.0;
  for (const auto& r : rows)
    for (double w : r) peak = std::max(peak, std::abs(w));
  std::size_t width = D + 1;
  while (width > 1) {
    bool negligible = true;
    for (const auto& r : rows) negligible = negligible && std::abs(r[width - 1]) <= 1e-17 * peak;
    if (!negligible) break;
    --width;
  }
  width_ = width;
  weights_.resize(nt * width_);
  for (std::size_t p = 0; p < nt; ++p) std::copy_n(rows[p].begin(), width_, weights_.begin() + p * width_);
}

double KernelTable::row_mass(std::size_t lag) const {
  const auto r = row(lag);
  double sum = r[0];
  for (std::size_t d = 1; d < r.size(); ++d) sum += 2.0 * r[d];
  return sum;
}

}  // namespace psg
