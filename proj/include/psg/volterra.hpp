#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "psg/kernel_table.hpp"
#include "psg/model.hpp"

namespace psg {

class TravellingWave;

struct PicardConfig {
  std::size_t max_iters = 200;
  double fix_tol = 1e-10;
  /// time-window length; <= 0 selects min(a/2, t_max)
  double window_len = 0.0;
  double damping = 1.0;
  /// constant first iterate on every window
  double initial_value = 0.0;
  unsigned threads = 1;
};

struct WindowReport {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> contraction_ratios;
  double final_update = 0.0;
};

struct SolveReport {
  std::vector<WindowReport> windows;
  std::vector<std::size_t> iterations_used;
  /// ||v^{n+1} - v^n|| / ||v^n - v^{n-1}|| over all windows in order
  std::vector<double> contraction_ratios;
  /// (t, sup_x |v(x, t)|) per time level
  std::vector<std::pair<double, double>> sup_history;
  bool converged = false;
  /// max over iterates and levels of |v^{n+1}(., t)| - (t/a) sup_{tau <= t} |F(v^n)|, clipped at 0
  double apriori_max_violation = 0.0;
  /// max over windows of |F| at the spatial edges times the kernel mass bound t/a
  double boundary_truncation = 0.0;
};

struct SolveResult {
  GridFunction v;
  SolveReport report;
};

/// out(x_i, t_n) = sum_{m<n} w_m sum_j weight(n-m, |i-j|) F(x_j, t_m), the
/// product-trapezoid discretization of int_0^t int K(x-xi, t-tau) F dxi dtau.
/// The tau = t end point drops out because K(., 0) = 0.
GridFunction convolve_kernel(const GridFunction& source, const KernelTable& table);

/// Picard iteration for v = -K * F(v), the zero-data solution of
/// eps v_xxt + c^2 v_xx - v_tt - a v_t = F(x, t, v), marched over time windows.
SolveResult picard_solve(const Source& source, const MediumParams& params, const SpaceTimeGrid& grid,
                         const PicardConfig& config = {}, const KernelTable* table = nullptr);

/// Same with the superconductive source F_w of the given wave.
SolveResult picard_solve(const TravellingWave& wave, const MediumParams& params, const SpaceTimeGrid& grid,
                         const PicardConfig& config = {}, const KernelTable* table = nullptr);

/// max |v(x, t)| over all x and t <= up_to_t.
double sup_norm(const GridFunction& v, double up_to_t);

}  // namespace psg
