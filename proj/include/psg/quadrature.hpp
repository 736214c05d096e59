#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace psg {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 2000;
  /// integrand-tail cutoff used by callers that truncate infinite ranges
  double truncation_threshold = 1e-300;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 10/21-point Gauss-Kronrod integration of f over
/// the intervals delimited by `points` (sorted, at least two). The panel with
/// the largest error estimate is bisected until the total estimate drops below
/// max(abs_tol, rel_tol |I|) or the subdivision budget is spent.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::vector<double> points, const QuadratureSpec& spec) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  struct Panel {
    double a, b, value, err;
    bool refinable;
    bool operator<(const Panel& o) const { return err < o.err; }
  };

  QuadratureResult res;
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 2) {
    res.converged = true;
    return res;
  }

  // 21-point Kronrod panel with the QUADPACK error scaling; the 10-point
  // Gauss nodes sit at the odd Kronrod indices.
  auto eval = [&](double a, double b) {
    using G10 = boost::math::quadrature::gauss<double, 10>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G10::weights();
    const double center = 0.5 * (a + b), half = 0.5 * (b - a);
    double fv[2 * 11];
    const double f0 = f(center);
    double kron = f0 * wk[0], gauss = 0.0, resabs = std::abs(f0) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double fp = f(center + half * x[i]), fm = f(center - half * x[i]);
      fv[2 * i] = fp;
      fv[2 * i + 1] = fm;
      kron += (fp + fm) * wk[i];
      resabs += (std::abs(fp) + std::abs(fm)) * wk[i];
      if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
    }
    const double mean = 0.5 * kron;
    double resasc = wk[0] * std::abs(f0 - mean);
    for (std::size_t i = 1; i < x.size(); ++i)
      resasc += wk[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));
    const double v = kron * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((kron - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    res.evaluations += 21;
    // nothing below the roundoff floor is attainable by further bisection
    const double mid = 0.5 * (a + b);
    const bool refinable = mid > a && mid < b && err > 50.0 * eps * resabs * 1.0000001;
    return Panel{a, b, v, err, refinable};
  };

  std::priority_queue<Panel> heap;
  std::vector<Panel> frozen;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Panel p = eval(points[i], points[i + 1]);
    total += p.value;
    total_err += p.err;
    if (p.refinable) {
      heap.push(p);
    } else {
      frozen.push_back(p);
    }
  }

  std::size_t subdivisions = 0;
  auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  while (total_err > target() && !heap.empty() && subdivisions < spec.max_subdivisions) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = eval(worst.a, mid);
    Panel right = eval(mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    for (const Panel& p : {left, right}) {
      if (p.refinable) {
        heap.push(p);
      } else {
        frozen.push_back(p);
      }
    }
    ++subdivisions;
  }

  const bool heap_empty_at_exit = heap.empty();
  // resum to shed accumulated cancellation in the running totals
  double sum = 0.0, err = 0.0;
  for (const Panel& p : frozen) {
    sum += p.value;
    err += p.err;
  }
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().err;
    heap.pop();
  }
  res.value = sum;
  res.abs_error = err;
  // a total made only of roundoff-limited panels is as good as it gets
  res.converged = err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(sum)) || (heap_empty_at_exit && err <= 1e-8 * std::abs(sum));
  return res;
}

}  // namespace psg
