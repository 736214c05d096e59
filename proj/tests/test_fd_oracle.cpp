#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psg/error.hpp"
#include "psg/fd_oracle.hpp"
#include "psg/kernel_table.hpp"
#include "psg/volterra.hpp"
#include "psg/waves.hpp"

using namespace psg;

namespace {
const PdeSource kNoSource = [](double, double, double) { return 0.0; };

double kink_error(const GridFunction& u, const TravellingWave& w, std::size_t n) {
  const SpaceTimeGrid& g = u.grid();
  double e = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) e = std::max(e, std::abs(u(i, n) - w.value(g.x(i), g.t(n))));
  return e;
}
}  // namespace

TEST_CASE("constants are preserved") {
  const MediumParams p(0.05, 1.0, 1.0);
  const InitialData data{[](double) { return 0.7; }, [](double) { return 0.0; }};
  const SpaceTimeGrid g(-5.0, 5.0, 101, 1.0, 21);
  for (const GridFunction& u : {fd_solve_full(p, data, kNoSource, g), fd_solve_reduced(p, data, kNoSource, g)})
    for (double v : u.values()) CHECK(std::abs(v - 0.7) < 1e-8);
}

TEST_CASE("zero data with the unbiased sine-Gordon source stays zero") {
  const MediumParams p(0.05, 1.0, 1.0);
  const InitialData data{[](double) { return 0.0; }, [](double) { return 0.0; }};
  const GridFunction u = fd_solve_reduced(p, data, sine_gordon_source(0.0), SpaceTimeGrid(-5.0, 5.0, 51, 1.0, 11));
  for (double v : u.values()) CHECK(v == 0.0);
}

TEST_CASE("reduced solve reproduces the kink at second order") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const TravellingWave kink = TravellingWave::kink(1.0);
  FdScheme scheme;
  scheme.left = [&](double t) { return kink.value(-15.0, t); };
  scheme.right = [&](double t) { return kink.value(15.0, t); };
  double prev = 0.0;
  for (std::size_t level : {1, 2, 4}) {
    const SpaceTimeGrid g(-15.0, 15.0, 300 * level + 1, 1.0, 12 * level + 1);
    const double err = kink_error(fd_solve_reduced(p, kink_initial_data(1.0), sine_gordon_source(0.0), g, scheme), kink,
                                  g.nt() - 1);
    if (prev > 0.0) CHECK(prev / err >= 3.5);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("reduced kink: pinned far field, dx = 0.02, and dependence through xi") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const TravellingWave kink = TravellingWave::kink(1.0);
  const SpaceTimeGrid g(-20.0, 20.0, 2001, 1.0, 57);
  const GridFunction u = fd_solve_reduced(p, kink_initial_data(1.0), sine_gordon_source(0.0), g);
  double worst = 0.0;
  for (std::size_t n = 0; n < g.nt(); ++n) worst = std::max(worst, kink_error(u, kink, n));
  CHECK(worst < 1e-3);

  // dt = 0.9 dx: a shift of 10 steps in t is 9 steps in x
  const SpaceTimeGrid h(-20.0, 20.0, 2001, 0.9, 51);
  const GridFunction v = fd_solve_reduced(p, kink_initial_data(1.0), sine_gordon_source(0.0), h);
  double mismatch = 0.0;
  for (std::size_t i = 200; i + 200 < h.nx(); ++i) mismatch = std::max(mismatch, std::abs(v(i + 9, 40) - v(i, 30)));
  CHECK(mismatch < 1e-3);
}

TEST_CASE("damped energy does not increase") {
  const InitialData data{[](double x) { return std::exp(-x * x); }, [](double x) { return x * std::exp(-x * x); }};
  const SpaceTimeGrid g(-10.0, 10.0, 401, 3.0, 151);
  for (double eps : {0.0, 0.02}) {
    const MediumParams p(eps > 0.0 ? eps : 1.0, 0.5, 1.0);
    const GridFunction u = eps > 0.0 ? fd_solve_full(p, data, kNoSource, g) : fd_solve_reduced(p, data, kNoSource, g);
    double prev = discrete_energy(u, 0, p, 0.0);
    CHECK(prev > 0.0);
    for (std::size_t n = 1; n + 1 < g.nt(); ++n) {
      const double e = discrete_energy(u, n, p, 0.0);
      CHECK(e <= prev * (1.0 + 1e-12));
      prev = e;
    }
  }
}

TEST_CASE("bump source: finite differences agree with the kernel convolution") {
  const MediumParams p(0.01, 1.0, 1.0);
  const SpaceTimeGrid g(-6.0, 6.0, 241, 1.5, 151);
  auto bump = [](double x, double t) { return std::exp(-4.0 * x * x) * std::sin(3.0 * t); };
  const InitialData zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
  const GridFunction u = fd_solve_full(p, zero, [&](double x, double t, double) { return bump(x, t); }, g);
  GridFunction f(g);
  for (std::size_t n = 0; n < g.nt(); ++n)
    for (std::size_t i = 0; i < g.nx(); ++i) f(i, n) = bump(g.x(i), g.t(n));
  const GridFunction v = convolve_kernel(f, KernelTable(p, g));
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < u.values().size(); ++k) {
    diff = std::max(diff, std::abs(u.values()[k] + v.values()[k]));  // u = -K * F
    scale = std::max(scale, std::abs(u.values()[k]));
  }
  CHECK(scale > 1e-2);
  CHECK(diff < 1e-3);
}

TEST_CASE("stability limit and blow-up detection") {
  const MediumParams p(0.01, 1.0, 1.0);
  const SpaceTimeGrid fast(-5.0, 5.0, 101, 1.0, 6);  // courant 2
  CHECK_FALSE(cfl_report(p, fast, {}).stable);
  CHECK_THROWS_AS(fd_solve_full(p, kink_initial_data(1.0), sine_gordon_source(0.0), fast), DomainError);
  FdScheme implicit;
  implicit.theta = 0.5;
  CHECK(cfl_report(p, fast, implicit).stable);
  CHECK(std::isinf(cfl_report(p, fast, implicit).limit));
  FdScheme low;
  low.blowup = 1.0;
  CHECK_THROWS_AS(fd_solve_full(p, kink_initial_data(1.0), sine_gordon_source(0.0), SpaceTimeGrid(-5.0, 5.0, 101, 1.0, 21), low),
                  NumericError);
}

TEST_CASE("perturbation from the kink is first order in eps") {
  const SpaceTimeGrid g(-20.0, 20.0, 2001, 1.0, 57);
  const TravellingWave kink = TravellingWave::kink(1.0);
  auto deviation = [&](double eps) {
    const GridFunction u = fd_solve_full(MediumParams(eps, 1.0, 1.0), kink_initial_data(1.0), sine_gordon_source(0.0), g);
    const GridFunction r = fd_solve_reduced(MediumParams(eps, 1.0, 1.0), kink_initial_data(1.0), sine_gordon_source(0.0), g);
    double d = 0.0;
    for (std::size_t k = 0; k < u.values().size(); ++k) d = std::max(d, std::abs(u.values()[k] - r.values()[k]));
    return d;
  };
  const double ratio = deviation(1e-2) / deviation(1e-3);
  CHECK(ratio > 7.0);
  CHECK(ratio < 13.0);
}

TEST_CASE("truncating the domain further out changes little") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const GridFunction a = fd_solve_full(p, kink_initial_data(1.0), sine_gordon_source(0.0), SpaceTimeGrid(-20.0, 20.0, 801, 1.0, 51));
  const GridFunction b = fd_solve_full(p, kink_initial_data(1.0), sine_gordon_source(0.0), SpaceTimeGrid(-25.0, 25.0, 1001, 1.0, 51));
  double diff = 0.0;
  for (std::size_t n = 0; n < 51; ++n)
    for (std::size_t i = 0; i < 801; ++i) diff = std::max(diff, std::abs(a(i, n) - b(i + 100, n)));
  CHECK(diff < 1e-6);
}

TEST_CASE("cross-validation passes and tightens under refinement") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const TravellingWave kink = TravellingWave::kink(1.0);
  const CrossValidation coarse = cross_validate(p, kink, SpaceTimeGrid(-15.0, 15.0, 151, 1.0, 51));
  const CrossValidation fine = cross_validate(p, kink, SpaceTimeGrid(-15.0, 15.0, 301, 1.0, 101));
  CHECK(coarse.pass);
  CHECK(fine.pass);
  CHECK(fine.sup_discrepancy < coarse.sup_discrepancy);
  CHECK(fine.picard.apriori_max_violation <= 1e-8);
}
