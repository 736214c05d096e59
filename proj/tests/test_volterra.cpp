#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "psg/kernel_table.hpp"
#include "psg/model.hpp"
#include "psg/volterra.hpp"
#include "psg/waves.hpp"

using namespace psg;

namespace {
struct ConstantSource final : Source {
  double value;
  explicit ConstantSource(double v) : value(v) {}
  double operator()(double, double, double) const override { return value; }
  double lipschitz_constant() const override { return 0.0; }
};

GridFunction sample(const SpaceTimeGrid& g, auto&& f) {
  GridFunction out(g);
  for (std::size_t n = 0; n < g.nt(); ++n)
    for (std::size_t i = 0; i < g.nx(); ++i) out(i, n) = f(g.x(i), g.t(n));
  return out;
}

double max_r(const SolveReport& r) {
  double m = 0.0;
  for (const auto& [t, v] : r.sup_history) m = std::max(m, v);
  return m;
}
}  // namespace

TEST_CASE("convolution of zero and of a constant") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const SpaceTimeGrid g(-10.0, 10.0, 201, 1.0, 201);
  const KernelTable table(p, g);
  const GridFunction zero = convolve_kernel(GridFunction(g), table);
  for (double v : zero.values()) CHECK(v == 0.0);

  const GridFunction one = convolve_kernel(GridFunction(g, 1.0), table);
  for (std::size_t n : {50u, 100u, 200u}) {
    const double t = g.t(n);
    const double exact = t + std::expm1(-t);  // int_0^t (1 - e^{-s}) ds
    CHECK(std::abs(one(100, n) - exact) < 1e-5);
  }
}

TEST_CASE("convolution obeys the sup bound (t/a) ||F||_t") {
  const MediumParams p(1e-2, 2.0, 1.0);
  const SpaceTimeGrid g(-8.0, 8.0, 161, 1.5, 76);
  const KernelTable table(p, g);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction f(g);
  for (double& v : f.values()) v = u(rng);
  const GridFunction out = convolve_kernel(f, table);
  for (std::size_t n = 1; n < g.nt(); ++n) {
    const double t = g.t(n);
    CHECK(sup_norm(out, t) <= t / p.a() * sup_norm(f, t) + 1e-8);
  }
}

TEST_CASE("table built on another grid is rejected") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const KernelTable table(p, SpaceTimeGrid(-5.0, 5.0, 51, 1.0, 11));
  CHECK_THROWS_AS(convolve_kernel(GridFunction(SpaceTimeGrid(-5.0, 5.0, 51, 1.0, 21)), table), std::invalid_argument);
}

TEST_CASE("configuration invariants") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const SpaceTimeGrid g(-5.0, 5.0, 51, 1.0, 11);
  ConstantSource src(0.0);
  PicardConfig bad;
  bad.fix_tol = 0.0;
  CHECK_THROWS_AS(picard_solve(src, p, g, bad), std::invalid_argument);
  bad = {};
  bad.window_len = 2.0;
  CHECK_THROWS_AS(picard_solve(src, p, g, bad), std::invalid_argument);
  bad = {};
  bad.damping = 1.5;
  CHECK_THROWS_AS(picard_solve(src, p, g, bad), std::invalid_argument);
}

TEST_CASE("unforced source has the zero fixed point") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const SpaceTimeGrid g(-10.0, 10.0, 101, 1.0, 51);
  SuperconductiveSource src(std::make_shared<TravellingWave>(TravellingWave::kink(1.0)), 0.0);
  const SolveResult res = picard_solve(src, p, g);
  CHECK(res.report.converged);
  for (double v : res.v.values()) CHECK(v == 0.0);
  for (std::size_t it : res.report.iterations_used) CHECK(it == 1);
}

TEST_CASE("kink remainder: Gronwall envelope, a priori bound, contraction") {
  const MediumParams p(1e-2, 1.0, 1.0);
  const SpaceTimeGrid g(-20.0, 20.0, 401, 2.0, 201);
  PicardConfig cfg;
  cfg.window_len = 0.5;
  const SolveResult res = picard_solve(TravellingWave::kink(1.0), p, g, cfg);
  REQUIRE(res.report.converged);
  const double beta = w_xxt_bound(1.0);
  for (const auto& [t, r] : res.report.sup_history) {
    CHECK(r >= 0.0);
    CHECK(std::isfinite(r));
    CHECK(r <= beta * t * std::exp(t) * p.epsilon() + 1e-12);
  }
  CHECK(res.report.apriori_max_violation <= 1e-8);
  for (double ratio : res.report.contraction_ratios) CHECK(ratio <= 0.5 + 1e-3);
  for (const auto& w : res.report.windows)
    if (w.converged) CHECK(w.final_update < cfg.fix_tol);
  // sign: the forcing -eps w_xxt is negative at the kink centre; v = -K * F is positive there
  CHECK(res.v(201, 10) > 0.0);  // x = t = 0.1
}

TEST_CASE("distinct first iterates reach the same fixed point") {
  const MediumParams p(1e-3, 1.0, 1.0);
  const SpaceTimeGrid g(-10.0, 10.0, 201, 1.0, 51);
  const KernelTable table(p, g);
  PicardConfig a, b;
  b.initial_value = 0.1;
  const SolveResult ra = picard_solve(TravellingWave::kink(1.0), p, g, a, &table);
  const SolveResult rb = picard_solve(TravellingWave::kink(1.0), p, g, b, &table);
  REQUIRE(ra.report.converged);
  REQUIRE(rb.report.converged);
  double diff = 0.0;
  for (std::size_t k = 0; k < ra.v.values().size(); ++k) diff = std::max(diff, std::abs(ra.v.values()[k] - rb.v.values()[k]));
  CHECK(diff <= 10.0 * a.fix_tol);
}

TEST_CASE("grid refinement converges") {
  const MediumParams p(1e-2, 1.0, 1.0);
  auto run = [&](std::size_t nx, std::size_t nt) {
    return picard_solve(TravellingWave::kink(1.0), p, SpaceTimeGrid(-10.0, 10.0, nx, 1.0, nt)).v;
  };
  const GridFunction c = run(101, 26), m = run(201, 51), f = run(401, 101);
  // compare on the coarse nodes
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t n = 0; n < 26; ++n)
    for (std::size_t i = 0; i < 101; ++i) {
      d1 = std::max(d1, std::abs(c(i, n) - m(2 * i, 2 * n)));
      d2 = std::max(d2, std::abs(m(2 * i, 2 * n) - f(4 * i, 4 * n)));
    }
  MESSAGE("refinement differences " << d1 << " " << d2);
  CHECK(d1 / d2 >= 1.8);
}

TEST_CASE("sup norm") {
  const SpaceTimeGrid g(0.0, 1.0, 11, 2.0, 21);
  CHECK(sup_norm(GridFunction(g), 2.0) == 0.0);
  const GridFunction v = sample(g, [](double, double t) { return t; });
  CHECK(sup_norm(v, 1.3) == doctest::Approx(1.3));
  const GridFunction w = sample(g, [](double x, double t) { return std::sin(7 * x + 3 * t); });
  double prev = 0.0;
  for (double t = 0.0; t <= 2.0; t += 0.1) {
    CHECK(sup_norm(w, t) >= prev);
    prev = sup_norm(w, t);
  }
  CHECK_THROWS_AS(sup_norm(v, 2.5), std::invalid_argument);
}
