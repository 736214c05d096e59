#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psg/error.hpp"
#include "psg/estimates.hpp"
#include "psg/waves.hpp"

using namespace psg;

TEST_CASE("Gronwall envelope arithmetic") {
  CHECK(gronwall_envelope(0.5, 1.0, 1.0, 1.0, 0.0).uniform == 0.0);
  CHECK(gronwall_envelope(1.0, 1.0, 1.0, 1.0, 1e-3).uniform == doctest::Approx(2.718281828459045e-3).epsilon(1e-14));
  CHECK_THROWS_AS(gronwall_envelope(2.0, 1.0, 1.0, 1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("equality case of the integral inequality, by RK4") {
  // y(t) = beta eps t / a + (1/a) int_0^t y  <=>  y' = (beta eps + y)/a, y(0) = 0
  const double beta = 1.3, a = 0.8, eps = 1e-2, T = 2.0;
  const int steps = 2000;
  const double h = T / steps;
  double y = 0.0;
  auto f = [&](double yy) { return (beta * eps + yy) / a; };
  for (int i = 1; i <= steps; ++i) {
    const double k1 = f(y), k2 = f(y + 0.5 * h * k1), k3 = f(y + 0.5 * h * k2), k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    const double t = i * h;
    if (i % 200 == 0) {
      const GronwallBound g = gronwall_envelope(t, T, beta, a, eps);
      CHECK(g.exact == doctest::Approx(y).epsilon(1e-10));
      CHECK(g.exact <= g.uniform);
      CHECK(g.uniform <= exponential_envelope(T, beta, a, eps));
    }
  }
}

TEST_CASE("diffusion horizon") {
  CHECK(t_epsilon(1.0, 1.0, 1e-4, 0.5) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  CHECK(t_epsilon(1.0, 1.0, 1e-2, 0.99) == doctest::Approx(0.5 * std::log(std::pow(10.0, 0.02))).epsilon(1e-12));
  CHECK(t_epsilon(1.0, 1.0, 1.0, 0.5) == 0.0);
  CHECK(t_epsilon(2.0, 1.0, 1e-3, 0.5) == doctest::Approx(2.0 * t_epsilon(1.0, 1.0, 1e-3, 0.5)));
  CHECK(t_epsilon(1.0, 1.0, 1e-3, 0.5) < t_epsilon(1.0, 1.0, 1e-4, 0.5));
  CHECK_THROWS_AS(t_epsilon(1.0, 10.0, 0.5, 0.5), DomainError);
  // beta e^{2 T / a} eps = eps^k at the horizon
  for (double eps : {1e-2, 1e-3, 1e-6}) {
    const double T = t_epsilon(1.5, 0.7, eps, 0.3);
    CHECK(exponential_envelope(T, 0.7, 1.5, eps) == doctest::Approx(std::pow(eps, 0.3)).epsilon(1e-12));
  }
}

TEST_CASE("layer parameter validation") {
  LayerParams p;
  p.epsilon_list = {1e-2, 1e-3};
  CHECK_NOTHROW(p.validate());
  p.k_exp = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.k_exp = 0.5;
  p.epsilon_list = {};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.epsilon_list = {1e-3, 1e-2};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.epsilon_list = {1e-2, -1e-3};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("log-log slope of a power law") {
  CHECK(loglog_slope({1e-2, 1e-3, 1e-4}, {3e-4, 3e-6, 3e-8}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("order verification on a small grid") {
  const SpaceTimeGrid grid(-12.0, 12.0, 241, 1.0, 51);
  LayerParams layer;
  layer.epsilon_list = {1e-2, 1e-3, 1e-4};
  const LayerReport rep = verify_order(MediumParams(1e-2, 1.0, 1.0), TravellingWave::kink(1.0), grid, layer);
  CHECK(rep.all_satisfied);
  CHECK(rep.beta == doctest::Approx(w_xxt_bound(1.0)));
  REQUIRE(rep.slope_available);
  CHECK(rep.slope >= 0.9);
  CHECK(rep.slope <= 1.1);
  double prev_T = 0.0;
  for (const auto& e : rep.entries) {
    CHECK(e.status == "ok");
    CHECK(e.gronwall_ok);
    CHECK(e.exponential_ok);
    CHECK(e.identity_rel_error < 1e-12);
    CHECK(e.t_eps > prev_T);
    prev_T = e.t_eps;
    for (const auto& [t, r] : e.sup_history) CHECK(r >= 0.0);
  }
}

TEST_CASE("tiny horizon is reported, not failed") {
  const SpaceTimeGrid grid(-12.0, 12.0, 241, 1.0, 51);
  LayerParams layer;
  layer.k_exp = 0.999;
  layer.epsilon_list = {1e-2};
  const LayerReport rep = verify_order(MediumParams(1e-2, 1.0, 1.0), TravellingWave::kink(1.0), grid, layer);
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].status == "horizon_not_reached");
  CHECK(rep.entries[0].t_eps < grid.dt());
  CHECK(rep.all_satisfied);
  CHECK_FALSE(rep.slope_available);
}
