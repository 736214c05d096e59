#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "psg/model.hpp"
#include "psg/waves.hpp"

using namespace psg;

TEST_CASE("medium parameters reject nonpositive or non-finite constants") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(MediumParams(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumParams(-1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumParams(0.1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumParams(0.1, 1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumParams(nan, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumParams(0.1, 1.0, 1.0, nan), std::invalid_argument);
  CHECK_NOTHROW(MediumParams(0.1, 1.0, 1.0, -3.0));
}

TEST_CASE("b and the dissipative regime") {
  const MediumParams p(0.04, 1.0, 2.0);
  CHECK(p.b() == doctest::Approx(100.0));
  CHECK(p.dissipative_regime());
  CHECK_FALSE(MediumParams(1.0, 4.0, 2.0).dissipative_regime());  // a eps == c^2
  CHECK_FALSE(MediumParams(2.0, 4.0, 1.0).dissipative_regime());
  CHECK(p.with_epsilon(0.01).b() == doctest::Approx(400.0));
}

TEST_CASE("grid geometry and validation") {
  const SpaceTimeGrid g(-2.0, 2.0, 5, 1.0, 11);
  CHECK(g.dx() == doctest::Approx(1.0));
  CHECK(g.dt() == doctest::Approx(0.1));
  CHECK(g.x(4) == doctest::Approx(2.0));
  CHECK(g.t(10) == doctest::Approx(1.0));
  CHECK_THROWS_AS(SpaceTimeGrid(1.0, 1.0, 5, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(0.0, 1.0, 1, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(0.0, 1.0, 5, 0.0, 5), std::invalid_argument);
}

TEST_CASE("grid function levels are contiguous rows") {
  GridFunction f(SpaceTimeGrid(0.0, 1.0, 3, 1.0, 2));
  f(2, 1) = 7.0;
  CHECK(f.level(1)[2] == 7.0);
  CHECK(f.values()[5] == 7.0);
  CHECK(f.all_finite());
  f(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(f.all_finite());
}

TEST_CASE("superconductive source against the direct formula") {
  const MediumParams p(0.01, 1.0, 1.0);
  const TravellingWave w = TravellingWave::kink(1.0);
  for (double x : {-3.0, 0.0, 0.4, 5.0})
    for (double v : {-0.3, 0.0, 1e-7, 2.0}) {
      const double wv = w.value(x, 0.5);
      const double expected = std::sin(v + wv) - std::sin(wv) - p.epsilon() * w.derivatives(x, 0.5).w_xxt;
      CHECK(source_superconductive(x, 0.5, v, w, p) == doctest::Approx(expected).epsilon(1e-13));
    }
  SuperconductiveSource src(std::make_shared<TravellingWave>(w), 0.0);
  CHECK(src(1.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("Lipschitz constant 1 holds and is nearly attained") {
  const MediumParams p(0.01, 1.0, 1.0);
  const SpaceTimeGrid g(-10.0, 10.0, 101, 2.0, 51);
  SuperconductiveSource src(std::make_shared<TravellingWave>(TravellingWave::kink(1.0)), p.epsilon());
  std::mt19937_64 rng(7);
  const auto samples = random_lipschitz_samples(g, 3.0, 20000, rng);
  const double worst = lipschitz_bound_check(src, samples);
  CHECK(worst <= src.lipschitz_constant() + 1e-12);
  CHECK(worst > 0.9);
  // brute force over small increments where w = 0 or pi
  double brute = 0.0;
  for (double x : {-10.0, 10.0}) {
    const double f0 = src(x, 0.0, 0.0), f1 = src(x, 0.0, 1e-6);
    brute = std::max(brute, std::abs(f1 - f0) / 1e-6);
  }
  CHECK(brute == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("config parsing") {
  const ConfigMap m = parse_config("# header\nepsilon = 0.01\n  a=2 # trailing\n\nnx = 11\n");
  CHECK(m.at("epsilon") == "0.01");
  CHECK(m.at("a") == "2");
  CHECK(config_double(m, "epsilon") == 0.01);
  CHECK(config_double(m, "c", 1.5) == 1.5);
  CHECK(config_size(m, "nx", 3) == 11);
  CHECK_THROWS_AS(parse_config("novalue\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(" = 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(config_double(m, "missing"), std::invalid_argument);
  CHECK_THROWS_AS(config_double(parse_config("a = 1x"), "a"), std::invalid_argument);
  CHECK_THROWS_AS(config_size(parse_config("n = -2"), "n", 0), std::invalid_argument);
  CHECK(parse_config(format_config(m)) == m);
}

TEST_CASE("medium and grid from config") {
  const ConfigMap m = parse_config("epsilon = 0.1\nc = 2\nx_min = -5\nx_max = 5\nnx = 21\n");
  const MediumParams p = medium_from_config(m);
  CHECK(p.a() == 1.0);
  CHECK(p.c() == 2.0);
  const SpaceTimeGrid g = grid_from_config(m);
  CHECK(g.nx() == 21);
  CHECK(g.x_min() == -5.0);
  try {
    medium_from_config(parse_config("a = 1"));
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
  }
}
