#include <doctest.h>

#include <cmath>
#include <random>

#include "wsdf/error.hpp"
#include "wsdf/transfer.hpp"

using namespace wsdf;

TEST_CASE("sigmoid values") {
  CHECK(occupancy_soft(0.5) == 0.5);
  CHECK(occupancy_soft(1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-9.5))).epsilon(1e-12));
  CHECK(std::abs(occupancy_soft(1.0) - 0.99992) < 1e-5);
  CHECK(std::abs(occupancy_soft(0.0) - 7.5e-5) < 1e-6);
  CHECK(std::abs(occupancy_soft(0.0) + occupancy_soft(1.0) - 1.0) < 1e-12);
}

TEST_CASE("density values") {
  const TransferConfig cfg;
  // Where G falls below the neutral point the formula goes negative; clamped.
  CHECK(-30.0 * std::log(1.0 + 1e-3 - 0.0) == doctest::Approx(-0.03).epsilon(1e-3));
  CHECK(density(0.0, cfg) == 0.0);
  CHECK(max_density(cfg) == doctest::Approx(-30.0 * std::log(1e-3)));
  CHECK(max_density(cfg) == doctest::Approx(207.2).epsilon(1e-3));
  CHECK(density(0.4, cfg) < density(0.6, cfg));
  CHECK(density(1.0, cfg) < max_density(cfg));
  CHECK(density(0.5, cfg) == doctest::Approx(-30.0 * std::log(1.0 + 1e-3 - 0.5)));
}

TEST_CASE("monotone and bounded on [0, 1]") {
  const TransferConfig cfg;
  double pg = -1.0, pd = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double f = i / 10000.0;
    const double g = occupancy_soft(f, cfg);
    const double d = density(f, cfg);
    CHECK(g >= pg);
    CHECK(d >= pd);
    CHECK(d >= 0.0);
    CHECK(d <= max_density(cfg));
    CHECK(std::isfinite(d));
    pg = g;
    pd = d;
  }
}

TEST_CASE("gradient at the midpoint") {
  CHECK(transfer_grad(0.5).d_occupancy == doctest::Approx(4.75));
  CHECK(transfer_grad(0.5).d_density == doctest::Approx(30.0 * 4.75 / (1.0 + 1e-3 - 0.5)));
  CHECK(transfer_grad(0.5, TransferConfig{1e-9, 30.0, 1e-3}).d_occupancy < 1e-8);
  CHECK(transfer_grad(0.0).d_density == 0.0);
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  const TransferConfig cfg;
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const double f = u(rng);
    const TransferGradient g = transfer_grad(f, cfg);
    const double fd_g = (occupancy_soft(f + h, cfg) - occupancy_soft(f - h, cfg)) / (2 * h);
    CHECK(g.d_occupancy == doctest::Approx(fd_g).epsilon(1e-5));
    // Skip the kink of the clamp.
    if (density(f - h, cfg) == 0.0) continue;
    const double fd_d = (density(f + h, cfg) - density(f - h, cfg)) / (2 * h);
    CHECK(g.d_density == doctest::Approx(fd_d).epsilon(1e-5));
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(TransferConfig{0.0, 30.0, 1e-3}), Error);
  CHECK_THROWS_AS(validate(TransferConfig{19.0, -1.0, 1e-3}), Error);
  CHECK_THROWS_AS(validate(TransferConfig{19.0, 30.0, 1.0}), Error);
  CHECK_THROWS_AS(validate(TransferConfig{19.0, 30.0, 0.0}), Error);
  CHECK_NOTHROW(validate(TransferConfig{}));
}
