#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "wsdf/error.hpp"
#include "wsdf/fit.hpp"
#include "wsdf/scene.hpp"

using namespace wsdf;

namespace {

struct Setup {
  CubeDomain domain;
  ForwardModel model;
  SceneLayout layout;
};

Setup tiny_setup() {
  Setup s{cube_domain(8), {}, {}};
  s.model.smoothing = SmoothingConfig::from_voxels(0.8, s.domain.spacing);
  s.layout.views = 3;
  s.layout.held_out = 1;
  s.layout.image_size = 4;
  return s;
}

VoxelGrid sphere_grid(const CubeDomain& d) {
  return make_analytic_grid(Sphere{{0.5, 0.5, 0.5}, 0.3}, d.dims, d.origin, d.spacing);
}

VoxelGrid uniform_grid(const CubeDomain& d, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(d.dims.count());
  for (double& x : v) x = u(rng);
  return VoxelGrid(d.dims, d.origin, d.spacing, FieldKind::kOccupancy, std::move(v));
}

}  // namespace

TEST_CASE("a perfect fit has zero loss and zero gradient") {
  const Setup s = tiny_setup();
  const VoxelGrid gt = sphere_grid(s.domain);
  const Scene scene = render_scene(gt, s.layout, s.model);
  const LossAndGrad lg = loss_and_grad(gt, scene.train, s.model);
  CHECK(lg.loss == 0.0);
  REQUIRE(lg.gradient.size() == gt.size());
  for (double g : lg.gradient) CHECK(g == 0.0);
}

TEST_CASE("gradient matches central finite differences") {
  const Setup s = tiny_setup();
  const Scene scene = render_scene(sphere_grid(s.domain), s.layout, s.model);
  const VoxelGrid x = uniform_grid(s.domain, 0.2, 0.8, 3);
  const LossAndGrad lg = loss_and_grad(x, scene.train, s.model);
  REQUIRE(lg.loss > 0.0);

  // The 50 voxels with the largest gradient magnitude, so the check is not
  // dominated by voxels no ray reaches.
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + 50, order.end(),
                    [&](std::size_t a, std::size_t b) { return std::abs(lg.gradient[a]) > std::abs(lg.gradient[b]); });
  const double h = 1e-6;
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    const std::size_t idx = order[static_cast<std::size_t>(n)];
    std::vector<double> plus(x.values().begin(), x.values().end());
    std::vector<double> minus = plus;
    plus[idx] += h;
    minus[idx] -= h;
    const double lp = loss_and_grad(x.with_values(std::move(plus), FieldKind::kOccupancy), scene.train, s.model).loss;
    const double lm = loss_and_grad(x.with_values(std::move(minus), FieldKind::kOccupancy), scene.train, s.model).loss;
    const double fd = (lp - lm) / (2.0 * h);
    const double rel = std::abs(fd - lg.gradient[idx]) / std::max(std::abs(fd), 1e-12);
    worst = std::max(worst, rel);
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("batch loss agrees with the full loss") {
  const Setup s = tiny_setup();
  const Scene scene = render_scene(sphere_grid(s.domain), s.layout, s.model);
  const VoxelGrid x = uniform_grid(s.domain, 0.0, 1.0, 4);
  std::vector<RayRef> all;
  for (int v = 0; v < static_cast<int>(scene.train.size()); ++v)
    for (int p = 0; p < 16; ++p) all.push_back({v, p});
  CHECK(batch_loss(x, scene.train, all, s.model) == doctest::Approx(loss_and_grad(x, scene.train, s.model).loss));
  const std::vector<RayRef> one{{1, 5}};
  CHECK(batch_loss(x, scene.train, one, s.model) == doctest::Approx(loss_and_grad(x, scene.train, one, s.model).loss));
  CHECK_THROWS_AS(batch_loss(x, scene.train, std::vector<RayRef>{}, s.model), Error);
}

TEST_CASE("fitting keeps values in [0, 1] and never increases the full-batch loss") {
  const Setup s = tiny_setup();
  const Scene scene = render_scene(sphere_grid(s.domain), s.layout, s.model);
  FitConfig cfg;
  cfg.iterations = 25;
  cfg.learning_rate = 50.0;
  const VoxelGrid init = testing::constant_grid(s.domain.dims, 0.5, s.domain.spacing, s.domain.origin);
  const FitResult r = fit(init, scene.train, scene.held_out, s.model, cfg);
  CHECK(r.grid.min_value() >= 0.0);
  CHECK(r.grid.max_value() <= 1.0);
  REQUIRE(r.report.loss_trace.size() == 25);
  REQUIRE(r.report.step_sizes.size() == 25);
  for (std::size_t i = 1; i < r.report.loss_trace.size(); ++i) {
    CHECK(r.report.loss_trace[i] <= r.report.loss_trace[i - 1]);
  }
  CHECK(r.report.best_loss <= r.report.loss_trace.front());
  CHECK(r.report.loss_trace.back() < r.report.loss_trace.front());
  CHECK(std::isfinite(r.report.final_psnr));
  CHECK(r.report.seconds >= 0.0);
}

TEST_CASE("fitting is deterministic") {
  const Setup s = tiny_setup();
  const Scene scene = render_scene(sphere_grid(s.domain), s.layout, s.model);
  FitConfig cfg;
  cfg.iterations = 10;
  cfg.batch_rays = 20;
  cfg.seed = 9;
  const VoxelGrid init = testing::constant_grid(s.domain.dims, 0.5, s.domain.spacing, s.domain.origin);
  const FitResult a = fit(init, scene.train, {}, s.model, cfg);
  const FitResult b = fit(init, scene.train, {}, s.model, cfg);
  CHECK(std::equal(a.grid.values().begin(), a.grid.values().end(), b.grid.values().begin()));
  CHECK(a.report.loss_trace == b.report.loss_trace);
  CHECK(a.report.final_psnr == b.report.final_psnr);
}

TEST_CASE("fit rejects bad configurations and inputs") {
  FitConfig cfg;
  validate(cfg);
  cfg.iterations = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.batch_rays = 0;
  CHECK_THROWS_AS(validate(cfg), Error);

  const Setup s = tiny_setup();
  Scene scene = render_scene(sphere_grid(s.domain), s.layout, s.model);
  const VoxelGrid init = testing::constant_grid(s.domain.dims, 0.5, s.domain.spacing, s.domain.origin);
  CHECK_THROWS_AS(fit(init, std::vector<View>{}, {}, s.model, FitConfig{}), Error);
  scene.train[0].target = Image(3, 4, 3);
  CHECK_THROWS_AS(loss_and_grad(init, scene.train, s.model), Error);
}

TEST_CASE("scenes round-trip through files") {
  const Setup s = tiny_setup();
  const Scene scene = render_scene(sphere_grid(s.domain), s.layout, s.model);
  CHECK(scene.train.size() == 3);
  CHECK(scene.held_out.size() == 1);
  const auto dir = testing::scratch_dir("fit_scene");
  const auto files = write_scene(dir, scene);
  CHECK(files.size() == 8);
  const Scene back = read_scene(dir);
  REQUIRE(back.train.size() == 3);
  REQUIRE(back.held_out.size() == 1);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.train[i].camera.width == 4);
    for (std::size_t k = 0; k < scene.train[i].target.data.size(); ++k) {
      CHECK(std::abs(back.train[i].target.data[k] - scene.train[i].target.data[k]) <= 0.5 / 255.0 + 1e-12);
    }
  }
}
