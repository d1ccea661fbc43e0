#include "wsdf/fit.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wsdf/error.hpp"
#include "wsdf/metrics.hpp"

namespace wsdf {
namespace {

void check_views(const VoxelGrid& grid, std::span<const View> views) {
  require(grid.kind() == FieldKind::kOccupancy, "fitting needs an occupancy grid");
  require(!views.empty(), "need at least one view");
  for (const View& v : views) {
    validate(v.camera);
    require(v.target.width == v.camera.width && v.target.height == v.camera.height && v.target.channels == 3,
            "target image must be RGB with the camera's dimensions");
  }
}

std::vector<RayRef> all_rays(std::span<const View> views) {
  std::vector<RayRef> rays;
  for (int v = 0; v < static_cast<int>(views.size()); ++v) {
    const int pixels = views[static_cast<std::size_t>(v)].camera.width * views[static_cast<std::size_t>(v)].camera.height;
    for (int p = 0; p < pixels; ++p) rays.push_back({v, p});
  }
  return rays;
}

Ray ray_for(const View& view, int pixel) {
  return pixel_ray(view.camera, pixel % view.camera.width, pixel / view.camera.width);
}

// Squared color error of one ray and d(error)/d(opacity).
struct PixelResidual {
  double squared_error = 0.0;
  double d_opacity = 0.0;
};

PixelResidual residual(const View& view, int pixel, double opacity, const Vec3& albedo) {
  PixelResidual r;
  const std::size_t base = 3 * static_cast<std::size_t>(pixel);
  for (int c = 0; c < 3; ++c) {
    const double diff = composite(opacity, albedo[c]) - view.target.data[base + static_cast<std::size_t>(c)];
    r.squared_error += diff * diff;
    r.d_opacity += 2.0 * diff * (albedo[c] - 1.0);
  }
  return r;
}

double evaluate(const VoxelGrid& grid, std::span<const View> views, std::span<const RayRef> batch,
                const ForwardModel& model, std::vector<double>* gradient) {
  check_views(grid, views);
  require(!batch.empty(), "empty ray batch");
  const SmoothedGrid smoothed = smooth(grid, model.smoothing);
  const GridDensityField field(smoothed.grid, model.transfer);
  const double step = resolve_step(model.render, grid);
  const double norm_factor = 1.0 / (3.0 * static_cast<double>(batch.size()));
  const auto count = static_cast<std::int64_t>(batch.size());
  const int threads = omp_get_max_threads();

  std::vector<double> partial_loss(static_cast<std::size_t>(threads), 0.0);
  std::vector<std::vector<double>> partial_grad(gradient != nullptr ? static_cast<std::size_t>(threads) : 0);

#pragma omp parallel num_threads(threads)
  {
    const int tid = omp_get_thread_num();
    std::vector<double>* local = nullptr;
    if (gradient != nullptr) {
      partial_grad[static_cast<std::size_t>(tid)].assign(grid.size(), 0.0);
      local = &partial_grad[static_cast<std::size_t>(tid)];
    }
    double loss_acc = 0.0;
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < count; ++b) {
      const RayRef& ref = batch[static_cast<std::size_t>(b)];
      const View& view = views[static_cast<std::size_t>(ref.view)];
      const Ray ray = ray_for(view, ref.pixel);
      const auto [first, last] = active_samples(ray, field, step);
      const MarchResult m = march_ray_range(ray, field, step, first, last);
      const PixelResidual res = residual(view, ref.pixel, m.opacity, model.render.albedo);
      loss_acc += res.squared_error;
      if (local == nullptr) continue;

      // opacity = 1 - exp(-sum sigma_i delta_i)  =>  d opacity / d sigma_i = delta_i * T_final.
      const double upstream = norm_factor * res.d_opacity * m.transmittance;
      if (upstream == 0.0) continue;
      for (int i = first; i < last; ++i) {
        const double t0 = ray.t_near + i * step;
        const double t1 = std::min(t0 + step, ray.t_far);
        const Vec3 p = ray.at(0.5 * (t0 + t1));
        const TrilinearStencil s = trilinear_stencil(smoothed.grid, p);
        if (s.count == 0) continue;
        double fhat = 0.0;
        for (int c = 0; c < s.count; ++c) fhat += s.weight[c] * smoothed.grid[s.index[c]];
        const double d_density = transfer_grad(fhat, model.transfer).d_density;
        if (d_density == 0.0) continue;
        const double g = upstream * (t1 - t0) * d_density;
        for (int c = 0; c < s.count; ++c) (*local)[s.index[c]] += g * s.weight[c];
      }
    }
    partial_loss[static_cast<std::size_t>(tid)] = loss_acc;
  }

  double loss = 0.0;
  for (double l : partial_loss) loss += l;
  loss *= norm_factor;
  if (gradient != nullptr) {
    std::vector<double> d_fhat(grid.size(), 0.0);
    for (const auto& part : partial_grad) {
      if (part.empty()) continue;
      for (std::size_t i = 0; i < d_fhat.size(); ++i) d_fhat[i] += part[i];
    }
    *gradient = smooth_adjoint(d_fhat, grid, model.smoothing);
  }
  return loss;
}

VoxelGrid descend(const VoxelGrid& grid, const std::vector<double>& gradient, double step) {
  std::vector<double> next(grid.size());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::clamp(grid[i] - step * gradient[i], 0.0, 1.0);
  return grid.with_values(std::move(next), FieldKind::kOccupancy);
}

void check_loss(double loss, int iteration) {
  if (!std::isfinite(loss)) {
    fail(ErrorCategory::kNumeric, "fit diverged: loss is " + std::to_string(loss) + " at iteration " +
                                      std::to_string(iteration) + "; lower --lr");
  }
}

}  // namespace

LossAndGrad loss_and_grad(const VoxelGrid& grid, std::span<const View> views, std::span<const RayRef> batch,
                          const ForwardModel& model) {
  LossAndGrad out;
  out.loss = evaluate(grid, views, batch, model, &out.gradient);
  return out;
}

LossAndGrad loss_and_grad(const VoxelGrid& grid, std::span<const View> views, const ForwardModel& model) {
  const std::vector<RayRef> rays = all_rays(views);
  return loss_and_grad(grid, views, rays, model);
}

double batch_loss(const VoxelGrid& grid, std::span<const View> views, std::span<const RayRef> batch,
                  const ForwardModel& model) {
  return evaluate(grid, views, batch, model, nullptr);
}

void validate(const FitConfig& cfg) {
  require(cfg.iterations >= 1, "iterations must be >= 1");
  require(std::isfinite(cfg.learning_rate) && cfg.learning_rate > 0.0, "learning rate must be positive");
  require(cfg.batch_rays >= 1, "batch size must be >= 1");
}

RenderedImage render_model(const VoxelGrid& grid, const Camera& camera, const ForwardModel& model) {
  return render_occupancy(camera, grid, model.smoothing, model.transfer, model.render);
}

FitResult fit(const VoxelGrid& initial, std::span<const View> views, std::span<const View> held_out,
              const ForwardModel& model, const FitConfig& cfg) {
  validate(cfg);
  check_views(initial, views);
  const auto started = std::chrono::steady_clock::now();

  const std::vector<RayRef> rays = all_rays(views);
  const bool full_batch = static_cast<std::size_t>(cfg.batch_rays) >= rays.size();
  std::mt19937_64 engine(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, rays.size() - 1);
  std::vector<RayRef> batch = full_batch ? rays : std::vector<RayRef>(static_cast<std::size_t>(cfg.batch_rays));

  VoxelGrid grid = initial;
  VoxelGrid best = initial;
  FitReport report;
  report.best_loss = std::numeric_limits<double>::infinity();
  double lr = cfg.learning_rate;

  for (int it = 0; it < cfg.iterations; ++it) {
    if (!full_batch) {
      for (RayRef& r : batch) r = rays[pick(engine)];
    }
    const LossAndGrad lg = loss_and_grad(grid, views, batch, model);
    check_loss(lg.loss, it);
    report.loss_trace.push_back(lg.loss);
    if (lg.loss < report.best_loss) {
      report.best_loss = lg.loss;
      best = grid;
    }

    if (!cfg.line_search) {
      grid = descend(grid, lg.gradient, lr);
      report.step_sizes.push_back(lr);
      continue;
    }
    double accepted = 0.0;
    double trial = lr;
    for (int attempt = 0; attempt < 40; ++attempt, trial *= 0.5) {
      VoxelGrid candidate = descend(grid, lg.gradient, trial);
      const double candidate_loss = batch_loss(candidate, views, batch, model);
      if (std::isfinite(candidate_loss) && candidate_loss <= lg.loss) {
        grid = std::move(candidate);
        accepted = trial;
        if (candidate_loss < report.best_loss) {
          report.best_loss = candidate_loss;
          best = grid;
        }
        break;
      }
    }
    report.step_sizes.push_back(accepted);
    lr = accepted > 0.0 ? 1.5 * accepted : trial;
  }
  if (!cfg.line_search) {
    const double final_loss = batch_loss(grid, views, batch, model);
    check_loss(final_loss, cfg.iterations);
    if (final_loss < report.best_loss) {
      report.best_loss = final_loss;
      best = grid;
    }
  }

  const std::span<const View> eval_views = held_out.empty() ? views : held_out;
  double psnr_sum = 0.0;
  for (const View& v : eval_views) {
    psnr_sum += psnr(render_model(best, v.camera, model).color_image(), v.target).db;
  }
  report.final_psnr = psnr_sum / static_cast<double>(eval_views.size());
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(best), std::move(report)};
}

}  // namespace wsdf
