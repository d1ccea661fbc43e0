#include "wsdf/certify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wsdf/error.hpp"
#include "wsdf/normal.hpp"

namespace wsdf {

namespace {

void check_eps(double eps_p) { require(eps_p > 0.0 && eps_p < 0.5, "probability clamp eps_p must be in (0, 0.5)"); }

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::int64_t count_occupied(const VoxelGrid& grid, const WorldPoint& p, double sigma, std::int64_t n,
                            std::uint64_t seed, std::uint64_t stream) {
  std::mt19937_64 engine = make_engine(seed, stream);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < n; ++s) {
    const double dx = gauss(engine);
    const double dy = gauss(engine);
    const double dz = gauss(engine);
    hits += hard_classify(grid, {p.x + dx, p.y + dy, p.z + dz});
  }
  return hits;
}

}  // namespace

double weak_sdf_value(double fhat, double sigma_world, double eps_p) {
  return sigma_world * inverse_normal_cdf(std::clamp(fhat, eps_p, 1.0 - eps_p));
}

double weak_sdf_ceiling(double sigma_world, double eps_p) {
  return sigma_world * inverse_normal_cdf(1.0 - eps_p);
}

WeakSdfGrid weak_sdf(const SmoothedGrid& smoothed, double eps_p) {
  check_eps(eps_p);
  validate(smoothed.config);
  const VoxelGrid& f = smoothed.grid;
  const double sigma = smoothed.config.sigma_world;
  std::vector<double> out(f.size());
  const auto n = static_cast<std::int64_t>(f.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double fhat = f[static_cast<std::size_t>(i)];
    // Exactly 1/2 maps to 0 without going through the clamp/inverse.
    out[static_cast<std::size_t>(i)] = fhat == 0.5 ? 0.0 : weak_sdf_value(fhat, sigma, eps_p);
  }
  return {f.with_values(std::move(out), FieldKind::kWeakSdf), sigma, eps_p, smoothed.source_binary};
}

double monte_carlo_occupancy(const VoxelGrid& grid, const WorldPoint& p, double sigma_world, std::int64_t n,
                             std::uint64_t seed, std::uint64_t stream) {
  require(n >= 1, "sample count must be positive");
  require(std::isfinite(sigma_world) && sigma_world > 0.0, "sigma must be positive");
  return static_cast<double>(count_occupied(grid, p, sigma_world, n, seed, stream)) / static_cast<double>(n);
}

McCertificate certify_monte_carlo(const VoxelGrid& grid, const WorldPoint& p, double sigma_world,
                                  const McOptions& options) {
  require(options.n >= 100, "certify_monte_carlo needs n >= 100 samples");
  require(options.alpha_conf > 0.0 && options.alpha_conf < 1.0, "alpha_conf must be in (0, 1)");
  require(std::isfinite(sigma_world) && sigma_world > 0.0, "sigma must be positive");
  require(is_finite(p), "probe point must be finite");
  check_eps(options.eps_p);

  const std::int64_t hits = count_occupied(grid, p, sigma_world, options.n, options.seed, options.stream);
  const auto n = static_cast<double>(options.n);

  McCertificate cert;
  cert.point = p;
  cert.n_samples = options.n;
  cert.top_class = 2 * hits >= options.n ? 1 : 0;
  const std::int64_t top = cert.top_class == 1 ? hits : options.n - hits;
  cert.p_hat = static_cast<double>(top) / n;
  cert.p_lower = std::max(0.0, cert.p_hat - std::sqrt(std::log(1.0 / options.alpha_conf) / (2.0 * n)));
  cert.confidence = 1.0 - options.alpha_conf;
  const double sign = cert.top_class == 1 ? 1.0 : -1.0;
  cert.radius_hat = sign * weak_sdf_value(cert.p_hat, sigma_world, options.eps_p);
  if (cert.p_lower <= 0.5) {
    cert.abstain = true;
    cert.radius_lower = 0.0;
  } else {
    cert.radius_lower = sign * weak_sdf_value(cert.p_lower, sigma_world, options.eps_p);
  }
  return cert;
}

double binomial_standard_error(double p, std::int64_t n) {
  const double nn = static_cast<double>(n);
  const double q = std::clamp(p, 1.0 / nn, 1.0 - 1.0 / nn);
  return std::sqrt(q * (1.0 - q) / nn);
}

ConvolutionCheck validate_convolution_vs_mc(const VoxelGrid& grid, const SmoothingConfig& cfg,
                                            std::span<const WorldPoint> probes, std::int64_t n, std::uint64_t seed) {
  require(grid.is_binary(), "convolution/Monte-Carlo validation needs a binarized grid");
  require(n >= 1, "sample count must be positive");
  const SmoothedGrid smoothed = smooth(grid, cfg);

  ConvolutionCheck report;
  report.probes.resize(probes.size());
  const auto count = static_cast<std::int64_t>(probes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    ProbeAgreement& r = report.probes[static_cast<std::size_t>(i)];
    r.point = probes[static_cast<std::size_t>(i)];
    r.fhat = sample_trilinear(smoothed.grid, r.point);
    r.p_hat = monte_carlo_occupancy(grid, r.point, cfg.sigma_world, n, seed, static_cast<std::uint64_t>(i));
    r.deviation = std::abs(r.fhat - r.p_hat);
    r.standard_error = binomial_standard_error(r.fhat, n);
    r.flagged = r.deviation > kAgreementSigmas * r.standard_error;
  }
  for (const ProbeAgreement& r : report.probes) {
    report.max_deviation = std::max(report.max_deviation, r.deviation);
    report.max_z = std::max(report.max_z, r.deviation / r.standard_error);
    report.flags += r.flagged ? 1 : 0;
  }
  return report;
}

}  // namespace wsdf
