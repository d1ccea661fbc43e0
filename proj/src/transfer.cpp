#include "wsdf/transfer.hpp"

#include <cmath>

#include "wsdf/error.hpp"

namespace wsdf {

void validate(const TransferConfig& cfg) {
  require(std::isfinite(cfg.alpha) && cfg.alpha > 0.0, "sigmoid alpha must be positive");
  require(std::isfinite(cfg.density_scale) && cfg.density_scale > 0.0, "density_scale must be positive");
  require(std::isfinite(cfg.eps_d) && cfg.eps_d > 0.0 && cfg.eps_d < 1.0, "eps_d must be in (0, 1)");
}

double occupancy_soft(double fhat, const TransferConfig& cfg) {
  const double x = cfg.alpha * (fhat - 0.5);
  // Evaluate on the side where exp() cannot overflow.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double density(double fhat, const TransferConfig& cfg) {
  const double g = occupancy_soft(fhat, cfg);
  const double raw = -cfg.density_scale * std::log1p(cfg.eps_d - g);
  return raw > 0.0 ? raw : 0.0;
}

double max_density(const TransferConfig& cfg) { return -cfg.density_scale * std::log(cfg.eps_d); }

TransferGradient transfer_grad(double fhat, const TransferConfig& cfg) {
  const double g = occupancy_soft(fhat, cfg);
  TransferGradient out;
  out.d_occupancy = cfg.alpha * g * (1.0 - g);
  const double raw = -cfg.density_scale * std::log1p(cfg.eps_d - g);
  out.d_density = raw > 0.0 ? cfg.density_scale * out.d_occupancy / (1.0 + cfg.eps_d - g) : 0.0;
  return out;
}

}  // namespace wsdf
