#pragma once

namespace wsdf {

// Maps smoothed occupancy f_hat to a soft hard-occupancy G and to a
// rendering density g:
//   G(f)       = sigmoid(alpha * (f - 1/2))
//   density(f) = max(0, -density_scale * ln(1 + eps_d - G(f)))
struct TransferConfig {
  double alpha = 19.0;
  double density_scale = 30.0;
  double eps_d = 1e-3;
};

// alpha > 0, density_scale > 0, 0 < eps_d < 1, all finite.
void validate(const TransferConfig& cfg);

double occupancy_soft(double fhat, const TransferConfig& cfg = {});

// Nonnegative; the unclamped formula dips slightly below 0 where G < eps_d.
double density(double fhat, const TransferConfig& cfg = {});

// Upper bound of density(), reached as G -> 1.
double max_density(const TransferConfig& cfg = {});

struct TransferGradient {
  double d_occupancy = 0.0;  // dG/dfhat
  double d_density = 0.0;    // d density/dfhat; 0 where the clamp is active
};

TransferGradient transfer_grad(double fhat, const TransferConfig& cfg = {});

}  // namespace wsdf
