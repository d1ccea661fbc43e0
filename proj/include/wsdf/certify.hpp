#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsdf/grid.hpp"
#include "wsdf/smoothing.hpp"

namespace wsdf {

// Probabilities are clamped to [eps_p, 1 - eps_p] before Phi^{-1}, which caps
// |SDF| at sigma * Phi^{-1}(1 - eps_p) (about 4.75 sigma for 1e-6).
inline constexpr double kDefaultProbabilityClamp = 1e-6;

// Signed certified radius per voxel, world units, positive inside occupied space.
struct WeakSdfGrid {
  VoxelGrid grid;  // FieldKind::kWeakSdf
  double sigma_world = 0.0;
  double eps_p = kDefaultProbabilityClamp;
  // False when the smoothed grid came from soft (non-binary) occupancy:
  // the values are then a heuristic distance, not a certified radius.
  bool certified = false;
};

// sigma * Phi^{-1}(clamp(fhat, eps_p, 1 - eps_p)).
double weak_sdf_value(double fhat, double sigma_world, double eps_p = kDefaultProbabilityClamp);

// Largest |value| weak_sdf can produce.
double weak_sdf_ceiling(double sigma_world, double eps_p = kDefaultProbabilityClamp);

// Requires 0 < eps_p < 0.5.
WeakSdfGrid weak_sdf(const SmoothedGrid& smoothed, double eps_p = kDefaultProbabilityClamp);

struct McOptions {
  std::int64_t n = 100000;
  double alpha_conf = 1e-3;  // one-sided; confidence is 1 - alpha_conf
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // independent substream for the same seed
  double eps_p = kDefaultProbabilityClamp;
};

struct McCertificate {
  WorldPoint point;
  std::int64_t n_samples = 0;
  int top_class = 0;
  double p_hat = 0.0;    // frequency of top_class
  double p_lower = 0.0;  // Hoeffding lower bound on P(top_class)
  // Signed by class (+ occupied, - empty); 0 when abstaining.
  double radius_lower = 0.0;
  // Signed sigma * Phi^{-1}(clamp(p_hat)): the closed-form radius at the point estimate.
  double radius_hat = 0.0;
  double confidence = 0.0;
  bool abstain = false;  // p_lower <= 1/2
};

// Randomized-smoothing certificate of the hard classifier at p from n
// Gaussian draws. Deterministic for a fixed (seed, stream).
McCertificate certify_monte_carlo(const VoxelGrid& grid, const WorldPoint& p, double sigma_world,
                                  const McOptions& options = {});

// Fraction of n draws with hard_classify(grid, p + eps) == 1.
double monte_carlo_occupancy(const VoxelGrid& grid, const WorldPoint& p, double sigma_world, std::int64_t n,
                             std::uint64_t seed, std::uint64_t stream);

struct ProbeAgreement {
  WorldPoint point;
  double fhat = 0.0;            // trilinear sample of the smoothed grid
  double p_hat = 0.0;           // Monte-Carlo P(hard class = 1)
  double deviation = 0.0;       // |fhat - p_hat|
  double standard_error = 0.0;  // binomial, evaluated at fhat
  bool flagged = false;         // deviation > 4 standard errors
};

struct ConvolutionCheck {
  std::vector<ProbeAgreement> probes;
  double max_deviation = 0.0;
  double max_z = 0.0;  // largest deviation / standard_error
  int flags = 0;
};

inline constexpr double kAgreementSigmas = 4.0;

// Binomial standard error at probability p for n draws. p is floored to
// [1/n, 1 - 1/n] so that a single stray draw is not an infinite-z event.
double binomial_standard_error(double p, std::int64_t n);

// Compares the convolved grid against direct sampling of the hard
// classifier at every probe. Requires a binary grid. Probe i uses
// substream i of `seed`.
ConvolutionCheck validate_convolution_vs_mc(const VoxelGrid& grid, const SmoothingConfig& cfg,
                                            std::span<const WorldPoint> probes, std::int64_t n, std::uint64_t seed);

}  // namespace wsdf
