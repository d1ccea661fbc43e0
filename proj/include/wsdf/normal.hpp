#pragma once

namespace wsdf {

// Standard normal density and CDF.
double normal_pdf(double z);
double normal_cdf(double z);

// Phi^{-1}(p) for p in (0, 1): Acklam's rational approximation followed by
// one Halley step on Phi, accurate to ~1e-15 absolute over [1e-12, 1-1e-12].
// Throws Error(kDomain) outside (0, 1).
double inverse_normal_cdf(double p);

}  // namespace wsdf
