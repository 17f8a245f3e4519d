#pragma once

namespace multimin {

// Standard normal density φ(x).
double norm_pdf(double x);

// Standard normal CDF Φ(x), computed via erfc for accurate tails.
double norm_cdf(double x);

// Standard normal quantile Φ⁻¹(p), p ∈ (0,1). Wichura's AS 241 (PPND16),
// full double precision. Returns ±inf at p = 0 or 1.
double norm_quantile(double p);

}  // namespace multimin
