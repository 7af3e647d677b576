#pragma once

#include <utility>
#include <vector>

namespace gcm {

struct SpacingSample {
  std::vector<double> spacings;  // unfolded, mean 1; zero for degenerate pairs
  double e_lo = 0.0;
  double e_hi = 0.0;
  int count = 0;  // levels in the window

  double mean() const;
};

/// Fits the cumulative level count inside [window.first, window.second] by a
/// polynomial of the given degree and returns the mean-normalized spacings of
/// the mapped levels. Throws std::invalid_argument with fewer than 50 levels.
SpacingSample unfold(const std::vector<double>& energies, std::pair<double, double> window,
                     int poly_degree = 7);

/// Wraps raw spacings (rescaled to unit mean) for brody_fit.
SpacingSample spacing_sample(std::vector<double> spacings);

/// P(s) = (w + 1) a s^w exp(-a s^(w+1)), a = Gamma((w + 2)/(w + 1))^(w + 1)
double brody_density(double s, double omega);

struct BrodyFit {
  double omega;      // clipped to [0, 1]
  double omega_raw;  // maximizer over the search interval
  double ci_lo;
  double ci_hi;      // 95% interval from the observed information
  int n;             // spacings used
  int n_zero;        // zero spacings dropped
  bool clipped;
};

/// Maximum-likelihood Brody parameter. Throws std::invalid_argument for fewer
/// than 50 positive spacings and std::runtime_error when all spacings are equal.
BrodyFit brody_fit(const SpacingSample& sample);

}  // namespace gcm
