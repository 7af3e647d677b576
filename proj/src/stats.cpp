#include "gcm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

namespace gcm {

namespace {

constexpr int kMinCount = 50;
constexpr double kZeroSpacing = 1e-8;
constexpr double kOmegaLo = -0.5;
constexpr double kOmegaHi = 1.5;

double log_likelihood(const std::vector<double>& logs, const std::vector<double>& s, double omega) {
  const double w1 = omega + 1.0;
  const double log_a = w1 * std::lgamma((omega + 2.0) / w1);
  const double a = std::exp(log_a);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum += std::log(w1) + log_a + omega * logs[i] - a * std::exp(w1 * logs[i]);
  }
  return sum;
}

}  // namespace

double SpacingSample::mean() const {
  if (spacings.empty()) return 0.0;
  return std::accumulate(spacings.begin(), spacings.end(), 0.0) / spacings.size();
}

SpacingSample unfold(const std::vector<double>& energies, std::pair<double, double> window,
                     int poly_degree) {
  if (poly_degree < 1) throw std::invalid_argument("unfold: polynomial degree must be >= 1");
  std::vector<double> e;
  for (double x : energies) {
    if (x >= window.first && x <= window.second) e.push_back(x);
  }
  std::sort(e.begin(), e.end());
  const int n = static_cast<int>(e.size());
  if (n < kMinCount) {
    throw std::invalid_argument("unfold: " + std::to_string(n) + " levels in window [" +
                                std::to_string(window.first) + ", " + std::to_string(window.second) +
                                "], need at least " + std::to_string(kMinCount));
  }
  const double mid = 0.5 * (window.first + window.second);
  const double half = 0.5 * (window.second - window.first);
  const int deg = std::min(poly_degree, n - 1);

  Eigen::MatrixXd vm(n, deg + 1);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const double u = (e[i] - mid) / half;
    double pw = 1.0;
    for (int k = 0; k <= deg; ++k) {
      vm(i, k) = pw;
      pw *= u;
    }
    rhs(i) = i + 0.5;  // staircase midpoint
  }
  const Eigen::VectorXd coef = vm.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd mapped = vm * coef;

  SpacingSample out;
  out.e_lo = window.first;
  out.e_hi = window.second;
  out.count = n;
  out.spacings.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    out.spacings[i] = (e[i + 1] == e[i]) ? 0.0 : mapped(i + 1) - mapped(i);
  }
  const double m = out.mean();
  if (!(m > 0.0)) throw std::runtime_error("unfold: non-positive mean spacing");
  for (double& s : out.spacings) s /= m;
  return out;
}

SpacingSample spacing_sample(std::vector<double> spacings) {
  SpacingSample out;
  out.spacings = std::move(spacings);
  out.count = static_cast<int>(out.spacings.size()) + 1;
  const double m = out.mean();
  if (!(m > 0.0)) throw std::invalid_argument("spacing_sample: non-positive mean");
  for (double& s : out.spacings) s /= m;
  return out;
}

double brody_density(double s, double omega) {
  if (s < 0.0) return 0.0;
  const double w1 = omega + 1.0;
  const double a = std::pow(std::tgamma((omega + 2.0) / w1), w1);
  return w1 * a * std::pow(s, omega) * std::exp(-a * std::pow(s, w1));
}

BrodyFit brody_fit(const SpacingSample& sample) {
  std::vector<double> s;
  int n_zero = 0;
  for (double x : sample.spacings) {
    if (x > kZeroSpacing) {
      s.push_back(x);
    } else {
      ++n_zero;
    }
  }
  const int n = static_cast<int>(s.size());
  if (n < kMinCount) {
    throw std::invalid_argument("brody_fit: " + std::to_string(n) + " positive spacings, need at least " +
                                std::to_string(kMinCount));
  }
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  if (*hi - *lo <= 1e-12 * *hi) throw std::runtime_error("brody_fit: degenerate sample (all spacings equal)");

  const double m = std::accumulate(s.begin(), s.end(), 0.0) / n;
  std::vector<double> logs(n);
  for (int i = 0; i < n; ++i) {
    s[i] /= m;
    logs[i] = std::log(s[i]);
  }

  auto neg = [&](double w) { return -log_likelihood(logs, s, w); };
  const auto [w_hat, f_hat] = boost::math::tools::brent_find_minima(neg, kOmegaLo, kOmegaHi, 52);

  const double d = 1e-4;
  const double curv = (neg(w_hat + d) - 2.0 * f_hat + neg(w_hat - d)) / (d * d);
  const double se = curv > 0.0 ? 1.0 / std::sqrt(curv) : std::numeric_limits<double>::infinity();

  BrodyFit fit;
  fit.omega_raw = w_hat;
  fit.omega = std::clamp(w_hat, 0.0, 1.0);
  fit.clipped = fit.omega != w_hat;
  fit.ci_lo = w_hat - 1.96 * se;
  fit.ci_hi = w_hat + 1.96 * se;
  fit.n = n;
  fit.n_zero = n_zero;
  return fit;
}

}  // namespace gcm
