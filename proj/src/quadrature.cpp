#include "gcm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gcm/model.hpp"

namespace gcm {

namespace {

/// Scaled values of phi_{N-1}, phi_N at t (shared by Newton polishing).
std::pair<double, double> top_two(int n, double alpha, double t) {
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  laguerre_functions(alpha, t, buf);
  return {buf[n - 1], buf[n]};
}

}  // namespace

void laguerre_functions(double alpha, double t, std::span<double> out) {
  if (out.empty()) return;
  double phi0;
  if (t == 0.0) {
    phi0 = (alpha == 0.0) ? 1.0 : 0.0;
  } else {
    phi0 = std::exp(0.5 * alpha * std::log(t) - 0.5 * t - 0.5 * std::lgamma(alpha + 1.0));
  }
  out[0] = phi0;
  if (out.size() == 1) return;
  double prev = 0.0;
  double cur = phi0;
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double next = ((2.0 * kk + alpha + 1.0 - t) * cur - std::sqrt(kk * (kk + alpha)) * prev) /
                        std::sqrt((kk + 1.0) * (kk + alpha + 1.0));
    out[k + 1] = next;
    prev = cur;
    cur = next;
  }
}

std::vector<double> laguerre_functions(int kmax, double alpha, double t) {
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
  laguerre_functions(alpha, t, out);
  return out;
}

LaguerreRule laguerre_rule(int n_nodes, double alpha) {
  if (n_nodes < 1) throw std::invalid_argument("laguerre_rule: need at least one node");
  if (!(alpha > -1.0)) throw std::invalid_argument("laguerre_rule: alpha must exceed -1");

  // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix.
  Eigen::VectorXd diag(n_nodes);
  Eigen::VectorXd sub(std::max(n_nodes - 1, 0));
  for (int k = 0; k < n_nodes; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n_nodes; ++k) sub[k - 1] = std::sqrt(k * (k + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("laguerre_rule: Jacobi eigenproblem failed");

  LaguerreRule rule;
  rule.alpha = alpha;
  rule.nodes.resize(n_nodes);
  rule.weights.resize(n_nodes);
  std::vector<double> phi(n_nodes + 1);
  for (int j = 0; j < n_nodes; ++j) {
    double t = eig.eigenvalues()[j];
    // Newton polish on phi_N: t phi_N' = N phi_N - sqrt(N (N + alpha)) phi_{N-1}
    // holds for the polynomial parts, and the scaling cancels in the ratio.
    for (int it = 0; it < 3; ++it) {
      const auto [pm1, pn] = top_two(n_nodes, alpha, t);
      const double dp = (n_nodes * pn - std::sqrt(n_nodes * (n_nodes + alpha)) * pm1) / t;
      if (dp == 0.0 || !std::isfinite(dp)) break;
      const double step = pn / dp;
      if (!std::isfinite(step) || std::abs(step) > 1e-6 * std::max(1.0, t)) break;
      t -= step;
    }
    laguerre_functions(alpha, t, std::span<double>(phi.data(), n_nodes));
    double sum = 0.0;
    for (int k = 0; k < n_nodes; ++k) sum += phi[k] * phi[k];
    rule.nodes[j] = t;
    rule.weights[j] = 1.0 / sum;
  }
  return rule;
}

int laguerre_moment_nodes(int n, double nu, int m, double nu_prime, int k) {
  return static_cast<int>(std::ceil(n + m + 0.5 * (nu + nu_prime + k))) + 2;
}

double laguerre_moment(int n, double nu, int m, double nu_prime, int k, double b) {
  if (k < 0) throw std::invalid_argument("radial moment: negative power");
  if (n < 0 || m < 0) throw std::invalid_argument("radial moment: negative node count");
  const double s = 0.5 * (nu + nu_prime + k);
  const double alpha = s - std::floor(s);
  const LaguerreRule rule = laguerre_rule(laguerre_moment_nodes(n, nu, m, nu_prime, k), alpha);
  std::vector<double> f1(n + 1), f2(m + 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double t = rule.nodes[j];
    laguerre_functions(nu, t, f1);
    laguerre_functions(nu_prime, t, f2);
    sum += rule.weights[j] * f1[n] * f2[m] * std::pow(t, 0.5 * k);
  }
  return std::pow(b, k) * sum;
}

}  // namespace gcm
