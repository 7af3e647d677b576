#include "gcm/quant2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gcm/quadrature.hpp"
#include "radial_table.hpp"

namespace gcm {

Basis2D enumerate_basis_2d(int n_max, Parity parity, double b) {
  if (n_max < 0) throw std::invalid_argument("enumerate_basis_2d: n_max must be >= 0");
  if (!(b > 0.0)) throw std::invalid_argument("enumerate_basis_2d: b must be positive");
  Basis2D basis;
  basis.n_max = n_max;
  basis.b = b;
  basis.parity = parity;
  const int m_min = (parity == Parity::odd) ? 1 : 0;
  for (int m = m_min; 3 * m <= n_max; ++m)
    for (int n = 0; 2 * n + 3 * m <= n_max; ++n) basis.states.push_back({n, m, parity});
  std::sort(basis.states.begin(), basis.states.end(), [](const auto& a, const auto& c) {
    if (a.shell() != c.shell()) return a.shell() < c.shell();
    if (a.m != c.m) return a.m < c.m;
    return a.n < c.n;
  });
  return basis;
}

double radial_moment_2d(int n, int mu, int n_prime, int mu_prime, int k, double b) {
  return laguerre_moment(n, mu, n_prime, mu_prime, k, b);
}

double angular_coupling_2d(int m, int m_prime, Parity parity) {
  if (m < 0 || m_prime < 0) throw std::invalid_argument("angular index must be >= 0");
  if (parity == Parity::odd && (m == 0 || m_prime == 0)) {
    throw std::invalid_argument("odd-parity angular functions need m >= 1");
  }
  if (std::abs(m - m_prime) != 1) return 0.0;
  // cos(3g) cos(3mg) = [cos(3(m+1)g) + cos(3(m-1)g)] / 2; the m = 0 function
  // carries 1/sqrt(2 pi) instead of 1/sqrt(pi).
  if (std::min(m, m_prime) == 0) return std::numbers::sqrt2 / 2.0;
  return 0.5;
}

Eigen::MatrixXd assemble_matrix_2d(const ModelParams& p, const Basis2D& basis, Operator op,
                                   int workers) {
  if (basis.states.empty()) throw std::invalid_argument("assemble_matrix_2d: empty basis");
  detail::BasisLayout layout;
  for (const auto& s : basis.states) {
    layout.radial.push_back({s.n, static_cast<double>(s.mu())});
    layout.angular.push_back(s.m);
    layout.osc_quanta.push_back(2.0 * s.n + s.mu() + 1.0);
    layout.l2_diagonal.push_back(static_cast<double>(s.mu()) * s.mu());
  }
  const Parity parity = basis.parity;
  layout.angular_coupling = [parity](int a, int c) { return angular_coupling_2d(a, c, parity); };
  return detail::assemble(p, basis.b, layout, op, workers);
}

}  // namespace gcm
