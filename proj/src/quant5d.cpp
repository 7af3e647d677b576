#include "gcm/quant5d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gcm/quadrature.hpp"
#include "radial_table.hpp"

namespace gcm {

Basis5D enumerate_basis_5d(int n_max, double b) {
  if (n_max < 0) throw std::invalid_argument("enumerate_basis_5d: n_max must be >= 0");
  if (!(b > 0.0)) throw std::invalid_argument("enumerate_basis_5d: b must be positive");
  Basis5D basis;
  basis.n_max = n_max;
  basis.b = b;
  for (int v = 0; v <= n_max; v += 3)
    for (int n = 0; 2 * n + v <= n_max; ++n) basis.states.push_back({n, v});
  std::sort(basis.states.begin(), basis.states.end(), [](const auto& a, const auto& c) {
    if (a.shell() != c.shell()) return a.shell() < c.shell();
    if (a.v != c.v) return a.v < c.v;
    return a.n < c.n;
  });
  return basis;
}

double radial_moment_5d(int n, int v, int n_prime, int v_prime, int k, double b) {
  return laguerre_moment(n, v + 1.5, n_prime, v_prime + 1.5, k, b);
}

double legendre_coupling(int l, int l_prime) {
  if (l < 0 || l_prime < 0) throw std::invalid_argument("legendre degree must be >= 0");
  if (std::abs(l - l_prime) != 1) return 0.0;
  const double lo = std::min(l, l_prime);
  return (lo + 1.0) / std::sqrt((2.0 * lo + 1.0) * (2.0 * lo + 3.0));
}

Eigen::MatrixXd assemble_matrix_5d(const ModelParams& p, const Basis5D& basis, Operator op,
                                   int workers) {
  if (basis.states.empty()) throw std::invalid_argument("assemble_matrix_5d: empty basis");
  detail::BasisLayout layout;
  for (const auto& s : basis.states) {
    layout.radial.push_back({s.n, s.v + 1.5});
    layout.angular.push_back(s.l());
    layout.osc_quanta.push_back(2.0 * s.n + s.v + 2.5);
    layout.l2_diagonal.push_back(static_cast<double>(s.v) * (s.v + 3));
  }
  layout.angular_coupling = [](int a, int c) { return legendre_coupling(a, c); };
  return detail::assemble(p, basis.b, layout, op, workers);
}

}  // namespace gcm
