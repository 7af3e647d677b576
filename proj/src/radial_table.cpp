#include "radial_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gcm/parallel.hpp"

namespace gcm::detail {

RadialTable::RadialTable(const std::vector<RadialState>& states, int max_power, double b)
    : states_(states), max_power_(max_power), b_(b) {
  double top = 0.0;
  for (const auto& s : states_) top = std::max(top, 2.0 * s.n + s.nu);
  n_nodes_ = static_cast<int>(std::ceil(top + 0.5 * max_power_)) + 2;

  // Group states by Laguerre index so one recurrence serves all n.
  std::map<double, int> max_n;
  for (const auto& s : states_) max_n[s.nu] = std::max(max_n[s.nu], s.n);

  auto build = [&](Grid& g, double alpha) {
    g.rule = laguerre_rule(n_nodes_, alpha);
    const auto nn = static_cast<Eigen::Index>(g.rule.size());
    g.values.resize(nn, static_cast<Eigen::Index>(states_.size()));
    std::map<double, std::vector<double>> buffers;
    for (const auto& [nu, nmax] : max_n) buffers[nu].resize(nmax + 1);
    for (Eigen::Index j = 0; j < nn; ++j) {
      const double t = g.rule.nodes[j];
      const double sw = std::sqrt(g.rule.weights[j]);
      for (auto& [nu, buf] : buffers) laguerre_functions(nu, t, buf);
      for (std::size_t s = 0; s < states_.size(); ++s) {
        g.values(j, static_cast<Eigen::Index>(s)) = sw * buffers[states_[s].nu][states_[s].n];
      }
    }
    g.t_powers.resize(max_power_ + 1);
    for (int k = 0; k <= max_power_; ++k) {
      g.t_powers[k].resize(nn);
      for (Eigen::Index j = 0; j < nn; ++j) g.t_powers[k][j] = std::pow(g.rule.nodes[j], 0.5 * k);
    }
  };
  build(integer_, 0.0);
  build(half_, 0.5);
}

const RadialTable::Grid& RadialTable::grid_for(std::size_t a, std::size_t c, int k) const {
  const double s = 0.5 * (states_[a].nu + states_[c].nu + k);
  return (s - std::floor(s) == 0.0) ? integer_ : half_;
}

double RadialTable::moment(std::size_t a, std::size_t c, int k) const {
  const Grid& g = grid_for(a, c, k);
  const auto ia = static_cast<Eigen::Index>(a);
  const auto ic = static_cast<Eigen::Index>(c);
  const double sum =
      (g.values.col(ia).array() * g.values.col(ic).array() * g.t_powers[k].array()).sum();
  return std::pow(b_, k) * sum;
}

Eigen::MatrixXd assemble(const ModelParams& p, double b, const BasisLayout& layout, Operator op,
                         int workers) {
  p.validate();
  const std::size_t d = layout.radial.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  if (op == Operator::L2) {
    for (std::size_t a = 0; a < d; ++a) m(a, a) = p.hbar * p.hbar * layout.l2_diagonal[a];
    return m;
  }

  const RadialTable table(layout.radial, 4, b);
  const double hbar_omega = p.hbar * p.hbar / (p.K * b * b);
  const double quad_coeff = p.A - p.hbar * p.hbar / (2.0 * p.K * b * b * b * b);
  const bool want_h0 = op == Operator::H0 || op == Operator::H;
  const bool want_hp = op == Operator::Hprime || op == Operator::H;
  const double hp_scale = (op == Operator::H) ? p.B : 1.0;

  parallel_for(d, workers, [&](std::size_t a) {
    for (std::size_t c = a; c < d; ++c) {
      double value = 0.0;
      if (want_h0 && layout.angular[a] == layout.angular[c]) {
        double h0 = quad_coeff * table.moment(a, c, 2) + p.C * table.moment(a, c, 4);
        if (a == c) h0 += hbar_omega * layout.osc_quanta[a];
        value += h0;
      }
      if (want_hp) {
        const double ang = layout.angular_coupling(layout.angular[a], layout.angular[c]);
        if (ang != 0.0) value += hp_scale * ang * table.moment(a, c, 3);
      }
      m(a, c) = value;
    }
  });
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = a + 1; c < d; ++c) m(c, a) = m(a, c);

  if (!m.allFinite()) throw NumericalError("assembled matrix has non-finite entries");
  return m;
}

}  // namespace gcm::detail
