#pragma once

// Shared matrix-assembly machinery for the oscillator bases.

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "gcm/model.hpp"
#include "gcm/operators.hpp"
#include "gcm/quadrature.hpp"

namespace gcm::detail {

struct RadialState {
  int n;
  double nu;  // Laguerre index
};

/// Tabulates sqrt(W_j) phi_n^nu(t_j) for every basis state on one Gauss-Laguerre
/// rule per fractional weight exponent (0 and 1/2), so that any beta^k moment
/// with k <= max_power is a single dot product and exact.
class RadialTable {
 public:
  RadialTable(const std::vector<RadialState>& states, int max_power, double b);

  /// <a| beta^k |c>
  double moment(std::size_t a, std::size_t c, int k) const;

  int nodes() const { return n_nodes_; }

 private:
  struct Grid {
    LaguerreRule rule;
    Eigen::MatrixXd values;                  // node x state
    std::vector<Eigen::VectorXd> t_powers;  // t^{k/2}, k = 0..max_power
  };
  const Grid& grid_for(std::size_t a, std::size_t c, int k) const;

  std::vector<RadialState> states_;
  int max_power_;
  double b_;
  int n_nodes_;
  Grid integer_;
  Grid half_;
};

/// Description of an oscillator basis, independent of dimension.
struct BasisLayout {
  std::vector<RadialState> radial;
  std::vector<int> angular;          // angular label (m or l)
  std::vector<double> osc_quanta;    // E_osc / (hbar omega)
  std::vector<double> l2_diagonal;   // exact L^2 eigenvalue / hbar^2
  std::function<double(int, int)> angular_coupling;  // <a|cos3g|c>
};

Eigen::MatrixXd assemble(const ModelParams& p, double b, const BasisLayout& layout, Operator op,
                         int workers);

}  // namespace gcm::detail
