#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "gcm/model.hpp"
#include "gcm/operators.hpp"

namespace gcm {

/// Reflection parity under g -> -g: cos(3 m g) (even) or sin(3 m g) (odd).
enum class Parity { even, odd };

/// 2D oscillator state: radial nodes n, angular index m (physical angular
/// momentum 3m because of the 2pi/3 symmetry). Odd states need m >= 1.
struct BasisState2D {
  int n;
  int m;
  Parity parity;

  int mu() const { return 3 * m; }
  int shell() const { return 2 * n + 3 * m; }
  bool operator==(const BasisState2D&) const = default;
};

struct Basis2D {
  std::vector<BasisState2D> states;  // ordered by (2n+3m, m, n)
  int n_max = 0;
  double b = 1.0;
  Parity parity = Parity::even;

  std::size_t size() const { return states.size(); }
};

/// All states with 2n + 3m <= n_max. Throws std::invalid_argument for
/// n_max < 0 or b <= 0.
Basis2D enumerate_basis_2d(int n_max, Parity parity, double b);

/// integral_0^inf R_{n,mu} beta^k R_{n',mu'} beta dbeta for orthonormal 2D
/// oscillator radial functions of length b.
double radial_moment_2d(int n, int mu, int n_prime, int mu_prime, int k, double b);

/// <chi_m| cos3g |chi_m'> for the normalized angular functions of the given
/// parity; nonzero only for |m - m'| = 1.
double angular_coupling_2d(int m, int m_prime, Parity parity);

/// Dense symmetric matrix of the requested operator. The kinetic energy is
/// -hbar^2/(2K) times the polar Laplacian, evaluated through the oscillator
/// identity T = H_osc - K omega^2 beta^2 / 2.
Eigen::MatrixXd assemble_matrix_2d(const ModelParams& p, const Basis2D& basis, Operator op,
                                   int workers = 0);

}  // namespace gcm
