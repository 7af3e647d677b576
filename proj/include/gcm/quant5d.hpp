#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "gcm/model.hpp"
#include "gcm/operators.hpp"

namespace gcm {

/// J = 0 state of the 5D oscillator: radial nodes n and seniority v = 3l.
struct BasisState5D {
  int n;
  int v;

  int l() const { return v / 3; }
  int shell() const { return 2 * n + v; }
  bool operator==(const BasisState5D&) const = default;
};

struct Basis5D {
  std::vector<BasisState5D> states;  // ordered by (2n+v, v, n)
  int n_max = 0;
  double b = 1.0;

  std::size_t size() const { return states.size(); }
};

Basis5D enumerate_basis_5d(int n_max, double b);

/// integral_0^inf R_{n,v} beta^k R_{n',v'} beta^4 dbeta; the radial functions
/// carry generalized Laguerre polynomials of index v + 3/2.
double radial_moment_5d(int n, int v, int n_prime, int v_prime, int k, double b);

/// <P_l| u |P_l'> for Legendre polynomials in u = cos3g orthonormal on
/// [-1, 1]; nonzero only for |l - l'| = 1.
double legendre_coupling(int l, int l_prime);

/// Dense symmetric operator matrix in the 5D basis. L2 is diagonal with
/// hbar^2 v (v + 3); the kinetic part follows from the 5D oscillator identity.
Eigen::MatrixXd assemble_matrix_5d(const ModelParams& p, const Basis5D& basis, Operator op,
                                   int workers = 0);

}  // namespace gcm
