#pragma once

#include <span>
#include <vector>

namespace gcm {

/// Generalized Gauss-Laguerre rule stored with "function weights": for the
/// returned nodes t_j and weights W_j,
///
///     integral_0^inf f(t) dt  ~=  sum_j W_j f(t_j),
///
/// exact whenever f(t) = t^alpha e^{-t} q(t) with deg q <= 2 N - 1. Storing
/// W_j = w_j e^{t_j} t_j^{-alpha} directly keeps large nodes representable.
struct LaguerreRule {
  double alpha = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// N-point rule for the weight t^alpha e^{-t}; alpha > -1, N >= 1.
LaguerreRule laguerre_rule(int n_nodes, double alpha);

/// Orthonormal Laguerre functions
///
///     phi_k(t) = sqrt(k! / Gamma(k + alpha + 1)) t^{alpha/2} e^{-t/2} L_k^alpha(t),
///
/// for k = 0..out.size()-1, written into out. These are bounded and satisfy
/// integral_0^inf phi_k phi_l dt = delta_kl.
void laguerre_functions(double alpha, double t, std::span<double> out);

/// Convenience overload returning phi_0..phi_kmax.
std::vector<double> laguerre_functions(int kmax, double alpha, double t);

/// b^k integral_0^inf phi_n^{nu}(t) phi_m^{nu'}(t) t^{k/2} dt.
///
/// With t = beta^2/b^2 this is the matrix element of beta^k between
/// oscillator radial functions of Laguerre indices nu and nu' in any
/// dimension (the dimension only enters through nu). The rule is chosen so
/// that the polynomial part of the integrand is integrated exactly.
/// Throws std::invalid_argument for k < 0.
double laguerre_moment(int n, double nu, int m, double nu_prime, int k, double b);

/// Node count used by laguerre_moment: ceil(n + m + (nu + nu' + k)/2) + 2.
int laguerre_moment_nodes(int n, double nu, int m, double nu_prime, int k);

}  // namespace gcm
