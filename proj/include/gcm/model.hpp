#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcm {

/// Thrown when a numerical procedure cannot deliver a trustworthy result
/// (non-convergence, non-finite matrix entries, integrator underflow).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Potential V = A b^2 + B b^3 cos3g + C b^4 plus the quantum scale (hbar, K).
/// All quantities are dimensionless.
struct ModelParams {
  double A = -1.0;
  double B = 0.0;
  double C = 1.0;
  double hbar = 0.1;
  double K = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// kappa = hbar^2 / K
  double classicality() const { return hbar * hbar / K; }

  /// Same model with B -> -B.
  ModelParams reflected() const {
    ModelParams p = *this;
    p.B = -B;
    return p;
  }
};

double potential(const ModelParams& p, double beta, double gamma);

/// V in Cartesian form: A r^2 + B (x^3 - 3 x y^2) + C r^4.
double potential_cartesian(const ModelParams& p, double x, double y);

/// (dV/dx, dV/dy)
std::pair<double, double> gradient_cartesian(const ModelParams& p, double x, double y);

struct Hessian2 {
  double xx, xy, yy;
};
Hessian2 hessian_cartesian(const ModelParams& p, double x, double y);

enum class StationaryKind { minimum, saddle, local_maximum };

std::string to_string(StationaryKind k);

struct StationaryPoint {
  double beta;
  double gamma;  // canonical, in [0, 2pi)
  double energy;
  StationaryKind kind;
  /// B = 0 only: the point stands for the whole circle beta = const.
  bool ring = false;
};

/// Origin first, then minima, then saddles, each group ordered by gamma.
/// Every returned point has |grad V| < 1e-10 and the declared Hessian signature;
/// a violation raises NumericalError.
std::vector<StationaryPoint> stationary_points(const ModelParams& p);

/// Lowest-energy minimum; for B = 0 the ring minimum (gamma = 0).
StationaryPoint global_minimum(const ModelParams& p);

/// Local harmonic expansion around the global minimum:
/// V ~ V0 + k_beta/2 (b-b0)^2 + k_gamma/2 b^2 (g-g0)^2.
struct QuadraticWell {
  double beta0;
  double gamma0;
  double V0;
  double k_beta;
  double k_gamma;  // (1/b0^2) d2V/dg2 at the minimum
  double omega_beta;
  double omega_gamma;
};

/// Requires B != 0 (std::invalid_argument otherwise).
QuadraticWell quadratic_well(const ModelParams& p);

/// Closed radial interval [lo, hi].
struct Interval {
  double lo;
  double hi;
};

/// {b >= 0 : V(b, gamma) <= E} as at most two closed intervals with endpoints
/// located to 1e-12. Empty when E lies below the minimum along the ray.
std::vector<Interval> accessible_domain(const ModelParams& p, double E, double gamma);

/// Accessible x-set of the y = 0 line, {x : V(x, 0) <= E}, ascending.
std::vector<Interval> accessible_x_line(const ModelParams& p, double E);

/// Harmonic oscillator length sqrt(hbar / (K omega)) matched to the radial
/// stiffness at the global minimum (ring minimum for B = 0).
double default_oscillator_length(const ModelParams& p);

/// Map an angle onto [0, 2pi).
double canonical_angle(double gamma);

}  // namespace gcm
