#include "gcm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

namespace gcm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGradientTolerance = 1e-10;

/// Positive real roots of a t^2 + b t + c = 0, ascending (numerically stable form).
std::vector<double> positive_quadratic_roots(double a, double b, double c) {
  std::vector<double> roots;
  if (a == 0.0) {
    if (b != 0.0 && -c / b > 0.0) roots.push_back(-c / b);
    return roots;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return roots;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1 = q / a;
  double r2 = (q != 0.0) ? c / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  if (r1 > 0.0) roots.push_back(r1);
  if (r2 > 0.0 && r2 != r1) roots.push_back(r2);
  return roots;
}

StationaryKind classify(const Hessian2& h, bool ring) {
  const double tr = h.xx + h.yy;
  const double det = h.xx * h.yy - h.xy * h.xy;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double l1 = 0.5 * tr - disc;
  const double l2 = 0.5 * tr + disc;
  const double scale = 1e-12 * std::max({1.0, std::abs(l1), std::abs(l2)});
  if (ring) {
    // One flat (tangential) direction; the radial curvature decides.
    return (l2 > scale) ? StationaryKind::minimum : StationaryKind::local_maximum;
  }
  if (l1 > scale) return StationaryKind::minimum;
  if (l2 < -scale) return StationaryKind::local_maximum;
  return StationaryKind::saddle;
}

StationaryPoint make_point(const ModelParams& p, double beta, double gamma, bool ring) {
  const double g = canonical_angle(gamma);
  const double x = beta * std::cos(g);
  const double y = beta * std::sin(g);
  const auto [gx, gy] = gradient_cartesian(p, x, y);
  if (std::hypot(gx, gy) > kGradientTolerance) {
    throw NumericalError("stationary point at beta=" + std::to_string(beta) +
                         " failed the vanishing-gradient check");
  }
  return {beta, g, potential(p, beta, g), classify(hessian_cartesian(p, x, y), ring), ring};
}

/// V along the ray gamma as a polynomial in beta minus E.
struct RayPolynomial {
  double c4, c3, c2, c0;
  double operator()(double b) const { return ((c4 * b + c3) * b + c2) * b * b + c0; }
};

std::vector<double> ray_roots(const RayPolynomial& f) {
  // Monotone pieces are delimited by the positive zeros of f'(b)/b = 4 c4 b^2 + 3 c3 b + 2 c2.
  std::vector<double> breaks{0.0};
  for (double r : positive_quadratic_roots(4.0 * f.c4, 3.0 * f.c3, 2.0 * f.c2)) breaks.push_back(r);
  const double bound =
      1.0 + std::max({std::abs(f.c3), std::abs(f.c2), std::abs(f.c0)}) / f.c4;
  breaks.push_back(std::max(bound, breaks.back() + 1.0));

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double lo = breaks[i];
    double hi = breaks[i + 1];
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
      if (roots.empty() || roots.back() != lo) roots.push_back(lo);
      continue;
    }
    if (fhi == 0.0 || (flo < 0.0) == (fhi < 0.0)) {
      if (fhi == 0.0) roots.push_back(hi);
      continue;
    }
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    roots.push_back(0.5 * (bracket.first + bracket.second));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace

void ModelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(A)) throw std::invalid_argument("model.A must be finite");
  if (!finite(B)) throw std::invalid_argument("model.B must be finite");
  if (!(finite(C) && C > 0.0)) throw std::invalid_argument("model.C must be positive");
  if (!(finite(hbar) && hbar > 0.0)) throw std::invalid_argument("model.hbar must be positive");
  if (!(finite(K) && K > 0.0)) throw std::invalid_argument("model.K must be positive");
}

double canonical_angle(double gamma) {
  double g = std::fmod(gamma, kTwoPi);
  if (g < 0.0) g += kTwoPi;
  if (g >= kTwoPi) g = 0.0;
  return g;
}

double potential(const ModelParams& p, double beta, double gamma) {
  const double b2 = beta * beta;
  return p.A * b2 + p.B * b2 * beta * std::cos(3.0 * gamma) + p.C * b2 * b2;
}

double potential_cartesian(const ModelParams& p, double x, double y) {
  const double r2 = x * x + y * y;
  return p.A * r2 + p.B * x * (x * x - 3.0 * y * y) + p.C * r2 * r2;
}

std::pair<double, double> gradient_cartesian(const ModelParams& p, double x, double y) {
  const double r2 = x * x + y * y;
  const double gx = 2.0 * p.A * x + 3.0 * p.B * (x * x - y * y) + 4.0 * p.C * r2 * x;
  const double gy = 2.0 * p.A * y - 6.0 * p.B * x * y + 4.0 * p.C * r2 * y;
  return {gx, gy};
}

Hessian2 hessian_cartesian(const ModelParams& p, double x, double y) {
  const double r2 = x * x + y * y;
  return {2.0 * p.A + 6.0 * p.B * x + 4.0 * p.C * (r2 + 2.0 * x * x),
          -6.0 * p.B * y + 8.0 * p.C * x * y,
          2.0 * p.A - 6.0 * p.B * x + 4.0 * p.C * (r2 + 2.0 * y * y)};
}

std::string to_string(StationaryKind k) {
  switch (k) {
    case StationaryKind::minimum: return "minimum";
    case StationaryKind::saddle: return "saddle";
    case StationaryKind::local_maximum: return "local-maximum";
  }
  return "unknown";
}

std::vector<StationaryPoint> stationary_points(const ModelParams& p) {
  p.validate();
  std::vector<StationaryPoint> points;

  StationaryKind origin_kind;
  if (p.A < 0.0) {
    origin_kind = StationaryKind::local_maximum;
  } else if (p.A > 0.0 || p.B == 0.0) {
    origin_kind = StationaryKind::minimum;
  } else {
    origin_kind = StationaryKind::saddle;  // monkey saddle of the cubic term
  }
  points.push_back({0.0, 0.0, 0.0, origin_kind, false});

  std::vector<StationaryPoint> minima, others;
  if (p.B == 0.0) {
    for (double r : positive_quadratic_roots(4.0 * p.C, 0.0, 2.0 * p.A)) {
      auto sp = make_point(p, r, 0.0, true);
      (sp.kind == StationaryKind::minimum ? minima : others).push_back(sp);
    }
  } else {
    // Along cos3g = s the radial condition reads 4C b^2 + 3 B s b + 2A = 0; the
    // angular one forces sin3g = 0, i.e. g = k pi/3.
    for (int s : {-1, 1}) {
      const double first = (s == 1) ? 0.0 : std::numbers::pi / 3.0;
      for (double r : positive_quadratic_roots(4.0 * p.C, 3.0 * p.B * s, 2.0 * p.A)) {
        for (int k = 0; k < 3; ++k) {
          auto sp = make_point(p, r, first + k * kTwoPi / 3.0, false);
          (sp.kind == StationaryKind::minimum ? minima : others).push_back(sp);
        }
      }
    }
  }
  auto by_angle = [](const StationaryPoint& a, const StationaryPoint& b) {
    return a.gamma != b.gamma ? a.gamma < b.gamma : a.beta < b.beta;
  };
  std::sort(minima.begin(), minima.end(), by_angle);
  std::sort(others.begin(), others.end(), by_angle);
  points.insert(points.end(), minima.begin(), minima.end());
  points.insert(points.end(), others.begin(), others.end());
  return points;
}

StationaryPoint global_minimum(const ModelParams& p) {
  const auto points = stationary_points(p);
  const StationaryPoint* best = nullptr;
  for (const auto& sp : points) {
    if (sp.kind != StationaryKind::minimum) continue;
    if (!best || sp.energy < best->energy - 1e-14) best = &sp;
  }
  if (!best) throw NumericalError("potential has no minimum");
  return *best;
}

QuadraticWell quadratic_well(const ModelParams& p) {
  if (p.B == 0.0) throw std::invalid_argument("quadratic_well requires B != 0");
  const StationaryPoint m = global_minimum(p);
  const double s = std::round(std::cos(3.0 * m.gamma));
  const double b0 = m.beta;
  QuadraticWell w{};
  w.beta0 = b0;
  w.gamma0 = m.gamma;
  w.V0 = m.energy;
  w.k_beta = 2.0 * p.A + 6.0 * p.B * s * b0 + 12.0 * p.C * b0 * b0;
  w.k_gamma = (b0 > 0.0) ? -9.0 * p.B * s * b0 : 0.0;
  w.omega_beta = std::sqrt(std::max(0.0, w.k_beta) / p.K);
  w.omega_gamma = std::sqrt(std::max(0.0, w.k_gamma) / p.K);
  return w;
}

std::vector<Interval> accessible_domain(const ModelParams& p, double E, double gamma) {
  const RayPolynomial f{p.C, p.B * std::cos(3.0 * gamma), p.A, -E};
  const std::vector<double> roots = ray_roots(f);

  std::vector<double> marks{0.0};
  for (double r : roots)
    if (r > 0.0) marks.push_back(r);

  std::vector<Interval> out;
  auto add = [&](double lo, double hi) {
    if (!out.empty() && out.back().hi == lo) {
      out.back().hi = hi;
    } else {
      out.push_back({lo, hi});
    }
  };
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    if (f(0.5 * (marks[i] + marks[i + 1])) <= 0.0) add(marks[i], marks[i + 1]);
  }
  if (out.empty() && f(0.0) <= 0.0 && marks.size() == 1) {
    out.push_back({0.0, 0.0});  // E == V(0) exactly and nothing else below
  }
  return out;
}

std::vector<Interval> accessible_x_line(const ModelParams& p, double E) {
  std::vector<Interval> out;
  for (const auto& iv : accessible_domain(p, E, std::numbers::pi)) out.push_back({-iv.hi, -iv.lo});
  std::reverse(out.begin(), out.end());
  for (const auto& iv : accessible_domain(p, E, 0.0)) {
    if (!out.empty() && out.back().hi == 0.0 && iv.lo == 0.0) {
      out.back().hi = iv.hi;
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

double default_oscillator_length(const ModelParams& p) {
  const StationaryPoint m = global_minimum(p);
  double k;
  if (m.beta == 0.0) {
    k = 2.0 * p.A;
  } else if (p.B == 0.0) {
    k = 2.0 * p.A + 12.0 * p.C * m.beta * m.beta;
  } else {
    k = quadratic_well(p).k_beta;
  }
  if (!(k > 0.0)) return 1.0;
  const double omega = std::sqrt(k / p.K);
  return std::sqrt(p.hbar / (p.K * omega));
}

}  // namespace gcm
