#include "gcm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gcm {

namespace {

// Yoshida's 8th-order composition of the second-order leapfrog, 15 stages,
// symmetric: w7 w6 ... w1 w0 w1 ... w7.
constexpr std::array<double, 7> kYoshida8 = {
    1.04242620869991, 1.82020630970714, 0.157739928123617, 2.44002732616735,
    -0.00716989419708120, -2.44699182370524, -1.61582374150097};

struct Composition {
  std::array<double, 15> kick;
  std::array<double, 16> drift;
};

constexpr Composition make_composition() {
  Composition c{};
  double w0 = 1.0;
  for (double w : kYoshida8) w0 -= 2.0 * w;
  for (int i = 0; i < 7; ++i) {
    c.kick[i] = kYoshida8[i];
    c.kick[14 - i] = kYoshida8[i];
  }
  c.kick[7] = w0;
  // Position Verlet stages: half drift, kick, half drift; adjacent halves merge.
  c.drift[0] = 0.5 * c.kick[0];
  for (int i = 1; i < 15; ++i) c.drift[i] = 0.5 * (c.kick[i - 1] + c.kick[i]);
  c.drift[15] = 0.5 * c.kick[14];
  return c;
}

constexpr Composition kScheme = make_composition();

constexpr double kQuantum = 0x1.0p-50;  // lattice spacing
constexpr double kInvQuantum = 0x1.0p50;

std::int64_t to_lattice(double v) {
  if (!(std::abs(v) < 8000.0)) {
    throw NumericalError("phase-space coordinate " + std::to_string(v) + " outside lattice range");
  }
  return std::llround(v * kInvQuantum);
}

double from_lattice(std::int64_t v) { return static_cast<double>(v) * kQuantum; }

std::int64_t increment(double delta) {
  const double scaled = delta * kInvQuantum;
  if (!(std::abs(scaled) < 9.0e18)) throw NumericalError("integrator step produced a non-finite state");
  // Round half away from zero; truncation and negation are both odd, so
  // increment(-d) == -increment(d) exactly.
  return static_cast<std::int64_t>(scaled + std::copysign(0.5, scaled));
}

struct Force {
  double gx, gy;
};

// Same expressions as gradient_cartesian/hessian_cartesian, visible to the
// optimizer in the inner loop.
inline Force gradient(const ModelParams& p, double x, double y) {
  const double r2 = x * x + y * y;
  return {2.0 * p.A * x + 3.0 * p.B * (x * x - y * y) + 4.0 * p.C * r2 * x,
          2.0 * p.A * y - 6.0 * p.B * x * y + 4.0 * p.C * r2 * y};
}

inline Hessian2 hessian(const ModelParams& p, double x, double y) {
  const double r2 = x * x + y * y;
  return {2.0 * p.A + 6.0 * p.B * x + 4.0 * p.C * (r2 + 2.0 * x * x),
          -6.0 * p.B * y + 8.0 * p.C * x * y,
          2.0 * p.A - 6.0 * p.B * x + 4.0 * p.C * (r2 + 2.0 * y * y)};
}

}  // namespace

double hamiltonian_classical(const ModelParams& p, const PhasePoint& s) {
  return (s.px * s.px + s.py * s.py) / (2.0 * p.K) + potential_cartesian(p, s.x, s.y);
}

PhasePoint flow_step(const ModelParams& p, const PhasePoint& s, double h) {
  PhasePoint r = s;
  const double inv_k = 1.0 / p.K;
  for (int i = 0; i < 15; ++i) {
    r.x += kScheme.drift[i] * h * r.px * inv_k;
    r.y += kScheme.drift[i] * h * r.py * inv_k;
    const auto [gx, gy] = gradient(p, r.x, r.y);
    r.px -= kScheme.kick[i] * h * gx;
    r.py -= kScheme.kick[i] * h * gy;
  }
  r.x += kScheme.drift[15] * h * r.px * inv_k;
  r.y += kScheme.drift[15] * h * r.py * inv_k;
  return r;
}

double select_step(const ModelParams& p, const PhasePoint& s0, const IntegratorOptions& opt) {
  if (opt.fixed_step > 0.0) return opt.fixed_step;
  const double e0 = hamiltonian_classical(p, s0);
  const double scale = std::max(1.0, std::abs(e0));
  for (double h = opt.max_step; h >= opt.min_step; h *= 0.5) {
    Propagator prop(p, s0, h);
    double worst = 0.0;
    const auto n = static_cast<std::int64_t>(std::ceil(opt.probe_time / h));
    bool ok = true;
    for (std::int64_t k = 0; k < n; ++k) {
      prop.advance();
      worst = std::max(worst, std::abs(hamiltonian_classical(p, prop.state()) - e0) / scale);
      if (!(worst <= opt.tolerance)) {
        ok = false;
        break;
      }
    }
    if (ok) return h;
  }
  throw NumericalError("step-size underflow: no step above " + std::to_string(opt.min_step) +
                       " meets the energy tolerance");
}

Propagator::Propagator(const ModelParams& p, const PhasePoint& s0, double step)
    : params_(p),
      step_(step),
      x_(to_lattice(s0.x)),
      y_(to_lattice(s0.y)),
      px_(to_lattice(s0.px)),
      py_(to_lattice(s0.py)) {
  if (!(step != 0.0 && std::isfinite(step))) throw std::invalid_argument("Propagator: bad step");
}

PhasePoint Propagator::state() const {
  return {from_lattice(x_), from_lattice(y_), from_lattice(px_), from_lattice(py_)};
}

void Propagator::drift(double c) {
  const double f = c * step_ / params_.K;
  x_ += increment(f * from_lattice(px_));
  y_ += increment(f * from_lattice(py_));
}

void Propagator::kick(double c, std::span<Tangent> tangents) {
  const double x = from_lattice(x_);
  const double y = from_lattice(y_);
  const auto [gx, gy] = gradient(params_, x, y);
  const double f = c * step_;
  px_ -= increment(f * gx);
  py_ -= increment(f * gy);
  if (!tangents.empty()) {
    const Hessian2 h = hessian(params_, x, y);
    for (auto& t : tangents) {
      t[2] -= f * (h.xx * t[0] + h.xy * t[1]);
      t[3] -= f * (h.xy * t[0] + h.yy * t[1]);
    }
  }
}

void Propagator::advance(std::span<Tangent> tangents) {
  const double inv_k_h = step_ / params_.K;
  for (int i = 0; i < 15; ++i) {
    drift(kScheme.drift[i]);
    for (auto& t : tangents) {
      t[0] += kScheme.drift[i] * inv_k_h * t[2];
      t[1] += kScheme.drift[i] * inv_k_h * t[3];
    }
    kick(kScheme.kick[i], tangents);
  }
  drift(kScheme.drift[15]);
  for (auto& t : tangents) {
    t[0] += kScheme.drift[15] * inv_k_h * t[2];
    t[1] += kScheme.drift[15] * inv_k_h * t[3];
  }
  ++steps_;
}

}  // namespace gcm
