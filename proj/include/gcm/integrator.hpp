#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "gcm/model.hpp"

namespace gcm {

/// Classical state on the (x, y) plane; (px, py) are the conjugate momenta.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double px = 0.0;
  double py = 0.0;
};

/// (px^2 + py^2) / 2K + V(x, y)
double hamiltonian_classical(const ModelParams& p, const PhasePoint& s);

/// L = x py - y px
inline double angular_momentum(const PhasePoint& s) { return s.x * s.py - s.y * s.px; }

/// Deviation vector (dx, dy, dpx, dpy) for the variational equations.
using Tangent = std::array<double, 4>;

struct IntegratorOptions {
  /// Target bound on |H - E| / max(1, |E|) used to select the step.
  double tolerance = 1e-10;
  double max_step = 0.05;
  double min_step = 1e-6;
  /// Length of the trial run used to select the step.
  double probe_time = 50.0;
  /// Use this step instead of probing (> 0).
  double fixed_step = 0.0;
};

/// One step of the 8th-order symmetric composition in plain floating point
/// (used for short partial steps, e.g. event refinement). Negative h runs
/// backwards.
PhasePoint flow_step(const ModelParams& p, const PhasePoint& s, double h);

/// Largest step (halving from max_step) whose trial run keeps the relative
/// energy error below tolerance. Throws NumericalError on step underflow.
double select_step(const ModelParams& p, const PhasePoint& s0, const IntegratorOptions& opt);

/// Symplectic propagator for H = p^2/2K + V. Coordinates and momenta live on
/// a fixed-point lattice (2^-50 resolution) and every kick/drift increment is
/// rounded symmetrically, so each sub-map is exactly invertible: running the
/// same number of steps with the negated step returns bit-for-bit to the start.
class Propagator {
 public:
  Propagator(const ModelParams& p, const PhasePoint& s0, double step);

  /// Advance by one step; optional tangents follow the exact linearization of
  /// the same discrete map.
  void advance(std::span<Tangent> tangents = {});

  PhasePoint state() const;
  double time() const { return static_cast<double>(steps_) * step_; }
  double step() const { return step_; }
  std::int64_t steps() const { return steps_; }

 private:
  void drift(double c);
  void kick(double c, std::span<Tangent> tangents);

  ModelParams params_;
  double step_;
  std::int64_t steps_ = 0;
  std::int64_t x_, y_, px_, py_;
};

}  // namespace gcm
