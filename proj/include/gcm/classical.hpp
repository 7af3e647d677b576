#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "gcm/integrator.hpp"
#include "gcm/model.hpp"

namespace gcm {

/// A y = 0 crossing with py > 0, refined to |y| < 1e-10.
struct Crossing {
  double t;
  double x;
  double px;
  double py;
};

struct TrajectoryRecord {
  PhasePoint initial;
  PhasePoint final_state;
  double energy = 0.0;             // H(initial)
  double duration = 0.0;
  double step = 0.0;
  double max_energy_error = 0.0;   // max |H - E| / max(1, |E|) over the steps
  std::vector<Crossing> crossings;
  double sali_final = std::numeric_limits<double>::quiet_NaN();
  double l2_average = std::numeric_limits<double>::quiet_NaN();
  bool l2_converged = false;
};

/// Integrates for duration T (negative T runs backwards) and records section
/// crossings plus the time average of L^2 over the run.
TrajectoryRecord integrate(const ModelParams& p, const PhasePoint& p0, double T,
                           const IntegratorOptions& opt = {});

/// Deterministic per-item random stream derived from (seed, index).
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) with 53 random bits (portable across libraries).
double uniform01(std::mt19937_64& rng);

/// Uniform sampler over the accessible part of the y = 0 section,
/// {(x, px) : px^2 <= 2K (E - V(x, 0))}, with py > 0 fixed by the energy.
class SectionSampler {
 public:
  /// Throws std::invalid_argument when the section has no accessible area.
  SectionSampler(const ModelParams& p, double E);

  PhasePoint sample(std::mt19937_64& rng) const;

  /// py on the section for (x, px), or NaN when (x, px) is not accessible.
  double py_for(double x, double px) const;

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double p_max() const { return p_max_; }
  double energy() const { return energy_; }

 private:
  ModelParams params_;
  double energy_;
  double x_min_, x_max_, p_max_;
};

/// n_traj trajectories launched from section points drawn with
/// stream_rng(seed, j); each runs until n_crossings crossings are found.
std::vector<TrajectoryRecord> poincare_section(const ModelParams& p, double E, int n_traj,
                                               int n_crossings, std::uint64_t seed,
                                               const IntegratorOptions& opt = {}, int workers = 0);

struct SaliOptions {
  IntegratorOptions integrator{1e-9};
  double regular_threshold = 1e-4;
  double chaotic_threshold = 1e-8;
  /// Stop as soon as SALI drops below this value (it cannot recover).
  double stop_below = 1e-12;
};

struct SaliResult {
  double value;
  double time;      // integration time actually used
  bool blow_up;     // non-finite deviation vectors
};

/// Smaller alignment index after time T (or at early stop). Deviation vectors
/// are renormalized every step. Uses a fixed generic pair of initial vectors.
SaliResult sali(const ModelParams& p, const PhasePoint& p0, double T, const SaliOptions& opt = {});

/// Same with caller-supplied initial deviation vectors; parallel (or
/// antiparallel) vectors are rejected with std::invalid_argument.
SaliResult sali(const ModelParams& p, const PhasePoint& p0, double T, const Tangent& w1,
                const Tangent& w2, const SaliOptions& opt = {});

enum class OrbitClass { regular, chaotic };

struct Classification {
  OrbitClass kind;
  double sali;
  bool rerun;    // intermediate value at T, decided at 2T
  bool flagged;  // variational blow-up
};

/// Regular above regular_threshold, chaotic below chaotic_threshold after T;
/// intermediate orbits are rerun to 2T and then split at the geometric mean
/// of the two thresholds.
Classification classify_orbit(const ModelParams& p, const PhasePoint& p0, double T,
                              const SaliOptions& opt = {});

struct FregResult {
  double fraction;
  double std_error;  // binomial
  int n;
  int n_regular;
  int n_flagged;
  int n_rerun;
};

/// Monte Carlo regular fraction over the accessible section at energy E.
FregResult freg(const ModelParams& p, double E, int n_samples, double T, std::uint64_t seed,
                const SaliOptions& opt = {}, int workers = 0);

struct PeresAverageOptions {
  IntegratorOptions integrator{};
  /// Relative change allowed over the last 20% of the elapsed time.
  double tolerance = 1e-3;
  /// No convergence decision before this time.
  double min_time = 200.0;
  double sample_interval = 1.0;
};

struct PeresAverage {
  double value;
  bool converged;
  double time;
};

/// Running time average of L^2 = (x py - y px)^2 along the trajectory from p0.
PeresAverage classical_peres_average(const ModelParams& p, const PhasePoint& p0, double T_max,
                                     const PeresAverageOptions& opt = {});

struct SectionMap {
  double energy;
  double x_min, x_max, px_min, px_max;
  int nx, ny;
  std::vector<double> values;     // values[iy * nx + ix]; NaN where masked
  std::vector<bool> accessible;   // false = masked
  std::vector<bool> converged;

  double x_at(int ix) const { return x_min + (ix + 0.5) * (x_max - x_min) / nx; }
  double px_at(int iy) const { return px_min + (iy + 0.5) * (px_max - px_min) / ny; }
  double masked_fraction() const;
};

/// <L^2>_c from every accessible cell centre of an nx x ny mesh over the
/// section's bounding rectangle.
SectionMap l2_section_map(const ModelParams& p, double E, int nx, int ny, double T_max,
                          const PeresAverageOptions& opt = {}, int workers = 0);

struct BoundsRow {
  double B;
  double l2_min;
  double l2_max;
  int n_converged;
  int n_unconverged;
};

/// Per B: min and max of converged <L^2>_c over n_samples section points at
/// energy E. Unconverged averages are excluded and counted.
std::vector<BoundsRow> l2_bounds(const ModelParams& base, const std::vector<double>& B_values,
                                 double E, int n_samples, double T_max, std::uint64_t seed,
                                 const PeresAverageOptions& opt = {}, int workers = 0);

}  // namespace gcm
