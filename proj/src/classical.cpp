#include "gcm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gcm/parallel.hpp"

namespace gcm {

namespace {

constexpr double kCrossingTolerance = 1e-12;

/// Locates the root of y between s (time 0) and s advanced by h, using exact
/// partial steps from s and Newton updates on tau with dy/dt = py / K.
PhasePoint refine_crossing(const ModelParams& p, const PhasePoint& s, const PhasePoint& next,
                           double h, double& tau) {
  tau = h * (-s.y) / (next.y - s.y);
  PhasePoint r = flow_step(p, s, tau);
  for (int it = 0; it < 50 && std::abs(r.y) >= kCrossingTolerance; ++it) {
    const double vy = r.py / p.K;
    if (vy == 0.0) break;
    tau -= r.y / vy;
    r = flow_step(p, s, tau);
  }
  if (std::abs(r.y) >= 1e-10) throw NumericalError("section crossing refinement did not converge");
  r.y = 0.0;
  return r;
}

double norm4(const Tangent& t) { return std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2] + t[3] * t[3]); }

double alignment(const Tangent& a, const Tangent& b) {
  double plus = 0.0, minus = 0.0;
  for (int i = 0; i < 4; ++i) {
    plus += (a[i] + b[i]) * (a[i] + b[i]);
    minus += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return std::sqrt(std::min(plus, minus));
}

bool normalize(Tangent& t) {
  const double n = norm4(t);
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  for (double& c : t) c /= n;
  return true;
}

std::pair<Tangent, Tangent> default_deviation_pair() {
  Tangent w1{std::sqrt(7.0), std::sqrt(11.0), std::sqrt(13.0), std::sqrt(17.0)};
  Tangent w2{std::sqrt(19.0), -std::sqrt(23.0), std::sqrt(29.0), -std::sqrt(31.0)};
  normalize(w1);
  double d = 0.0;
  for (int i = 0; i < 4; ++i) d += w1[i] * w2[i];
  for (int i = 0; i < 4; ++i) w2[i] -= d * w1[i];
  normalize(w2);
  return {w1, w2};
}

/// Continuable SALI integration.
class SaliRun {
 public:
  SaliRun(const ModelParams& p, const PhasePoint& p0, const Tangent& w1, const Tangent& w2,
          const SaliOptions& opt)
      : opt_(opt), prop_(p, p0, select_step(p, p0, opt.integrator)), w_{w1, w2} {
    if (!normalize(w_[0]) || !normalize(w_[1])) {
      throw std::invalid_argument("SALI: deviation vectors must be nonzero and finite");
    }
    value_ = alignment(w_[0], w_[1]);
    if (value_ < 1e-14) throw std::invalid_argument("SALI: initial deviation vectors are parallel");
  }

  SaliResult run_until(double T) {
    const auto n = static_cast<std::int64_t>(std::ceil(T / prop_.step() - 1e-9));
    while (prop_.steps() < n && !blow_up_ && value_ >= opt_.stop_below) {
      prop_.advance(w_);
      if (!normalize(w_[0]) || !normalize(w_[1])) {
        blow_up_ = true;
        value_ = 0.0;
        break;
      }
      value_ = alignment(w_[0], w_[1]);
    }
    return {value_, prop_.time(), blow_up_};
  }

 private:
  SaliOptions opt_;
  Propagator prop_;
  std::array<Tangent, 2> w_;
  double value_ = 1.0;
  bool blow_up_ = false;
};

PeresAverage peres_average_impl(const ModelParams& p, const PhasePoint& p0, double T_max,
                                const PeresAverageOptions& opt) {
  if (!(T_max > 0.0)) throw std::invalid_argument("classical_peres_average: T_max must be positive");
  Propagator prop(p, p0, select_step(p, p0, opt.integrator));
  const double h = prop.step();
  const auto n_total = static_cast<std::int64_t>(std::ceil(T_max / h - 1e-9));

  double l2_prev = std::pow(angular_momentum(prop.state()), 2);
  double integral = 0.0;
  std::vector<double> samples;  // running average at t = (k + 1) * sample_interval
  double next_sample = opt.sample_interval;
  double next_check = opt.min_time;
  double avg = l2_prev;

  for (std::int64_t k = 0; k < n_total; ++k) {
    prop.advance();
    const double l2 = std::pow(angular_momentum(prop.state()), 2);
    integral += 0.5 * h * (l2_prev + l2);
    l2_prev = l2;
    const double t = prop.time();
    avg = integral / t;
    if (t >= next_sample) {
      samples.push_back(avg);
      next_sample += opt.sample_interval;
    }
    if (t >= next_check && !samples.empty()) {
      next_check = std::max(t + opt.sample_interval, 1.02 * t);
      const auto first = static_cast<std::size_t>(0.8 * t / opt.sample_interval);
      double spread = 0.0;
      for (std::size_t i = std::min(first, samples.size() - 1); i < samples.size(); ++i)
        spread = std::max(spread, std::abs(samples[i] - avg));
      if (spread <= opt.tolerance * std::abs(avg) + 1e-14) return {avg, true, t};
    }
  }
  return {avg, false, prop.time()};
}

}  // namespace

TrajectoryRecord integrate(const ModelParams& p, const PhasePoint& p0, double T,
                           const IntegratorOptions& opt) {
  if (!(std::abs(T) > 0.0) || !std::isfinite(T)) throw std::invalid_argument("integrate: T must be nonzero");
  const double h0 = select_step(p, p0, opt);
  const auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::abs(T) / h0 - 1e-9)));
  const double h = T / static_cast<double>(n);

  TrajectoryRecord rec;
  rec.initial = p0;
  rec.energy = hamiltonian_classical(p, p0);
  rec.step = std::abs(h);
  const double scale = std::max(1.0, std::abs(rec.energy));

  Propagator prop(p, p0, h);
  PhasePoint prev = prop.state();
  double l2_prev = std::pow(angular_momentum(prev), 2);
  double integral = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    prop.advance();
    const PhasePoint cur = prop.state();
    rec.max_energy_error =
        std::max(rec.max_energy_error, std::abs(hamiltonian_classical(p, cur) - rec.energy) / scale);
    if ((prev.y < 0.0 && cur.y >= 0.0) || (prev.y > 0.0 && cur.y <= 0.0)) {
      double tau = 0.0;
      const PhasePoint c = refine_crossing(p, prev, cur, h, tau);
      if (c.py > 0.0) rec.crossings.push_back({k * h + tau, c.x, c.px, c.py});
    }
    const double l2 = std::pow(angular_momentum(cur), 2);
    integral += 0.5 * std::abs(h) * (l2_prev + l2);
    l2_prev = l2;
    prev = cur;
  }
  rec.final_state = prop.state();
  rec.duration = T;
  rec.l2_average = integral / std::abs(T);
  rec.l2_converged = true;
  if (!(rec.max_energy_error < 1e-6)) {
    throw NumericalError("integrate: energy drift " + std::to_string(rec.max_energy_error));
  }
  return rec;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

SectionSampler::SectionSampler(const ModelParams& p, double E) : params_(p), energy_(E) {
  p.validate();
  const auto intervals = accessible_x_line(p, E);
  if (intervals.empty()) throw std::invalid_argument("energy lies below the section's accessible region");
  x_min_ = intervals.front().lo;
  x_max_ = intervals.back().hi;
  // Lowest V(x, 0) = A x^2 + B x^3 + C x^4 over the accessible set: its
  // critical points are x = 0 and the roots of 4C x^2 + 3B x + 2A.
  double v_min = E;
  std::vector<double> candidates{0.0};
  const double disc = 9.0 * p.B * p.B - 32.0 * p.A * p.C;
  if (disc >= 0.0) {
    candidates.push_back((-3.0 * p.B + std::sqrt(disc)) / (8.0 * p.C));
    candidates.push_back((-3.0 * p.B - std::sqrt(disc)) / (8.0 * p.C));
  }
  for (double x : candidates) {
    for (const auto& iv : intervals) {
      if (x >= iv.lo && x <= iv.hi) v_min = std::min(v_min, potential_cartesian(p, x, 0.0));
    }
  }
  p_max_ = std::sqrt(std::max(0.0, 2.0 * p.K * (E - v_min)));
  if (!(p_max_ > 0.0) || !(x_max_ > x_min_)) {
    throw std::invalid_argument("section at this energy has zero accessible area");
  }
}

double SectionSampler::py_for(double x, double px) const {
  const double py2 = 2.0 * params_.K * (energy_ - potential_cartesian(params_, x, 0.0)) - px * px;
  return py2 > 0.0 ? std::sqrt(py2) : std::numeric_limits<double>::quiet_NaN();
}

PhasePoint SectionSampler::sample(std::mt19937_64& rng) const {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double x = x_min_ + (x_max_ - x_min_) * uniform01(rng);
    const double px = p_max_ * (2.0 * uniform01(rng) - 1.0);
    const double py = py_for(x, px);
    if (!std::isnan(py)) return {x, 0.0, px, py};
  }
  throw NumericalError("section sampling failed to hit the accessible region");
}

std::vector<TrajectoryRecord> poincare_section(const ModelParams& p, double E, int n_traj,
                                               int n_crossings, std::uint64_t seed,
                                               const IntegratorOptions& opt, int workers) {
  if (n_traj < 0 || n_crossings < 0) throw std::invalid_argument("poincare_section: negative counts");
  const SectionSampler sampler(p, E);
  std::vector<TrajectoryRecord> out(static_cast<std::size_t>(n_traj));
  parallel_for(out.size(), workers, [&](std::size_t j) {
    auto rng = stream_rng(seed, j);
    const PhasePoint p0 = sampler.sample(rng);
    Propagator prop(p, p0, select_step(p, p0, opt));
    const double h = prop.step();
    const double t_limit = 1e4 + 1e3 * n_crossings;

    TrajectoryRecord rec;
    rec.initial = p0;
    rec.energy = hamiltonian_classical(p, p0);
    rec.step = h;
    const double scale = std::max(1.0, std::abs(rec.energy));
    PhasePoint prev = p0;
    while (static_cast<int>(rec.crossings.size()) < n_crossings) {
      if (prop.time() > t_limit) {
        throw NumericalError("trajectory " + std::to_string(j) + " did not return to the section");
      }
      const double t_prev = prop.time();
      prop.advance();
      const PhasePoint cur = prop.state();
      rec.max_energy_error =
          std::max(rec.max_energy_error, std::abs(hamiltonian_classical(p, cur) - rec.energy) / scale);
      if (prev.y < 0.0 && cur.y >= 0.0) {
        double tau = 0.0;
        const PhasePoint c = refine_crossing(p, prev, cur, h, tau);
        if (c.py > 0.0) rec.crossings.push_back({t_prev + tau, c.x, c.px, c.py});
      }
      prev = cur;
    }
    rec.final_state = prop.state();
    rec.duration = prop.time();
    out[j] = std::move(rec);
  });
  return out;
}

SaliResult sali(const ModelParams& p, const PhasePoint& p0, double T, const SaliOptions& opt) {
  const auto [w1, w2] = default_deviation_pair();
  return sali(p, p0, T, w1, w2, opt);
}

SaliResult sali(const ModelParams& p, const PhasePoint& p0, double T, const Tangent& w1,
                const Tangent& w2, const SaliOptions& opt) {
  if (!(T > 0.0)) throw std::invalid_argument("sali: T must be positive");
  SaliRun run(p, p0, w1, w2, opt);
  return run.run_until(T);
}

Classification classify_orbit(const ModelParams& p, const PhasePoint& p0, double T,
                              const SaliOptions& opt) {
  if (!(T > 0.0)) throw std::invalid_argument("classify_orbit: T must be positive");
  const auto [w1, w2] = default_deviation_pair();
  SaliRun run(p, p0, w1, w2, opt);
  SaliResult r = run.run_until(T);
  if (r.blow_up) return {OrbitClass::chaotic, r.value, false, true};
  if (r.value > opt.regular_threshold) return {OrbitClass::regular, r.value, false, false};
  if (r.value < opt.chaotic_threshold) return {OrbitClass::chaotic, r.value, false, false};
  r = run.run_until(2.0 * T);
  if (r.blow_up) return {OrbitClass::chaotic, r.value, true, true};
  const double split = std::sqrt(opt.regular_threshold * opt.chaotic_threshold);
  return {r.value < split ? OrbitClass::chaotic : OrbitClass::regular, r.value, true, false};
}

FregResult freg(const ModelParams& p, double E, int n_samples, double T, std::uint64_t seed,
                const SaliOptions& opt, int workers) {
  if (n_samples < 1) throw std::invalid_argument("freg: need at least one sample");
  const SectionSampler sampler(p, E);
  std::vector<Classification> cls(static_cast<std::size_t>(n_samples));
  parallel_for(cls.size(), workers, [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    cls[i] = classify_orbit(p, sampler.sample(rng), T, opt);
  });
  FregResult r{0.0, 0.0, n_samples, 0, 0, 0};
  for (const auto& c : cls) {
    if (c.kind == OrbitClass::regular) ++r.n_regular;
    if (c.flagged) ++r.n_flagged;
    if (c.rerun) ++r.n_rerun;
  }
  r.fraction = static_cast<double>(r.n_regular) / n_samples;
  r.std_error = std::sqrt(r.fraction * (1.0 - r.fraction) / n_samples);
  return r;
}

PeresAverage classical_peres_average(const ModelParams& p, const PhasePoint& p0, double T_max,
                                     const PeresAverageOptions& opt) {
  return peres_average_impl(p, p0, T_max, opt);
}

double SectionMap::masked_fraction() const {
  if (accessible.empty()) return 0.0;
  const auto open = std::count(accessible.begin(), accessible.end(), true);
  return 1.0 - static_cast<double>(open) / static_cast<double>(accessible.size());
}

SectionMap l2_section_map(const ModelParams& p, double E, int nx, int ny, double T_max,
                          const PeresAverageOptions& opt, int workers) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("l2_section_map: mesh must be at least 1x1");
  const SectionSampler sampler(p, E);
  SectionMap map;
  map.energy = E;
  map.x_min = sampler.x_min();
  map.x_max = sampler.x_max();
  map.px_min = -sampler.p_max();
  map.px_max = sampler.p_max();
  map.nx = nx;
  map.ny = ny;
  const std::size_t cells = static_cast<std::size_t>(nx) * ny;
  map.values.assign(cells, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> open(cells, 0), conv(cells, 0);
  parallel_for(cells, workers, [&](std::size_t c) {
    const int ix = static_cast<int>(c % nx);
    const int iy = static_cast<int>(c / nx);
    const double x = map.x_at(ix);
    const double px = map.px_at(iy);
    const double py = sampler.py_for(x, px);
    if (std::isnan(py)) return;
    const PeresAverage avg = peres_average_impl(p, {x, 0.0, px, py}, T_max, opt);
    map.values[c] = avg.value;
    open[c] = 1;
    conv[c] = avg.converged ? 1 : 0;
  });
  map.accessible.assign(open.begin(), open.end());
  map.converged.assign(conv.begin(), conv.end());
  return map;
}

std::vector<BoundsRow> l2_bounds(const ModelParams& base, const std::vector<double>& B_values,
                                 double E, int n_samples, double T_max, std::uint64_t seed,
                                 const PeresAverageOptions& opt, int workers) {
  if (n_samples < 1) throw std::invalid_argument("l2_bounds: need at least one sample");
  std::vector<ModelParams> params;
  std::vector<SectionSampler> samplers;
  for (double B : B_values) {
    ModelParams p = base;
    p.B = B;
    params.push_back(p);
    samplers.emplace_back(p, E);
  }
  const std::size_t per = static_cast<std::size_t>(n_samples);
  std::vector<PeresAverage> results(B_values.size() * per);
  parallel_for(results.size(), workers, [&](std::size_t k) {
    const std::size_t ib = k / per;
    auto rng = stream_rng(seed, k % per);
    results[k] = peres_average_impl(params[ib], samplers[ib].sample(rng), T_max, opt);
  });
  std::vector<BoundsRow> rows;
  for (std::size_t ib = 0; ib < B_values.size(); ++ib) {
    BoundsRow row{B_values[ib], std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN(), 0, 0};
    for (std::size_t i = 0; i < per; ++i) {
      const auto& r = results[ib * per + i];
      if (!r.converged) {
        ++row.n_unconverged;
        continue;
      }
      if (row.n_converged == 0) {
        row.l2_min = row.l2_max = r.value;
      } else {
        row.l2_min = std::min(row.l2_min, r.value);
        row.l2_max = std::max(row.l2_max, r.value);
      }
      ++row.n_converged;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gcm
