#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gcm/classical.hpp"
#include "oracles.hpp"

using namespace gcm;
using std::numbers::pi;

namespace {

ModelParams with_b(double B) {
  ModelParams p;
  p.B = B;
  return p;
}

PhasePoint sample_at(const ModelParams& p, double E, std::uint64_t seed, std::uint64_t i) {
  SectionSampler s(p, E);
  auto rng = stream_rng(seed, i);
  return s.sample(rng);
}

double max_norm(const PhasePoint& a, const PhasePoint& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.px - b.px), std::abs(a.py - b.py)});
}

}  // namespace

TEST(Hamiltonian, Examples) {
  EXPECT_EQ(hamiltonian_classical(with_b(0.62), {}), 0.0);
  EXPECT_NEAR(hamiltonian_classical(with_b(2.0 / 3.0), {std::cos(pi / 3), std::sin(pi / 3), 0, 0}), -2.0 / 3.0,
              1e-14);
  const PhasePoint s{0.3, -0.4, 0.5, 0.7};
  EXPECT_EQ(hamiltonian_classical(with_b(0.62), s), hamiltonian_classical(with_b(0.62), {s.x, s.y, -s.px, -s.py}));
}

TEST(Integrator, EighthOrder) {
  const auto p = with_b(0.62);
  const PhasePoint s0 = sample_at(p, 0.2, 3, 0);
  auto run = [&](double h) {
    Propagator prop(p, s0, h);
    const auto n = static_cast<int>(std::lround(1.0 / h));
    for (int i = 0; i < n; ++i) prop.advance();
    return prop.state();
  };
  const auto ref = run(1.0 / 512);
  const double e1 = max_norm(run(1.0 / 8), ref);
  const double e2 = max_norm(run(1.0 / 16), ref);
  EXPECT_GT(e1 / e2, std::pow(2.0, 7));
}

TEST(Integrator, EnergyDriftAndExactReversal) {
  const auto p = with_b(0.62);
  for (int i = 0; i < 3; ++i) {
    const PhasePoint s0 = sample_at(p, 0.2, 11, i);
    const auto fwd = integrate(p, s0, 2000.0);
    EXPECT_LT(fwd.max_energy_error, 1e-8);
    IntegratorOptions back;
    back.fixed_step = fwd.step;
    const auto bwd = integrate(p, fwd.final_state, -2000.0, back);
    EXPECT_LT(max_norm(bwd.final_state, s0), 1e-6);
  }
}

TEST(Integrator, AngularMomentumConservedAtZeroB) {
  const auto p = with_b(0.0);
  const PhasePoint s0{0.4, 0.1, 0.2, 0.5};
  const double L0 = angular_momentum(s0);
  Propagator prop(p, s0, select_step(p, s0, {}));
  for (int k = 0; k < 20000; ++k) {
    prop.advance();
    ASSERT_NEAR(angular_momentum(prop.state()), L0, 1e-10);
  }
  const auto rec = integrate(p, s0, 500.0);
  EXPECT_NEAR(rec.l2_average, L0 * L0, 1e-10);
  const auto avg = classical_peres_average(p, s0, 1000.0);
  EXPECT_NEAR(avg.value, L0 * L0, 1e-10);
  EXPECT_TRUE(avg.converged);
}

TEST(Integrator, RejectsBadInput) {
  EXPECT_THROW(integrate(with_b(0.1), {}, 0.0), std::invalid_argument);
  IntegratorOptions o;
  o.tolerance = 1e-30;
  o.min_step = 1e-2;
  EXPECT_THROW(select_step(with_b(0.62), {0.9, 0.1, 0.3, 0.2}, o), NumericalError);
}

TEST(Section, CrossingsAreRefinedAndOnShell) {
  const auto p = with_b(0.62);
  const auto recs = poincare_section(p, 0.2, 4, 50, 9, {}, 2);
  ASSERT_EQ(recs.size(), 4u);
  for (const auto& r : recs) {
    ASSERT_EQ(r.crossings.size(), 50u);
    for (const auto& c : r.crossings) {
      EXPECT_GT(c.py, 0.0);
      const double e = hamiltonian_classical(p, {c.x, 0.0, c.px, c.py});
      EXPECT_LT(std::abs(e - 0.2) / 0.2, 1e-8);
    }
  }
}

TEST(Section, ZeroBCrossingsLieOnInvariantCurves) {
  // With L conserved, every crossing satisfies x py = L0 and the energy:
  // a one-dimensional curve in (x, px).
  const auto p = with_b(0.0);
  const auto recs = poincare_section(p, 0.0, 3, 40, 4, {}, 1);
  for (const auto& r : recs) {
    const double L0 = angular_momentum(r.initial);
    for (const auto& c : r.crossings) EXPECT_NEAR(c.x * c.py, L0, 1e-9);
  }
}

TEST(Section, SamplerCoversAccessibleRegionUniformly) {
  const auto p = with_b(0.62);
  SectionSampler s(p, 0.2);
  auto rng = stream_rng(1, 0);
  int left = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto q = s.sample(rng);
    ASSERT_FALSE(std::isnan(s.py_for(q.x, q.px)));
    left += q.x < 0;
  }
  // Oracle: area fractions from the accessible width 2 sqrt(2(E - V(x,0))).
  auto width = [&](double x) { return 2.0 * std::sqrt(std::max(0.0, 2.0 * (0.2 - potential_cartesian(p, x, 0.0)))); };
  const double a_left = oracle::integrate(width, s.x_min(), 0.0);
  const double a_right = oracle::integrate(width, 0.0, s.x_max());
  EXPECT_NEAR(double(left) / n, a_left / (a_left + a_right), 0.015);
  EXPECT_THROW(SectionSampler(p, -5.0), std::invalid_argument);
}

TEST(Sali, RegularAtZeroBAndRejectsParallelVectors) {
  const auto p = with_b(0.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_GT(sali(p, sample_at(p, 0.1, 2, i), 1e4).value, 1e-4);
  }
  const Tangent w{1, 2, 3, 4};
  EXPECT_THROW(sali(p, {0.5, 0, 0, 0.3}, 10.0, w, w), std::invalid_argument);
  EXPECT_THROW(sali(p, {0.5, 0, 0, 0.3}, 10.0, w, Tangent{-2, -4, -6, -8}), std::invalid_argument);
}

TEST(Sali, MostlyChaoticAtMostChaoticParameter) {
  const auto p = with_b(0.24);
  int chaotic = 0;
  const int n = 10;
  for (int i = 0; i < n; ++i) chaotic += sali(p, sample_at(p, 0.0, 21, i), 1e4).value < 1e-8;
  EXPECT_GT(chaotic, n / 2);
}

TEST(Sali, TangentMapMatchesFiniteDifferences) {
  const auto p = with_b(0.62);
  const PhasePoint s0 = sample_at(p, 0.2, 1, 0);
  Tangent w[1] = {{0.3, -0.2, 0.5, 0.1}};
  const double h = 0.01, eps = 1e-7;
  Propagator a(p, s0, h), b(p, {s0.x + eps * w[0][0], s0.y + eps * w[0][1], s0.px + eps * w[0][2], s0.py + eps * w[0][3]}, h);
  Propagator c(p, s0, h);
  for (int i = 0; i < 300; ++i) {
    a.advance(w);
    b.advance();
    c.advance();
  }
  const auto B = b.state(), C = c.state();
  EXPECT_NEAR(w[0][0], (B.x - C.x) / eps, 1e-5);
  EXPECT_NEAR(w[0][1], (B.y - C.y) / eps, 1e-5);
  EXPECT_NEAR(w[0][2], (B.px - C.px) / eps, 1e-5);
  EXPECT_NEAR(w[0][3], (B.py - C.py) / eps, 1e-5);
}

TEST(Freg, IntegrableAndDeterministic) {
  const auto r0 = freg(with_b(0.0), 0.3, 8, 2000.0, 5, {}, 2);
  EXPECT_EQ(r0.fraction, 1.0);
  const auto a = freg(with_b(0.62), 0.2, 12, 1000.0, 5, {}, 1);
  const auto b = freg(with_b(0.62), 0.2, 12, 1000.0, 5, {}, 3);
  EXPECT_EQ(a.n_regular, b.n_regular);
  EXPECT_GE(a.fraction, 0.0);
  EXPECT_LE(a.fraction, 1.0);
  EXPECT_THROW(freg(with_b(0.62), -5.0, 4, 10.0, 1), std::invalid_argument);
}

TEST(Freg, DisjointSeedsAgree) {
  const auto p = with_b(0.24);
  const auto a = freg(p, 0.0, 40, 2000.0, 100);
  const auto b = freg(p, 0.0, 40, 2000.0, 200);
  const double se = std::hypot(std::max(a.std_error, 1.0 / 40), std::max(b.std_error, 1.0 / 40));
  EXPECT_LE(std::abs(a.fraction - b.fraction), 3 * se);
}

TEST(PeresAverage, FixedPointAtMinimum) {
  const auto p = with_b(0.62);
  const auto m = global_minimum(p);
  const PhasePoint s0{m.beta * std::cos(m.gamma), m.beta * std::sin(m.gamma), 0, 0};
  const auto avg = classical_peres_average(p, s0, 500.0);
  EXPECT_NEAR(avg.value, 0.0, 1e-20);
  EXPECT_NEAR(hamiltonian_classical(p, s0), m.energy, 1e-14);
}

TEST(SectionMapTest, MaskMatchesAreaOracle) {
  const auto p = with_b(0.62);
  PeresAverageOptions o;
  o.min_time = 20;
  const auto map = l2_section_map(p, 0.2, 40, 40, 50.0, o, 2);
  SectionSampler s(p, 0.2);
  auto width = [&](double x) { return 2.0 * std::sqrt(std::max(0.0, 2.0 * (0.2 - potential_cartesian(p, x, 0.0)))); };
  const double area = oracle::integrate(width, s.x_min(), 0.0) + oracle::integrate(width, 0.0, s.x_max());
  const double rect = (map.x_max - map.x_min) * (map.px_max - map.px_min);
  EXPECT_NEAR(map.masked_fraction(), 1.0 - area / rect, 0.02);
  for (int iy = 0; iy < map.ny; ++iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      const auto k = static_cast<std::size_t>(iy) * map.nx + ix;
      EXPECT_EQ(map.accessible[k], !std::isnan(s.py_for(map.x_at(ix), map.px_at(iy))));
      if (!map.accessible[k]) EXPECT_TRUE(std::isnan(map.values[k]));
    }
  }
}

TEST(SectionMapTest, SmoothAtZeroB) {
  const auto p = with_b(0.0);
  const auto map = l2_section_map(p, 0.0, 30, 30, 300.0, {}, 2);
  // At B = 0 the average is L^2 of the initial condition: x^2 py^2.
  for (int iy = 0; iy < map.ny; ++iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      const auto k = static_cast<std::size_t>(iy) * map.nx + ix;
      if (!map.accessible[k]) continue;
      SectionSampler s(p, 0.0);
      const double x = map.x_at(ix), py = s.py_for(x, map.px_at(iy));
      EXPECT_NEAR(map.values[k], x * x * py * py, 1e-10);
    }
  }
}

TEST(Bounds, MinNotAboveMaxAndZeroBOracle) {
  const auto rows = l2_bounds(with_b(0.0), {0.0, 0.24}, 0.0, 30, 500.0, 3, {}, 2);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    if (r.n_converged > 0) EXPECT_LE(r.l2_min, r.l2_max);
    EXPECT_EQ(r.n_converged + r.n_unconverged, 30);
  }
  // Oracle at B = 0, E = 0: L^2 = x^2 py^2 <= max over x of 2 x^2 (E - V(x)),
  // attained on the circular orbit; the radial orbit gives 0.
  double lmax = 0.0;
  for (double x = 0.0; x <= 1.0; x += 1e-5) lmax = std::max(lmax, 2 * x * x * (x * x - x * x * x * x));
  EXPECT_GE(rows[0].l2_min, 0.0);
  EXPECT_LE(rows[0].l2_max, lmax + 1e-9);
}
