#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <Eigen/Eigenvalues>

#include "gcm/quadrature.hpp"
#include "gcm/quant2d.hpp"
#include "gcm/quant5d.hpp"
#include "oracles.hpp"

using namespace gcm;
using std::numbers::pi;

TEST(Laguerre, RuleIntegratesMonomialsExactly) {
  for (double alpha : {0.0, 0.5, 1.5, 3.0, 7.5}) {
    const int n = 12;
    const auto rule = laguerre_rule(n, alpha);
    ASSERT_EQ(rule.size(), static_cast<std::size_t>(n));
    for (int k = 0; k < 2 * n; ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const double t = rule.nodes[j];
        sum += rule.weights[j] * std::exp(alpha * std::log(t) - t + k * std::log(t));
      }
      const double exact = std::tgamma(alpha + k + 1.0);
      EXPECT_NEAR(sum / exact, 1.0, 1e-11) << "alpha=" << alpha << " k=" << k;
    }
  }
}

TEST(Laguerre, FunctionsMatchSeries) {
  for (double alpha : {0.0, 1.5, 3.0, 10.5}) {
    for (double t : {0.01, 0.7, 3.0, 12.0}) {
      const auto phi = laguerre_functions(8, alpha, t);
      for (int k = 0; k <= 8; ++k) {
        const double ref = std::sqrt(std::exp(std::lgamma(k + 1.0) - std::lgamma(k + alpha + 1.0))) *
                           std::pow(t, alpha / 2) * std::exp(-t / 2) * oracle::laguerre_series(k, alpha, t);
        EXPECT_NEAR(phi[k], ref, 1e-10 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST(RadialMoment2D, Examples) {
  EXPECT_NEAR(radial_moment_2d(0, 0, 0, 0, 0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(radial_moment_2d(0, 0, 1, 0, 0, 1.0), 0.0, 1e-14);
  const double ref = oracle::integrate(
      [](double x) { return std::pow(oracle::radial_2d(0, 0, 1.0, x), 2) * x * x * x; }, 0.0, 30.0);
  EXPECT_NEAR(radial_moment_2d(0, 0, 0, 0, 2, 1.0), ref, 1e-12);
}

TEST(RadialMoment2D, AgreesWithAdaptiveQuadrature) {
  const double b = 0.37;
  for (auto [n, mu, n2, mu2, k] : {std::tuple{2, 3, 1, 6, 3}, std::tuple{4, 0, 3, 3, 3},
                                   std::tuple{5, 6, 5, 6, 4}, std::tuple{0, 9, 3, 9, 2}}) {
    const double ref = oracle::integrate(
        [&](double x) {
          return oracle::radial_2d(n, mu, b, x) * std::pow(x, k) * oracle::radial_2d(n2, mu2, b, x) * x;
        },
        0.0, 12 * b);
    EXPECT_NEAR(radial_moment_2d(n, mu, n2, mu2, k, b), ref, 1e-12);
  }
}

TEST(RadialMoment5D, AgreesWithAdaptiveQuadrature) {
  EXPECT_NEAR(radial_moment_5d(0, 0, 0, 0, 0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(radial_moment_5d(0, 0, 1, 0, 0, 1.0), 0.0, 1e-14);
  const double b = 0.8;
  for (auto [n, v, n2, v2, k] : {std::tuple{0, 0, 0, 3, 3}, std::tuple{2, 3, 1, 6, 3},
                                 std::tuple{3, 0, 3, 0, 4}, std::tuple{1, 6, 2, 6, 2}}) {
    const double ref = oracle::integrate(
        [&](double x) {
          return oracle::radial_5d(n, v, b, x) * std::pow(x, k) * oracle::radial_5d(n2, v2, b, x) * std::pow(x, 4);
        },
        0.0, 12 * b);
    EXPECT_NEAR(radial_moment_5d(n, v, n2, v2, k, b), ref, 1e-12);
  }
}

TEST(RadialMoment, StableUnderNodeDoubling) {
  // Oracle: the same moment through an explicit rule with twice the nodes.
  for (auto [n, nu, m, nu2, k] : {std::tuple{3, 3.0, 4, 6.0, 3}, std::tuple{6, 4.5, 5, 7.5, 4}}) {
    const int nodes = 2 * laguerre_moment_nodes(n, nu, m, nu2, k);
    const double alpha = std::fmod(0.5 * (nu + nu2 + k), 1.0);
    const auto rule = laguerre_rule(nodes, alpha);
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double t = rule.nodes[j];
      sum += rule.weights[j] * laguerre_functions(n, nu, t)[n] * laguerre_functions(m, nu2, t)[m] *
             std::pow(t, 0.5 * k);
    }
    EXPECT_NEAR(laguerre_moment(n, nu, m, nu2, k, 1.0), sum, 1e-13 * std::max(1.0, std::abs(sum)));
  }
}

TEST(Angular, Coupling2D) {
  EXPECT_EQ(angular_coupling_2d(1, 3, Parity::even), 0.0);
  // Oracle: trapezoid rule over a period (exact for trigonometric polynomials).
  auto trig = [](int m, int m2, Parity par) {
    const int N = 512;
    auto chi = [&](int mm, double g) {
      if (par == Parity::odd) return std::sin(3 * mm * g) / std::sqrt(pi);
      return mm == 0 ? 1.0 / std::sqrt(2 * pi) : std::cos(3 * mm * g) / std::sqrt(pi);
    };
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      const double g = 2 * pi * i / N;
      s += chi(m, g) * std::cos(3 * g) * chi(m2, g);
    }
    return s * 2 * pi / N;
  };
  EXPECT_NEAR(angular_coupling_2d(1, 2, Parity::even), 0.5, 1e-15);
  EXPECT_NEAR(angular_coupling_2d(0, 1, Parity::even), 1.0 / std::sqrt(2.0), 1e-15);
  for (int m = 0; m < 5; ++m) {
    for (int m2 = 0; m2 < 5; ++m2) {
      EXPECT_NEAR(angular_coupling_2d(m, m2, Parity::even), trig(m, m2, Parity::even), 1e-13);
      if (m > 0 && m2 > 0) EXPECT_NEAR(angular_coupling_2d(m, m2, Parity::odd), trig(m, m2, Parity::odd), 1e-13);
    }
  }
}

TEST(Angular, LegendreCoupling) {
  EXPECT_EQ(legendre_coupling(0, 0), 0.0);
  EXPECT_EQ(legendre_coupling(2, 5), 0.0);
  EXPECT_NEAR(legendre_coupling(0, 1), 1.0 / std::sqrt(3.0), 1e-15);
  for (int l = 0; l < 6; ++l) {
    for (int l2 = 0; l2 < 6; ++l2) {
      const double ref = oracle::integrate(
          [&](double u) {
            return std::sqrt((2 * l + 1) / 2.0) * std::legendre(l, u) * u * std::sqrt((2 * l2 + 1) / 2.0) *
                   std::legendre(l2, u);
          },
          -1.0, 1.0);
      EXPECT_NEAR(legendre_coupling(l, l2), ref, 1e-13);
    }
  }
}

TEST(Angular, FiveDimensionalCasimirOnLegendre) {
  // Lambda^2 on J = 0 functions of u = cos3g reduces to
  // -(1/sin3g) d/dg (sin3g d/dg); check v(v+3) on P_l(cos3g) by differences.
  const double h = 1e-4;
  for (int l = 0; l < 4; ++l) {
    const int v = 3 * l;
    for (double g : {0.2, 0.5, 0.9}) {
      auto f = [&](double x) { return std::legendre(l, std::cos(3 * x)); };
      auto flux = [&](double x) { return std::sin(3 * x) * (f(x + h / 2) - f(x - h / 2)) / h; };
      const double lap = -(flux(g + h / 2) - flux(g - h / 2)) / (h * std::sin(3 * g));
      EXPECT_NEAR(lap, v * (v + 3.0) * f(g), 1e-5 * std::max(1.0, v * (v + 3.0)));
    }
  }
}

TEST(Basis2D, Enumeration) {
  EXPECT_EQ(enumerate_basis_2d(0, Parity::even, 1.0).size(), 1u);
  const auto even = enumerate_basis_2d(6, Parity::even, 1.0);
  std::vector<std::pair<int, int>> got;
  for (const auto& s : even.states) got.emplace_back(s.n, s.m);
  std::sort(got.begin(), got.end(), [](auto a, auto b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
  EXPECT_EQ(got, (std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1}, {1, 1}, {0, 2}}));
  const auto odd = enumerate_basis_2d(6, Parity::odd, 1.0);
  ASSERT_EQ(odd.size(), 3u);
  for (const auto& s : odd.states) EXPECT_GE(s.m, 1);
  EXPECT_THROW(enumerate_basis_2d(-1, Parity::even, 1.0), std::invalid_argument);
}

TEST(Basis5D, Enumeration) {
  EXPECT_EQ(enumerate_basis_5d(0, 1.0).size(), 1u);
  auto labels = [](const Basis5D& b) {
    std::vector<std::pair<int, int>> v;
    for (const auto& s : b.states) v.emplace_back(s.v, s.n);
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(labels(enumerate_basis_5d(6, 1.0)),
            (std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {3, 0}, {3, 1}, {6, 0}}));
  EXPECT_EQ(labels(enumerate_basis_5d(5, 1.0)),
            (std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {3, 0}, {3, 1}}));
}

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Assembly2D, SymmetryL2AndBlockStructure) {
  ModelParams p;
  p.B = 0.62;
  const auto basis = enumerate_basis_2d(30, Parity::even, 0.3);
  const auto H = assemble_matrix_2d(p, basis, Operator::H);
  EXPECT_LE(max_abs(H - H.transpose()), 1e-12 * max_abs(H));
  const auto L2 = assemble_matrix_2d(p, basis, Operator::L2);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double expect = i == j ? p.hbar * p.hbar * 9.0 * basis.states[i].m * basis.states[i].m : 0.0;
      if (i == j) {
        EXPECT_DOUBLE_EQ(L2(i, j), expect);
      } else {
        EXPECT_EQ(L2(i, j), 0.0);
      }
    }
  }
  ModelParams p0;
  const auto H0 = assemble_matrix_2d(p0, basis, Operator::H);
  const auto L20 = assemble_matrix_2d(p0, basis, Operator::L2);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (basis.states[i].m != basis.states[j].m) EXPECT_LT(std::abs(H0(i, j)), 1e-14);
    }
  }
  EXPECT_LT(max_abs(H0 * L20 - L20 * H0), 1e-10 * max_abs(H0));
  // H = H0 + B H'
  const Eigen::MatrixXd sum = assemble_matrix_2d(p, basis, Operator::H0) + p.B * assemble_matrix_2d(p, basis, Operator::Hprime);
  EXPECT_LT(max_abs(H - sum), 1e-13 * max_abs(H));
}

TEST(Assembly2D, HprimeMatchesDirectIntegration) {
  ModelParams p;
  p.B = 0.62;
  const double b = 0.45;
  const auto basis = enumerate_basis_2d(8, Parity::even, b);
  const auto Hp = assemble_matrix_2d(p, basis, Operator::Hprime);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto &a = basis.states[i], &c = basis.states[j];
      const double radial = oracle::integrate(
          [&](double x) {
            return oracle::radial_2d(a.n, a.mu(), b, x) * x * x * x * oracle::radial_2d(c.n, c.mu(), b, x) * x;
          },
          0.0, 12 * b);
      const double ang = std::abs(a.m - c.m) == 1
                             ? ((a.m == 0 || c.m == 0) ? 1.0 / std::sqrt(2.0) : 0.5)
                             : 0.0;
      EXPECT_NEAR(Hp(i, j), radial * ang, 1e-12);
    }
  }
}

TEST(Assembly2D, KineticMatchesGradientIntegral) {
  // Oracle: T_ij = hbar^2/2K integral (R_i' R_j' + mu^2 R_i R_j / beta^2) beta dbeta
  // for same-m states, by differentiating the explicit radial functions.
  ModelParams p;
  p.hbar = 0.3;
  const double b = 0.6;
  const auto basis = enumerate_basis_2d(8, Parity::even, b);
  const auto H0 = assemble_matrix_2d(p, basis, Operator::H0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto &a = basis.states[i], &c = basis.states[j];
      if (a.m != c.m) continue;
      // dL_n^a/dt = -L_{n-1}^{a+1}
      auto d = [&](int n, int mu, double x) {
        const double t = x * x / (b * b);
        const double norm = std::sqrt(2.0 * std::exp(std::lgamma(n + 1.0) - std::lgamma(n + mu + 1.0))) / b;
        const double dl = n > 0 ? -oracle::laguerre_series(n - 1, mu + 1, t) : 0.0;
        const double l = oracle::laguerre_series(n, mu, t);
        return norm * std::pow(x / b, mu) * std::exp(-0.5 * t) *
               ((mu / x - x / (b * b)) * l + 2 * x / (b * b) * dl);
      };
      const double mu2 = double(a.mu()) * a.mu();
      const double kin = 0.5 * p.hbar * p.hbar / p.K * oracle::integrate(
          [&](double x) {
            return (d(a.n, a.mu(), x) * d(c.n, c.mu(), x) +
                    mu2 * oracle::radial_2d(a.n, a.mu(), b, x) * oracle::radial_2d(c.n, c.mu(), b, x) / (x * x)) * x;
          },
          1e-9, 12 * b);
      const double pot = p.A * radial_moment_2d(a.n, a.mu(), c.n, c.mu(), 2, b) +
                         p.C * radial_moment_2d(a.n, a.mu(), c.n, c.mu(), 4, b);
      EXPECT_NEAR(H0(i, j), kin + pot, 1e-10) << i << "," << j;
    }
  }
}

TEST(Assembly2D, LowestEigenvalueConvergesAndIsVariational) {
  ModelParams p;
  p.hbar = 0.1;
  auto lowest = [&](int n_max) {
    const auto basis = enumerate_basis_2d(n_max, Parity::even, 0.3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_matrix_2d(p, basis, Operator::H0));
    return es.eigenvalues()(0);
  };
  double prev = lowest(10);
  for (int n = 20; n <= 60; n += 10) {
    const double e = lowest(n);
    EXPECT_LE(e, prev + 1e-12);
    prev = e;
  }
  EXPECT_NEAR(lowest(60), lowest(70), 1e-8);
}

TEST(Assembly5D, L2DiagonalAndCommutator) {
  ModelParams p;
  const auto basis = enumerate_basis_5d(9, 0.5);
  const auto L2 = assemble_matrix_5d(p, basis, Operator::L2);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const int v = basis.states[i].v;
      EXPECT_EQ(L2(i, j), i == j ? p.hbar * p.hbar * v * (v + 3.0) : 0.0);
    }
  }
  const auto big = enumerate_basis_5d(30, 0.4);
  const auto H = assemble_matrix_5d(p, big, Operator::H);
  const auto L = assemble_matrix_5d(p, big, Operator::L2);
  EXPECT_LT(max_abs(H * L - L * H), 1e-10 * max_abs(H));
  ModelParams q;
  q.B = 1.09;
  const auto Hq = assemble_matrix_5d(q, big, Operator::H);
  EXPECT_LE(max_abs(Hq - Hq.transpose()), 1e-12 * max_abs(Hq));
}

TEST(Assembly5D, HprimeMatchesDirectIntegration) {
  ModelParams p;
  const double b = 0.5;
  const auto basis = enumerate_basis_5d(9, b);
  const auto Hp = assemble_matrix_5d(p, basis, Operator::Hprime);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto &a = basis.states[i], &c = basis.states[j];
      const double radial = oracle::integrate(
          [&](double x) {
            return oracle::radial_5d(a.n, a.v, b, x) * x * x * x * oracle::radial_5d(c.n, c.v, b, x) * std::pow(x, 4);
          },
          0.0, 12 * b);
      const double ang = oracle::integrate(
          [&](double u) {
            return std::sqrt((2 * a.l() + 1) / 2.0) * std::legendre(a.l(), u) * u *
                   std::sqrt((2 * c.l() + 1) / 2.0) * std::legendre(c.l(), u);
          },
          -1.0, 1.0);
      EXPECT_NEAR(Hp(i, j), radial * ang, 1e-12);
    }
  }
}
