#include "gcm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gcm/parallel.hpp"
#include "gcm/quadrature.hpp"
#include "gcm/quant2d.hpp"
#include "gcm/quant5d.hpp"

namespace gcm {

namespace {

struct StateLabel {
  int n;
  double nu;  // Laguerre index
  int ang;    // m (2D) or l (5D)
};

std::vector<StateLabel> state_labels(const BasisMeta& meta) {
  std::vector<StateLabel> out;
  if (meta.quantization == Quantization::five_d) {
    for (const auto& s : enumerate_basis_5d(meta.n_max, meta.b).states)
      out.push_back({s.n, s.v + 1.5, s.l()});
  } else {
    const Parity par = meta.quantization == Quantization::two_d_odd ? Parity::odd : Parity::even;
    for (const auto& s : enumerate_basis_2d(meta.n_max, par, meta.b).states)
      out.push_back({s.n, static_cast<double>(s.mu()), s.m});
  }
  return out;
}

std::string matrix_report(const Eigen::MatrixXd& h) {
  std::ostringstream os;
  os << "dimension=" << h.rows() << " max|h|=" << h.cwiseAbs().maxCoeff()
     << " frobenius=" << h.norm() << " asymmetry=" << (h - h.transpose()).cwiseAbs().maxCoeff()
     << " finite=" << (h.allFinite() ? "yes" : "no");
  return os.str();
}

void require_converged(const EigenSolution& sol, int level) {
  if (level < 0 || level >= sol.n_converged) {
    throw std::out_of_range("level " + std::to_string(level) + " outside converged range [0, " +
                            std::to_string(sol.n_converged) + ")");
  }
}

/// Evaluates Psi_i(beta, gamma) by grouping basis states by angular label so a
/// single Laguerre recurrence serves every radial node of that label.
class WaveEvaluator {
 public:
  WaveEvaluator(const EigenSolution& sol, int level) : meta_(sol.meta) {
    const auto labels = state_labels(meta_);
    for (std::size_t a = 0; a < labels.size(); ++a) {
      auto& g = groups_[labels[a].ang];
      g.nu = labels[a].nu;
      if (static_cast<int>(g.coeff.size()) <= labels[a].n) g.coeff.resize(labels[a].n + 1, 0.0);
      g.coeff[labels[a].n] = sol.coeffs(static_cast<Eigen::Index>(a), level);
    }
  }

  double operator()(double beta, double gamma) const {
    const double b = meta_.b;
    const double t = beta * beta / (b * b);
    const bool five = meta_.quantization == Quantization::five_d;
    double radial_scale;
    if (five) {
      // R = sqrt(2/b^5) t^{-3/4} phi_n^{v+3/2}(t)
      const double tt = std::max(t, 1e-280);
      radial_scale = std::sqrt(2.0 / std::pow(b, 5)) * std::pow(tt, -0.75);
    } else {
      radial_scale = std::numbers::sqrt2 / b;
    }
    const double t_eval = five ? std::max(t, 1e-280) : t;
    double psi = 0.0;
    std::vector<double> buf;
    for (const auto& [ang, g] : groups_) {
      buf.resize(g.coeff.size());
      laguerre_functions(g.nu, t_eval, buf);
      double radial = 0.0;
      for (std::size_t n = 0; n < g.coeff.size(); ++n) radial += g.coeff[n] * buf[n];
      psi += radial * angular(ang, gamma);
    }
    return radial_scale * psi;
  }

 private:
  double angular(int ang, double gamma) const {
    switch (meta_.quantization) {
      case Quantization::two_d_even:
        return ang == 0 ? 1.0 / std::sqrt(2.0 * std::numbers::pi)
                        : std::cos(3.0 * ang * gamma) / std::sqrt(std::numbers::pi);
      case Quantization::two_d_odd:
        return std::sin(3.0 * ang * gamma) / std::sqrt(std::numbers::pi);
      case Quantization::five_d:
        return std::sqrt(ang + 0.5) * std::legendre(static_cast<unsigned>(ang), std::cos(3.0 * gamma));
    }
    return 0.0;
  }

  struct Group {
    double nu = 0.0;
    std::vector<double> coeff;
  };
  BasisMeta meta_;
  std::map<int, Group> groups_;
};

}  // namespace

std::string to_string(Quantization q) {
  switch (q) {
    case Quantization::two_d_even: return "2d-even";
    case Quantization::two_d_odd: return "2d-odd";
    case Quantization::five_d: return "5d";
  }
  return "?";
}

Quantization quantization_from_string(std::string_view name) {
  if (name == "2d-even" || name == "2D-even") return Quantization::two_d_even;
  if (name == "2d-odd" || name == "2D-odd") return Quantization::two_d_odd;
  if (name == "5d" || name == "5D") return Quantization::five_d;
  throw std::invalid_argument("unknown quantization '" + std::string(name) +
                              "' (expected 2d-even, 2d-odd or 5d)");
}

std::size_t basis_dimension(Quantization q, int n_max) {
  BasisMeta meta;
  meta.quantization = q;
  meta.n_max = n_max;
  return state_labels(meta).size();
}

Eigen::MatrixXd assemble(const BasisMeta& meta, Operator op, int workers) {
  if (meta.quantization == Quantization::five_d) {
    return assemble_matrix_5d(meta.params, enumerate_basis_5d(meta.n_max, meta.b), op, workers);
  }
  const Parity par = meta.quantization == Quantization::two_d_odd ? Parity::odd : Parity::even;
  return assemble_matrix_2d(meta.params, enumerate_basis_2d(meta.n_max, par, meta.b), op, workers);
}

EigenSolution diagonalize(const BasisMeta& meta, int workers) {
  const Eigen::MatrixXd h = assemble(meta, Operator::H, workers);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed: " + matrix_report(h));
  }
  EigenSolution sol;
  sol.energies = eig.eigenvalues();
  sol.coeffs = eig.eigenvectors();
  sol.meta = meta;
  // Fix the sign of each eigenvector (largest component positive) so outputs
  // do not depend on solver internals.
  for (Eigen::Index i = 0; i < sol.coeffs.cols(); ++i) {
    Eigen::Index imax;
    sol.coeffs.col(i).cwiseAbs().maxCoeff(&imax);
    if (sol.coeffs(imax, i) < 0.0) sol.coeffs.col(i) *= -1.0;
  }
  return sol;
}

EigenSolution solve(const ModelParams& p, Quantization q, int n_max, double b,
                    const SolveOptions& options) {
  p.validate();
  if (n_max < 0) throw std::invalid_argument("solve: n_max must be >= 0");
  BasisMeta meta{q, n_max, b > 0.0 ? b : default_oscillator_length(p), p};
  if (basis_dimension(q, n_max) == 0) throw std::invalid_argument("solve: empty basis");

  EigenSolution sol = diagonalize(meta, options.workers);

  const int coarse_n = n_max - options.convergence.shell_step;
  if (options.convergence.shell_step > 0 && coarse_n >= 0 && basis_dimension(q, coarse_n) > 0) {
    BasisMeta coarse = meta;
    coarse.n_max = coarse_n;
    const Eigen::MatrixXd hc = assemble(coarse, Operator::H, options.workers);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hc, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
      throw NumericalError("symmetric eigensolver failed: " + matrix_report(hc));
    }
    const Eigen::VectorXd& ec = eig.eigenvalues();
    int count = 0;
    while (count < ec.size() &&
           std::abs(sol.energies[count] - ec[count]) < options.convergence.tolerance) {
      ++count;
    }
    sol.n_converged = count;
  }
  return sol;
}

double expectation(const EigenSolution& sol, const Eigen::MatrixXd& observable, int level) {
  require_converged(sol, level);
  if (observable.rows() != sol.coeffs.rows() || observable.cols() != sol.coeffs.rows()) {
    throw std::invalid_argument("observable dimension does not match the basis");
  }
  const auto c = sol.coeffs.col(level);
  return c.dot(observable * c);
}

Eigen::VectorXd expectation_values(const EigenSolution& sol, const Eigen::MatrixXd& observable) {
  if (observable.rows() != sol.coeffs.rows() || observable.cols() != sol.coeffs.rows()) {
    throw std::invalid_argument("observable dimension does not match the basis");
  }
  const Eigen::MatrixXd oc = observable * sol.coeffs;
  return sol.coeffs.cwiseProduct(oc).colwise().sum().transpose();
}

PeresLattice peres_lattice(const EigenSolution& sol, Operator op, int workers) {
  PeresLattice lattice{op, {}};
  if (sol.n_converged <= 0) return lattice;
  const Eigen::MatrixXd o = assemble(sol.meta, op, workers);
  const Eigen::MatrixXd c = sol.coeffs.leftCols(sol.n_converged);
  const Eigen::VectorXd values = c.cwiseProduct(o * c).colwise().sum().transpose();
  lattice.rows.reserve(sol.n_converged);
  for (int i = 0; i < sol.n_converged; ++i) lattice.rows.push_back({i, sol.energies[i], values[i]});
  return lattice;
}

double check_identity_hprime(const EigenSolution& sol, int workers) {
  const double B = sol.meta.params.B;
  if (B == 0.0) throw std::invalid_argument("Peres identity check needs B != 0");
  const auto hp = peres_lattice(sol, Operator::Hprime, workers);
  const auto h0 = peres_lattice(sol, Operator::H0, workers);
  double worst = 0.0;
  for (std::size_t i = 0; i < hp.rows.size(); ++i) {
    const double rhs = (hp.rows[i].energy - h0.rows[i].value) / B;
    worst = std::max(worst, std::abs(hp.rows[i].value - rhs));
  }
  return worst;
}

double wavefunction_value(const EigenSolution& sol, int level, double beta, double gamma) {
  require_converged(sol, level);
  return WaveEvaluator(sol, level)(beta, gamma);
}

DensityGrid wavefunction_density(const EigenSolution& sol, int level, const GridSpec& grid) {
  require_converged(sol, level);
  if (grid.nu < 1 || grid.nv < 1 || !(grid.u_max > grid.u_min) || !(grid.v_max > grid.v_min)) {
    throw std::invalid_argument("density grid needs positive extent and resolution");
  }
  const WaveEvaluator psi(sol, level);
  DensityGrid out;
  out.sector = sol.meta.quantization == Quantization::five_d;
  out.grid = grid;
  out.values.assign(static_cast<std::size_t>(grid.nu) * grid.nv, 0.0);
  parallel_for(static_cast<std::size_t>(grid.nv), 0, [&](std::size_t iv) {
    const double v = out.v_at(static_cast<int>(iv));
    for (int iu = 0; iu < grid.nu; ++iu) {
      const double u = out.u_at(iu);
      double value;
      if (out.sector) {
        const double amp = psi(u, v);
        value = amp * amp * std::pow(u, 4) * 3.0 * std::abs(std::sin(3.0 * v));
      } else {
        const double amp = psi(std::hypot(u, v), std::atan2(v, u));
        value = amp * amp;
      }
      out.values[iv * grid.nu + iu] = value;
    }
  });
  double sum = 0.0;
  for (double v : out.values) sum += v;
  const double cell = (grid.u_max - grid.u_min) / grid.nu * (grid.v_max - grid.v_min) / grid.nv;
  out.integral = sum * cell;
  return out;
}

GridSpec default_density_grid(const EigenSolution& sol, int level, int resolution) {
  require_converged(sol, level);
  const double E = sol.energies[level];
  double reach = 0.0;
  for (int k = 0; k < 12; ++k) {
    for (const auto& iv : accessible_domain(sol.meta.params, E, k * std::numbers::pi / 6.0))
      reach = std::max(reach, iv.hi);
  }
  reach = 1.15 * reach + 3.0 * sol.meta.b;
  GridSpec g;
  g.nu = resolution;
  g.nv = resolution;
  if (sol.meta.quantization == Quantization::five_d) {
    g.u_min = 0.0;
    g.u_max = reach;
    g.v_min = 0.0;
    g.v_max = std::numbers::pi / 3.0;
  } else {
    g.u_min = -reach;
    g.u_max = reach;
    g.v_min = -reach;
    g.v_max = reach;
  }
  return g;
}

std::vector<ConvergenceRow> convergence_study(const ModelParams& p, Quantization q,
                                              const std::vector<int>& n_max_list, double b,
                                              int workers) {
  if (!std::is_sorted(n_max_list.begin(), n_max_list.end())) {
    throw std::invalid_argument("convergence_study: n_max list must be ascending");
  }
  std::vector<ConvergenceRow> rows;
  if (n_max_list.empty()) return rows;
  const double length = b > 0.0 ? b : default_oscillator_length(p);
  for (int n_max : n_max_list) {
    const EigenSolution sol = diagonalize(BasisMeta{q, n_max, length, p}, workers);
    for (Eigen::Index i = 0; i < sol.energies.size(); ++i)
      rows.push_back({n_max, static_cast<int>(i), sol.energies[i]});
  }
  return rows;
}

std::optional<int> stable_from(const std::vector<ConvergenceRow>& table, int level, double tol) {
  std::vector<std::pair<int, double>> track;
  for (const auto& r : table)
    if (r.level == level) track.emplace_back(r.n_max, r.energy);
  if (track.empty()) return std::nullopt;
  const double last = track.back().second;
  std::optional<int> from;
  for (auto it = track.rbegin(); it != track.rend(); ++it) {
    if (std::abs(it->second - last) >= tol) break;
    from = it->first;
  }
  if (track.size() < 2 || from == track.back().first) return std::nullopt;
  return from;
}

}  // namespace gcm
