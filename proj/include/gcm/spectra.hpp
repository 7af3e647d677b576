#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gcm/model.hpp"
#include "gcm/operators.hpp"

namespace gcm {

enum class Quantization { two_d_even, two_d_odd, five_d };

std::string to_string(Quantization q);

/// Accepts "2d-even", "2d-odd", "5d".
Quantization quantization_from_string(std::string_view name);

struct BasisMeta {
  Quantization quantization = Quantization::two_d_even;
  int n_max = 0;
  double b = 1.0;
  ModelParams params;
};

std::size_t basis_dimension(Quantization q, int n_max);

/// Operator matrix in the basis described by meta.
Eigen::MatrixXd assemble(const BasisMeta& meta, Operator op, int workers = 0);

/// A level is trusted when it moves by less than `tolerance` between the
/// truncations n_max - shell_step and n_max. Trusted levels form a prefix.
struct ConvergenceRule {
  int shell_step = 10;
  double tolerance = 1e-6;
};

struct SolveOptions {
  ConvergenceRule convergence;
  int workers = 0;
};

struct EigenSolution {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd coeffs;    // column i = eigenvector i in basis order
  BasisMeta meta;
  int n_converged = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(energies.size()); }
};

/// Full diagonalization of H at (n_max, b) plus the convergence count. A
/// non-positive b selects default_oscillator_length(p). Eigensolver failure
/// raises NumericalError carrying a matrix report.
EigenSolution solve(const ModelParams& p, Quantization q, int n_max, double b = 0.0,
                    const SolveOptions& options = {});

/// Diagonalize without the convergence comparison (n_converged = 0).
EigenSolution diagonalize(const BasisMeta& meta, int workers = 0);

/// <psi_i| O |psi_i>; i must be a converged level (std::out_of_range otherwise).
double expectation(const EigenSolution& sol, const Eigen::MatrixXd& observable, int level);

/// Diagonal of C^T O C over the full spectrum, converged or not.
Eigen::VectorXd expectation_values(const EigenSolution& sol, const Eigen::MatrixXd& observable);

struct LatticeRow {
  int index;
  double energy;
  double value;
};

struct PeresLattice {
  Operator op;
  std::vector<LatticeRow> rows;  // one per converged level, ascending index
};

PeresLattice peres_lattice(const EigenSolution& sol, Operator op, int workers = 0);

/// max_i |<H'>_i - (E_i - <H0>_i) / B| over converged levels; rejects B = 0.
double check_identity_hprime(const EigenSolution& sol, int workers = 0);

/// Sampling rectangle: (x, y) for 2D, (beta, gamma) for the 5D sector.
struct GridSpec {
  double u_min = -1.0;
  double u_max = 1.0;
  int nu = 100;
  double v_min = -1.0;
  double v_max = 1.0;
  int nv = 100;
};

struct DensityGrid {
  bool sector = false;  // true: (beta, gamma) with the 5D measure folded in
  GridSpec grid;
  std::vector<double> values;  // values[iv * nu + iu], cell centres
  double integral = 0.0;       // sum * cell area

  double deficit() const { return 1.0 - integral; }
  double u_at(int iu) const { return grid.u_min + (iu + 0.5) * (grid.u_max - grid.u_min) / grid.nu; }
  double v_at(int iv) const { return grid.v_min + (iv + 0.5) * (grid.v_max - grid.v_min) / grid.nv; }
};

/// Amplitude Psi_i(beta, gamma) (2D: value in the plane; 5D: radial times
/// the J = 0 angular function, without the volume element).
double wavefunction_value(const EigenSolution& sol, int level, double beta, double gamma);

/// |Psi_i|^2 on a uniform Cartesian grid (2D) or beta^4 * 3 sin3g |Psi_i|^2 on
/// a uniform (beta, gamma in [0, pi/3]) grid (5D); both integrate to one
/// when the grid covers the support.
DensityGrid wavefunction_density(const EigenSolution& sol, int level, const GridSpec& grid);

/// Grid covering the classically allowed region of level i with a margin
/// for the evanescent tail.
GridSpec default_density_grid(const EigenSolution& sol, int level, int resolution);

struct ConvergenceRow {
  int n_max;
  int level;
  double energy;
};

/// Energies of every level at every truncation in n_max_list (ascending).
std::vector<ConvergenceRow> convergence_study(const ModelParams& p, Quantization q,
                                              const std::vector<int>& n_max_list, double b = 0.0,
                                              int workers = 0);

/// Smallest n_max from which the level stays within tol of its value at the
/// largest truncation; empty if the level is absent or never settles.
std::optional<int> stable_from(const std::vector<ConvergenceRow>& table, int level, double tol);

}  // namespace gcm
