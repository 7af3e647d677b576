#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcm/classical.hpp"
#include "gcm/model.hpp"
#include "gcm/operators.hpp"
#include "gcm/spectra.hpp"

namespace gcm {

/// Invalid configuration; the message starts with the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct BasisConfig {
  Quantization quantization = Quantization::two_d_even;
  int n_max = 60;
  double b = 0.0;  // <= 0: default oscillator length
  int shell_step = 10;
  double convergence_tol = 1e-6;
};

struct ClassicalConfig {
  double energy = 0.2;
  std::vector<double> energies;  // freg curve; empty = {energy}
  std::vector<double> B_values;  // bounds
  double tolerance = 1e-10;      // integrator energy tolerance
  double sali_tolerance = 1e-9;
  double sali_time = 1e4;
  double t_max = 2e3;            // Peres-average cap
  double peres_tolerance = 1e-3;
  int n_samples = 200;
  int n_traj = 100;
  int n_crossings = 1000;
  int mesh_nx = 100;
  int mesh_ny = 100;
  std::uint64_t seed = 1;
};

struct LatticeConfig {
  std::vector<Operator> operators{Operator::L2, Operator::Hprime, Operator::H0};
};

struct WavefunctionConfig {
  std::vector<int> levels{0};
  int resolution = 200;
};

struct BrodyConfig {
  double e_lo = 0.0;
  double e_hi = 1.0;
  int degree = 7;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  int format_version = 1;
  bool binary_map = false;
};

struct RunConfig {
  ModelParams model;
  BasisConfig basis;
  ClassicalConfig classical;
  LatticeConfig lattice;
  WavefunctionConfig wavefunction;
  BrodyConfig brody;
  OutputConfig outputs;
  int workers = 0;

  /// Every key, in "section.key" form, with its value as text.
  std::map<std::string, std::string> snapshot() const;

  SolveOptions solve_options() const;
  SaliOptions sali_options() const;
  IntegratorOptions integrator_options() const;
  PeresAverageOptions peres_options() const;
};

/// Output directory override read by resolve_output_directory.
inline constexpr const char* kOutputDirEnv = "GCM_PERES_OUTPUT_DIR";

/// Parses INI text, applies "section.key=value" overrides, rejects unknown
/// keys and invalid values with ConfigError.
RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides = {});

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

/// Precedence: config file < environment variable < explicit override.
std::filesystem::path resolve_output_directory(const RunConfig& config,
                                               const std::vector<std::string>& overrides);

}  // namespace gcm
