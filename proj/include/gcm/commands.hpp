#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gcm/run_config.hpp"

namespace gcm {

/// spectrum, lattice, wavefunction, poincare, l2map, freg, bounds, brody
const std::vector<std::string>& command_names();

/// Runs one subcommand, writing its data files and manifest.json into
/// out_dir. Returns the manifest path. Throws std::invalid_argument for an
/// unknown command.
std::filesystem::path run_command(const std::string& name, const RunConfig& config,
                                  const std::filesystem::path& out_dir);

}  // namespace gcm
