#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcm/commands.hpp"
#include "gcm/model.hpp"
#include "gcm/output.hpp"
#include "gcm/run_config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peres lattices and classical regularity for the geometric collective model"};
  app.set_version_flag("--version", gcm::code_version());
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string config_path;
  std::vector<std::string> overrides;
  const std::vector<std::pair<std::string, std::string>> help{
      {"spectrum", "diagonalize H and write spectrum.csv"},
      {"lattice", "Peres lattices of L2, H' and H0 (lattice.csv)"},
      {"wavefunction", "probability densities of selected levels (density_<i>.csv)"},
      {"poincare", "Poincare section crossings (section.csv)"},
      {"l2map", "classical <L2> over the section mesh (l2map.csv)"},
      {"freg", "regular fraction versus energy (freg.csv)"},
      {"bounds", "min/max of classical <L2> versus B (bounds.csv)"},
      {"brody", "Brody parameter of an unfolded spectral window (brody.csv)"}};
  for (const auto& [name, text] : help) {
    auto* sub = app.add_subcommand(name, text);
    sub->failure_message(CLI::FailureMessage::help);
    sub->add_option("-c,--config", config_path, "INI configuration file")->required();
    sub->add_option("--set", overrides, "override a key: section.key=value")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    const auto config = gcm::load_config(config_path, overrides);
    const auto out_dir = gcm::resolve_output_directory(config, overrides);
    const auto manifest = gcm::run_command(command, config, out_dir);
    std::cout << manifest.string() << "\n";
    return 0;
  } catch (const gcm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    if (e.key() == "<file>") std::cerr << sub->help();
    return kExitConfig;
  } catch (const gcm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
