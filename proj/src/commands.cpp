#include "gcm/commands.hpp"

#include <bit>
#include <chrono>
#include <cstring>
#include <functional>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gcm/classical.hpp"
#include "gcm/output.hpp"
#include "gcm/spectra.hpp"
#include "gcm/stats.hpp"

namespace gcm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

EigenSolution solve_config(const RunConfig& c) {
  return solve(c.model, c.basis.quantization, c.basis.n_max, c.basis.b, c.solve_options());
}

void basis_comments(CsvTable& t, const EigenSolution& sol) {
  t.comment("quantization=" + to_string(sol.meta.quantization) + " n_max=" + std::to_string(sol.meta.n_max) +
            " b=" + format_double(sol.meta.b) + " dimension=" + std::to_string(sol.dimension()) +
            " n_converged=" + std::to_string(sol.n_converged));
}

void cmd_spectrum(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto sol = solve_config(c);
  m.timing("solve", seconds_since(t0));
  CsvTable t({"index", "energy", "converged"});
  basis_comments(t, sol);
  for (Eigen::Index i = 0; i < sol.energies.size(); ++i) {
    t.row().cell(static_cast<long long>(i)).cell(sol.energies(i)).cell(i < sol.n_converged ? 1 : 0);
  }
  m.write("spectrum.csv", t.str());
}

std::string lattice_column(Operator op) {
  switch (op) {
    case Operator::L2: return "p_l2";
    case Operator::Hprime: return "p_hprime";
    case Operator::H0: return "p_h0";
    case Operator::H: break;
  }
  throw std::invalid_argument("operator " + to_string(op) + " has no lattice column");
}

void cmd_lattice(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto sol = solve_config(c);
  m.timing("solve", seconds_since(t0));
  const auto t1 = Clock::now();
  // Fixed column order regardless of how the operators were listed.
  std::vector<Operator> ops;
  for (Operator op : {Operator::L2, Operator::Hprime, Operator::H0}) {
    for (Operator want : c.lattice.operators) {
      if (want == op) {
        ops.push_back(op);
        break;
      }
    }
  }
  std::vector<std::string> header{"index", "energy"};
  std::vector<Eigen::VectorXd> columns;
  for (Operator op : ops) {
    header.push_back(lattice_column(op));
    columns.push_back(expectation_values(sol, assemble(sol.meta, op, c.workers)));
  }
  m.timing("expectations", seconds_since(t1));
  CsvTable t(header);
  basis_comments(t, sol);
  for (int i = 0; i < sol.n_converged; ++i) {
    t.row().cell(i).cell(sol.energies(i));
    for (const auto& col : columns) t.cell(col(i));
  }
  m.write("lattice.csv", t.str());
}

void cmd_wavefunction(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto sol = solve_config(c);
  m.timing("solve", seconds_since(t0));
  for (int level : c.wavefunction.levels) {
    if (level >= sol.n_converged) {
      throw std::out_of_range("wavefunction.levels: level " + std::to_string(level) +
                              " is not converged (n_converged=" + std::to_string(sol.n_converged) + ")");
    }
  }
  const auto t1 = Clock::now();
  for (int level : c.wavefunction.levels) {
    const auto grid = default_density_grid(sol, level, c.wavefunction.resolution);
    const auto d = wavefunction_density(sol, level, grid);
    const bool sector = d.sector;
    CsvTable t({sector ? "beta" : "x", sector ? "gamma" : "y", "density"});
    basis_comments(t, sol);
    t.comment("level=" + std::to_string(level) + " energy=" + format_double(sol.energies(level)));
    t.comment(std::string("coordinates=") + (sector ? "beta,gamma measure=beta^4*3|sin3gamma|" : "x,y measure=dxdy"));
    t.comment("u_min=" + format_double(grid.u_min) + " u_max=" + format_double(grid.u_max) +
              " nu=" + std::to_string(grid.nu) + " v_min=" + format_double(grid.v_min) +
              " v_max=" + format_double(grid.v_max) + " nv=" + std::to_string(grid.nv));
    t.comment("integral=" + format_double(d.integral) + " normalization_deficit=" + format_double(d.deficit()));
    for (int iv = 0; iv < grid.nv; ++iv) {
      for (int iu = 0; iu < grid.nu; ++iu) {
        t.row().cell(d.u_at(iu)).cell(d.v_at(iv)).cell(d.values[static_cast<std::size_t>(iv) * grid.nu + iu]);
      }
    }
    m.write("density_" + std::to_string(level) + ".csv", t.str());
  }
  m.timing("densities", seconds_since(t1));
}

void cmd_poincare(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto& cl = c.classical;
  const auto recs = poincare_section(c.model, cl.energy, cl.n_traj, cl.n_crossings, cl.seed,
                                     c.integrator_options(), c.workers);
  m.timing("integrate", seconds_since(t0));
  CsvTable t({"traj_id", "x", "px"});
  t.comment("B=" + format_double(c.model.B) + " E=" + format_double(cl.energy) + " seed=" + std::to_string(cl.seed));
  for (std::size_t j = 0; j < recs.size(); ++j) {
    for (const auto& x : recs[j].crossings) t.row().cell(static_cast<long long>(j)).cell(x.x).cell(x.px);
  }
  m.write("section.csv", t.str());
}

void cmd_l2map(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto& cl = c.classical;
  const auto map = l2_section_map(c.model, cl.energy, cl.mesh_nx, cl.mesh_ny, cl.t_max, c.peres_options(), c.workers);
  m.timing("integrate", seconds_since(t0));
  CsvTable t({"x", "px", "value", "mask"});
  t.comment("B=" + format_double(c.model.B) + " E=" + format_double(cl.energy) + " nx=" + std::to_string(map.nx) +
            " ny=" + std::to_string(map.ny) + " masked_fraction=" + format_double(map.masked_fraction()));
  t.comment("mask: 0 accessible and converged, 1 inaccessible, 2 unconverged");
  for (int iy = 0; iy < map.ny; ++iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      const std::size_t k = static_cast<std::size_t>(iy) * map.nx + ix;
      const int mask = !map.accessible[k] ? 1 : (map.converged[k] ? 0 : 2);
      t.row().cell(map.x_at(ix)).cell(map.px_at(iy)).cell(map.values[k]).cell(mask);
    }
  }
  m.write("l2map.csv", t.str());
  if (c.outputs.binary_map) {
    std::string blob(map.values.size() * sizeof(double), '\0');
    std::memcpy(blob.data(), map.values.data(), blob.size());
    m.write("l2map.bin", blob);
    nlohmann::ordered_json j;
    j["format_version"] = kFormatVersion;
    j["file"] = "l2map.bin";
    j["dtype"] = "float64";
    j["byte_order"] = std::endian::native == std::endian::little ? "little" : "big";
    j["layout"] = "row-major values[iy * nx + ix], NaN where masked";
    j["nx"] = map.nx;
    j["ny"] = map.ny;
    j["x_min"] = map.x_min;
    j["x_max"] = map.x_max;
    j["px_min"] = map.px_min;
    j["px_max"] = map.px_max;
    j["energy"] = map.energy;
    j["B"] = c.model.B;
    m.write("l2map.json", j.dump(2) + "\n");
  }
}

void cmd_freg(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto& cl = c.classical;
  const std::vector<double> energies = cl.energies.empty() ? std::vector<double>{cl.energy} : cl.energies;
  CsvTable t({"E", "f_reg", "stderr", "n"});
  t.comment("B=" + format_double(c.model.B) + " T=" + format_double(cl.sali_time) + " seed=" + std::to_string(cl.seed));
  for (double E : energies) {
    const auto r = freg(c.model, E, cl.n_samples, cl.sali_time, cl.seed, c.sali_options(), c.workers);
    t.row().cell(E).cell(r.fraction).cell(r.std_error).cell(r.n);
  }
  m.timing("classify", seconds_since(t0));
  m.write("freg.csv", t.str());
}

void cmd_bounds(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto& cl = c.classical;
  const std::vector<double> Bs = cl.B_values.empty() ? std::vector<double>{c.model.B} : cl.B_values;
  const auto rows = l2_bounds(c.model, Bs, cl.energy, cl.n_samples, cl.t_max, cl.seed, c.peres_options(), c.workers);
  m.timing("integrate", seconds_since(t0));
  CsvTable t({"B", "l2_min", "l2_max", "n_converged_samples"});
  t.comment("E=" + format_double(cl.energy) + " n_samples=" + std::to_string(cl.n_samples) +
            " seed=" + std::to_string(cl.seed));
  for (const auto& r : rows) t.row().cell(r.B).cell(r.l2_min).cell(r.l2_max).cell(r.n_converged);
  m.write("bounds.csv", t.str());
}

void cmd_brody(const RunConfig& c, Manifest& m) {
  const auto t0 = Clock::now();
  const auto sol = solve_config(c);
  m.timing("solve", seconds_since(t0));
  std::vector<double> levels(sol.energies.data(), sol.energies.data() + sol.n_converged);
  if (sol.n_converged == 0 || levels.back() < c.brody.e_hi) {
    throw std::invalid_argument("brody: converged spectrum ends at " +
                                (levels.empty() ? std::string("<none>") : format_double(levels.back())) +
                                ", below brody.e_hi=" + format_double(c.brody.e_hi));
  }
  const auto sample = unfold(levels, {c.brody.e_lo, c.brody.e_hi}, c.brody.degree);
  const auto fit = brody_fit(sample);
  CsvTable t({"window", "omega", "ci_lo", "ci_hi", "n"});
  basis_comments(t, sol);
  t.comment("omega_raw=" + format_double(fit.omega_raw) + " clipped=" + (fit.clipped ? "1" : "0") +
            " zero_spacings=" + std::to_string(fit.n_zero) + " degree=" + std::to_string(c.brody.degree));
  t.row()
      .cell(format_double(c.brody.e_lo) + ":" + format_double(c.brody.e_hi))
      .cell(fit.omega)
      .cell(fit.ci_lo)
      .cell(fit.ci_hi)
      .cell(fit.n);
  m.write("brody.csv", t.str());
}

using Command = std::function<void(const RunConfig&, Manifest&)>;

const std::map<std::string, Command>& table() {
  static const std::map<std::string, Command> t{
      {"spectrum", cmd_spectrum}, {"lattice", cmd_lattice}, {"wavefunction", cmd_wavefunction},
      {"poincare", cmd_poincare}, {"l2map", cmd_l2map},     {"freg", cmd_freg},
      {"bounds", cmd_bounds},     {"brody", cmd_brody}};
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "lattice", "wavefunction", "poincare",
                                              "l2map",    "freg",    "bounds",       "brody"};
  return names;
}

std::filesystem::path run_command(const std::string& name, const RunConfig& config,
                                  const std::filesystem::path& out_dir) {
  const auto it = table().find(name);
  if (it == table().end()) throw std::invalid_argument("unknown command '" + name + "'");
  Manifest m(name, out_dir, config.snapshot());
  it->second(config, m);
  return m.finish();
}

}  // namespace gcm
