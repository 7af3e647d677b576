#include "gcm/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gcm/output.hpp"

namespace gcm {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(key, "integer out of range");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& v, std::function<std::string(const T&)> f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += f(v[i]);
  }
  return out;
}

struct Key {
  std::string path;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Member>
Key number(std::string path, Member member) {
  return {path,
          [path, member](RunConfig& c, const std::string& s) { member(c) = to_double(path, s); },
          [member](const RunConfig& c) { return format_double(member(c)); }};
}

template <class Member>
Key integer(std::string path, Member member) {
  return {path,
          [path, member](RunConfig& c, const std::string& s) { member(c) = to_int(path, s); },
          [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

std::vector<double> number_list(const std::string& path, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(path, item));
  return out;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(number("model.A", [](auto& c) -> auto& { return c.model.A; }));
    k.push_back(number("model.B", [](auto& c) -> auto& { return c.model.B; }));
    k.push_back(number("model.C", [](auto& c) -> auto& { return c.model.C; }));
    k.push_back(number("model.hbar", [](auto& c) -> auto& { return c.model.hbar; }));
    k.push_back(number("model.K", [](auto& c) -> auto& { return c.model.K; }));

    k.push_back({"basis.quantization",
                 [](RunConfig& c, const std::string& s) {
                   try {
                     c.basis.quantization = quantization_from_string(trim(s));
                   } catch (const std::invalid_argument& e) {
                     throw ConfigError("basis.quantization", e.what());
                   }
                 },
                 [](const RunConfig& c) { return to_string(c.basis.quantization); }});
    k.push_back(integer("basis.n_max", [](auto& c) -> auto& { return c.basis.n_max; }));
    k.push_back(number("basis.b", [](auto& c) -> auto& { return c.basis.b; }));
    k.push_back(integer("basis.shell_step", [](auto& c) -> auto& { return c.basis.shell_step; }));
    k.push_back(number("basis.convergence_tol", [](auto& c) -> auto& { return c.basis.convergence_tol; }));

    k.push_back(number("classical.energy", [](auto& c) -> auto& { return c.classical.energy; }));
    k.push_back({"classical.energies",
                 [](RunConfig& c, const std::string& s) { c.classical.energies = number_list("classical.energies", s); },
                 [](const RunConfig& c) {
                   return join<double>(c.classical.energies, [](const double& v) { return format_double(v); });
                 }});
    k.push_back({"classical.B_values",
                 [](RunConfig& c, const std::string& s) { c.classical.B_values = number_list("classical.B_values", s); },
                 [](const RunConfig& c) {
                   return join<double>(c.classical.B_values, [](const double& v) { return format_double(v); });
                 }});
    k.push_back(number("classical.tolerance", [](auto& c) -> auto& { return c.classical.tolerance; }));
    k.push_back(number("classical.sali_tolerance", [](auto& c) -> auto& { return c.classical.sali_tolerance; }));
    k.push_back(number("classical.sali_time", [](auto& c) -> auto& { return c.classical.sali_time; }));
    k.push_back(number("classical.t_max", [](auto& c) -> auto& { return c.classical.t_max; }));
    k.push_back(number("classical.peres_tolerance", [](auto& c) -> auto& { return c.classical.peres_tolerance; }));
    k.push_back(integer("classical.n_samples", [](auto& c) -> auto& { return c.classical.n_samples; }));
    k.push_back(integer("classical.n_traj", [](auto& c) -> auto& { return c.classical.n_traj; }));
    k.push_back(integer("classical.n_crossings", [](auto& c) -> auto& { return c.classical.n_crossings; }));
    k.push_back(integer("classical.mesh_nx", [](auto& c) -> auto& { return c.classical.mesh_nx; }));
    k.push_back(integer("classical.mesh_ny", [](auto& c) -> auto& { return c.classical.mesh_ny; }));
    k.push_back({"classical.seed",
                 [](RunConfig& c, const std::string& s) {
                   const std::string t = trim(s);
                   std::uint64_t v = 0;
                   const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
                   if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
                     throw ConfigError("classical.seed", "expected a non-negative integer, got '" + s + "'");
                   }
                   c.classical.seed = v;
                 },
                 [](const RunConfig& c) { return std::to_string(c.classical.seed); }});

    k.push_back({"lattice.operators",
                 [](RunConfig& c, const std::string& s) {
                   c.lattice.operators.clear();
                   for (const auto& item : split_list(s)) {
                     Operator op;
                     try {
                       op = operator_from_string(item);
                     } catch (const std::invalid_argument& e) {
                       throw ConfigError("lattice.operators", e.what());
                     }
                     if (op == Operator::H) throw ConfigError("lattice.operators", "H is not a lattice column");
                     c.lattice.operators.push_back(op);
                   }
                 },
                 [](const RunConfig& c) {
                   return join<Operator>(c.lattice.operators, [](const Operator& o) { return to_string(o); });
                 }});

    k.push_back({"wavefunction.levels",
                 [](RunConfig& c, const std::string& s) {
                   c.wavefunction.levels.clear();
                   for (const auto& item : split_list(s)) c.wavefunction.levels.push_back(to_int("wavefunction.levels", item));
                 },
                 [](const RunConfig& c) {
                   return join<int>(c.wavefunction.levels, [](const int& v) { return std::to_string(v); });
                 }});
    k.push_back(integer("wavefunction.resolution", [](auto& c) -> auto& { return c.wavefunction.resolution; }));

    k.push_back(number("brody.e_lo", [](auto& c) -> auto& { return c.brody.e_lo; }));
    k.push_back(number("brody.e_hi", [](auto& c) -> auto& { return c.brody.e_hi; }));
    k.push_back(integer("brody.degree", [](auto& c) -> auto& { return c.brody.degree; }));

    k.push_back({"outputs.directory",
                 [](RunConfig& c, const std::string& s) { c.outputs.directory = trim(s); },
                 [](const RunConfig& c) { return c.outputs.directory.string(); }});
    k.push_back(integer("outputs.format_version", [](auto& c) -> auto& { return c.outputs.format_version; }));
    k.push_back({"outputs.binary_map",
                 [](RunConfig& c, const std::string& s) { c.outputs.binary_map = to_bool("outputs.binary_map", s); },
                 [](const RunConfig& c) { return std::string(c.outputs.binary_map ? "true" : "false"); }});

    k.push_back(integer("run.workers", [](auto& c) -> auto& { return c.workers; }));
    return k;
  }();
  return table;
}

const Key& find_key(const std::string& path) {
  for (const auto& k : keys()) {
    if (k.path == path) return k;
  }
  throw ConfigError(path, "unknown key");
}

std::pair<std::string, std::string> split_override(const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw ConfigError(item, "override must look like section.key=value");
  return {trim(item.substr(0, eq)), item.substr(eq + 1)};
}

void validate(const RunConfig& c) {
  try {
    c.model.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.substr(0, msg.find(' ')), msg.substr(msg.find(' ') + 1));
  }
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(c.basis.n_max >= 0, "basis.n_max", "must be >= 0");
  require(std::isfinite(c.basis.b), "basis.b", "must be finite");
  require(c.basis.shell_step > 0, "basis.shell_step", "must be positive");
  require(c.basis.convergence_tol > 0, "basis.convergence_tol", "must be positive");
  require(std::isfinite(c.classical.energy), "classical.energy", "must be finite");
  for (double e : c.classical.energies) require(std::isfinite(e), "classical.energies", "entries must be finite");
  for (double b : c.classical.B_values) require(std::isfinite(b), "classical.B_values", "entries must be finite");
  require(c.classical.tolerance > 0, "classical.tolerance", "must be positive");
  require(c.classical.sali_tolerance > 0, "classical.sali_tolerance", "must be positive");
  require(c.classical.sali_time > 0, "classical.sali_time", "must be positive");
  require(c.classical.t_max > 0, "classical.t_max", "must be positive");
  require(c.classical.peres_tolerance > 0, "classical.peres_tolerance", "must be positive");
  require(c.classical.n_samples > 0, "classical.n_samples", "must be positive");
  require(c.classical.n_traj > 0, "classical.n_traj", "must be positive");
  require(c.classical.n_crossings > 0, "classical.n_crossings", "must be positive");
  require(c.classical.mesh_nx > 0, "classical.mesh_nx", "must be positive");
  require(c.classical.mesh_ny > 0, "classical.mesh_ny", "must be positive");
  require(!c.lattice.operators.empty(), "lattice.operators", "must name at least one operator");
  for (int l : c.wavefunction.levels) require(l >= 0, "wavefunction.levels", "entries must be >= 0");
  require(c.wavefunction.resolution > 0, "wavefunction.resolution", "must be positive");
  require(c.brody.e_hi > c.brody.e_lo, "brody.e_hi", "must exceed brody.e_lo");
  require(c.brody.degree >= 1, "brody.degree", "must be >= 1");
  require(c.outputs.format_version == kFormatVersion, "outputs.format_version", "unsupported format version");
  require(!c.outputs.directory.empty(), "outputs.directory", "must not be empty");
  require(c.workers >= 0, "run.workers", "must be >= 0");
}

}  // namespace

std::map<std::string, std::string> RunConfig::snapshot() const {
  std::map<std::string, std::string> out;
  for (const auto& k : keys()) out[k.path] = k.get(*this);
  return out;
}

SolveOptions RunConfig::solve_options() const {
  SolveOptions o;
  o.convergence.shell_step = basis.shell_step;
  o.convergence.tolerance = basis.convergence_tol;
  o.workers = workers;
  return o;
}

IntegratorOptions RunConfig::integrator_options() const {
  IntegratorOptions o;
  o.tolerance = classical.tolerance;
  return o;
}

SaliOptions RunConfig::sali_options() const {
  SaliOptions o;
  o.integrator.tolerance = classical.sali_tolerance;
  return o;
}

PeresAverageOptions RunConfig::peres_options() const {
  PeresAverageOptions o;
  o.integrator = integrator_options();
  o.tolerance = classical.peres_tolerance;
  return o;
}

RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  std::istringstream is(ini_text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("<file>", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "key outside a section");
    for (const auto& [key, value] : body) {
      const std::string path = section + "." + key;
      find_key(path).set(c, value.data());
    }
  }
  for (const auto& item : overrides) {
    const auto [path, value] = split_override(item);
    find_key(path).set(c, value);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("<file>", "cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::filesystem::path resolve_output_directory(const RunConfig& config,
                                               const std::vector<std::string>& overrides) {
  for (auto it = overrides.rbegin(); it != overrides.rend(); ++it) {
    const auto [path, value] = split_override(*it);
    if (path == "outputs.directory") return trim(value);
  }
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return config.outputs.directory;
}

}  // namespace gcm
