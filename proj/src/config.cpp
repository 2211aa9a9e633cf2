#include "casimir/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir {

namespace pt = boost::property_tree;

namespace {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto child = tree.get_child_optional(key);
  if (!child) return fallback;
  // get_value without a default throws on bad data; get<T>(key, fallback) would not.
  try {
    return child->get_value<T>();
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError("config key '" + key + "' has an invalid value");
  }
}

Trajectory read_trajectory(const pt::ptree& tree) {
  const auto kind = tree.get<std::string>("trajectory.kind", "uniform");
  try {
    if (kind == "uniform") return Trajectory::uniform(get(tree, "trajectory.beta", 0.5));
    if (kind == "parametric") {
      return Trajectory::parametric(get(tree, "trajectory.epsilon", 0.15),
                                    get(tree, "trajectory.drive", 2.0 * units::pi));
    }
    if (kind == "custom") {
      return Trajectory::custom(parse_list(tree.get<std::string>("trajectory.times", "")),
                                parse_list(tree.get<std::string>("trajectory.lengths", "")));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid trajectory: ") + e.what());
  }
  throw ConfigError("unknown trajectory.kind '" + kind + "'");
}

}  // namespace

std::string to_string(Branch branch) { return branch == Branch::plus ? "plus" : "minus"; }

Branch parse_branch(std::string_view text) {
  text = trim(text);
  if (text == "plus" || text == "+") return Branch::plus;
  if (text == "minus" || text == "-") return Branch::minus;
  throw ConfigError("branch must be 'plus' or 'minus'");
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("cannot parse number '" + std::string(item) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void CavityConfig::validate() const {
  if (modes < 1) throw ConfigError("modes must be >= 1");
  if (!(tf > t0) || t0 < 0.0) throw ConfigError("need tf > t0 >= 0");
  if (samples < 2) throw ConfigError("samples must be >= 2");
  const auto& t = tolerances;
  for (double v : {t.ode_tol, t.ode_max_step, t.defect_tol, t.fock_norm_tol, t.fock_leakage_tol,
                   t.symplectic_compare_tol, t.fock_compare_tol, t.resonance_rel_tol,
                   t.energy_ratio_tol}) {
    if (!(v > 0.0)) throw ConfigError("all tolerances must be positive");
  }
  if (t.fock_cutoff < 0) throw ConfigError("fock.cutoff must be >= 0");
  if (!(ermakov.omega0 > 0.0) || !(ermakov.omegaf > 0.0) || !(ermakov.tf > 0.0)) {
    throw ConfigError("ermakov.omega0, ermakov.omegaf and ermakov.tf must be positive");
  }
  if (ermakov.samples < 2) throw ConfigError("ermakov.samples must be >= 2");
  if (spectrum.levels < 1) throw ConfigError("spectrum.levels must be >= 1");
}

CavityConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  CavityConfig c;
  c.trajectory = read_trajectory(tree);
  c.modes = get(tree, "modes", c.modes);
  c.t0 = get(tree, "t0", c.t0);
  c.tf = get(tree, "tf", c.tf);
  c.samples = get(tree, "samples", c.samples);

  auto& t = c.tolerances;
  t.ode_tol = get(tree, "ode.tol", t.ode_tol);
  t.ode_max_step = get(tree, "ode.max_step", t.ode_max_step);
  t.defect_tol = get(tree, "symplectic.defect_tol", t.defect_tol);
  t.fock_cutoff = get(tree, "fock.cutoff", t.fock_cutoff);
  t.fock_norm_tol = get(tree, "fock.norm_tol", t.fock_norm_tol);
  t.fock_leakage_tol = get(tree, "fock.leakage_tol", t.fock_leakage_tol);
  t.symplectic_compare_tol = get(tree, "compare.symplectic_tol", t.symplectic_compare_tol);
  t.fock_compare_tol = get(tree, "compare.fock_tol", t.fock_compare_tol);
  t.resonance_rel_tol = get(tree, "compare.resonance_rel_tol", t.resonance_rel_tol);
  t.resonance_tmin = get(tree, "compare.resonance_tmin", t.resonance_tmin);
  t.resonance_tmax = get(tree, "compare.resonance_tmax", t.resonance_tmax);
  t.energy_ratio_tol = get(tree, "compare.energy_ratio_tol", t.energy_ratio_tol);

  c.ermakov.omega0 = get(tree, "ermakov.omega0", c.ermakov.omega0);
  c.ermakov.omegaf = get(tree, "ermakov.omegaf", c.ermakov.omegaf);
  c.ermakov.tf = get(tree, "ermakov.tf", c.ermakov.tf);
  c.ermakov.samples = get(tree, "ermakov.samples", c.ermakov.samples);

  c.spectrum.betas = parse_list(tree.get<std::string>("spectrum.betas", ""));
  c.spectrum.levels = get(tree, "spectrum.levels", c.spectrum.levels);
  c.spectrum.branch = parse_branch(tree.get<std::string>("spectrum.branch", "plus"));

  c.validate();
  return c;
}

CavityConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const CavityConfig& c) {
  pt::ptree tree;
  tree.put("modes", c.modes);
  tree.put("t0", format_double(c.t0));
  tree.put("tf", format_double(c.tf));
  tree.put("samples", c.samples);

  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, Trajectory::Uniform>) {
          tree.put("trajectory.kind", "uniform");
          tree.put("trajectory.beta", format_double(kind.beta));
        } else if constexpr (std::is_same_v<K, Trajectory::Parametric>) {
          tree.put("trajectory.kind", "parametric");
          tree.put("trajectory.epsilon", format_double(kind.epsilon));
          tree.put("trajectory.drive", format_double(kind.drive));
        } else {
          tree.put("trajectory.kind", "custom");
          tree.put("trajectory.times", join(kind.times));
          tree.put("trajectory.lengths", join(kind.lengths));
        }
      },
      c.trajectory.kind());

  const auto& t = c.tolerances;
  tree.put("ode.tol", format_double(t.ode_tol));
  tree.put("ode.max_step", format_double(t.ode_max_step));
  tree.put("symplectic.defect_tol", format_double(t.defect_tol));
  tree.put("fock.cutoff", t.fock_cutoff);
  tree.put("fock.norm_tol", format_double(t.fock_norm_tol));
  tree.put("fock.leakage_tol", format_double(t.fock_leakage_tol));
  tree.put("compare.symplectic_tol", format_double(t.symplectic_compare_tol));
  tree.put("compare.fock_tol", format_double(t.fock_compare_tol));
  tree.put("compare.resonance_rel_tol", format_double(t.resonance_rel_tol));
  tree.put("compare.resonance_tmin", format_double(t.resonance_tmin));
  tree.put("compare.resonance_tmax", format_double(t.resonance_tmax));
  tree.put("compare.energy_ratio_tol", format_double(t.energy_ratio_tol));

  tree.put("ermakov.omega0", format_double(c.ermakov.omega0));
  tree.put("ermakov.omegaf", format_double(c.ermakov.omegaf));
  tree.put("ermakov.tf", format_double(c.ermakov.tf));
  tree.put("ermakov.samples", c.ermakov.samples);

  tree.put("spectrum.betas", join(c.spectrum.betas));
  tree.put("spectrum.levels", c.spectrum.levels);
  tree.put("spectrum.branch", to_string(c.spectrum.branch));

  std::ostringstream out;
  pt::write_ini(out, tree);
  return out.str();
}

}  // namespace casimir
