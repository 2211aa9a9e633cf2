#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "casimir/analytic.hpp"
#include "casimir/ermakov.hpp"
#include "casimir/errors.hpp"
#include "casimir/fock.hpp"
#include "casimir/symplectic.hpp"
#include "casimir/twomode.hpp"
#include "parallel.hpp"

namespace casimir::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr int uniform_cutoff = 40;

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
    text_ += '\n';
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((text_ += (first ? "" : ","), text_ += cell(cells), first = false), ...);
    text_ += '\n';
  }

  void row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + format_number(cells[i]);
    text_ += '\n';
  }

  const std::string& text() const { return text_; }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }

  std::string text_;
};

CheckResult bound_check(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

symplectic::PropagationOptions propagation_options(const Tolerances& t) {
  return {t.ode_max_step, t.defect_tol};
}

fock::EvolveOptions evolve_options(const Tolerances& t) {
  return {t.ode_max_step, t.fock_norm_tol, t.fock_leakage_tol};
}

void require_zero_start(const CavityConfig& config) {
  if (config.t0 != 0.0) throw ConfigError("photon runs start from the vacuum at t0 = 0");
}

CommandResult photons_uniform_run(const CavityConfig& config) {
  require_zero_start(config);
  const double beta = config.trajectory.velocity();
  if (!(std::abs(beta) < 2.0 * units::pi)) {
    throw DomainError("closed-form photon number needs |beta| < 2 pi");
  }
  if (!(units::q0 + beta * config.tf > 0.0)) {
    throw DomainError(fmt::format("mirror collision at t = {} inside the run window", -units::q0 / beta));
  }
  const auto& tol = config.tolerances;
  const TimeGrid grid = config.grid();
  CommandResult result;
  if (!analytic::is_physical_velocity(beta)) {
    result.notes.push_back(fmt::format("warning: |beta| = {} is not below the speed of light", std::abs(beta)));
  }

  const std::vector<double> omega1{units::pi};
  const auto sym = symplectic::propagate(symplectic::SingleModeUniform{beta}, grid,
                                         propagation_options(tol));
  const auto n_sym = symplectic::photon_numbers(sym, omega1);

  const int cutoff = tol.fock_cutoff > 0 ? tol.fock_cutoff : uniform_cutoff;
  const auto model = fock::FockModel::quadratic(symplectic::SingleModeUniform{beta}, cutoff);
  const auto traj = fock::evolve(model, model.vacuum(), grid, evolve_options(tol));
  const auto n_fock = fock::photon_numbers(model, traj);

  std::vector<std::vector<double>> extra;
  if (config.modes > 1) {
    const auto multi = symplectic::propagate(symplectic::FactorizedUniform{config.modes, beta}, grid,
                                             propagation_options(tol));
    extra = symplectic::photon_numbers(multi, symplectic::reference_frequencies(config.modes));
  }

  const double ratio = beta == 0.0 ? 0.0 : 2.0 * units::pi / beta;
  const double amplitude = beta == 0.0 ? 0.0 : 1.0 / (ratio * ratio - 1.0);
  auto relative = [amplitude](double diff) { return amplitude > 0.0 ? diff / amplitude : diff; };

  std::vector<std::string> header{"t", "n_analytic", "n_symplectic", "n_fock", "rel_err_sym", "rel_err_fock"};
  for (int k = 2; k <= config.modes; ++k) header.push_back(fmt::format("n_symplectic_mode{}", k));
  CsvWriter csv(header);
  double worst_sym = 0.0;
  double worst_fock = 0.0;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = sym.times[i];
    const double n_an = analytic::photons_uniform(t, beta);
    const double d_sym = std::abs(n_sym[i][0] - n_an);
    const double d_fock = std::abs(n_fock[i][0] - n_an);
    worst_sym = std::max(worst_sym, d_sym);
    worst_fock = std::max(worst_fock, d_fock);
    std::vector<double> cells{t, n_an, n_sym[i][0], n_fock[i][0], relative(d_sym), relative(d_fock)};
    for (int k = 1; k < config.modes; ++k) cells.push_back(extra[i][k]);
    csv.row(cells);
  }
  result.files.push_back({"photons.csv", csv.text()});
  result.checks.push_back(bound_check("photons.symplectic_vs_closed_form", worst_sym, tol.symplectic_compare_tol));
  result.checks.push_back(bound_check("photons.fock_vs_closed_form", worst_fock, tol.fock_compare_tol));
  result.checks.push_back(bound_check("photons.symplectic_defect", sym.max_defect(), tol.defect_tol));
  result.checks.push_back(bound_check("photons.fock_leakage", traj.leakage, tol.fock_leakage_tol,
                                      fmt::format("cutoff {}", cutoff)));
  return result;
}

CommandResult photons_parametric_run(const CavityConfig& config) {
  require_zero_start(config);
  const auto& kind = std::get<Trajectory::Parametric>(config.trajectory.kind());
  const auto& tol = config.tolerances;
  const TimeGrid grid = config.grid();
  const int cutoff = tol.fock_cutoff > 0 ? tol.fock_cutoff : auto_resonance_cutoff(kind.epsilon, config.tf);

  const auto model = fock::FockModel::ladder({config.trajectory}, cutoff);
  const auto traj = fock::evolve(model, model.vacuum(), grid, evolve_options(tol));
  const auto n_fock = fock::photon_numbers(model, traj);

  CommandResult result;
  CsvWriter csv({"t", "n_analytic", "n_symplectic", "n_fock", "rel_err_sym", "rel_err_fock"});
  for (int i = 0; i < grid.samples; ++i) {
    const double t = traj.times[i];
    const double n_an = analytic::photons_resonance(t, kind.epsilon);
    const double rel = n_an > 0.0 ? std::abs(n_fock[i][0] - n_an) / n_an : nan;
    csv.row(t, n_an, nan, n_fock[i][0], nan, rel);
  }
  result.files.push_back({"resonance.csv", csv.text()});
  result.checks.push_back(bound_check("resonance.fock_norm_drift", traj.max_norm_drift(), tol.fock_norm_tol));
  result.checks.push_back(bound_check("resonance.fock_leakage", traj.leakage, tol.fock_leakage_tol,
                                      fmt::format("cutoff {}", cutoff)));

  if (std::abs(kind.drive - 2.0 * units::pi) > 1e-12) {
    result.notes.push_back("drive is off resonance; the sinh^2 comparison is skipped");
    return result;
  }
  const auto cmp = compare_resonance(kind.epsilon, kind.drive, cutoff, tol.resonance_tmin,
                                     std::min(tol.resonance_tmax, config.tf), tol);
  result.checks.push_back(bound_check(
      "resonance.fock_vs_sinh2", cmp.max_rel_error, tol.resonance_rel_tol,
      fmt::format("relative error at q(t) = q0 instants in [{}, {}]", tol.resonance_tmin, tol.resonance_tmax)));
  if (!cmp.converged) {
    result.checks.push_back(
        {"resonance.fock_convergence", false, cmp.leakage, tol.fock_leakage_tol,
         fmt::format("cutoff {} leaves {:.3g} of the population in the top levels", cutoff, cmp.leakage)});
  }
  return result;
}

std::string sha1_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha1(), nullptr) != 1) {
    throw Error("SHA-1 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < size; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string verification_json(const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json doc;
  bool all = true;
  doc["schema"] = "casimir-kit/verify/1";
  doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    doc["checks"].push_back({{"name", c.name},
                             {"pass", c.pass},
                             {"value", std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nullptr},
                             {"tolerance", c.tolerance},
                             {"detail", c.detail}});
  }
  doc["pass"] = all;
  return doc.dump(2) + "\n";
}

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> beta;
  std::optional<double> epsilon;
  std::optional<double> tmax;
  std::optional<int> samples;
  std::optional<int> cutoff;
  std::optional<int> modes;
  std::optional<std::string> branch;
};

CavityConfig resolve_config(const std::string& command, const Flags& flags) {
  CavityConfig config = flags.config ? load_config(*flags.config) : CavityConfig{};
  if (flags.beta) {
    const auto betas = parse_list(*flags.beta);
    if (command == "spectrum") {
      config.spectrum.betas = betas;
    } else {
      if (betas.size() != 1) throw ConfigError("--beta takes a single value for " + command);
      config.trajectory = Trajectory::uniform(betas.front());
    }
  }
  if (flags.epsilon) {
    double drive = 2.0 * units::pi;
    if (const auto* p = std::get_if<Trajectory::Parametric>(&config.trajectory.kind())) drive = p->drive;
    try {
      config.trajectory = Trajectory::parametric(*flags.epsilon, drive);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (command == "ermakov") {
    if (flags.tmax) config.ermakov.tf = *flags.tmax;
    if (flags.samples) config.ermakov.samples = *flags.samples;
  } else {
    if (flags.tmax) config.tf = *flags.tmax;
    if (flags.samples) config.samples = *flags.samples;
  }
  if (flags.cutoff) config.tolerances.fock_cutoff = *flags.cutoff;
  if (flags.modes) config.modes = *flags.modes;
  if (flags.branch) config.spectrum.branch = parse_branch(*flags.branch);
  config.validate();
  return config;
}

void write_outputs(const std::string& command, const CavityConfig& config, const Flags& flags,
                   const CommandResult& result, int exit_code) {
  namespace fs = std::filesystem;
  const fs::path dir(*flags.out);
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["schema"] = "casimir-kit/manifest/1";
  manifest["subcommand"] = command;
  const std::string snapshot = serialize_config(config);
  manifest["config"] = snapshot;
  manifest["inputs"] = nlohmann::ordered_json::array();
  manifest["inputs"].push_back({{"name", "resolved-config"}, {"sha1", git_blob_sha1(snapshot)}});
  if (flags.config) {
    std::ifstream in(*flags.config);
    std::stringstream buffer;
    buffer << in.rdbuf();
    manifest["inputs"].push_back({{"name", *flags.config}, {"sha1", git_blob_sha1(buffer.str())}});
  }
  manifest["outputs"] = nlohmann::ordered_json::array();
  for (const auto& file : result.files) {
    const fs::path path = dir / file.name;
    std::ofstream(path, std::ios::binary) << file.content;
    manifest["outputs"].push_back({{"path", path.string()}, {"sha1", git_blob_sha1(file.content)}});
  }
  manifest["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : result.checks) manifest["checks"].push_back({{"name", c.name}, {"pass", c.pass}});
  manifest["notes"] = result.notes;
  manifest["exit_code"] = exit_code;
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
}

}  // namespace

bool CommandResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

std::string git_blob_sha1(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  return sha1_hex(blob);
}

int auto_resonance_cutoff(double epsilon, double tmax) {
  const double nbar = analytic::photons_resonance(tmax, epsilon);
  return std::max(80, static_cast<int>(std::ceil(10.0 * nbar)));
}

ResonanceComparison compare_resonance(double epsilon, double drive, int cutoff, double tmin,
                                      double tmax, const Tolerances& tolerances) {
  // q returns to q0 every half period of the mirror.
  const double half = units::pi / drive;
  const int count = static_cast<int>(std::floor(tmax / half * (1.0 + 1e-12)));
  if (count < 1) throw ConfigError("resonance window is shorter than half a mirror period");
  const TimeGrid grid(0.0, count * half, count + 1);
  const auto model = fock::FockModel::ladder({Trajectory::parametric(epsilon, drive)}, cutoff);
  const auto traj = fock::evolve(model, model.vacuum(), grid, evolve_options(tolerances));
  const auto n = fock::photon_numbers(model, traj);

  ResonanceComparison out;
  out.leakage = traj.leakage;
  out.converged = traj.converged;
  out.max_norm_drift = traj.max_norm_drift();
  for (int i = 0; i < grid.samples; ++i) {
    const double t = traj.times[i];
    if (t < tmin - 1e-12) continue;
    const double expected = analytic::photons_resonance(t, epsilon);
    out.times.push_back(t);
    out.fock.push_back(n[i][0]);
    out.analytic.push_back(expected);
    out.max_rel_error = std::max(out.max_rel_error, std::abs(n[i][0] - expected) / expected);
  }
  if (out.times.empty()) throw ConfigError("no q(t) = q0 instants inside the resonance window");
  return out;
}

CommandResult cmd_photons(const CavityConfig& config, int /*threads*/) {
  const auto& kind = config.trajectory.kind();
  if (std::holds_alternative<Trajectory::Uniform>(kind)) return photons_uniform_run(config);
  if (std::holds_alternative<Trajectory::Parametric>(kind)) return photons_parametric_run(config);
  throw ConfigError("photons needs a uniform or parametric trajectory");
}

CommandResult cmd_resonance(const CavityConfig& config, int threads) {
  if (std::holds_alternative<Trajectory::Parametric>(config.trajectory.kind())) {
    return cmd_photons(config, threads);
  }
  CavityConfig copy = config;
  copy.trajectory = Trajectory::parametric(0.15);
  return cmd_photons(copy, threads);
}

CommandResult cmd_spectrum(const CavityConfig& config, int threads) {
  const auto& betas = config.spectrum.betas;
  if (betas.empty()) throw ConfigError("spectrum needs at least one beta (--beta or spectrum.betas)");
  for (double beta : betas) {
    if (!(std::abs(beta) < twomode::velocity_bound())) {
      throw BoundViolation(fmt::format("beta = {} violates the velocity bound |beta| < {:.6f}", beta,
                                       twomode::velocity_bound()));
    }
  }
  const int levels = config.spectrum.levels;
  const Branch branch = config.spectrum.branch;

  struct Sweep {
    std::vector<twomode::Level> coupled;
    std::vector<double> uncoupled;
    int distinct_coupled = 0;
    int distinct_uncoupled = 0;
    double max_split = 0.0;
  };
  const auto sweeps = parallel_map(
      betas,
      [&](double beta) {
        Sweep s;
        s.coupled = twomode::spectrum(beta, levels, twomode::Model::coupled, branch);
        s.distinct_coupled = twomode::distinct_count(s.coupled);
        const bool has_uncoupled = std::abs(beta) < 2.0 * units::pi;
        for (const auto& level : s.coupled) {
          const double e = has_uncoupled ? twomode::eigenvalue(level.m, level.n, beta, twomode::Model::uncoupled)
                                         : nan;
          s.uncoupled.push_back(e);
          if (has_uncoupled) s.max_split = std::max(s.max_split, std::abs(level.energy - e));
        }
        s.distinct_uncoupled =
            has_uncoupled ? twomode::distinct_count(twomode::spectrum(beta, levels, twomode::Model::uncoupled))
                          : 0;
        return s;
      },
      threads);

  CsvWriter csv({"beta", "rank", "m", "n", "E_coupled", "E_uncoupled"});
  CsvWriter summary({"beta", "levels", "distinct_coupled", "distinct_uncoupled", "max_abs_split"});
  CommandResult result;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const auto& s = sweeps[b];
    for (std::size_t r = 0; r < s.coupled.size(); ++r) {
      csv.row(betas[b], static_cast<int>(r + 1), s.coupled[r].m, s.coupled[r].n, s.coupled[r].energy,
              s.uncoupled[r]);
    }
    summary.row(betas[b], levels, s.distinct_coupled, s.distinct_uncoupled, s.max_split);
    result.notes.push_back(fmt::format("beta {}: {} distinct coupled, {} distinct uncoupled of {} levels",
                                       betas[b], s.distinct_coupled, s.distinct_uncoupled, levels));
  }
  result.files.push_back({"spectrum.csv", csv.text()});
  result.files.push_back({"spectrum_summary.csv", summary.text()});
  return result;
}

CommandResult cmd_ermakov(const CavityConfig& config) {
  const auto& settings = config.ermakov;
  const auto& tol = config.tolerances;
  const auto ramp = ermakov::design_sta(settings.omega0, settings.omegaf, settings.tf);
  const auto profile = ramp.profile();
  const TimeGrid grid(ramp.t0(), ramp.tf(), settings.samples);

  const auto solution = ermakov::solve_ermakov(profile, 1.0, 0.0, grid, {tol.ode_max_step, tol.ode_tol});
  const auto check = ermakov::sta_energy_check(ramp, ermakov::ground_covariance(settings.omega0),
                                               settings.samples, propagation_options(tol));

  CommandResult result;
  CsvWriter csv({"t", "rho", "rho_dot", "omega_induced", "lewis_drift", "energy_ratio_running"});
  double round_trip = 0.0;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = solution.times[i];
    const double w2 = ramp.omega_squared(t);
    // Negative entries mark an inverted potential, omega^2 < 0.
    const double omega = std::copysign(std::sqrt(std::abs(w2)), w2);
    csv.row(t, solution.rho[i], solution.rho_dot[i], omega, check.lewis_drift[i], check.energy_ratio[i]);
    round_trip = std::max(round_trip, std::abs(solution.rho[i] - ramp.rho(t)));
  }
  result.files.push_back({"ermakov.csv", csv.text()});
  for (const auto& [a, b] : ramp.negative_windows()) {
    result.notes.push_back(fmt::format("omega^2 < 0 on [{:.6f}, {:.6f}]", a, b));
  }

  const double target = settings.omegaf / settings.omega0;
  result.checks.push_back(bound_check("ermakov.final_energy_ratio", std::abs(check.final_energy_ratio - target),
                                      tol.energy_ratio_tol,
                                      fmt::format("ratio {} vs omega_f/omega_0 = {}", check.final_energy_ratio, target)));
  result.checks.push_back(bound_check("ermakov.round_trip", round_trip, 1e-8));
  return result;
}

CommandResult cmd_verify(const CavityConfig& config, int threads) {
  CommandResult result;
  result.checks = run_verification(config, threads);
  result.files.push_back({"verify.json", verification_json(result.checks)});
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moving-mirror cavity toolkit: photon production, spectra, STA ramps, verification"};
  app.name("casimir-kit");
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"photons", "Photon number of the principal mode from three independent routes"},
      {"resonance", "photons with a parametrically driven mirror"},
      {"spectrum", "Lowest coupled and uncoupled two-mode eigenvalues over a beta sweep"},
      {"ermakov", "Quintic shortcut-to-adiabaticity ramp and its energy bookkeeping"},
      {"verify", "Run every invariant suite and report JSON"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", flags.config, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory (CSV/JSON plus manifest.json)");
    sub->add_option("--beta", flags.beta, "Mirror velocity v/c; comma list for spectrum");
    sub->add_option("--epsilon", flags.epsilon, "Parametric amplitude, selects q = 1 + eps sin(2 pi t)");
    sub->add_option("--tmax", flags.tmax, "Final time (ermakov: ramp duration)");
    sub->add_option("--samples", flags.samples, "Output samples");
    sub->add_option("--cutoff", flags.cutoff, "Fock cutoff per mode (0 = default)");
    sub->add_option("--modes", flags.modes, "Number of cavity modes");
    sub->add_option("--branch", flags.branch, "Two-mode branch: plus or minus");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_usage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  CavityConfig config;
  CommandResult result;
  try {
    config = resolve_config(command, flags);
    const int threads = worker_threads();
    if (command == "photons") {
      result = cmd_photons(config, threads);
    } else if (command == "resonance") {
      result = cmd_resonance(config, threads);
    } else if (command == "spectrum") {
      result = cmd_spectrum(config, threads);
    } else if (command == "ermakov") {
      result = cmd_ermakov(config);
    } else {
      result = cmd_verify(config, threads);
    }
  } catch (const ConfigError& e) {
    err << "casimir-kit: config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const DomainError& e) {
    err << "casimir-kit: parameter error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "casimir-kit: " << command << " failed: " << e.what() << '\n';
    return exit_failure;
  }

  for (const auto& note : result.notes) err << note << '\n';
  for (const auto& c : result.checks) {
    err << fmt::format("{} {}: {:.6g} (tolerance {:g}){}\n", c.pass ? "PASS" : "FAIL", c.name, c.value, c.tolerance, c.detail.empty() ? "" : " - " + c.detail);
  }
  const int code = result.passed() ? exit_pass : exit_failure;
  if (flags.out) {
    try {
      write_outputs(command, config, flags, result, code);
    } catch (const std::exception& e) {
      err << "casimir-kit: cannot write outputs: " << e.what() << '\n';
      return exit_failure;
    }
  } else if (!result.files.empty()) {
    out << result.files.front().content;
  }
  return code;
}

}  // namespace casimir::cli
