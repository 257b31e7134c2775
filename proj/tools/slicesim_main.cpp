#include <cstdio>
#include <exception>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "slicesim/errors.hpp"
#include "slicesim/fock.hpp"
#include "slicesim/lattice.hpp"
#include "slicesim/measurement.hpp"
#include "slicesim/runner.hpp"
#include "slicesim/scenarios.hpp"

namespace {

using namespace slicesim;

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  RunConfig cfg = load_config(config_path);
  RunResult res = run_scenario(cfg, out_dir);
  const ScenarioReport& r = res.report;
  std::printf("run %s: %ld steps, dt=%g, t_final=%g\n", r.label.c_str(), r.steps, r.dt,
              r.t_final);
  std::printf("  captured %.6f, free %.6f, identity residual %.3e (max step %.3e)\n",
              r.total_captured, r.free_norm_final, r.identity_residual,
              r.max_step_residual);
  std::printf("  records %ld, overlap min separation %g%s\n", r.n_records,
              r.overlap.min_separation, r.overlap.flagged ? " [flagged]" : "");
  if (r.born_l1 >= 0) std::printf("  born L1 vs reference: %.4f\n", r.born_l1);
  std::printf("  audits: norm %.3e, energy %.3e (tau %g), momentum %.3e (tau %g)\n",
              r.audit.norm_residual, r.audit.energy_residual, r.audit.tau_energy,
              r.audit.momentum_residual[0], r.audit.tau_momentum[0]);
  if (r.audit.energy_flag || r.audit.momentum_flag)
    std::printf("  warning: energy/momentum residual exceeds its declared tolerance\n");
  std::printf("  wall %.2f s, output %s\n", r.wall_seconds,
              out_dir.empty() ? "(none)" : out_dir.c_str());
  return 0;
}

int cmd_validate(const std::string& config_path) {
  RunConfig cfg = load_config(config_path);
  cfg.validate();
  std::printf("%s: valid (label '%s')\n", config_path.c_str(), cfg.label.c_str());
  return 0;
}

LatticeModel parse_lattice_config(const std::string& path);

int cmd_modes(const std::string& lattice_path, const std::string& out_path) {
  const LatticeModel lat = parse_lattice_config(lattice_path);
  const NormalModeSet modes = normal_modes(lat);
  if (!out_path.empty()) {
    write_mode_table(modes, out_path);
    std::printf("wrote %zu modes to %s (%d zero modes removed)\n", modes.modes.size(),
                out_path.c_str(), modes.zero_modes_removed);
  } else {
    std::printf("# index omega m_eff width\n");
    for (std::size_t i = 0; i < modes.modes.size(); i++)
      std::printf("%zu %.12g %.12g %.12g\n", i, modes.modes[i].omega,
                  modes.modes[i].effective_mass, mode_width(modes.modes[i], modes.hbar));
    std::printf("# zero modes removed: %d\n", modes.zero_modes_removed);
  }
  return 0;
}

int cmd_fock_check(unsigned n_modes, unsigned max_total, int trials, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<unsigned> mode(0, n_modes - 1);
  double worst = 0;
  for (int trial = 0; trial < trials; trial++) {
    OccupancyCoefficients c(n_modes, max_total);
    // random state away from the truncation edge
    std::uniform_int_distribution<int> nterm(1, 6);
    const int terms = nterm(rng);
    for (int t = 0; t < terms; t++) {
      std::uniform_int_distribution<unsigned> len(0, max_total - 1);
      FockKey key;
      const unsigned l = len(rng);
      for (unsigned i = 0; i < l; i++) key.push_back(mode(rng));
      std::sort(key.begin(), key.end());
      c.set(key, {uni(rng), uni(rng)});
    }
    for (unsigned s = 0; s < n_modes; s++)
      for (unsigned t = 0; t < n_modes; t++)
        worst = std::max(worst, commutator_check(s, t, c));
  }
  std::printf("fock-check: %d trials over %u modes (N <= %u): max |[a_s,a_t^+] - "
              "delta| residual = %.3e\n",
              trials, n_modes, max_total, worst);
  return worst < 1e-12 ? 0 : 1;
}

int cmd_report(const std::string& dir) {
  const std::string ledger_path = dir + "/ledger.tsv";
  auto records = read_ledger_records(ledger_path);
  double total = 0, emax = 0;
  long bins_lo = LONG_MAX, bins_hi = LONG_MIN;
  std::map<int, double> by_site;
  for (const auto& r : records) {
    total += r.deposits.norm;
    by_site[r.site] += r.deposits.norm;
    bins_lo = std::min(bins_lo, r.t_bin);
    bins_hi = std::max(bins_hi, r.t_bin);
    emax = std::max(emax, std::abs(r.deposits.energy));
  }
  std::printf("%s: %zu records, %zu sites, bins [%ld, %ld], total captured %.8f\n",
              ledger_path.c_str(), records.size(), by_site.size(),
              records.empty() ? 0 : bins_lo, records.empty() ? 0 : bins_hi, total);
  int shown = 0;
  for (const auto& [site, p] : by_site) {
    if (shown++ >= 8) {
      std::printf("  ...\n");
      break;
    }
    std::printf("  site %d: %.8f\n", site, p);
  }
  return 0;
}

// minimal lattice description: [lattice] with either type=chain or explicit
// particle/spring/pin lists
LatticeModel parse_lattice_config(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "r");
  if (!fp) throw ConfigError("modes: cannot open " + path);
  LatticeModel lat;
  bool chain = false;
  int n = 0;
  double kappa = 1, mass = 1, spacing = 1;
  bool pinned = false;
  char line[512];
  while (std::fgets(line, sizeof line, fp)) {
    std::string s(line);
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    auto trim = [](std::string v) {
      const auto a = v.find_first_not_of(" \t\r\n");
      if (a == std::string::npos) return std::string();
      const auto b = v.find_last_not_of(" \t\r\n");
      return v.substr(a, b - a + 1);
    };
    s = trim(s);
    if (s.empty() || s[0] == '[') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key == "type")
      chain = (val == "chain");
    else if (key == "n")
      n = std::stoi(val);
    else if (key == "kappa")
      kappa = std::stod(val);
    else if (key == "mass")
      mass = std::stod(val);
    else if (key == "spacing")
      spacing = std::stod(val);
    else if (key == "pinned")
      pinned = (val == "true" || val == "1");
    else if (key == "particle") {
      // particle = x[,y] mass
      std::istringstream ss(val);
      double x, m;
      char comma;
      double y = 0;
      std::string first;
      ss >> first >> m;
      if (first.find(',') != std::string::npos) {
        std::istringstream ps(first);
        ps >> x >> comma >> y;
        lat.dim = 2;
      } else {
        x = std::stod(first);
      }
      lat.positions.push_back({x, y});
      lat.masses.push_back(m);
    } else if (key == "spring") {
      std::istringstream ss(val);
      Spring sp;
      ss >> sp.i >> sp.j >> sp.kappa;
      lat.springs.push_back(sp);
    } else if (key == "pin") {
      std::istringstream ss(val);
      Pin p;
      ss >> p.i >> p.kappa;
      lat.pins.push_back(p);
    } else {
      throw ConfigError("modes: unknown lattice key '" + key + "'");
    }
  }
  std::fclose(fp);
  if (chain) return LatticeModel::chain(n, kappa, mass, pinned, spacing);
  return lat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slicesim: Schrodinger field + absorbing-body slice-ledger simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, lattice_path, report_dir, emit_dir, modes_out;
  unsigned fock_modes = 4, fock_max = 6, fock_seed = 12345;
  int fock_trials = 100;

  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");

  auto* validate = app.add_subcommand("validate", "check a config without running");
  validate->add_option("config", config_path, "config file")->required();

  auto* modes = app.add_subcommand("modes", "lattice normal-mode table");
  modes->add_option("lattice", lattice_path, "lattice config file")->required();
  modes->add_option("--out", modes_out, "output table path");

  auto* fock = app.add_subcommand("fock-check", "commutator property battery");
  fock->add_option("--modes", fock_modes, "one-body modes");
  fock->add_option("--max-total", fock_max, "total-occupancy truncation");
  fock->add_option("--trials", fock_trials, "random states");
  fock->add_option("--seed", fock_seed, "rng seed");

  auto* report = app.add_subcommand("report", "re-summarize a run directory");
  report->add_option("dir", report_dir, "run output directory")->required();

  auto* emit = app.add_subcommand("emit-scenarios", "write bundled scenario configs");
  emit->add_option("dir", emit_dir, "target directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (validate->parsed()) return cmd_validate(config_path);
    if (modes->parsed()) return cmd_modes(lattice_path, modes_out);
    if (fock->parsed()) return cmd_fock_check(fock_modes, fock_max, fock_trials, fock_seed);
    if (report->parsed()) return cmd_report(report_dir);
    if (emit->parsed()) {
      slicesim::emit_scenarios(emit_dir);
      std::printf("wrote scenario configs to %s\n", emit_dir.c_str());
      return 0;
    }
  } catch (const slicesim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const slicesim::AuditError& e) {
    std::fprintf(stderr, "audit failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
