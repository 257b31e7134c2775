#include "slicesim/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "slicesim/field_io.hpp"
#include "slicesim/kernels.hpp"

namespace slicesim {

namespace {

double auto_k_char(const RunConfig& cfg, const WaveField& f) {
  if (cfg.k_char > 0) return cfg.k_char;
  const FieldObservables ob = observables(f);
  double k = 0;
  for (int ax = 0; ax < f.grid.dim; ax++)
    k = std::max(k, (std::abs(ob.mean_p[ax]) + 2.0 * ob.sigma_p[ax]) / f.hbar);
  for (const auto& bs : cfg.bodies)
    for (const auto& seg : bs.segments)
      k = std::max(k, f.mass * std::hypot(seg.velocity[0], seg.velocity[1]) / f.hbar);
  // never tune the absorber below a grid-resolvable scale
  k = std::max(k, 0.5);
  return k;
}

std::size_t probe_index(const Grid& g, std::array<double, 2> p) {
  const auto clampi = [](long v, long n) { return std::size_t(std::clamp(v, 0L, n - 1)); };
  const std::size_t ix =
      clampi(std::lround((p[0] - g.lo[0]) / g.spacing(0)), long(g.n[0]));
  const std::size_t iy =
      g.dim == 2 ? clampi(std::lround((p[1] - g.lo[1]) / g.spacing(1)), long(g.n[1])) : 0;
  return g.index(ix, iy);
}

// reference accumulator: time-integrated positive relative flux per
// (site, bin) at body-0 face sites, from the spectrally evolving field
struct FluxReference {
  std::map<std::pair<int, long>, double> bins;
  void sample(const WaveField& f, const BodyState& body, double bin_width, double dt) {
    const Grid& g = f.grid;
    const auto grad = spectral_gradient(f, 0);
    const double vface = body.trajectory.velocity(f.time)[0];
    const auto positions = body.site_positions(f.time);
    for (const auto& pl : body.plates) {
      if (!body.plate_active(pl, f.time)) continue;
      const double face = body.face_position(pl, f.time);
      const double outside = face + double(pl.facing) * 2.5 * g.spacing(0);
      const long ix =
          std::clamp(std::lround((outside - g.lo[0]) / g.spacing(0)), 2L,
                     long(g.n[0]) - 3);
      const double area = g.dim == 2 ? body.granularity : 1.0;
      const auto act = body.active_sites(pl, f.time);
      for (int sid : act) {
        std::size_t iy = 0;
        if (g.dim == 2) {
          const double y = positions[std::size_t(sid)].position[1];
          iy = std::size_t(
              std::clamp(std::lround((y - g.lo[1]) / g.spacing(1)), 0L, long(g.n[1]) - 1));
        } else if (sid != act.front()) {
          continue;
        }
        const std::size_t idx = g.index(std::size_t(ix), iy);
        const double jrel =
            (f.hbar / f.mass * std::imag(std::conj(f.values[idx]) * grad[idx]) -
             std::norm(f.values[idx]) * vface) *
            double(-pl.facing);
        if (jrel > 0) {
          const long bin = long(std::floor(f.time / bin_width + 1e-9));
          bins[{sid, bin}] += pl.eta * jrel * area * dt;
        }
      }
      break;  // face plate only
    }
  }
};

}  // namespace

SliceLedger merge_ledgers(const RunResult& result) {
  double bw = result.ledgers.empty() ? 1.0 : result.ledgers.front().bin_width();
  SliceLedger merged(bw);
  int offset = 0;
  for (std::size_t bi = 0; bi < result.ledgers.size(); bi++) {
    for (const auto& r : result.ledgers[bi].records()) {
      const double p = std::norm(r.weight);
      merged.add(r.site + offset, r.t_bin, p, std::polar(p, r.phase));
      merged.add_deposits(r.site + offset, r.t_bin, r.deposits.energy,
                          r.deposits.momentum);
    }
    offset += result.bodies[bi].total_sites();
  }
  return merged;
}

RunResult run_scenario(const RunConfig& cfg, const std::string& out_dir) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);

  const Grid grid = cfg.make_grid();
  WaveField field = cfg.make_initial();
  const Potential pot = cfg.make_potential();
  StepperConfig scfg{cfg.stepper.dt, cfg.stepper.max_steps};
  Stepper stepper(grid, pot, scfg, cfg.units.mass, cfg.units.hbar);

  const double k_char = auto_k_char(cfg, field);
  const FieldObservables initial_obs = observables(field);
  const double initial_norm = initial_obs.norm;

  RunResult res;
  std::vector<CaptureEngine> engines;
  double bin_width = cfg.bin_width;
  for (const auto& bs : cfg.bodies) {
    BodyState b = bs.make(grid.dim);
    if (bin_width == 0) bin_width = bs.d / bs.v_s;
    engines.emplace_back(b, grid, cfg.units.mass, cfg.units.hbar, cfg.stepper.dt,
                         bin_width, k_char);
    res.bodies.push_back(std::move(b));
  }
  // initial state must not overlap an active body interior
  for (const auto& b : res.bodies) {
    double inside = 0;
    for (std::size_t ix = 0; ix < grid.n[0]; ix++)
      for (std::size_t iy = 0; iy < grid.n[1]; iy++) {
        const std::array<double, 2> p{grid.coord(0, ix),
                                      grid.dim == 2 ? grid.coord(1, iy) : 0.0};
        if (b.interior(p, 0.0)) inside += std::norm(field.values[grid.index(ix, iy)]);
      }
    if (inside * grid.cell_volume() > 1e-9)
      throw ConfigError("run: initial state overlaps a body interior; script an "
                        "activation hole instead");
  }

  res.probes.resize(cfg.output.probes.size());
  for (std::size_t i = 0; i < res.probes.size(); i++) {
    res.probes[i].position = cfg.output.probes[i];
    res.probes[i].t_start = field.time;
    res.probes[i].dt_sample = cfg.stepper.dt;
    res.probes[i].samples.push_back(field.values[probe_index(grid, cfg.output.probes[i])]);
  }

  FluxReference flux_ref;
  const bool want_flux_ref = cfg.reference == "flux_integral" && !engines.empty();

  ScenarioReport& rep = res.report;
  rep.label = cfg.label;
  rep.dim = grid.dim;
  rep.dt = cfg.stepper.dt;
  rep.t_final = cfg.stepper.t_final;
  rep.initial_norm = initial_norm;

  const long nsteps =
      std::lround(std::ceil(cfg.stepper.t_final / cfg.stepper.dt - 1e-9));
  rep.steps = nsteps;

  for (long step = 1; step <= nsteps; step++) {
    field = stepper.step(std::move(field));
    if (want_flux_ref)
      flux_ref.sample(field, engines.front().body(), bin_width, cfg.stepper.dt);
    for (auto& eng : engines) eng.process(field, stepper);

    // ledger identity
    double free_norm = field.norm();
    double captured = 0;
    for (auto& eng : engines) {
      free_norm += eng.ghost_norm();
      captured += eng.ledger().total_captured();
    }
    const double residual = std::abs(free_norm + captured - initial_norm);
    rep.max_step_residual = std::max(rep.max_step_residual, residual);
    for (auto& eng : engines)
      rep.max_step_residual = std::max(rep.max_step_residual, eng.last_step_residual());
    if (residual > 1e-6)
      throw AuditError("run: norm ledger identity violated (free + captured != 1)");

    for (std::size_t i = 0; i < res.probes.size(); i++)
      res.probes[i].samples.push_back(
          field.values[probe_index(grid, cfg.output.probes[i])]);
    if (cfg.output.snapshot_cadence > 0 && step % cfg.output.snapshot_cadence == 0 &&
        !out_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%08ld.wfld", step);
      write_snapshot(field, (fs::path(out_dir) / name).string());
      if (cfg.output.text_snapshots) {
        std::snprintf(name, sizeof name, "snapshot_%08ld.tsv", step);
        write_snapshot_text(field, (fs::path(out_dir) / name).string());
      }
    }
  }

  // final accounting
  double free_norm = field.norm();
  double captured = 0;
  for (auto& eng : engines) {
    free_norm += eng.ghost_norm();
    captured += eng.ledger().total_captured();
    res.ledgers.push_back(eng.ledger());
  }
  rep.free_norm_final = free_norm;
  rep.total_captured = captured;
  rep.identity_residual = std::abs(free_norm + captured - initial_norm);

  FieldObservables final_obs = observables(field);
  for (auto& eng : engines) {
    const auto g = eng.ghost_observables();
    const double ntot = final_obs.norm + g.norm;
    if (ntot > 0) {
      final_obs.mean_p[0] =
          (final_obs.mean_p[0] * final_obs.norm + g.mean_p[0] * g.norm) / ntot;
      final_obs.mean_p[1] =
          (final_obs.mean_p[1] * final_obs.norm + g.mean_p[1] * g.norm) / ntot;
    }
    final_obs.energy += g.energy;
    final_obs.norm = ntot;
  }

  const SliceLedger merged = merge_ledgers(res);
  rep.audit = conservation_audit(initial_obs, merged, final_obs, cfg.tau_p, cfg.tau_e);
  if (!rep.audit.norm_ok) throw AuditError("run: conservation audit norm failure");

  rep.overlap.min_separation = kInf;
  for (std::size_t bi = 0; bi < res.ledgers.size(); bi++) {
    const OverlapMetric m = slice_overlap_monitor(res.ledgers[bi], res.bodies[bi]);
    if (m.min_separation < rep.overlap.min_separation) rep.overlap = m;
  }

  for (const auto& eng : engines) {
    const auto& d = eng.diagnostics();
    rep.claimed_total += d.claimed_total;
    rep.unreconciled_claims += d.unreconciled_claims;
    rep.excess_removals += d.excess_removals;
    rep.wall_inflow_max = std::max(rep.wall_inflow_max, d.wall_inflow_max);
    rep.ghost_splits += d.ghost_splits;
  }
  rep.n_records = long(merged.records().size());

  // Born L1 against the configured reference
  if (want_flux_ref && !res.ledgers.empty()) {
    const BornDistribution born = born_distribution(res.ledgers.front());
    kernels::KahanSum l1, tot;
    std::map<std::pair<int, long>, double> diff = flux_ref.bins;
    for (const auto& [k, v] : born.joint) diff[k] -= v;
    for (const auto& [k, v] : flux_ref.bins) tot.add(v);
    for (const auto& [k, v] : diff) l1.add(std::abs(v));
    rep.born_l1 = tot.value() > 0 ? l1.value() / tot.value() : -1;
  } else if (cfg.reference == "contact_density" && !res.ledgers.empty()) {
    // reference: free-run copy sampled at the sites at the activation instant
    double t_ref = 0;
    for (const auto& pl : res.bodies.front().plates)
      for (const auto& h : pl.holes)
        if (std::isfinite(h.t_close)) t_ref = std::max(t_ref, h.t_close);
    WaveField free_copy = cfg.make_initial();
    free_copy = evolve(std::move(free_copy), pot, scfg, t_ref);
    const BodyState& b = res.bodies.front();
    const auto sites = b.site_positions(t_ref);
    const double area = std::pow(b.granularity, grid.dim - 1);
    std::map<int, double> ref;
    for (const auto& s : sites) {
      if (!s.active) continue;
      const std::size_t idx = probe_index(grid, s.position);
      ref[s.site.id] = std::norm(free_copy.values[idx]) * b.granularity * area /
                       (grid.dim == 2 ? b.granularity : 1.0);
    }
    const BornDistribution born = born_distribution(res.ledgers.front());
    kernels::KahanSum l1, tot;
    std::map<int, double> diff = ref;
    for (const auto& [k, v] : born.site) diff[k] -= v;
    for (const auto& [k, v] : ref) tot.add(v);
    for (const auto& [k, v] : diff) l1.add(std::abs(v));
    rep.born_l1 = tot.value() > 0 ? l1.value() / tot.value() : -1;
  }

  res.final_field = std::move(field);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  if (!out_dir.empty()) {
    std::vector<std::string> summary;
    summary.push_back("label\t" + cfg.label);
    char buf[160];
    std::snprintf(buf, sizeof buf, "free_norm_final\t%.17g", rep.free_norm_final);
    summary.push_back(buf);
    std::snprintf(buf, sizeof buf, "identity_residual\t%.17g", rep.identity_residual);
    summary.push_back(buf);
    std::snprintf(buf, sizeof buf, "max_step_residual\t%.17g", rep.max_step_residual);
    summary.push_back(buf);
    std::snprintf(buf, sizeof buf, "overlap_min_separation\t%.17g",
                  rep.overlap.min_separation);
    summary.push_back(buf);
    std::snprintf(buf, sizeof buf, "audit_energy_residual\t%.17g",
                  rep.audit.energy_residual);
    summary.push_back(buf);
    std::snprintf(buf, sizeof buf, "audit_momentum_residual\t%.17g\t%.17g",
                  rep.audit.momentum_residual[0], rep.audit.momentum_residual[1]);
    summary.push_back(buf);
    write_ledger(merged, (fs::path(out_dir) / "ledger.tsv").string(), summary);
    std::ofstream os(fs::path(out_dir) / "report.json");
    os << rep.to_json() << "\n";
    for (std::size_t i = 0; i < res.probes.size(); i++) {
      char name[64];
      std::snprintf(name, sizeof name, "probe_%zu.tsv", i);
      std::FILE* fp = std::fopen((fs::path(out_dir) / name).string().c_str(), "w");
      if (!fp) throw Error("run: cannot write probe file");
      std::fprintf(fp, "# t\tre\tim\n");
      const ProbeSignal& ps = res.probes[i];
      for (std::size_t k = 0; k < ps.samples.size(); k++)
        std::fprintf(fp, "%.17g\t%.17g\t%.17g\n", ps.t_start + double(k) * ps.dt_sample,
                     ps.samples[k].real(), ps.samples[k].imag());
      std::fclose(fp);
    }
    write_snapshot(res.final_field, (fs::path(out_dir) / "final.wfld").string());
    if (cfg.output.text_snapshots)
      write_snapshot_text(res.final_field, (fs::path(out_dir) / "final.tsv").string());
  }
  return res;
}

}  // namespace slicesim
