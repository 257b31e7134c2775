#include "slicesim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "slicesim/kernels.hpp"

namespace slicesim {

// ---------------------------------------------------------------------------
// SliceLedger
// ---------------------------------------------------------------------------

SliceLedger::SliceLedger(double bin_width) : bin_width_(bin_width) {
  if (!(bin_width > 0)) throw ConfigError("ledger: bin width must be positive");
}

long SliceLedger::bin_of(double t) const {
  return long(std::floor(t / bin_width_ + 1e-9));
}

void SliceLedger::add(int site, long bin, double amount, cplx phase_increment) {
  if (!(amount > 0)) return;
  Cell& c = cells_[{site, bin}];
  c.amount.add(amount);
  c.phase_sum += phase_increment;
  total_.add(amount);
}

void SliceLedger::add_deposits(int site, long bin, double energy,
                               std::array<double, 2> momentum) {
  Cell& c = cells_[{site, bin}];
  c.energy += energy;
  c.momentum[0] += momentum[0];
  c.momentum[1] += momentum[1];
}

double SliceLedger::total_captured() const { return total_.value(); }

std::vector<SliceRecord> SliceLedger::records() const {
  std::vector<SliceRecord> out;
  out.reserve(cells_.size());
  for (const auto& [key, c] : cells_) {
    const double p = c.amount.value();
    if (p <= kRecordFloor) continue;
    SliceRecord r;
    r.site = key.first;
    r.t_bin = key.second;
    r.t_bin_center = bin_center(key.second);
    const double mag = std::abs(c.phase_sum);
    r.phase = mag > 0 ? std::arg(c.phase_sum) : 0.0;
    r.weight = std::polar(std::sqrt(p), r.phase);
    r.deposits.norm = p;
    r.deposits.energy = c.energy;
    r.deposits.momentum = c.momentum;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// distributions, audits, monitor
// ---------------------------------------------------------------------------

BornDistribution born_distribution(const SliceLedger& ledger) {
  BornDistribution d;
  kernels::KahanSum total;
  for (const auto& r : ledger.records()) {
    const double p = std::norm(r.weight);
    d.site[r.site] += p;
    d.joint[{r.site, r.t_bin}] += p;
    total.add(p);
  }
  d.total = total.value();
  return d;
}

AuditReport conservation_audit(const FieldObservables& initial, const SliceLedger& ledger,
                               const FieldObservables& final_obs, double tau_p,
                               double tau_e) {
  AuditReport rep;
  rep.tau_energy = tau_e;
  rep.tau_momentum = {tau_p, tau_p};
  kernels::KahanSum dn, de, dpx, dpy;
  for (const auto& r : ledger.records()) {
    dn.add(r.deposits.norm);
    de.add(r.deposits.energy);
    dpx.add(r.deposits.momentum[0]);
    dpy.add(r.deposits.momentum[1]);
  }
  rep.norm_initial = initial.norm;
  rep.norm_final = final_obs.norm;
  rep.norm_residual = initial.norm - final_obs.norm - dn.value();
  rep.energy_residual = initial.energy - final_obs.energy - de.value();
  // extensive momentum = mean momentum times norm
  rep.momentum_residual[0] =
      initial.mean_p[0] * initial.norm - final_obs.mean_p[0] * final_obs.norm - dpx.value();
  rep.momentum_residual[1] =
      initial.mean_p[1] * initial.norm - final_obs.mean_p[1] * final_obs.norm - dpy.value();
  rep.norm_ok = std::abs(rep.norm_residual) <= 1e-6;
  rep.energy_flag = std::abs(rep.energy_residual) > tau_e;
  rep.momentum_flag = std::abs(rep.momentum_residual[0]) > tau_p ||
                      std::abs(rep.momentum_residual[1]) > tau_p;
  return rep;
}

OverlapMetric slice_overlap_monitor(const SliceLedger& ledger, const BodyState& body) {
  OverlapMetric m;
  auto recs = ledger.records();
  if (recs.size() < 2) return m;
  // rest positions by site id
  auto sites = body.site_positions(body.trajectory.t_start());
  auto pos = [&](int id) { return sites[std::size_t(id)].site.rest_position; };
  // records() is (site, bin)-sorted; sort by bin for a shrinking-window scan
  std::sort(recs.begin(), recs.end(), [](const SliceRecord& a, const SliceRecord& b) {
    return a.t_bin < b.t_bin;
  });
  double best = kInf;
  for (std::size_t i = 0; i < recs.size(); i++) {
    for (std::size_t j = i + 1; j < recs.size(); j++) {
      const double dbin = double(recs[j].t_bin - recs[i].t_bin);
      if (dbin >= best) break;
      const auto a = pos(recs[i].site);
      const auto b = pos(recs[j].site);
      const double dx = a[0] - b[0], dy = a[1] - b[1];
      const double dsite = std::sqrt(dx * dx + dy * dy) / body.granularity;
      best = std::min(best, std::max(dsite, dbin));
    }
  }
  m.min_separation = best;
  m.flagged = best < 1.0;
  return m;
}

void write_ledger(const SliceLedger& ledger, const std::string& path,
                  const std::vector<std::string>& summary_lines) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error("write_ledger: cannot open " + path);
  std::fprintf(fp,
               "# site_id\tt_bin\tt_bin_center\tre_weight\tim_weight\tprobability\t"
               "e_deposit\tpx_deposit\tpy_deposit\n");
  for (const auto& r : ledger.records()) {
    std::fprintf(fp, "%d\t%ld\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n", r.site,
                 r.t_bin, r.t_bin_center, r.weight.real(), r.weight.imag(),
                 std::norm(r.weight), r.deposits.energy, r.deposits.momentum[0],
                 r.deposits.momentum[1]);
  }
  std::fprintf(fp, "# summary\n");
  std::fprintf(fp, "# total_captured\t%.17g\n", ledger.total_captured());
  std::fprintf(fp, "# bin_width\t%.17g\n", ledger.bin_width());
  for (const auto& line : summary_lines) std::fprintf(fp, "# %s\n", line.c_str());
  std::fclose(fp);
}

std::vector<SliceRecord> read_ledger_records(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("read_ledger_records: cannot open " + path);
  std::vector<SliceRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    SliceRecord r;
    double re, im, prob;
    ss >> r.site >> r.t_bin >> r.t_bin_center >> re >> im >> prob >>
        r.deposits.energy >> r.deposits.momentum[0] >> r.deposits.momentum[1];
    if (!ss) throw Error("read_ledger_records: malformed line in " + path);
    r.weight = {re, im};
    r.phase = std::arg(r.weight);
    r.deposits.norm = prob;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CaptureEngine
// ---------------------------------------------------------------------------

namespace {
constexpr double kClaimFloor = 1e-300;
constexpr double kClaimPushFloor = 1e-16;
constexpr double kDustFloor = 1e-13;
constexpr double kSkinSplitFloor = 1e-12;
constexpr double kGhostDropNorm = 1e-14;
constexpr double kGhostDrainRate = 2.0;
constexpr double kWallLeakLimit = 1e-6;

// Smooth quadrature partition across the face: the detached (ghost) piece
// gets amplitude factor sin(theta), the free piece cos(theta), so the norms
// add exactly and the captured fraction is antisymmetric about the face.
double partition_angle(double depth, double delta) {
  if (depth <= -delta) return 0.0;
  if (depth >= delta) return 0.5 * std::numbers::pi;
  return 0.25 * std::numbers::pi *
         (1.0 + std::sin(0.5 * std::numbers::pi * depth / delta));
}
}  // namespace

CaptureEngine::CaptureEngine(BodyState body, const Grid& grid, double mass, double hbar,
                             double dt, double bin_width, double k_char)
    : body_(std::move(body)), grid_(grid), mass_(mass), hbar_(hbar), dt_(dt) {
  body_.validate();
  if (body_.dim != grid_.dim) throw ConfigError("capture: body/grid dimension mismatch");
  if (body_.trajectory.rotation_rate != 0)
    throw ConfigError("capture: rotating bodies are geometry-only; zero the rotation rate");
  if (body_.axis != 0) throw ConfigError("capture: plates must be normal to the x axis");
  if (!(k_char > 0)) throw ConfigError("capture: need a positive characteristic k");
  const double lambda = 2.0 * std::numbers::pi / k_char;
  skin_width_ = body_.skin_width > 0 ? body_.skin_width : 1.6 * lambda;
  skin_width_ = std::max(skin_width_, 8.0 * grid_.spacing(0));
  gamma0_ = body_.skin_strength > 0 ? body_.skin_strength
                                    : 3.0 * hbar_ * k_char * k_char / (2.0 * mass_);
  ledger_ = SliceLedger(bin_width);
  queues_.resize(std::size_t(body_.total_sites()));
  for (const auto& p : body_.plates) {
    if (p.eta < 1.0 && p.thickness > skin_width_)
      throw ConfigError("capture: eta < 1 requires a thin (membrane) plate");
  }
}

double CaptureEngine::ghost_norm() const {
  double n = 0;
  for (const auto& g : ghosts_) n += kernels::sum_abs2(g.field.values) * grid_.cell_volume();
  return n;
}

FieldObservables CaptureEngine::ghost_observables() const {
  FieldObservables sum;
  for (const auto& g : ghosts_) {
    if (kernels::sum_abs2(g.field.values) == 0) continue;
    const FieldObservables ob = observables(g.field);
    const double ntot = sum.norm + ob.norm;
    if (ntot > 0) {
      sum.mean_p[0] = (sum.mean_p[0] * sum.norm + ob.mean_p[0] * ob.norm) / ntot;
      sum.mean_p[1] = (sum.mean_p[1] * sum.norm + ob.mean_p[1] * ob.norm) / ntot;
    }
    sum.energy += ob.energy;
    sum.norm = ntot;
  }
  return sum;
}

double CaptureEngine::pop_queue(SiteQueue& sq, int site, double amount, double fallback_t,
                                double phase) {
  double r = amount;
  while (r > 0 && sq.head < sq.q.size()) {
    Claim& c = sq.q[sq.head];
    const double take = std::min(c.amount, r);
    c.amount -= take;
    sq.outstanding -= take;
    r -= take;
    ledger_.add(site, ledger_.bin_of(c.t), take, std::polar(take, c.phase));
    step_contrib_.push_back({site, ledger_.bin_of(c.t), take});
    if (c.amount <= kClaimFloor) sq.head++;
  }
  if (r > kDustFloor) {
    ledger_.add(site, ledger_.bin_of(fallback_t), r, std::polar(r, phase));
    step_contrib_.push_back({site, ledger_.bin_of(fallback_t), r});
  } else if (r > 0) {
    diag_.dust_discarded += r;
  }
  return r;
}

void CaptureEngine::split_ghost(WaveField& f, double t_event) {
  // wide partition: the spectral tail of the cut must stay below the body's
  // escape velocity, or the recoiling surface re-captures edge dust late
  const double delta = 16.0 * grid_.spacing(0);
  for (std::size_t pi = 0; pi < body_.plates.size(); pi++) {
    const Plate& pl = body_.plates[pi];
    if (pl.thickness <= skin_width_) continue;  // membranes carry no skin
    if (!body_.plate_active(pl, t_event - 1e-12) && !body_.plate_active(pl, t_event))
      continue;
    const double face = body_.face_position(pl, t_event);
    // measure skin load
    double load = 0;
    const double wall_depth = std::min(pl.thickness, skin_width_);
    for (std::size_t ix = 0; ix < grid_.n[0]; ix++) {
      const double depth = (grid_.coord(0, ix) - face) * double(-pl.facing);
      if (depth < -delta || depth > wall_depth + delta) continue;
      for (std::size_t iy = 0; iy < grid_.n[1]; iy++)
        load += std::norm(f.values[grid_.index(ix, iy)]);
    }
    load *= grid_.cell_volume();
    int base0 = 0;
    for (std::size_t qi = 0; &body_.plates[qi] != &pl; qi++)
      base0 += int(body_.plates[qi].n_sites);
    if (load < kSkinSplitFloor) {
      // nothing worth detaching; stale claims are dropped so later removals
      // cannot pop pre-event stamps
      for (std::size_t j = 0; j < pl.n_sites; j++) {
        SiteQueue& sq = queues_[std::size_t(base0) + j];
        diag_.unreconciled_claims += sq.outstanding;
        sq.q.clear();
        sq.head = 0;
        sq.outstanding = 0;
      }
      continue;
    }

    Ghost g;
    g.field = f;  // copy; then partition the two
    g.detach_time = t_event;
    for (std::size_t ix = 0; ix < grid_.n[0]; ix++) {
      const double x = grid_.coord(0, ix);
      const double depth = (x - face) * double(-pl.facing);
      const double theta = partition_angle(depth, delta);
      const double cg = std::sin(theta);
      const double cf = std::cos(theta);
      for (std::size_t iy = 0; iy < grid_.n[1]; iy++) {
        const std::size_t idx = grid_.index(ix, iy);
        bool in_material = true;
        if (grid_.dim == 2) {
          const double y = grid_.coord(1, iy) - body_.trajectory.offset(t_event)[1];
          const double span_lo = pl.site_origin;
          const double span_hi = pl.site_origin + double(pl.n_sites) * body_.granularity;
          if (y < span_lo || y > span_hi) in_material = false;
          for (const auto& h : pl.holes)
            if (h.is_open(t_event - 1e-12) && y > h.lo && y < h.hi) in_material = false;
        }
        g.field.values[idx] = in_material ? f.values[idx] * cg : cplx(0);
        if (in_material) f.values[idx] *= cf;
      }
    }
    // the detached piece is still free field: keep it out of this step's
    // deposit difference
    {
      const FieldObservables og = observables(g.field);
      ghost_dE_ -= og.energy;
      ghost_dP_[0] -= og.mean_p[0] * og.norm;
      ghost_dP_[1] -= og.mean_p[1] * og.norm;
    }
    // inherit the plate's outstanding claims, chronologically merged
    int base = 0;
    for (std::size_t qi = 0; qi < pi; qi++) base += int(body_.plates[qi].n_sites);
    struct Tagged {
      Claim c;
      int site;
    };
    std::vector<Tagged> merged;
    for (std::size_t j = 0; j < pl.n_sites; j++) {
      SiteQueue& sq = queues_[std::size_t(base) + j];
      for (std::size_t qi = sq.head; qi < sq.q.size(); qi++)
        if (sq.q[qi].amount > kClaimFloor) merged.push_back({sq.q[qi], base + int(j)});
      sq.q.clear();
      sq.head = 0;
      sq.outstanding = 0;
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Tagged& a, const Tagged& b) { return a.c.t < b.c.t; });
    g.queues.resize(1);
    for (const auto& m : merged) {
      g.queues[0].push(m.c);
      g.sites.push_back(m.site);
    }
    diag_.ghost_splits++;
    ghosts_.push_back(std::move(g));
  }
}

void CaptureEngine::ghost_step(const Stepper& stepper) {
  for (auto& g : ghosts_) {
    g.field = stepper.step(std::move(g.field));
    // A detached piece is captured amplitude by construction, so it drains
    // under a spatially uniform decay: no gradient, no reflection, nothing
    // escapes. Deposits are measured around the decay only (the step itself
    // is unitary and conserves E and p for the free scenarios).
    WaveField before_field = g.field;
    kernels::KahanSum removed;
    const double gdamp = std::exp(-kGhostDrainRate * dt_);
    for (std::size_t i = 0; i < g.field.values.size(); i++) {
      const double before = std::norm(g.field.values[i]);
      if (before == 0) continue;
      g.field.values[i] *= gdamp;
      removed.add(before - std::norm(g.field.values[i]));
    }
    double rem = removed.value() * grid_.cell_volume();
    if (rem > kRecordFloor) {
      const FieldObservables ob = observables(before_field);
      const FieldObservables oa = observables(g.field);
      ghost_dE_ += ob.energy - oa.energy;
      ghost_dP_[0] += ob.mean_p[0] * ob.norm - oa.mean_p[0] * oa.norm;
      ghost_dP_[1] += ob.mean_p[1] * ob.norm - oa.mean_p[1] * oa.norm;
    }
    // pop the inherited chronological queue
    SiteQueue& sq = g.queues[0];
    while (rem > 0 && sq.head < sq.q.size()) {
      Claim& c = sq.q[sq.head];
      const int site = g.sites[sq.head];
      const double take = std::min(c.amount, rem);
      c.amount -= take;
      rem -= take;
      ledger_.add(site, ledger_.bin_of(c.t), take, std::polar(take, c.phase));
      step_contrib_.push_back({site, ledger_.bin_of(c.t), take});
      if (c.amount <= kClaimFloor) sq.head++;
    }
    if (rem > kDustFloor && !g.sites.empty()) {
      // residue beyond claims finalizes at the detachment event
      const int site = g.sites[std::min(sq.head, g.sites.size() - 1)];
      ledger_.add(site, ledger_.bin_of(g.detach_time), rem, std::polar(rem, 0.0));
      step_contrib_.push_back({site, ledger_.bin_of(g.detach_time), rem});
      diag_.excess_removals += rem;
    } else if (rem > 0) {
      diag_.dust_discarded += rem;
    }
  }
  // drop exhausted ghosts
  std::erase_if(ghosts_, [&](const Ghost& g) {
    const double n = kernels::sum_abs2(g.field.values) * grid_.cell_volume();
    if (n >= kGhostDropNorm) return false;
    double left = 0;
    for (std::size_t qi = g.queues[0].head; qi < g.queues[0].q.size(); qi++)
      left += g.queues[0].q[qi].amount;
    diag_.unreconciled_claims += left;
    diag_.discarded_ghost_norm += n;
    return true;
  });
}

void CaptureEngine::sweep_window(WaveField& f, double t0, double t1) {
  const auto u0 = body_.trajectory.offset(t0);
  const auto u1 = body_.trajectory.offset(t1);
  const double motion = std::max(std::abs(u1[0] - u0[0]), std::abs(u1[1] - u0[1]));
  const double hmin = grid_.min_spacing();
  const long nsub = std::max<long>(1, long(std::ceil(motion / (0.9 * hmin))));
  const double vol = grid_.cell_volume();
  for (long s = 0; s < nsub; s++) {
    const double a = t0 + (t1 - t0) * double(s) / double(nsub);
    const double b = t0 + (t1 - t0) * double(s + 1) / double(nsub);
    for (const auto& sc : body_.swept_cells(grid_, a, b)) {
      cplx& v = f.values[sc.cell];
      const double amount = std::norm(v) * vol;
      if (amount > kDustFloor) {
        const long bin = ledger_.bin_of(sc.t_cross);
        ledger_.add(sc.site_id, bin, amount, std::polar(amount, std::arg(v)));
        step_contrib_.push_back({sc.site_id, bin, amount});
      }
      v = 0;
    }
  }
}

void CaptureEngine::handle_event(WaveField& f, double t_event) {
  // materialization first: cells that became interior exactly at the event
  // are captured in place, per cell
  const double eps = 1e-9 * std::max(1.0, std::abs(t_event));
  const double vol = grid_.cell_volume();
  for (const auto& sc : body_.swept_cells(grid_, t_event - eps, t_event + eps)) {
    cplx& v = f.values[sc.cell];
    const double amount = std::norm(v) * vol;
    if (amount > kDustFloor) {
      const long bin = ledger_.bin_of(t_event);
      ledger_.add(sc.site_id, bin, amount, std::polar(amount, std::arg(v)));
      step_contrib_.push_back({sc.site_id, bin, amount});
    }
    v = 0;
  }
  // then detach whatever in-transit load the event strands in the skin
  split_ghost(f, t_event);
}

void CaptureEngine::claims_and_sink(WaveField& f) {
  const double t = f.time;
  const double hx = grid_.spacing(0);
  const double vol = grid_.cell_volume();
  const double area = grid_.dim == 2 ? body_.granularity : 1.0;
  const auto vbody = body_.trajectory.velocity(t);

  int site_base = 0;
  for (const auto& pl : body_.plates) {
    const int base = site_base;
    site_base += int(pl.n_sites);
    if (!body_.plate_active(pl, t)) continue;
    const double face = body_.face_position(pl, t);
    const bool membrane = pl.thickness <= skin_width_;
    const double wall_depth = membrane ? pl.thickness : std::min(pl.thickness, skin_width_);
    const bool double_sided = !membrane && std::isfinite(pl.thickness);

    // flux sampling helper: 4th-order derivative along x at (ix, iy)
    auto flux_at = [&](long ix, std::size_t iy, int facing) -> std::pair<double, double> {
      auto val = [&](long i) -> cplx {
        const long n = long(grid_.n[0]);
        return f.values[grid_.index(std::size_t(((i % n) + n) % n), iy)];
      };
      const cplx psi = val(ix);
      const cplx dpsi =
          (-val(ix + 2) + 8.0 * val(ix + 1) - 8.0 * val(ix - 1) + val(ix - 2)) /
          (12.0 * hx);
      const double jrel = (hbar_ / mass_ * std::imag(std::conj(psi) * dpsi) -
                           std::norm(psi) * vbody[0]) *
                          double(-facing);
      return {jrel, std::arg(psi)};
    };

    // --- claims at the front face (and back face for double-sided plates) ---
    struct FaceSpec {
      double pos;
      int facing;
    };
    std::vector<FaceSpec> faces;
    faces.push_back({face, pl.facing});
    if (double_sided)
      faces.push_back({face - pl.facing * pl.thickness, -pl.facing});

    const auto active = body_.active_sites(pl, t);
    if (active.empty()) continue;
    for (const auto& fc : faces) {
      // sample two cells outside the face
      const double outside = fc.pos + double(fc.facing) * 2.5 * hx;
      const long ix = long(std::floor((outside - grid_.lo[0]) / hx + 0.5));
      for (int sid : active) {
        std::size_t iy = 0;
        if (grid_.dim == 2) {
          const double y = body_.site_positions(t)[std::size_t(sid)].position[1];
          iy = std::size_t(std::clamp(
              long(std::floor((y - grid_.lo[1]) / grid_.spacing(1) + 0.5)), 0L,
              long(grid_.n[1]) - 1));
        } else if (sid != active.front()) {
          continue;  // 1D: only the shallowest layer faces the exterior
        }
        const auto [jrel, phase] = flux_at(ix, iy, fc.facing);
        if (jrel > 0) {
          const double q = pl.eta * jrel * area * dt_;
          if (q > kClaimPushFloor) {
            queues_[std::size_t(sid)].push({t, q, phase});
            diag_.claimed_total += q;
          }
        } else if (jrel < 0) {
          // backflow un-claims the most recent inflow
          SiteQueue& sq = queues_[std::size_t(sid)];
          double r = pl.eta * (-jrel) * area * dt_;
          while (r > 0 && sq.q.size() > sq.head) {
            Claim& c = sq.q.back();
            const double take = std::min(c.amount, r);
            c.amount -= take;
            sq.outstanding -= take;
            r -= take;
            if (c.amount > kClaimFloor) break;
            sq.q.pop_back();
          }
        }
      }
    }

    // --- removal: membrane quota or graded skin + wall ---
    // owner map along the transverse axis (2D)
    std::vector<int> owner;
    if (grid_.dim == 2) {
      owner.assign(grid_.n[1], -1);
      const double uoff = body_.trajectory.offset(t)[1];
      for (std::size_t iy = 0; iy < grid_.n[1]; iy++) {
        const double y = grid_.coord(1, iy) - uoff;
        const double rel = (y - pl.site_origin) / body_.granularity - 0.5;
        long j = std::lround(rel);
        j = std::clamp(j, 0L, long(pl.n_sites) - 1);
        // snap to the nearest active site
        long best = -1;
        for (long step = 0; step < long(pl.n_sites); step++) {
          for (long cand : {j - step, j + step}) {
            if (cand < 0 || cand >= long(pl.n_sites)) continue;
            if (std::find(active.begin(), active.end(), base + int(cand)) != active.end()) {
              best = cand;
              break;
            }
          }
          if (best >= 0) break;
        }
        owner[iy] = best >= 0 ? base + int(best) : -1;
      }
    }
    const int owner_1d = active.front();

    auto depth_of = [&](double x) {
      double d_front = (x - face) * double(-pl.facing);
      if (!double_sided) return d_front;
      const double back = face - pl.facing * pl.thickness;
      const double d_back = (x - back) * double(pl.facing);
      return std::min(d_front, d_back);
    };

    if (membrane) {
      // flux-locked removal of exactly the claimed quota, spread over the
      // membrane cells in proportion to density
      for (int sid : active) {
        SiteQueue& sq = queues_[std::size_t(sid)];
        // quota = amount claimed this step for this site (tail claims at t)
        double quota = 0;
        for (std::size_t qi = sq.head; qi < sq.q.size(); qi++)
          if (sq.q[qi].t >= t - 0.5 * dt_) quota += sq.q[qi].amount;
        if (quota <= kClaimFloor) continue;
        // collect membrane cells for this site
        std::vector<std::size_t> cells;
        double rho_sum = 0;
        for (std::size_t ix2 = 0; ix2 < grid_.n[0]; ix2++) {
          const double d = depth_of(grid_.coord(0, ix2));
          if (d < 0 || d > pl.thickness) continue;
          if (grid_.dim == 1) {
            cells.push_back(grid_.index(ix2, 0));
            rho_sum += std::norm(f.values[cells.back()]);
          } else {
            for (std::size_t iy = 0; iy < grid_.n[1]; iy++) {
              if (owner[iy] != sid) continue;
              cells.push_back(grid_.index(ix2, iy));
              rho_sum += std::norm(f.values[cells.back()]);
            }
          }
        }
        if (rho_sum <= 0) continue;
        kernels::KahanSum removed;
        for (std::size_t c : cells) {
          const double before = std::norm(f.values[c]);
          if (before == 0) continue;
          const double take = std::min(before * vol, quota * before / rho_sum);
          const double g = std::sqrt(std::max(0.0, 1.0 - take / (before * vol)));
          f.values[c] *= g;
          removed.add(before - std::norm(f.values[c]));
        }
        pop_queue(sq, sid, removed.value() * vol, t, 0.0);
      }
      continue;
    }

    // graded skin + hard wall
    kernels::KahanSum wall_inflow;
    std::vector<kernels::KahanSum> removed_by_site(queues_.size());
    const auto uoff = body_.trajectory.offset(t);
    for (std::size_t ix2 = 0; ix2 < grid_.n[0]; ix2++) {
      const double x = grid_.coord(0, ix2);
      const double d = depth_of(x);
      if (d < 0) continue;
      if (std::isfinite(pl.thickness) && !double_sided && d > pl.thickness) continue;
      float damp;
      bool wall = false;
      if (d >= wall_depth) {
        damp = 0.0f;
        wall = true;
      } else {
        const double u = d / skin_width_;
        damp = float(std::exp(-gamma0_ * std::pow(u, body_.skin_power) * dt_));
      }
      for (std::size_t iy = 0; iy < grid_.n[1]; iy++) {
        int own = owner_1d;
        if (grid_.dim == 2) {
          // skip cells outside the plate footprint or inside open holes
          const double y = grid_.coord(1, iy) - uoff[1];
          const double span_lo = pl.site_origin;
          const double span_hi = pl.site_origin + double(pl.n_sites) * body_.granularity;
          if (y < span_lo || y > span_hi) continue;
          bool in_hole = false;
          for (const auto& h : pl.holes)
            if (h.is_open(t) && y > h.lo && y < h.hi) in_hole = true;
          if (in_hole) continue;
          own = owner[iy];
          if (own < 0) continue;
        }
        cplx& v = f.values[grid_.index(ix2, iy)];
        const double before = std::norm(v);
        if (before == 0) continue;
        if (wall) wall_inflow.add(before);
        v *= double(damp);
        removed_by_site[std::size_t(own)].add(before - std::norm(v));
      }
    }
    const double wall_norm = wall_inflow.value() * vol;
    diag_.wall_inflow_max = std::max(diag_.wall_inflow_max, wall_norm);
    if (wall_norm > kWallLeakLimit)
      throw AuditError("capture: interior leak beyond the absorbing skin (sink failure)");
    for (std::size_t sid = 0; sid < removed_by_site.size(); sid++) {
      const double rem = removed_by_site[sid].value() * vol;
      if (rem <= 0) continue;
      const double excess =
          pop_queue(queues_[sid], int(sid), rem, t, 0.0);
      diag_.excess_removals += std::max(0.0, excess);
    }
  }
}

void CaptureEngine::process(WaveField& f, const Stepper& stepper) {
  if (!started_) {
    prev_time_ = f.time - dt_;
    started_ = true;
    pending_events_ = body_.event_times();
  }
  const double t0 = prev_time_;
  const double t1 = f.time;
  step_contrib_.clear();
  ghost_dE_ = 0;
  ghost_dP_ = {0, 0};

  const double norm_before =
      kernels::sum_abs2(f.values) * grid_.cell_volume() + ghost_norm();
  // deposits need pre-removal observables; keep a copy of the main field
  WaveField before = f;

  ghost_step(stepper);

  // segment the window at event instants so each sweep sees constant velocity
  std::vector<double> pts{t0};
  for (double te : pending_events_)
    if (te > t0 + 1e-12 && te <= t1 + 1e-12) pts.push_back(te);
  pts.push_back(t1);
  for (std::size_t i = 0; i + 1 < pts.size(); i++) {
    if (i > 0) handle_event(f, pts[i]);
    if (pts[i + 1] > pts[i] + 1e-15) sweep_window(f, pts[i], pts[i + 1]);
  }

  claims_and_sink(f);

  const double norm_after =
      kernels::sum_abs2(f.values) * grid_.cell_volume() + ghost_norm();
  kernels::KahanSum dled;
  for (const auto& c : step_contrib_) dled.add(c.amount);
  const double removed_ledgered = dled.value();
  last_residual_ = std::abs((norm_before - norm_after) - removed_ledgered);
  diag_.max_norm_residual = std::max(diag_.max_norm_residual, last_residual_);

  // energy / momentum deposits by before/after difference, apportioned by
  // captured norm over this step's contributions
  if (removed_ledgered > kRecordFloor) {
    const FieldObservables ob = observables(before);
    const FieldObservables oa = observables(f);
    const double dE = (ob.energy - oa.energy) + ghost_dE_;
    const std::array<double, 2> dP{
        ob.mean_p[0] * ob.norm - oa.mean_p[0] * oa.norm + ghost_dP_[0],
        ob.mean_p[1] * ob.norm - oa.mean_p[1] * oa.norm + ghost_dP_[1]};
    for (const auto& c : step_contrib_) {
      const double w = c.amount / removed_ledgered;
      ledger_.add_deposits(c.site, c.bin, w * dE, {w * dP[0], w * dP[1]});
    }
  }
  prev_time_ = t1;
}

}  // namespace slicesim
