#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "slicesim/body.hpp"
#include "slicesim/grid.hpp"
#include "slicesim/kernels.hpp"
#include "slicesim/observables.hpp"
#include "slicesim/stepper.hpp"

namespace slicesim {

// Records below this captured probability are not ledgered.
inline constexpr double kRecordFloor = 1e-14;

struct Deposits {
  double norm = 0;
  double energy = 0;
  std::array<double, 2> momentum{0, 0};
};

// One non-interfering capture history: a (site, time-bin) cell with a complex
// weight whose squared magnitude is the captured probability.
struct SliceRecord {
  int site = -1;
  long t_bin = 0;
  double t_bin_center = 0;
  cplx weight;
  double phase = 0;
  Deposits deposits;
};

class SliceLedger {
 public:
  SliceLedger() = default;
  explicit SliceLedger(double bin_width);

  double bin_width() const { return bin_width_; }
  long bin_of(double t) const;
  double bin_center(long bin) const { return (double(bin) + 0.5) * bin_width_; }

  // Accumulate captured probability with its capture-phase factor.
  void add(int site, long bin, double amount, cplx phase_increment);
  void add_deposits(int site, long bin, double energy, std::array<double, 2> momentum);

  double total_captured() const;
  bool empty() const { return cells_.empty(); }
  std::size_t cell_count() const { return cells_.size(); }

  // Finalized records, (site, bin)-sorted; weights sqrt(p) e^{i phase}.
  std::vector<SliceRecord> records() const;

 private:
  struct Cell {
    kernels::KahanSum amount;
    cplx phase_sum{0, 0};
    double energy = 0;
    std::array<double, 2> momentum{0, 0};
  };
  double bin_width_ = 1.0;
  std::map<std::pair<int, long>, Cell> cells_;
  kernels::KahanSum total_;

  friend class CaptureEngine;
};

struct BornDistribution {
  std::map<int, double> site;                    // per-site marginal
  std::map<std::pair<int, long>, double> joint;  // (site, bin)
  double total = 0;
};

BornDistribution born_distribution(const SliceLedger& ledger);

struct AuditReport {
  double norm_initial = 0, norm_final = 0;
  double norm_residual = 0;  // initial - final - sum deposits
  double energy_residual = 0;
  std::array<double, 2> momentum_residual{0, 0};
  double tau_energy = 0;
  std::array<double, 2> tau_momentum{0, 0};
  bool norm_ok = true;     // |norm_residual| <= 1e-6, failure is fatal upstream
  bool energy_flag = false;
  bool momentum_flag = false;
};

AuditReport conservation_audit(const FieldObservables& initial, const SliceLedger& ledger,
                               const FieldObservables& final_obs, double tau_p,
                               double tau_e);

struct OverlapMetric {
  double min_separation = kInf;  // min over record pairs of max(site dist / d, |dbin|)
  bool flagged = false;          // premise violated when < 1
};

OverlapMetric slice_overlap_monitor(const SliceLedger& ledger, const BodyState& body);

// Ledger text export (tab separated) with a trailing run-summary block.
void write_ledger(const SliceLedger& ledger, const std::string& path,
                  const std::vector<std::string>& summary_lines = {});
std::vector<SliceRecord> read_ledger_records(const std::string& path);

// ---------------------------------------------------------------------------
// Capture engine: rule-1 sinks + sweep capture + the claims bookkeeping that
// turns removals into exactly-timed ledger records.
// ---------------------------------------------------------------------------

struct CaptureDiagnostics {
  double max_norm_residual = 0;       // per-step ledger identity residual
  double unreconciled_claims = 0;     // claimed flux that never materialized
  double excess_removals = 0;         // removals beyond outstanding claims
  double wall_inflow_max = 0;         // worst per-step norm reaching the hard wall
  double discarded_ghost_norm = 0;
  double dust_discarded = 0;  // sub-floor removals kept out of the ledger
  long ghost_splits = 0;
  double claimed_total = 0;
};

class CaptureEngine {
 public:
  // k_char sets the absorber auto-tuning (skin width ~1.6 wavelengths,
  // ramp strength ~3 hbar k^2 / 2m) unless the body overrides them.
  CaptureEngine(BodyState body, const Grid& grid, double mass, double hbar, double dt,
                double bin_width, double k_char);

  // Process one propagator step: advance ghosts, apply sweeps, claims and
  // sinks, and append ledger records. `f` is the freshly stepped main field.
  void process(WaveField& f, const Stepper& stepper);

  // Norm of all in-flight ghost fields (counts as free norm).
  double ghost_norm() const;

  // Extensive norm/energy/momentum of the in-flight ghosts combined.
  FieldObservables ghost_observables() const;

  const SliceLedger& ledger() const { return ledger_; }
  SliceLedger& ledger() { return ledger_; }
  const CaptureDiagnostics& diagnostics() const { return diag_; }
  const BodyState& body() const { return body_; }
  double skin_width() const { return skin_width_; }

  // Per-step ledger identity check result for the runner's audits.
  double last_step_residual() const { return last_residual_; }

 private:
  struct Claim {
    double t = 0;
    double amount = 0;
    double phase = 0;
  };
  struct SiteQueue {
    std::vector<Claim> q;
    std::size_t head = 0;
    double outstanding = 0;
    void push(const Claim& c) {
      q.push_back(c);
      outstanding += c.amount;
      if (head > 4096 && head * 2 > q.size()) {
        q.erase(q.begin(), q.begin() + long(head));
        head = 0;
      }
    }
  };
  struct Ghost {
    WaveField field;
    double detach_time = 0;
    std::vector<SiteQueue> queues;  // inherited claims, merged chronologically
    std::vector<int> sites;         // claim site per queue entry
  };

  void handle_event(WaveField& f, double t_event);
  void sweep_window(WaveField& f, double t0, double t1);
  void claims_and_sink(WaveField& f);
  void ghost_step(const Stepper& stepper);
  void split_ghost(WaveField& f, double t_event);
  double pop_queue(SiteQueue& sq, int site, double amount, double fallback_t,
                   double phase);

  BodyState body_;
  Grid grid_;
  double mass_, hbar_, dt_;
  double skin_width_, gamma0_;
  SliceLedger ledger_;
  std::vector<SiteQueue> queues_;  // per site
  std::vector<Ghost> ghosts_;
  CaptureDiagnostics diag_;
  double last_residual_ = 0;
  double prev_time_ = 0;
  bool started_ = false;
  std::vector<double> pending_events_;
  double ghost_dE_ = 0;
  std::array<double, 2> ghost_dP_{0, 0};
  // per-step scratch for deposit apportioning
  struct Contribution {
    int site;
    long bin;
    double amount;
  };
  std::vector<Contribution> step_contrib_;
};

}  // namespace slicesim
