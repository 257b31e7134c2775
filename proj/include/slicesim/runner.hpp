#pragma once

#include <string>
#include <vector>

#include "slicesim/config.hpp"
#include "slicesim/measurement.hpp"
#include "slicesim/probe.hpp"

namespace slicesim {

struct ScenarioReport {
  std::string label;
  int dim = 1;
  double dt = 0, t_final = 0;
  long steps = 0;
  double initial_norm = 1;
  double free_norm_final = 0;  // main field plus in-flight ghosts
  double total_captured = 0;
  double max_step_residual = 0;   // worst per-step ledger identity residual
  double identity_residual = 0;   // |free + captured - initial| at the end
  AuditReport audit;
  OverlapMetric overlap;
  double born_l1 = -1;  // set when the config names a reference
  double claimed_total = 0;
  double unreconciled_claims = 0;
  double excess_removals = 0;
  double wall_inflow_max = 0;
  long ghost_splits = 0;
  long n_records = 0;
  double wall_seconds = 0;

  std::string to_json() const;
  static ScenarioReport from_json(const std::string& text);
};

struct RunResult {
  ScenarioReport report;
  std::vector<SliceLedger> ledgers;  // one per body
  std::vector<BodyState> bodies;
  WaveField final_field;
  std::vector<ProbeSignal> probes;
};

// Deterministic scenario execution. When out_dir is nonempty, writes
// ledger.tsv, report.json, probe_<i>.tsv and any configured snapshots there.
RunResult run_scenario(const RunConfig& cfg, const std::string& out_dir = "");

// merged-ledger view with per-body site id offsets, as exported
SliceLedger merge_ledgers(const RunResult& result);

}  // namespace slicesim
