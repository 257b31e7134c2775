#include <cmath>

#include "json.hpp"
#include "slicesim/runner.hpp"

namespace slicesim {

namespace {
using nlohmann::json;

double sanitize(double v) { return std::isfinite(v) ? v : -1.0; }
double restore(double v) { return v; }
}  // namespace

std::string ScenarioReport::to_json() const {
  json j;
  j["label"] = label;
  j["dim"] = dim;
  j["dt"] = dt;
  j["t_final"] = t_final;
  j["steps"] = steps;
  j["initial_norm"] = initial_norm;
  j["free_norm_final"] = free_norm_final;
  j["total_captured"] = total_captured;
  j["max_step_residual"] = max_step_residual;
  j["identity_residual"] = identity_residual;
  j["audit"] = {{"norm_initial", audit.norm_initial},
                {"norm_final", audit.norm_final},
                {"norm_residual", audit.norm_residual},
                {"energy_residual", audit.energy_residual},
                {"momentum_residual", {audit.momentum_residual[0], audit.momentum_residual[1]}},
                {"tau_energy", audit.tau_energy},
                {"tau_momentum", {audit.tau_momentum[0], audit.tau_momentum[1]}},
                {"norm_ok", audit.norm_ok},
                {"energy_flag", audit.energy_flag},
                {"momentum_flag", audit.momentum_flag}};
  j["overlap"] = {{"min_separation", sanitize(overlap.min_separation)},
                  {"flagged", overlap.flagged}};
  j["born_l1"] = born_l1;
  j["claimed_total"] = claimed_total;
  j["unreconciled_claims"] = unreconciled_claims;
  j["excess_removals"] = excess_removals;
  j["wall_inflow_max"] = wall_inflow_max;
  j["ghost_splits"] = ghost_splits;
  j["n_records"] = n_records;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

ScenarioReport ScenarioReport::from_json(const std::string& text) {
  const json j = json::parse(text);
  ScenarioReport r;
  r.label = j.at("label").get<std::string>();
  r.dim = j.at("dim").get<int>();
  r.dt = j.at("dt").get<double>();
  r.t_final = j.at("t_final").get<double>();
  r.steps = j.at("steps").get<long>();
  r.initial_norm = j.at("initial_norm").get<double>();
  r.free_norm_final = j.at("free_norm_final").get<double>();
  r.total_captured = j.at("total_captured").get<double>();
  r.max_step_residual = j.at("max_step_residual").get<double>();
  r.identity_residual = j.at("identity_residual").get<double>();
  const json& a = j.at("audit");
  r.audit.norm_initial = a.at("norm_initial").get<double>();
  r.audit.norm_final = a.at("norm_final").get<double>();
  r.audit.norm_residual = a.at("norm_residual").get<double>();
  r.audit.energy_residual = a.at("energy_residual").get<double>();
  r.audit.momentum_residual[0] = a.at("momentum_residual")[0].get<double>();
  r.audit.momentum_residual[1] = a.at("momentum_residual")[1].get<double>();
  r.audit.tau_energy = a.at("tau_energy").get<double>();
  r.audit.tau_momentum[0] = a.at("tau_momentum")[0].get<double>();
  r.audit.tau_momentum[1] = a.at("tau_momentum")[1].get<double>();
  r.audit.norm_ok = a.at("norm_ok").get<bool>();
  r.audit.energy_flag = a.at("energy_flag").get<bool>();
  r.audit.momentum_flag = a.at("momentum_flag").get<bool>();
  r.overlap.min_separation = restore(j.at("overlap").at("min_separation").get<double>());
  if (r.overlap.min_separation < 0) r.overlap.min_separation = kInf;
  r.overlap.flagged = j.at("overlap").at("flagged").get<bool>();
  r.born_l1 = j.at("born_l1").get<double>();
  r.claimed_total = j.at("claimed_total").get<double>();
  r.unreconciled_claims = j.at("unreconciled_claims").get<double>();
  r.excess_removals = j.at("excess_removals").get<double>();
  r.wall_inflow_max = j.at("wall_inflow_max").get<double>();
  r.ghost_splits = j.at("ghost_splits").get<long>();
  r.n_records = j.at("n_records").get<long>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

}  // namespace slicesim
