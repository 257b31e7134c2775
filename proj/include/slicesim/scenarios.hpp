#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slicesim/config.hpp"

namespace slicesim {

// Bundled experiment configurations. Each returns a complete RunConfig;
// the CLI ships them as plain-text files via emit-scenarios.

// Free packet crossing two probe points; no body. Exercises the propagator
// and provides decayed probe signals for the uncertainty diagnostic.
RunConfig scenario_free_flight();

// Gaussian packet drifting into a static 64-site screen; per-bin ledger is
// checked against the time-integrated surface flux.
RunConfig scenario_flat_screen();

// A resting wide packet engulfed by the screen materializing at t = 0.5;
// per-site ledger reproduces the contact density |psi(R_s)|^2 d.
RunConfig scenario_flat_screen_sheet();

// Long flat-envelope packet arriving at one site over an extended window;
// the per-bin distribution at that site follows the flux history.
RunConfig scenario_elongated_packet();

// Sheet packet at group velocity 1 against a screen that recoils to v = 5
// at t1 = 4; capture equals the swept-overlap integral and stops at t1.
// A second absorber further downstream sees only ballistic arrivals.
RunConfig scenario_accelerating_surface();

// Thin partially-transmitting plate (eta < 1) followed by an absorbing
// plate at the given separation; arrival-time spread vs separation.
RunConfig scenario_two_plates(double separation = 4.0);

// 2D plate with two holes and a rear collector; fringe pattern on the
// collector sites.
RunConfig scenario_holes_interference();

// Commensurately boosted copy of a materializing-screen run: same capture
// statistics to roundoff. boost enters the packet momentum and the body
// trajectory; boost * t_activate is an exact number of grid cells.
RunConfig scenario_galilean_base();
RunConfig scenario_galilean_boosted();

std::vector<std::pair<std::string, RunConfig>> bundled_scenarios();

void emit_scenarios(const std::string& dir);

}  // namespace slicesim
