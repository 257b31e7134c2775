#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "slicesim/grid.hpp"

namespace slicesim {

struct Spring {
  int i = 0, j = 0;
  double kappa = 1.0;
};

// spring from a particle to a fixed wall
struct Pin {
  int i = 0;
  double kappa = 1.0;
};

struct LatticeModel {
  int dim = 1;  // displacement dimension per particle (1 or 2)
  std::vector<std::array<double, 2>> positions;
  std::vector<double> masses;
  std::vector<Spring> springs;
  std::vector<Pin> pins;  // nonempty = pinned boundary

  int dof() const { return dim * int(positions.size()); }
  bool pinned() const { return !pins.empty(); }
  void validate() const;

  // linear chain along x with nearest-neighbour springs; pinned adds wall
  // springs at both ends
  static LatticeModel chain(int n, double kappa, double mass, bool pinned,
                            double spacing = 1.0);
};

struct NormalMode {
  std::vector<double> direction;  // unit vector in displacement space (D*N)
  double omega = 0;
  double effective_mass = 0;  // from mass-weighted normalization:
                              // H_mode = p^2/2m + m w^2 u^2 / 2
};

struct NormalModeSet {
  std::vector<NormalMode> modes;       // retained, ascending omega
  std::vector<NormalMode> zero_modes;  // removed rigid motions (omega ~ 0)
  int zero_modes_removed = 0;
  int dof = 0;
  double hbar = 1.0;
};

// Mass-weighted Hessian eigendecomposition with relative zero-mode removal
// (omega^2 < 1e-10 max omega^2). Throws on an unstable lattice.
NormalModeSet normal_modes(const LatticeModel& lat, double hbar = 1.0);

// ground-state width (hbar / (m omega))^(1/2)
double mode_width(const NormalMode& mode, double hbar = 1.0);

// normalized harmonic-oscillator eigenfunction f_n(u) for H_n conventions
double oscillator_eigenfunction(int n, double u, double mass, double omega,
                                double hbar = 1.0);

struct PhononOccupancy {
  std::map<int, int> n;  // retained-mode index -> occupancy
};

// Product of mode eigenfunctions evaluated at configuration X (size D*N),
// times unit Gaussians of width `zero_mode_width` over the removed rigid
// directions (default: the lowest retained mode's width).
cplx phonon_amplitude(const NormalModeSet& modes, const LatticeModel& lat,
                      const PhononOccupancy& occ, std::span<const double> X,
                      double zero_mode_width = 0);

// Exhaustive bosonic symmetrization over particle exchanges (N <= 6, equal
// masses): (1/sqrt(N!)) sum over permutations. Exact normalization only in
// the weak-overlap regime it exists to test.
cplx phonon_amplitude_symmetrized(const NormalModeSet& modes, const LatticeModel& lat,
                                  const PhononOccupancy& occ, std::span<const double> X,
                                  double zero_mode_width = 0);

struct ClassicalityEnergies {
  double u_surf = 0;  // E_b L^2
  double u_r = 0;     // hbar^2 / (M d^2)
  double u_el = 0;    // hbar^2 / (M Y d^2 L^3)
};

ClassicalityEnergies classicality_energies(double bond_energy, double body_size,
                                           double total_mass, double atomic_length,
                                           double modulus, double hbar = 1.0);

// delimited mode table: index, omega, m_eff, width
void write_mode_table(const NormalModeSet& modes, const std::string& path);

}  // namespace slicesim
