#include "slicesim/lattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace slicesim {

void LatticeModel::validate() const {
  const int n = int(positions.size());
  if (n == 0) throw ConfigError("lattice: no particles");
  if (int(masses.size()) != n) throw ConfigError("lattice: masses/positions mismatch");
  for (double m : masses)
    if (!(m > 0)) throw ConfigError("lattice: masses must be positive");
  for (const auto& s : springs) {
    if (s.i < 0 || s.i >= n || s.j < 0 || s.j >= n || s.i == s.j)
      throw ConfigError("lattice: bad spring endpoints");
    if (!(s.kappa > 0)) throw ConfigError("lattice: spring constants must be positive");
  }
  for (const auto& p : pins) {
    if (p.i < 0 || p.i >= n) throw ConfigError("lattice: bad pin site");
    if (!(p.kappa > 0)) throw ConfigError("lattice: pin constants must be positive");
  }
  for (int i = 0; i < n; i++)
    for (int j = i + 1; j < n; j++) {
      const double dx = positions[i][0] - positions[j][0];
      const double dy = positions[i][1] - positions[j][1];
      if (dx * dx + dy * dy < 1e-24) throw ConfigError("lattice: coincident positions");
    }
  if (n > 1) {
    // spring graph connectivity
    std::vector<int> root(n);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int a) {
      while (root[a] != a) a = root[a] = root[root[a]];
      return a;
    };
    for (const auto& s : springs) root[find(s.i)] = find(s.j);
    const int r0 = find(0);
    for (int i = 1; i < n; i++)
      if (find(i) != r0) throw ConfigError("lattice: spring graph not connected");
  }
}

LatticeModel LatticeModel::chain(int n, double kappa, double mass, bool pinned,
                                 double spacing) {
  LatticeModel m;
  m.dim = 1;
  for (int i = 0; i < n; i++) {
    m.positions.push_back({double(i) * spacing, 0.0});
    m.masses.push_back(mass);
  }
  for (int i = 0; i + 1 < n; i++) m.springs.push_back({i, i + 1, kappa});
  if (pinned) {
    m.pins.push_back({0, kappa});
    if (n > 1) m.pins.push_back({n - 1, kappa});
  }
  return m;
}

NormalModeSet normal_modes(const LatticeModel& lat, double hbar) {
  lat.validate();
  const int n = int(lat.positions.size());
  const int d = lat.dim;
  const int dof = d * n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dof, dof);

  auto add_block = [&](int a, int b, double kappa, const std::array<double, 2>& e) {
    for (int p = 0; p < d; p++)
      for (int q = 0; q < d; q++) H(a * d + p, b * d + q) += kappa * e[p] * e[q];
  };
  for (const auto& s : lat.springs) {
    std::array<double, 2> e{1.0, 0.0};
    if (d == 2) {
      const double ex = lat.positions[s.j][0] - lat.positions[s.i][0];
      const double ey = lat.positions[s.j][1] - lat.positions[s.i][1];
      const double len = std::hypot(ex, ey);
      e = {ex / len, ey / len};
    }
    add_block(s.i, s.i, s.kappa, e);
    add_block(s.j, s.j, s.kappa, e);
    add_block(s.i, s.j, -s.kappa, e);
    add_block(s.j, s.i, -s.kappa, e);
  }
  for (const auto& p : lat.pins)
    for (int q = 0; q < d; q++) H(p.i * d + q, p.i * d + q) += p.kappa;

  // mass weighting
  Eigen::VectorXd invsqrtm(dof);
  for (int i = 0; i < n; i++)
    for (int q = 0; q < d; q++) invsqrtm(i * d + q) = 1.0 / std::sqrt(lat.masses[i]);
  Eigen::MatrixXd D = invsqrtm.asDiagonal() * H * invsqrtm.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  if (es.info() != Eigen::Success) throw Error("normal_modes: eigensolver failed");

  const Eigen::VectorXd w2 = es.eigenvalues();
  const double w2max = w2.cwiseAbs().maxCoeff();
  const double zero_tol = 1e-10 * std::max(w2max, 1e-300);
  if (w2.minCoeff() < -zero_tol)
    throw ConfigError("normal_modes: Hessian not positive semi-definite (unstable lattice)");

  NormalModeSet out;
  out.dof = dof;
  out.hbar = hbar;
  for (int i = 0; i < dof; i++) {
    const Eigen::VectorXd v = es.eigenvectors().col(i);
    Eigen::VectorXd k = invsqrtm.asDiagonal() * v;
    const double c = k.norm();
    NormalMode m;
    m.direction.assign(k.data(), k.data() + dof);
    for (auto& x : m.direction) x /= c;
    m.effective_mass = 1.0 / (c * c);
    const double lam = w2(i);
    m.omega = lam > 0 ? std::sqrt(lam) : 0.0;
    if (lam < zero_tol) {
      out.zero_modes.push_back(std::move(m));
      out.zero_modes_removed++;
    } else {
      out.modes.push_back(std::move(m));
    }
  }
  return out;
}

double mode_width(const NormalMode& mode, double hbar) {
  if (!(mode.omega > 0)) throw ConfigError("mode_width: zero mode has no width");
  return std::sqrt(hbar / (mode.effective_mass * mode.omega));
}

double oscillator_eigenfunction(int n, double u, double mass, double omega, double hbar) {
  if (n < 0) throw ConfigError("oscillator_eigenfunction: negative level");
  const double alpha = std::sqrt(mass * omega / hbar);
  const double xi = alpha * u;
  // physicists' Hermite by recurrence
  double h0 = 1.0, h1 = 2.0 * xi;
  double h = n == 0 ? h0 : h1;
  for (int k = 2; k <= n; k++) {
    const double hk = 2.0 * xi * h1 - 2.0 * double(k - 1) * h0;
    h0 = h1;
    h1 = hk;
    h = hk;
  }
  double log_norm = 0.25 * std::log(mass * omega / (std::numbers::pi * hbar));
  double fact = 1.0;
  for (int k = 1; k <= n; k++) fact *= 2.0 * double(k);
  return std::exp(log_norm - 0.5 * xi * xi) * h / std::sqrt(fact);
}

namespace {
cplx amplitude_at(const NormalModeSet& modes, const LatticeModel& lat,
                  const PhononOccupancy& occ, std::span<const double> X,
                  double zero_mode_width) {
  const int dof = modes.dof;
  if (int(X.size()) != dof) throw ConfigError("phonon_amplitude: configuration size");
  for (const auto& [idx, n] : occ.n) {
    if (idx < 0 || idx >= int(modes.modes.size()))
      throw ConfigError("phonon_amplitude: occupancy of a removed or unknown mode");
    if (n < 0) throw ConfigError("phonon_amplitude: negative occupancy");
  }
  // displacement from the rest configuration
  std::vector<double> delta(static_cast<std::size_t>(dof), 0.0);
  const int d = lat.dim;
  for (int i = 0; i < int(lat.positions.size()); i++)
    for (int q = 0; q < d; q++)
      delta[std::size_t(i * d + q)] = X[std::size_t(i * d + q)] - lat.positions[i][q];

  double width0 = zero_mode_width;
  if (!(width0 > 0)) {
    width0 = modes.modes.empty() ? 1.0 : mode_width(modes.modes.front(), modes.hbar);
  }
  double log_mag = 0;
  double sign = 1.0;
  for (std::size_t mi = 0; mi < modes.modes.size(); mi++) {
    const NormalMode& m = modes.modes[mi];
    double u = 0;
    for (int q = 0; q < dof; q++) u += m.direction[std::size_t(q)] * delta[std::size_t(q)];
    int n = 0;
    auto it = occ.n.find(int(mi));
    if (it != occ.n.end()) n = it->second;
    const double f = oscillator_eigenfunction(n, u, m.effective_mass, m.omega, modes.hbar);
    if (f == 0) return 0;
    if (f < 0) sign = -sign;
    log_mag += std::log(std::abs(f));
  }
  for (const auto& zm : modes.zero_modes) {
    double u = 0;
    for (int q = 0; q < dof; q++) u += zm.direction[std::size_t(q)] * delta[std::size_t(q)];
    // unit-normalized Gaussian of the configured width
    const double g = std::pow(2.0 * std::numbers::pi * width0 * width0, -0.25) *
                     std::exp(-u * u / (4.0 * width0 * width0));
    log_mag += std::log(g);
  }
  return sign * std::exp(log_mag);
}
}  // namespace

cplx phonon_amplitude(const NormalModeSet& modes, const LatticeModel& lat,
                      const PhononOccupancy& occ, std::span<const double> X,
                      double zero_mode_width) {
  return amplitude_at(modes, lat, occ, X, zero_mode_width);
}

cplx phonon_amplitude_symmetrized(const NormalModeSet& modes, const LatticeModel& lat,
                                  const PhononOccupancy& occ, std::span<const double> X,
                                  double zero_mode_width) {
  const int n = int(lat.positions.size());
  if (n > 6) throw ConfigError("symmetrizer: exhaustive N! sum limited to N <= 6");
  for (int i = 1; i < n; i++)
    if (lat.masses[std::size_t(i)] != lat.masses[0])
      throw ConfigError("symmetrizer: requires identical particles");
  std::vector<int> perm(static_cast<std::size_t>(n), 0);
  std::iota(perm.begin(), perm.end(), 0);
  const int d = lat.dim;
  std::vector<double> xp(X.size());
  cplx sum = 0;
  double count = 0;
  do {
    for (int i = 0; i < n; i++)
      for (int q = 0; q < d; q++)
        xp[std::size_t(i * d + q)] = X[std::size_t(perm[std::size_t(i)] * d + q)];
    sum += amplitude_at(modes, lat, occ, xp, zero_mode_width);
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / std::sqrt(count);
}

ClassicalityEnergies classicality_energies(double bond_energy, double body_size,
                                           double total_mass, double atomic_length,
                                           double modulus, double hbar) {
  if (!(bond_energy > 0) || !(body_size > 0) || !(total_mass > 0) ||
      !(atomic_length > 0) || !(modulus > 0) || !(hbar > 0))
    throw ConfigError("classicality_energies: inputs must be positive");
  ClassicalityEnergies e;
  e.u_surf = bond_energy * body_size * body_size;
  e.u_r = hbar * hbar / (total_mass * atomic_length * atomic_length);
  e.u_el = hbar * hbar /
           (total_mass * modulus * atomic_length * atomic_length * body_size * body_size *
            body_size);
  return e;
}

void write_mode_table(const NormalModeSet& modes, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error("write_mode_table: cannot open " + path);
  std::fprintf(fp, "# index\tomega\tm_eff\twidth\n");
  for (std::size_t i = 0; i < modes.modes.size(); i++) {
    const NormalMode& m = modes.modes[i];
    std::fprintf(fp, "%zu\t%.17g\t%.17g\t%.17g\n", i, m.omega, m.effective_mass,
                 mode_width(m, modes.hbar));
  }
  std::fprintf(fp, "# zero_modes_removed\t%d\n", modes.zero_modes_removed);
  std::fclose(fp);
}

}  // namespace slicesim
