#pragma once

#include <map>
#include <string>
#include <vector>

#include "slicesim/grid.hpp"
#include "slicesim/lattice.hpp"

namespace slicesim {

// Sorted index multiset (i1 <= i2 <= ... <= iN); the empty key is the vacuum.
using FockKey = std::vector<unsigned>;

// Coefficients b^(N) on the sorted-multiset basis, truncated by total
// particle number. Immutable in use: operators return new stores.
class OccupancyCoefficients {
 public:
  OccupancyCoefficients(unsigned mode_count, unsigned max_total);

  unsigned mode_count() const { return mode_count_; }
  unsigned max_total() const { return max_total_; }

  void set(FockKey key, cplx value);  // key must be sorted; zero erases
  cplx get(const FockKey& key) const;
  const std::map<FockKey, cplx>& terms() const { return terms_; }
  double norm2() const;  // sum |b|^2
  unsigned occupancy(const FockKey& key, unsigned s) const;  // count of s

 private:
  unsigned mode_count_;
  unsigned max_total_;
  std::map<FockKey, cplx> terms_;
};

struct CreateResult {
  OccupancyCoefficients coeffs;
  double dropped_weight = 0;  // |coefficient|^2 lost to the truncation bound
};

// a_s^dagger with the sqrt(n_s + 1) factor; truncation drops are reported.
CreateResult create(unsigned s, const OccupancyCoefficients& c);
// a_s with the sqrt(n_s) factor; terms without s vanish, vacuum maps to zero.
OccupancyCoefficients annihilate(unsigned s, const OccupancyCoefficients& c);
// number operator n_s = a_s^dagger a_s (diagonal on basis keys)
OccupancyCoefficients number(unsigned s, const OccupancyCoefficients& c);

// max coefficient residual of [a_s, a_t^dagger] - delta_st on c. Requires all
// keys to satisfy N <= max_total - 1 so truncation cannot bias the check.
double commutator_check(unsigned s, unsigned t, const OccupancyCoefficients& c);

struct RaiseResult {
  PhononOccupancy occupancy;
  double factor = 0;  // sqrt(n_s + 1)
};

// Occupancy-raising kernel action on a phonon state label.
RaiseResult phonon_raise(const NormalModeSet& modes, int s, const PhononOccupancy& occ);

// delimited dump: N, dash-joined key ("-" for the vacuum), re, im
void write_coefficients(const OccupancyCoefficients& c, const std::string& path);

}  // namespace slicesim
